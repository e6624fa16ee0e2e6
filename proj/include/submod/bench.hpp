#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "submod/core.hpp"
#include "submod/objectives.hpp"

namespace submod {

enum class SweepAxis { epsilon, kappa };

// Flat key=value experiment description (lists comma-separated). See
// ExperimentSpec::load for the accepted keys.
struct ExperimentSpec {
  enum class ObjectiveKind { coverage, influence };

  ObjectiveKind objective_kind = ObjectiveKind::coverage;
  std::string dataset_path;     // either a file ...
  std::string generator;        // ... or a preset: corel60 | delicious300 | euall29
  std::uint64_t generator_seed = 1;

  std::vector<std::string> algorithms;  // ctg, eps_ap, exp_greedy,
                                        // exp_greedy_k, tg_exact, greedy_exact
  std::vector<int> kappa_grid;
  std::vector<double> epsilon_grid;
  double delta = 0.2;
  double alpha = 0.2;
  double sigma = 1.0;     // gaussian noise on coverage gains; 0 = noiseless
  double range_r = 2.0;   // influence runs override this with the node count
  int trials = 1;
  std::uint64_t base_seed = 0;
  std::string output_path;

  int rr_sets = 200000;              // frozen ground-truth estimator size
  std::uint64_t rr_seed = 424242;
  int exp_greedy_max_n = 300;        // instance-size gate for the arm-pulling
                                     // baselines

  static ExperimentSpec load(const std::string& path);
  void validate() const;  // throws ConfigError
};

// One trial's metrics row. Column order in the CSV matches field order here;
// singleton_samples and status are appended after wall_ms so the phase-1
// sampling cost stays recoverable and failed trials stay visible.
struct ExperimentRecord {
  std::string algorithm;
  int kappa = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;  // derived stream id of the trial's oracle
  double f_value = 0.0;
  double f_ref = 0.0;  // brute-force optimum when tractable, else exact greedy
  std::uint64_t total_samples = 0;
  std::uint64_t marginal_evaluations = 0;
  double avg_samples = 0.0;
  double wall_ms = 0.0;
  std::uint64_t singleton_samples = 0;
  std::string status = "ok";
};

void write_records_csv(const std::vector<ExperimentRecord>& records,
                       const std::string& path);
std::vector<ExperimentRecord> read_records_csv(const std::string& path);

// Builds the spec's objective (loads the dataset or runs the generator).
std::unique_ptr<Objective> build_objective(const ExperimentSpec& spec);

// Runs every (algorithm, kappa, epsilon, trial) cell with bounded
// parallelism (NOISY_SUBMOD_THREADS caps workers). Records come back in
// deterministic (algorithm, kappa, epsilon, trial) order; per-trial failures
// become rows with a non-ok status. Writes the CSV atomically unless
// write_csv is false.
std::vector<ExperimentRecord> run_experiment(const ExperimentSpec& spec,
                                             bool write_csv = true);

// Per-cell aggregate of the trial records (failed rows excluded).
struct AggregateRow {
  std::string algorithm;
  int kappa = 0;
  double epsilon = 0.0;
  int trials = 0;
  double total_samples_median = 0.0;
  double total_samples_mean = 0.0;
  double total_samples_q1 = 0.0;
  double total_samples_q3 = 0.0;
  double avg_samples_median = 0.0;
  double f_value_median = 0.0;
  double f_value_mean = 0.0;
};

std::vector<AggregateRow> aggregate_records(
    const std::vector<ExperimentRecord>& records);
void write_aggregate_csv(const std::vector<AggregateRow>& rows,
                         SweepAxis axis, const std::string& path);

// Runs the experiment and writes both the record CSV and a tidy aggregate
// table next to it (suffix .agg.csv). The grid on the chosen axis must have
// at least two points.
std::vector<AggregateRow> sweep(const ExperimentSpec& spec, SweepAxis axis);

// Invariant suites executed against the spec's instance, reporting measured
// frequencies next to their required levels.
struct VerificationCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double required = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  bool all_pass() const;
};

VerificationReport verify(const ExperimentSpec& spec);

}  // namespace submod
