#include "submod/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "submod/algorithms.hpp"
#include "submod/bounds.hpp"
#include "submod/oracle.hpp"

namespace submod {

namespace {

constexpr const char* kRecordsSchema = "# noisy-submod-records v1";
constexpr const char* kRecordsHeader =
    "algorithm,kappa,epsilon,delta,alpha,trial,seed,f_value,"
    "f_opt_or_greedy_ref,total_samples,marginal_evaluations,avg_samples,"
    "wall_ms,singleton_samples,status";

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names = {
      "ctg", "eps_ap", "exp_greedy", "exp_greedy_k", "tg_exact",
      "greedy_exact"};
  return names;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "' for " + what);
  }
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse integer '" + s + "' for " + what);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::stringstream ss(s);
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentSpec ExperimentSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file " + path);
  ExperimentSpec spec;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key == "objective") {
      if (value == "coverage")
        spec.objective_kind = ObjectiveKind::coverage;
      else if (value == "influence")
        spec.objective_kind = ObjectiveKind::influence;
      else
        throw ConfigError("unknown objective '" + value + "'");
    } else if (key == "dataset") {
      spec.dataset_path = value;
    } else if (key == "generator") {
      spec.generator = value;
    } else if (key == "generator_seed") {
      spec.generator_seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "algorithms") {
      spec.algorithms.clear();
      for (const auto& a : split(value, ',')) {
        const std::string name = trim(a);
        if (!name.empty()) spec.algorithms.push_back(name);
      }
    } else if (key == "kappa") {
      spec.kappa_grid.clear();
      for (const auto& k : split(value, ','))
        spec.kappa_grid.push_back(static_cast<int>(parse_int(trim(k), key)));
    } else if (key == "epsilon") {
      spec.epsilon_grid.clear();
      for (const auto& e : split(value, ','))
        spec.epsilon_grid.push_back(parse_double(trim(e), key));
    } else if (key == "delta") {
      spec.delta = parse_double(value, key);
    } else if (key == "alpha") {
      spec.alpha = parse_double(value, key);
    } else if (key == "sigma") {
      spec.sigma = parse_double(value, key);
    } else if (key == "range_r") {
      spec.range_r = parse_double(value, key);
    } else if (key == "trials") {
      spec.trials = static_cast<int>(parse_int(value, key));
    } else if (key == "seed") {
      spec.base_seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "output") {
      spec.output_path = value;
    } else if (key == "rr_sets") {
      spec.rr_sets = static_cast<int>(parse_int(value, key));
    } else if (key == "rr_seed") {
      spec.rr_seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "exp_greedy_max_n") {
      spec.exp_greedy_max_n = static_cast<int>(parse_int(value, key));
    } else {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
  }
  return spec;
}

void ExperimentSpec::validate() const {
  if (algorithms.empty()) throw ConfigError("algorithms list is empty");
  for (const auto& a : algorithms) {
    const auto& known = known_algorithms();
    if (std::find(known.begin(), known.end(), a) == known.end())
      throw ConfigError("unknown algorithm '" + a + "'");
  }
  if (kappa_grid.empty()) throw ConfigError("kappa grid is empty");
  for (int k : kappa_grid)
    if (k < 1) throw ConfigError("kappa must be >= 1");
  if (epsilon_grid.empty()) throw ConfigError("epsilon grid is empty");
  for (double e : epsilon_grid)
    if (!(e > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0,1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
  if (!(range_r > 0.0)) throw ConfigError("range_r must be > 0");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (rr_sets < 1) throw ConfigError("rr_sets must be >= 1");
  const bool has_dataset = !dataset_path.empty();
  const bool has_generator = !generator.empty();
  if (has_dataset == has_generator)
    throw ConfigError("exactly one of dataset/generator must be set");
  if (has_generator) {
    const bool cov = generator == "corel60" || generator == "delicious300";
    const bool inf = generator == "euall29";
    if (!cov && !inf) throw ConfigError("unknown generator '" + generator + "'");
    if (cov && objective_kind != ObjectiveKind::coverage)
      throw ConfigError("generator " + generator + " requires objective=coverage");
    if (inf && objective_kind != ObjectiveKind::influence)
      throw ConfigError("generator " + generator + " requires objective=influence");
  }
}

std::unique_ptr<Objective> build_objective(const ExperimentSpec& spec) {
  if (spec.objective_kind == ExperimentSpec::ObjectiveKind::coverage) {
    if (!spec.dataset_path.empty())
      return std::make_unique<CoverageObjective>(
          CoverageObjective::load(spec.dataset_path));
    if (spec.generator == "corel60")
      return std::make_unique<CoverageObjective>(
          CoverageObjective::generate(60, 30, spec.generator_seed));
    if (spec.generator == "delicious300")
      return std::make_unique<CoverageObjective>(
          CoverageObjective::generate(300, 100, spec.generator_seed));
    throw ConfigError("no coverage dataset or generator configured");
  }
  InfluenceGraph graph =
      !spec.dataset_path.empty()
          ? InfluenceGraph::load(spec.dataset_path)
          : InfluenceGraph::generate(29, 116, spec.generator_seed);
  return std::make_unique<InfluenceObjective>(std::move(graph), spec.rr_sets,
                                              spec.rr_seed);
}

namespace {

int worker_count(size_t items) {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* env = std::getenv("NOISY_SUBMOD_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) threads = cap;
  }
  return std::min<int>(threads, static_cast<int>(std::max<size_t>(items, 1)));
}

std::string sanitize_status(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  return s;
}

double exact_value_of(const Objective& obj, const std::vector<int>& elems) {
  ElementSet x(obj.universe_size());
  for (int e : elems) x.add(e);
  return obj.value(x);
}

struct WorkItem {
  std::string algorithm;
  int kappa = 0;
  double epsilon = 0.0;
  int trial = 0;
  std::uint64_t stream_id = 0;
};

ExperimentRecord run_one(const Objective& obj, const InfluenceObjective* influ,
                         const ExperimentSpec& spec, const WorkItem& item,
                         double f_ref) {
  ExperimentRecord rec;
  rec.algorithm = item.algorithm;
  rec.kappa = item.kappa;
  rec.epsilon = item.epsilon;
  rec.delta = spec.delta;
  rec.alpha = spec.alpha;
  rec.trial = item.trial;
  rec.seed = item.stream_id;
  rec.f_ref = f_ref;

  const GroundSet ground{obj.universe_size()};
  AlgoConfig cfg;
  cfg.kappa = item.kappa;
  cfg.epsilon = item.epsilon;
  cfg.delta = spec.delta;
  cfg.alpha = spec.alpha;
  cfg.range_r = influ ? static_cast<double>(influ->graph().node_count)
                      : spec.range_r;
  cfg.seed = mix64(spec.base_seed, item.stream_id);

  const bool gated = (item.algorithm == "exp_greedy" ||
                      item.algorithm == "exp_greedy_k") &&
                     ground.n > spec.exp_greedy_max_n;
  if (gated) {
    rec.status = "skipped_instance_gate";
    return rec;
  }

  try {
    std::unique_ptr<MarginalOracle> oracle;
    const RngStream stream = derive_stream(spec.base_seed, item.stream_id);
    if (influ)
      oracle = std::make_unique<LiveEdgeInfluenceOracle>(influ->graph(), stream);
    else
      oracle = std::make_unique<NoisyMarginalOracle>(
          obj,
          spec.sigma > 0.0 ? NoiseModel::gaussian(spec.sigma)
                           : NoiseModel::none(),
          stream);

    const auto t0 = std::chrono::steady_clock::now();
    SolutionTrace trace;
    if (item.algorithm == "ctg")
      trace = ctg(*oracle, ground, cfg);
    else if (item.algorithm == "eps_ap")
      trace = eps_ap(*oracle, ground, cfg);
    else if (item.algorithm == "exp_greedy")
      trace = exp_greedy(*oracle, ground, cfg, 1);
    else if (item.algorithm == "exp_greedy_k")
      trace = exp_greedy(*oracle, ground, cfg, cfg.kappa);
    else if (item.algorithm == "tg_exact")
      trace = threshold_greedy_exact(obj, cfg);
    else if (item.algorithm == "greedy_exact")
      trace = greedy_exact(obj, cfg.kappa);
    else
      throw ConfigError("unknown algorithm '" + item.algorithm + "'");
    const auto t1 = std::chrono::steady_clock::now();

    rec.f_value = exact_value_of(obj, trace.accepted);
    rec.total_samples = trace.total_samples;
    rec.marginal_evaluations = trace.marginal_evaluations;
    rec.avg_samples = trace.marginal_evaluations
                          ? static_cast<double>(trace.total_samples) /
                                static_cast<double>(trace.marginal_evaluations)
                          : 0.0;
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    rec.singleton_samples = trace.singleton_sample_cost;
    if (trace.degenerate_estimate) rec.status = "degenerate_estimate";
  } catch (const std::exception& e) {
    rec.status = sanitize_status(std::string("error: ") + e.what());
  }
  return rec;
}

}  // namespace

void write_records_csv(const std::vector<ExperimentRecord>& records,
                       const std::string& path) {
  if (path.empty()) throw ConfigError("output path is empty");
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write " + tmp);
    out << kRecordsSchema << '\n' << kRecordsHeader << '\n';
    for (const auto& r : records) {
      out << r.algorithm << ',' << r.kappa << ',' << fmt(r.epsilon) << ','
          << fmt(r.delta) << ',' << fmt(r.alpha) << ',' << r.trial << ','
          << fmt(r.seed) << ',' << fmt(r.f_value) << ',' << fmt(r.f_ref) << ','
          << fmt(r.total_samples) << ',' << fmt(r.marginal_evaluations) << ','
          << fmt(r.avg_samples) << ',' << fmt(r.wall_ms) << ','
          << fmt(r.singleton_samples) << ',' << r.status << '\n';
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("cannot move " + tmp + " to " + path);
}

std::vector<ExperimentRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<ExperimentRecord> records;
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line != kRecordsHeader)
        throw ParseError(path, line_no, "unexpected header");
      saw_header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 15)
      throw ParseError(path, line_no, "expected 15 columns");
    ExperimentRecord r;
    r.algorithm = f[0];
    r.kappa = static_cast<int>(parse_int(f[1], "kappa"));
    r.epsilon = parse_double(f[2], "epsilon");
    r.delta = parse_double(f[3], "delta");
    r.alpha = parse_double(f[4], "alpha");
    r.trial = static_cast<int>(parse_int(f[5], "trial"));
    r.seed = static_cast<std::uint64_t>(parse_int(f[6], "seed"));
    r.f_value = parse_double(f[7], "f_value");
    r.f_ref = parse_double(f[8], "f_ref");
    r.total_samples = static_cast<std::uint64_t>(parse_int(f[9], "total_samples"));
    r.marginal_evaluations =
        static_cast<std::uint64_t>(parse_int(f[10], "marginal_evaluations"));
    r.avg_samples = parse_double(f[11], "avg_samples");
    r.wall_ms = parse_double(f[12], "wall_ms");
    r.singleton_samples =
        static_cast<std::uint64_t>(parse_int(f[13], "singleton_samples"));
    r.status = f[14];
    records.push_back(std::move(r));
  }
  if (!saw_header) throw ParseError(path, line_no, "missing header");
  return records;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentSpec& spec,
                                             bool write_csv) {
  spec.validate();
  const auto objective = build_objective(spec);
  const auto* influ = dynamic_cast<const InfluenceObjective*>(objective.get());
  const int n = objective->universe_size();

  // Reference value per kappa: exhaustive optimum when tractable, otherwise
  // the exact-access greedy value.
  std::map<int, double> refs;
  for (int kappa : spec.kappa_grid) {
    if (refs.count(kappa)) continue;
    double ref = 0.0;
    if (kappa > n) {
      ref = std::numeric_limits<double>::quiet_NaN();
    } else {
      try {
        ref = brute_force_opt(*objective, kappa).second;
      } catch (const InstanceTooLarge&) {
        ref = exact_value_of(*objective, greedy_exact(*objective, kappa).accepted);
      }
    }
    refs[kappa] = ref;
  }

  // The oracle stream id depends on (kappa index, epsilon index, trial) but
  // not on the algorithm, so algorithms see paired noise per grid point.
  std::vector<WorkItem> items;
  for (const auto& algorithm : spec.algorithms)
    for (size_t ki = 0; ki < spec.kappa_grid.size(); ++ki)
      for (size_t ei = 0; ei < spec.epsilon_grid.size(); ++ei)
        for (int trial = 0; trial < spec.trials; ++trial) {
          WorkItem item;
          item.algorithm = algorithm;
          item.kappa = spec.kappa_grid[ki];
          item.epsilon = spec.epsilon_grid[ei];
          item.trial = trial;
          item.stream_id = (static_cast<std::uint64_t>(ki) << 42) ^
                           (static_cast<std::uint64_t>(ei) << 21) ^
                           static_cast<std::uint64_t>(trial);
          items.push_back(std::move(item));
        }

  std::vector<ExperimentRecord> records(items.size());
  std::atomic<size_t> next{0};
  const int threads = worker_count(items.size());
  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      records[i] = run_one(*objective, influ, spec, items[i],
                           refs.at(items[i].kappa));
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  if (write_csv) write_records_csv(records, spec.output_path);
  return records;
}

namespace {

double median_sorted(const std::vector<double>& v, size_t lo, size_t hi) {
  const size_t m = hi - lo;
  if (m == 0) return 0.0;
  const size_t mid = lo + m / 2;
  return (m % 2) ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

struct CellStats {
  double median = 0.0, mean = 0.0, q1 = 0.0, q3 = 0.0;
};

CellStats stats_of(std::vector<double> v) {
  CellStats s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  s.median = median_sorted(v, 0, n);
  s.q1 = median_sorted(v, 0, n / 2);
  s.q3 = median_sorted(v, (n + 1) / 2, n);
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(n);
  return s;
}

}  // namespace

std::vector<AggregateRow> aggregate_records(
    const std::vector<ExperimentRecord>& records) {
  std::map<std::tuple<std::string, int, double>, std::vector<const ExperimentRecord*>>
      cells;
  for (const auto& r : records)
    if (r.status == "ok")
      cells[{r.algorithm, r.kappa, r.epsilon}].push_back(&r);
  std::vector<AggregateRow> rows;
  for (const auto& [key, recs] : cells) {
    AggregateRow row;
    row.algorithm = std::get<0>(key);
    row.kappa = std::get<1>(key);
    row.epsilon = std::get<2>(key);
    row.trials = static_cast<int>(recs.size());
    std::vector<double> total, avg, fval;
    for (const auto* r : recs) {
      total.push_back(static_cast<double>(r->total_samples));
      avg.push_back(r->avg_samples);
      fval.push_back(r->f_value);
    }
    const CellStats st = stats_of(total);
    row.total_samples_median = st.median;
    row.total_samples_mean = st.mean;
    row.total_samples_q1 = st.q1;
    row.total_samples_q3 = st.q3;
    row.avg_samples_median = stats_of(avg).median;
    const CellStats sf = stats_of(fval);
    row.f_value_median = sf.median;
    row.f_value_mean = sf.mean;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, SweepAxis axis,
                         const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write " + tmp);
    out << "# noisy-submod-aggregates v1\n";
    out << "axis,algorithm,kappa,epsilon,trials,total_samples_median,"
           "total_samples_mean,total_samples_q1,total_samples_q3,"
           "avg_samples_median,f_value_median,f_value_mean\n";
    const char* axis_name = axis == SweepAxis::epsilon ? "epsilon" : "kappa";
    for (const auto& r : rows) {
      out << axis_name << ',' << r.algorithm << ',' << r.kappa << ','
          << fmt(r.epsilon) << ',' << r.trials << ','
          << fmt(r.total_samples_median) << ',' << fmt(r.total_samples_mean)
          << ',' << fmt(r.total_samples_q1) << ',' << fmt(r.total_samples_q3)
          << ',' << fmt(r.avg_samples_median) << ',' << fmt(r.f_value_median)
          << ',' << fmt(r.f_value_mean) << '\n';
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("cannot move " + tmp + " to " + path);
}

std::vector<AggregateRow> sweep(const ExperimentSpec& spec, SweepAxis axis) {
  spec.validate();
  const size_t axis_points = axis == SweepAxis::epsilon
                                 ? spec.epsilon_grid.size()
                                 : spec.kappa_grid.size();
  if (axis_points < 2)
    throw ConfigError("sweep needs at least two points on the chosen axis");
  const auto records = run_experiment(spec, true);
  auto rows = aggregate_records(records);
  std::string agg_path = spec.output_path;
  if (agg_path.size() > 4 && agg_path.substr(agg_path.size() - 4) == ".csv")
    agg_path = agg_path.substr(0, agg_path.size() - 4);
  agg_path += ".agg.csv";
  write_aggregate_csv(rows, axis, agg_path);
  return rows;
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

namespace {

// Collects the full (t, mean, radius) trajectory of one adaptive call.
struct CoverageProbe : CsProbe {
  double gain = 0.0;
  bool covered_all = true;
  void on_sample(std::int64_t, double mean, double radius) override {
    if (std::abs(mean - gain) > radius) covered_all = false;
  }
};

std::unique_ptr<MarginalOracle> make_noisy_oracle(
    const Objective& obj, const InfluenceObjective* influ,
    const ExperimentSpec& spec, RngStream stream) {
  if (influ)
    return std::make_unique<LiveEdgeInfluenceOracle>(influ->graph(), stream);
  return std::make_unique<NoisyMarginalOracle>(
      obj,
      spec.sigma > 0.0 ? NoiseModel::gaussian(spec.sigma) : NoiseModel::none(),
      stream);
}

ElementSet random_subset(int n, int max_size, RngStream& rng) {
  ElementSet s(n);
  const int want = static_cast<int>(
      rng.uniform_below(static_cast<std::uint64_t>(max_size + 1)));
  while (s.size() < want) {
    const int u =
        static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    if (!s.contains(u)) s.add(u);
  }
  return s;
}

int random_outside(const ElementSet& s, RngStream& rng) {
  const int n = s.universe_size();
  for (;;) {
    const int u =
        static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    if (!s.contains(u)) return u;
  }
}

}  // namespace

bool VerificationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

VerificationReport verify(const ExperimentSpec& spec) {
  spec.validate();
  const auto objective = build_objective(spec);
  const auto* influ = dynamic_cast<const InfluenceObjective*>(objective.get());
  const int n = objective->universe_size();
  const GroundSet ground{n};

  AlgoConfig cfg;
  cfg.kappa = spec.kappa_grid.front();
  cfg.epsilon = spec.epsilon_grid.front();
  cfg.delta = spec.delta;
  cfg.alpha = spec.alpha;
  cfg.range_r = influ ? static_cast<double>(influ->graph().node_count)
                      : spec.range_r;
  cfg.seed = spec.base_seed;
  validate_config(cfg, ground);

  VerificationReport report;

  // Accept/reject soundness on a noiseless oracle: with the true gain outside
  // (w - eps, w + eps) the verdict must match the sign of gain - w.
  {
    NoisyMarginalOracle oracle(*objective, NoiseModel::none(),
                               derive_stream(spec.base_seed, 0xa001));
    RngStream rng = derive_stream(spec.base_seed, 0xa002);
    int violations = 0;
    const int calls = 500;
    for (int i = 0; i < calls; ++i) {
      const ElementSet s = random_subset(n, cfg.kappa - 1, rng);
      const int u = random_outside(s, rng);
      const double gain = objective->marginal(s, u);
      const double offset = cfg.epsilon * (1.5 + 3.0 * rng.uniform());
      const double w = rng.uniform() < 0.5 ? gain - offset : gain + offset;
      const CsVerdict v = confident_sample(oracle, s, u, w, cfg);
      if (v.accept != (gain >= w)) ++violations;
    }
    report.checks.push_back({"cs_noiseless_soundness",
                             violations == 0,
                             static_cast<double>(violations), 0.0,
                             std::to_string(calls) + " noiseless calls"});
  }

  // Interval coverage over the whole trajectory of each adaptive call.
  {
    auto oracle =
        make_noisy_oracle(*objective, influ, spec, derive_stream(spec.base_seed, 0xb001));
    RngStream rng = derive_stream(spec.base_seed, 0xb002);
    const int calls = 1000;
    int covered = 0;
    for (int i = 0; i < calls; ++i) {
      const ElementSet s = random_subset(n, cfg.kappa - 1, rng);
      const int u = random_outside(s, rng);
      CoverageProbe probe;
      probe.gain = objective->marginal(s, u);
      const double w = probe.gain + (rng.uniform() - 0.5) * cfg.epsilon;
      confident_sample(*oracle, s, u, w, cfg, &probe);
      if (probe.covered_all) ++covered;
    }
    const double freq = static_cast<double>(covered) / calls;
    report.checks.push_back({"clean_event_interval_coverage",
                             freq >= 1.0 - cfg.delta / 3.0, freq,
                             1.0 - cfg.delta / 3.0,
                             std::to_string(calls) + " adaptive calls"});
  }

  // Max-singleton estimate within eps of the exact maximum.
  {
    ElementSet empty(n);
    double exact_max = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < n; ++s)
      exact_max = std::max(exact_max, objective->marginal(empty, s));
    const int runs = 200;
    int good = 0;
    for (int i = 0; i < runs; ++i) {
      auto oracle = make_noisy_oracle(
          *objective, influ, spec,
          derive_stream(spec.base_seed, 0xc000 + static_cast<std::uint64_t>(i)));
      const double d = estimate_max_singleton(*oracle, ground, cfg);
      if (std::abs(d - exact_max) <= cfg.epsilon) ++good;
    }
    const double freq = static_cast<double>(good) / runs;
    report.checks.push_back({"clean_event_max_singleton",
                             freq >= 1.0 - cfg.delta / 3.0, freq,
                             1.0 - cfg.delta / 3.0,
                             std::to_string(runs) + " singleton scans"});
  }

  // Full runs: per-decision sample bound from the gap function, the global
  // call-count bound, and the approximation guarantee against brute force.
  {
    const auto opt = brute_force_opt(*objective, cfg.kappa);
    const double f_opt = opt.second;
    const double ratio = 1.0 - std::exp(-1.0) - cfg.alpha;
    const double slack = 2.0 * cfg.kappa * cfg.epsilon;
    const int trials = std::max(spec.trials, 10);
    int approx_ok = 0;
    std::int64_t decision_count = 0, bound_violations = 0;
    bool call_count_ok = true;
    const std::uint64_t call_cap =
        static_cast<std::uint64_t>(n) *
        static_cast<std::uint64_t>(bounds::rounds_upper(cfg.kappa, cfg.alpha));
    for (int trial = 0; trial < trials; ++trial) {
      auto oracle = make_noisy_oracle(
          *objective, influ, spec,
          derive_stream(spec.base_seed, 0xd000 + static_cast<std::uint64_t>(trial)));
      const SolutionTrace trace = ctg(*oracle, ground, cfg);
      if (exact_value_of(*objective, trace.accepted) >= ratio * f_opt - slack)
        ++approx_ok;
      if (trace.decisions.size() > call_cap) call_count_ok = false;
      ElementSet s(n);
      for (const auto& d : trace.decisions) {
        const double gain = objective->marginal(s, d.element);
        const double phi = bounds::gap_phi(d.threshold, gain, cfg.epsilon);
        const std::int64_t cap = bounds::call_sample_bound(
            phi, n, cfg.delta, cfg.range_r, cfg.kappa, cfg.alpha, cfg.epsilon);
        ++decision_count;
        if (d.samples > cap) ++bound_violations;
        if (d.accepted) s.add(d.element);
      }
    }
    const double approx_rate = static_cast<double>(approx_ok) / trials;
    report.checks.push_back({"approximation_guarantee", approx_rate >= 0.8,
                             approx_rate, 0.8,
                             std::to_string(trials) + " runs vs brute force"});
    const double violation_rate =
        decision_count ? static_cast<double>(bound_violations) /
                             static_cast<double>(decision_count)
                       : 0.0;
    report.checks.push_back({"per_call_sample_bound",
                             violation_rate <= cfg.delta, violation_rate,
                             cfg.delta,
                             std::to_string(decision_count) + " decisions"});
    report.checks.push_back({"call_count_bound", call_count_ok,
                             call_count_ok ? 0.0 : 1.0, 0.0,
                             "decisions <= n * rounds_upper on every run"});
  }

  return report;
}

}  // namespace submod
