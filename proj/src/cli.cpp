#include "fuzzysweep/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fuzzysweep/benchmarks.hpp"
#include "fuzzysweep/fixtures.hpp"
#include "fuzzysweep/report.hpp"

namespace fuzzysweep {

namespace {

using nlohmann::json;

// Raised for problems the user can fix by changing the invocation.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string input;
  std::string fixture;
  bool labels = false;
  std::vector<std::string> algos{"fcm"};
  int k = 3;
  int k_min = 2;
  int k_max = 5;
  int restarts = 1;
  std::optional<int> true_k;
  AlgorithmConfig run;
  std::string format = "json";
  std::string output;
  std::string function = "sphere";
  int dim = 2;
  double lower = -5.0;
  double upper = 5.0;
};

void add_data_options(CLI::App* cmd, Options& o) {
  auto* input = cmd->add_option("--input", o.input, "CSV file of feature vectors");
  auto* fixture = cmd->add_option("--fixture", o.fixture, "bundled data set")
                      ->check(CLI::IsMember({"iris"}));
  input->excludes(fixture);
  cmd->add_flag("--labels", o.labels, "last CSV column holds class labels");
}

void add_algorithm_options(CLI::App* cmd, Options& o, bool many) {
  if (many) {
    cmd->add_option("--algo", o.algos, "fcm, gk, foa-fcm, foa-gk (comma separated)")
        ->delimiter(',');
  } else {
    cmd->add_option("--algo", o.algos, "fcm, gk, foa-fcm or foa-gk")->expected(1);
  }
  cmd->add_option("--m", o.run.base.m, "fuzzifier");
  cmd->add_option("--tol", o.run.base.tol, "stop when |dJ| < tol");
  cmd->add_option("--max-iter", o.run.base.max_iter);
  cmd->add_option("--cov-reg", o.run.cov_regularization, "GK covariance regularization");
  cmd->add_option("--rho", o.run.rho, "GK cluster volume");
}

void add_seed_option(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.run.base.seed, "RNG seed");
}

void add_foa_options(CLI::App* cmd, Options& o) {
  auto& f = o.run.foa;
  cmd->add_option("--epochs", f.epochs);
  cmd->add_option("--area-limit", f.area_limit);
  cmd->add_option("--life-time", f.life_time);
  cmd->add_option("--lsc", f.lsc, "local seeds per tree");
  cmd->add_option("--gsc", f.gsc, "dimensions changed per global seed");
  cmd->add_option("--transfer-rate", f.transfer_rate);
  cmd->add_option("--local-step", f.local_step, "fraction of bound width");
}

void add_output_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format)->check(CLI::IsMember({"json", "table"}));
  cmd->add_option("--output", o.output, "write the report here instead of stdout");
}

DataSet load_data(const Options& o) {
  if (!o.fixture.empty()) return iris();
  if (o.input.empty()) throw UsageError("one of --input or --fixture is required");
  if (!std::filesystem::is_regular_file(o.input)) {
    throw UsageError("input file '" + o.input + "' does not exist");
  }
  try {
    return load_csv(o.input, o.labels);
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
}

Algorithm single_algorithm(const Options& o) {
  if (o.algos.size() != 1) throw UsageError("exactly one --algo is required");
  const auto a = parse_algorithm(o.algos.front());
  if (!a) throw UsageError("unknown algorithm '" + o.algos.front() + "'");
  return *a;
}

unsigned thread_cap() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FUZZYSWEEP_THREADS")) {
    int cap = 0;
    const std::string_view text(env);
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
    if (ec != std::errc() || end != text.data() + text.size() || cap < 1) {
      throw UsageError("FUZZYSWEEP_THREADS must be a positive integer");
    }
    threads = std::min(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

Format output_format(const Options& o) { return o.format == "table" ? Format::Table : Format::Json; }

std::optional<std::filesystem::path> output_path(const Options& o) {
  if (o.output.empty()) return std::nullopt;
  return std::filesystem::path(o.output);
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct TimedResult {
  FcmResult result;
  double timing_ms;
};

TimedResult timed_cluster(const DataSet& data, const AlgorithmConfig& cfg, int k) {
  const auto start = std::chrono::steady_clock::now();
  FcmResult result = cluster_once(data, cfg, k, cfg.base.seed);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return {std::move(result), ms};
}

json meta_json(const DataSet& data, const AlgorithmConfig& cfg, int k) {
  json config = config_to_json(cfg);
  config["k"] = k;
  return {{"algorithm", to_string(cfg.algorithm)},
          {"dataset", data.name()},
          {"seed", cfg.base.seed},
          {"config", config}};
}

json membership_summary(const DataSet& data, const FcmResult& res) {
  const auto assignment = hard_assign(res.memberships);
  std::vector<int> counts(static_cast<std::size_t>(res.memberships.clusters()), 0);
  for (int a : assignment) ++counts[static_cast<std::size_t>(a)];
  const double mean_max = res.memberships.values().colwise().maxCoeff().mean();
  json out = {{"hard_counts", counts}, {"mean_max_membership", json_number(mean_max)}};
  if (data.has_labels()) {
    out["accuracy"] = best_permutation_accuracy(assignment, data.labels());
  }
  return out;
}

int cmd_cluster(const Options& o, std::ostream& out) {
  const DataSet data = load_data(o);
  AlgorithmConfig cfg = o.run;
  cfg.algorithm = single_algorithm(o);
  const auto [res, ms] = timed_cluster(data, cfg, o.k);

  if (output_format(o) == Format::Json) {
    json doc = {{"meta", meta_json(data, cfg, o.k)},
                {"k", o.k},
                {"objective", json_number(res.model.objective)},
                {"iterations", res.iterations},
                {"converged", res.converged},
                {"objective_trace", res.objective_trace},
                {"centers", matrix_to_json(res.model.centers)},
                {"memberships", membership_summary(data, res)},
                {"timing_ms", ms}};
    emit_text(doc.dump(2) + "\n", output_path(o), out);
    return kExitOk;
  }
  std::ostringstream text;
  text << std::setprecision(10) << "algorithm: " << to_string(cfg.algorithm)
       << "  dataset: " << data.name() << "  k: " << o.k << "  seed: " << cfg.base.seed << "\n"
       << "objective: " << res.model.objective << "\niterations: " << res.iterations
       << (res.converged ? " (converged)" : " (not converged)") << "\ncenters:\n";
  for (Eigen::Index i = 0; i < res.model.centers.rows(); ++i) {
    text << "  " << i << ":";
    for (Eigen::Index j = 0; j < res.model.centers.cols(); ++j) text << ' ' << res.model.centers(i, j);
    text << "\n";
  }
  const json summary = membership_summary(data, res);
  text << "hard counts: " << summary["hard_counts"].dump() << "\n";
  if (summary.contains("accuracy")) text << "accuracy: " << summary["accuracy"].get<double>() << "\n";
  text << "time: " << ms << " ms\n";
  emit_text(text.str(), output_path(o), out);
  return kExitOk;
}

int cmd_indexes(const Options& o, std::ostream& out) {
  const DataSet data = load_data(o);
  AlgorithmConfig cfg = o.run;
  cfg.algorithm = single_algorithm(o);
  const auto [res, ms] = timed_cluster(data, cfg, o.k);
  const auto values = evaluate_all(res.memberships, data, res.model.centers, res.model.fuzzifier);

  if (output_format(o) == Format::Json) {
    json indexes = json::array();
    for (const auto& v : values) indexes.push_back(to_json(v));
    json doc = {{"meta", meta_json(data, cfg, o.k)},
                {"k", o.k},
                {"objective", json_number(res.model.objective)},
                {"indexes", indexes},
                {"timing_ms", ms}};
    emit_text(doc.dump(2) + "\n", output_path(o), out);
    return kExitOk;
  }
  std::ostringstream text;
  text << std::left;
  for (const auto& v : values) {
    text << std::setw(6) << to_string(v.name) << std::setw(5) << to_string(v.direction);
    if (v.value) {
      text << std::setprecision(10) << *v.value;
    } else {
      text << "undefined (" << v.reason << ")";
    }
    text << "\n";
  }
  emit_text(text.str(), output_path(o), out);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const DataSet data = load_data(o);
  std::vector<CviReport> reports;
  for (const auto& name : o.algos) {
    const auto algo = parse_algorithm(name);
    if (!algo) throw UsageError("unknown algorithm '" + name + "'");
    SweepConfig cfg;
    cfg.run = o.run;
    cfg.run.algorithm = *algo;
    cfg.k_min = o.k_min;
    cfg.k_max = o.k_max;
    cfg.restarts = o.restarts;
    cfg.true_k = o.true_k;
    cfg.threads = thread_cap();
    reports.push_back(run_sweep(data, cfg));
  }
  emit_text(format_sweep(reports, output_format(o)), output_path(o), out);
  return kExitOk;
}

int cmd_foa_bench(const Options& o, std::ostream& out) {
  FitnessFn fn;
  if (o.function == "sphere") {
    fn = benchmarks::sphere;
  } else {
    fn = benchmarks::rosenbrock;
  }
  if (o.dim < 1) throw UsageError("--dim must be >= 1");
  const BoundsList bounds(static_cast<std::size_t>(o.dim), Bounds{o.lower, o.upper});
  Rng rng(o.run.base.seed);
  const FoaResult res = foa_minimize(fn, static_cast<std::size_t>(o.dim), bounds, o.run.foa, rng);

  std::ostringstream text;
  text << std::setprecision(17) << "epoch,best_fitness\n";
  for (std::size_t e = 0; e < res.trace.size(); ++e) text << e << ',' << res.trace[e] << "\n";
  emit_text(text.str(), output_path(o), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy clustering, validity indexes and cluster-count sweeps", "fuzzysweep"};
  app.require_subcommand(1);
  Options o;

  auto* cluster = app.add_subcommand("cluster", "cluster a data set at one k");
  add_data_options(cluster, o);
  add_algorithm_options(cluster, o, false);
  add_seed_option(cluster, o);
  add_foa_options(cluster, o);
  add_output_options(cluster, o);
  cluster->add_option("--k", o.k, "cluster count");

  auto* indexes = app.add_subcommand("indexes", "cluster at one k and report all validity indexes");
  add_data_options(indexes, o);
  add_algorithm_options(indexes, o, false);
  add_seed_option(indexes, o);
  add_foa_options(indexes, o);
  add_output_options(indexes, o);
  indexes->add_option("--k", o.k, "cluster count");

  auto* sweep = app.add_subcommand("sweep", "sweep the cluster count and select k per index");
  add_data_options(sweep, o);
  add_algorithm_options(sweep, o, true);
  add_seed_option(sweep, o);
  add_foa_options(sweep, o);
  add_output_options(sweep, o);
  sweep->add_option("--kmin", o.k_min);
  sweep->add_option("--kmax", o.k_max);
  sweep->add_option("--restarts", o.restarts, "seeded runs per k; lowest J is kept");
  sweep->add_option("--true-k", o.true_k, "ground-truth cluster count for detection tallies");

  auto* bench = app.add_subcommand("foa-bench", "minimize a benchmark function, print the trace as CSV");
  add_seed_option(bench, o);
  add_foa_options(bench, o);
  bench->add_option("--function", o.function)->check(CLI::IsMember({"sphere", "rosenbrock"}));
  bench->add_option("--dim", o.dim);
  bench->add_option("--lower", o.lower);
  bench->add_option("--upper", o.upper);
  bench->add_option("--output", o.output);

  std::vector<const char*> argv{"fuzzysweep"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*cluster) return cmd_cluster(o, out);
    if (*indexes) return cmd_indexes(o, out);
    if (*sweep) return cmd_sweep(o, out);
    return cmd_foa_bench(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace fuzzysweep
