#include "fuzzysweep/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "fuzzysweep/hybrid.hpp"

namespace fuzzysweep {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Fcm: return "fcm";
    case Algorithm::Gk: return "gk";
    case Algorithm::FoaFcm: return "foa-fcm";
    case Algorithm::FoaGk: return "foa-gk";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  for (Algorithm a : {Algorithm::Fcm, Algorithm::Gk, Algorithm::FoaFcm, Algorithm::FoaGk}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::string_view to_string(Detection detection) {
  switch (detection) {
    case Detection::Correct: return "correct";
    case Detection::NearCorrect: return "near-correct";
    case Detection::Wrong: return "wrong";
    case Detection::Undefined: return "undefined";
  }
  return "?";
}

GkConfig AlgorithmConfig::gk(int k) const {
  GkConfig out{base, {rho}, cov_regularization};
  out.base.k = k;
  return out;
}

FcmResult cluster_once(const DataSet& data, const AlgorithmConfig& cfg, int k,
                       std::uint64_t seed) {
  Rng rng(seed);
  ClusterConfig base = cfg.base;
  base.k = k;
  base.seed = seed;
  switch (cfg.algorithm) {
    case Algorithm::Fcm: return fcm_run(data, base, rng);
    case Algorithm::Gk: return gk_run(data, cfg.gk(k), rng);
    case Algorithm::FoaFcm: return foa_fcm_run(data, base, cfg.foa, rng);
    case Algorithm::FoaGk: return foa_gk_run(data, cfg.gk(k), cfg.foa, rng);
  }
  throw InvalidArgument("unknown algorithm");
}

void SweepConfig::validate(Eigen::Index points) const {
  if (k_min < 1 || k_min > k_max || k_max > points) {
    throw InvalidArgument("sweep range must satisfy 1 <= k_min <= k_max <= N");
  }
  if (restarts < 1) throw InvalidArgument("restarts must be >= 1");
  if (true_k && *true_k < 1) throw InvalidArgument("true k must be >= 1");
  run.base.validate();
}

std::optional<int> select_best_k(std::span<const std::pair<int, std::optional<double>>> values,
                                 Direction direction) {
  std::optional<int> best_k;
  double best = 0.0;
  for (const auto& [k, value] : values) {
    if (!value) continue;
    const bool better = !best_k || (direction == Direction::Max ? *value > best : *value < best) ||
                        (*value == best && k < *best_k);
    if (better) {
      best_k = k;
      best = *value;
    }
  }
  return best_k;
}

Detection classify_detection(std::optional<int> best_k, int true_k) {
  if (!best_k) return Detection::Undefined;
  const int gap = std::abs(*best_k - true_k);
  if (gap == 0) return Detection::Correct;
  if (gap == 1) return Detection::NearCorrect;
  return Detection::Wrong;
}

namespace {

struct RunOutcome {
  std::optional<FcmResult> result;
  std::string error;
  double timing_ms = 0.0;
};

RunOutcome timed_run(const DataSet& data, const AlgorithmConfig& cfg, int k, std::uint64_t seed) {
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    out.result = cluster_once(data, cfg, k, seed);
  } catch (const Error& e) {
    out.error = e.what();
  }
  out.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<IndexValue> undefined_indexes(const std::string& reason) {
  std::vector<IndexValue> out;
  for (IndexName n : kAllIndexes) out.push_back({n, std::nullopt, direction_of(n), reason});
  return out;
}

}  // namespace

CviReport run_sweep(const DataSet& data, const SweepConfig& cfg) {
  cfg.validate(data.size());
  const auto start = std::chrono::steady_clock::now();

  const int ks = cfg.k_max - cfg.k_min + 1;
  const auto jobs = static_cast<std::size_t>(ks * cfg.restarts);
  std::vector<RunOutcome> outcomes(jobs);

  // Seeds depend only on (seed, k, restart), so the schedule does not affect results.
  auto job = [&](std::size_t j) {
    const int k = cfg.k_min + static_cast<int>(j) / cfg.restarts;
    const int r = static_cast<int>(j) % cfg.restarts;
    const std::uint64_t seed =
        derive_seed(cfg.run.base.seed, static_cast<std::uint64_t>(k) * 1000003ULL +
                                           static_cast<std::uint64_t>(r));
    outcomes[j] = timed_run(data, cfg.run, k, seed);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(jobs)));
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs; ++j) job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs; j = next++) job(j);
      });
    }
  }

  CviReport report;
  report.algorithm = cfg.run.algorithm;
  report.dataset = data.name();
  report.config = cfg;
  report.true_k = cfg.true_k;

  for (int ki = 0; ki < ks; ++ki) {
    SweepEntry entry;
    entry.k = cfg.k_min + ki;
    const RunOutcome* best = nullptr;
    for (int r = 0; r < cfg.restarts; ++r) {
      const RunOutcome& o = outcomes[static_cast<std::size_t>(ki * cfg.restarts + r)];
      entry.timing_ms += o.timing_ms;
      if (!o.result) {
        if (entry.error.empty()) entry.error = o.error;
        continue;
      }
      if (!best || o.result->model.objective < best->result->model.objective) best = &o;
    }
    if (best) {
      const FcmResult& res = *best->result;
      entry.objective = res.model.objective;
      entry.indexes = evaluate_all(res.memberships, data, res.model.centers, res.model.fuzzifier);
      entry.error.clear();
    } else {
      entry.indexes = undefined_indexes(entry.error);
    }
    report.per_k.push_back(std::move(entry));
  }

  for (std::size_t n = 0; n < kAllIndexes.size(); ++n) {
    std::vector<std::pair<int, std::optional<double>>> values;
    for (const auto& e : report.per_k) values.emplace_back(e.k, e.indexes[n].value);
    report.best_k[n] = select_best_k(values, direction_of(kAllIndexes[n]));
    report.detections[n] =
        cfg.true_k ? classify_detection(report.best_k[n], *cfg.true_k) : Detection::Undefined;
  }
  report.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Tally tally(std::span<const CviReport> reports) {
  if (reports.empty()) throw InvalidArgument("nothing to tally");
  Tally out;
  for (IndexName n : kAllIndexes) out.per_index[n] = {};
  for (const auto& report : reports) {
    if (!report.true_k) {
      throw InvalidArgument("report for '" + report.dataset + "' has no ground-truth k");
    }
    auto& algo = out.per_algorithm[report.algorithm];
    for (std::size_t n = 0; n < kAllIndexes.size(); ++n) {
      const Detection d = report.detections[n];
      auto& idx = out.per_index[kAllIndexes[n]];
      if (d == Detection::Correct) {
        ++idx.correct;
        ++algo.correct;
      } else if (d == Detection::NearCorrect) {
        ++idx.near_correct;
        ++algo.near_correct;
      }
    }
  }
  return out;
}

}  // namespace fuzzysweep
