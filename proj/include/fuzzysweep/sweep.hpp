#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzysweep/cvi.hpp"
#include "fuzzysweep/fcm.hpp"
#include "fuzzysweep/foa.hpp"
#include "fuzzysweep/gk.hpp"

namespace fuzzysweep {

enum class Algorithm { Fcm, Gk, FoaFcm, FoaGk };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view text);

// Everything needed to run any of the four algorithms; base.k is overridden per run.
struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::Fcm;
  ClusterConfig base;
  double cov_regularization = 1e-4;
  double rho = 1.0;
  FoaParams foa;

  GkConfig gk(int k) const;
};

// One clustering run with cluster count k and the given seed.
FcmResult cluster_once(const DataSet& data, const AlgorithmConfig& cfg, int k,
                       std::uint64_t seed);

struct SweepConfig {
  AlgorithmConfig run;
  int k_min = 2;
  int k_max = 5;
  int restarts = 1;
  std::optional<int> true_k;
  unsigned threads = 1;  // worker threads for independent (k, restart) runs

  void validate(Eigen::Index points) const;
};

enum class Detection { Correct, NearCorrect, Wrong, Undefined };
std::string_view to_string(Detection detection);

struct SweepEntry {
  int k = 0;
  std::optional<double> objective;  // empty if every restart failed
  std::vector<IndexValue> indexes;  // always seven entries
  double timing_ms = 0.0;           // summed over restarts, algorithm calls only
  std::string error;
};

struct CviReport {
  Algorithm algorithm = Algorithm::Fcm;
  std::string dataset;
  SweepConfig config;
  std::vector<SweepEntry> per_k;
  std::array<std::optional<int>, 7> best_k{};  // indexed like kAllIndexes
  std::optional<int> true_k;
  std::array<Detection, 7> detections{};
  double timing_ms = 0.0;

  std::optional<int> best_k_for(IndexName name) const {
    return best_k[static_cast<std::size_t>(name)];
  }
  Detection detection_for(IndexName name) const {
    return detections[static_cast<std::size_t>(name)];
  }
};

// Best k over the defined values in the given direction; ties go to the smaller k.
std::optional<int> select_best_k(std::span<const std::pair<int, std::optional<double>>> values,
                                 Direction direction);

Detection classify_detection(std::optional<int> best_k, int true_k);

CviReport run_sweep(const DataSet& data, const SweepConfig& cfg);

struct DetectionCounts {
  int correct = 0;
  int near_correct = 0;
};

// Per-index counts (across reports) and per-algorithm counts (across indexes and reports).
struct Tally {
  std::map<IndexName, DetectionCounts> per_index;
  std::map<Algorithm, DetectionCounts> per_algorithm;
};

Tally tally(std::span<const CviReport> reports);

}  // namespace fuzzysweep
