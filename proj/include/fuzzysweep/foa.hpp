#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fuzzysweep/core.hpp"

namespace fuzzysweep {

struct Bounds {
  double low;
  double high;
  double width() const noexcept { return high - low; }
};

using BoundsList = std::vector<Bounds>;

// A candidate solution of the Forest Optimization Algorithm.
struct Tree {
  std::vector<double> position;
  int age = 0;
  std::optional<double> fitness;
};

struct FoaParams {
  int area_limit = 30;       // maximum forest size after limiting
  int life_time = 6;         // trees older than this leave the forest
  int lsc = 2;               // local seeds per age-0 tree
  int gsc = 1;               // dimensions re-drawn per global seed
  double transfer_rate = 0.05;
  int epochs = 10;
  double local_step = 0.1;   // fraction of the bound width
  std::uint64_t seed = 0;

  void validate(std::size_t dim) const;
};

// Minimized. Must return the same value for the same position and tolerate concurrent calls.
using FitnessFn = std::function<double(std::span<const double>)>;

std::vector<Tree> initialize_forest(Rng& rng, const FoaParams& params, std::size_t dim,
                                    const BoundsList& bounds);

// Every age-0 tree spawns `lsc` children, each differing from the parent in one coordinate.
// The existing trees age by one. Returns only the children.
std::vector<Tree> local_seeding(std::vector<Tree>& forest, Rng& rng, const FoaParams& params,
                                const BoundsList& bounds);

struct LimitResult {
  std::vector<Tree> survivors;
  std::vector<Tree> candidates;
};

// Moves over-age trees, then the worst-fitness excess over area_limit, to the candidates.
LimitResult population_limit(std::vector<Tree> forest, const FoaParams& params);

// ceil(transfer_rate * |candidates|) candidates, each with `gsc` coordinates re-drawn.
std::vector<Tree> global_seeding(const std::vector<Tree>& candidates, Rng& rng,
                                 const FoaParams& params, const BoundsList& bounds);

struct EpochReport {
  int epoch = 0;
  std::size_t forest_size_after_limit = 0;
  std::size_t forest_size = 0;
  int best_age = 0;
  double best_fitness = 0.0;
};

struct FoaResult {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  // Best-so-far fitness: entry 0 is the initial forest, then one entry per epoch.
  std::vector<double> trace;
};

using EpochObserver = std::function<void(const EpochReport&)>;

FoaResult foa_minimize(const FitnessFn& fitness, std::size_t dim, const BoundsList& bounds,
                       const FoaParams& params, Rng& rng, const EpochObserver& observer = {});

}  // namespace fuzzysweep
