#include "fuzzysweep/foa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fuzzysweep {

namespace {

void check_bounds(const BoundsList& bounds, std::size_t dim) {
  if (bounds.size() != dim) {
    throw InvalidArgument("need one bound per dimension (" + std::to_string(dim) + "), got " +
                          std::to_string(bounds.size()));
  }
  for (std::size_t j = 0; j < dim; ++j) {
    const auto& b = bounds[j];
    if (!std::isfinite(b.low) || !std::isfinite(b.high) || !(b.low < b.high)) {
      throw InvalidArgument("invalid bounds for dimension " + std::to_string(j));
    }
  }
}

double draw(Rng& rng, double low, double high) {
  return std::uniform_real_distribution<double>(low, high)(rng);
}

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

double evaluate(const FitnessFn& fitness, const std::vector<double>& position) {
  const double value = fitness(position);
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "fitness is not finite at position [";
    for (std::size_t j = 0; j < position.size(); ++j) msg << (j ? ", " : "") << position[j];
    msg << "]";
    throw FitnessError(msg.str());
  }
  return value;
}

void evaluate_all(const FitnessFn& fitness, std::vector<Tree>& trees) {
  for (auto& t : trees) {
    if (!t.fitness) t.fitness = evaluate(fitness, t.position);
  }
}

bool by_fitness(const Tree& a, const Tree& b) { return *a.fitness < *b.fitness; }

}  // namespace

void FoaParams::validate(std::size_t dim) const {
  if (area_limit < 2) throw InvalidArgument("area_limit must be >= 2");
  if (life_time < 0) throw InvalidArgument("life_time must be >= 0");
  if (lsc < 1) throw InvalidArgument("lsc must be >= 1");
  if (gsc < 1 || static_cast<std::size_t>(gsc) > dim) {
    throw InvalidArgument("gsc must be in [1, dim]");
  }
  if (!(transfer_rate > 0.0 && transfer_rate <= 1.0)) {
    throw InvalidArgument("transfer_rate must be in (0, 1]");
  }
  if (epochs < 0) throw InvalidArgument("epochs must be >= 0");
  if (!(local_step > 0.0) || !std::isfinite(local_step)) {
    throw InvalidArgument("local_step must be > 0");
  }
}

std::vector<Tree> initialize_forest(Rng& rng, const FoaParams& params, std::size_t dim,
                                    const BoundsList& bounds) {
  check_bounds(bounds, dim);
  std::vector<Tree> forest(static_cast<std::size_t>(params.area_limit));
  for (auto& tree : forest) {
    tree.position.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) tree.position[j] = draw(rng, bounds[j].low, bounds[j].high);
  }
  return forest;
}

std::vector<Tree> local_seeding(std::vector<Tree>& forest, Rng& rng, const FoaParams& params,
                                const BoundsList& bounds) {
  std::vector<Tree> seeds;
  for (const auto& parent : forest) {
    if (parent.age != 0) continue;
    for (int s = 0; s < params.lsc; ++s) {
      Tree child{parent.position, 0, std::nullopt};
      const std::size_t j = pick(rng, child.position.size());
      const double step = params.local_step * bounds[j].width();
      child.position[j] =
          std::clamp(child.position[j] + draw(rng, -step, step), bounds[j].low, bounds[j].high);
      seeds.push_back(std::move(child));
    }
  }
  for (auto& tree : forest) ++tree.age;
  return seeds;
}

LimitResult population_limit(std::vector<Tree> forest, const FoaParams& params) {
  LimitResult out;
  for (auto& tree : forest) {
    if (tree.age > params.life_time) {
      out.candidates.push_back(std::move(tree));
    } else {
      out.survivors.push_back(std::move(tree));
    }
  }
  const auto limit = static_cast<std::size_t>(params.area_limit);
  if (out.survivors.size() > limit) {
    std::stable_sort(out.survivors.begin(), out.survivors.end(), by_fitness);
    std::move(out.survivors.begin() + static_cast<std::ptrdiff_t>(limit), out.survivors.end(),
              std::back_inserter(out.candidates));
    out.survivors.resize(limit);
  }
  return out;
}

std::vector<Tree> global_seeding(const std::vector<Tree>& candidates, Rng& rng,
                                 const FoaParams& params, const BoundsList& bounds) {
  std::vector<Tree> seeds;
  if (candidates.empty()) return seeds;
  const auto count = std::min(
      candidates.size(),
      static_cast<std::size_t>(std::ceil(params.transfer_rate * static_cast<double>(candidates.size()))));

  std::vector<std::size_t> chosen;
  std::vector<std::size_t> all(candidates.size());
  std::iota(all.begin(), all.end(), 0);
  std::sample(all.begin(), all.end(), std::back_inserter(chosen), count, rng);

  const std::size_t dim = bounds.size();
  std::vector<std::size_t> dims(dim);
  std::iota(dims.begin(), dims.end(), 0);
  for (const std::size_t c : chosen) {
    Tree seed{candidates[c].position, 0, std::nullopt};
    std::vector<std::size_t> redraw;
    std::sample(dims.begin(), dims.end(), std::back_inserter(redraw),
                static_cast<std::size_t>(params.gsc), rng);
    for (const std::size_t j : redraw) seed.position[j] = draw(rng, bounds[j].low, bounds[j].high);
    seeds.push_back(std::move(seed));
  }
  return seeds;
}

FoaResult foa_minimize(const FitnessFn& fitness, std::size_t dim, const BoundsList& bounds,
                       const FoaParams& params, Rng& rng, const EpochObserver& observer) {
  params.validate(dim);
  std::vector<Tree> forest = initialize_forest(rng, params, dim, bounds);
  evaluate_all(fitness, forest);
  std::stable_sort(forest.begin(), forest.end(), by_fitness);

  FoaResult result{forest.front().position, *forest.front().fitness, {}};
  result.trace.push_back(result.best_fitness);

  for (int epoch = 1; epoch <= params.epochs; ++epoch) {
    std::vector<Tree> seeds = local_seeding(forest, rng, params, bounds);
    evaluate_all(fitness, seeds);
    std::move(seeds.begin(), seeds.end(), std::back_inserter(forest));

    LimitResult limited = population_limit(std::move(forest), params);
    forest = std::move(limited.survivors);
    const std::size_t after_limit = forest.size();

    // global seeds are evaluated as soon as they are created
    std::vector<Tree> far = global_seeding(limited.candidates, rng, params, bounds);
    evaluate_all(fitness, far);
    std::move(far.begin(), far.end(), std::back_inserter(forest));

    std::stable_sort(forest.begin(), forest.end(), by_fitness);
    forest.front().age = 0;
    if (*forest.front().fitness < result.best_fitness) {
      result.best_fitness = *forest.front().fitness;
      result.best_position = forest.front().position;
    }
    result.trace.push_back(result.best_fitness);

    if (observer) {
      observer({epoch, after_limit, forest.size(), forest.front().age, result.best_fitness});
    }
  }
  return result;
}

}  // namespace fuzzysweep
