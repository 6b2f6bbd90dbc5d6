#pragma once

#include <span>

namespace fuzzysweep::benchmarks {

// sum x_j^2, minimum 0 at the origin
inline double sphere(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return sum;
}

// minimum 0 at (1, ..., 1)
inline double rosenbrock(std::span<const double> x) {
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    const double a = x[j + 1] - x[j] * x[j];
    const double b = 1.0 - x[j];
    sum += 100.0 * a * a + b * b;
  }
  return sum;
}

}  // namespace fuzzysweep::benchmarks
