#pragma once

#include <span>
#include <vector>

#include "adslab/geometry.hpp"

namespace adslab {

/// Radical inverse of `index` in `base`.
double radical_inverse(unsigned long index, unsigned base);

/// Halton points in the chart box shrunk by `margin` (fraction of each
/// interval width) on every side. Bases are the first primes, one per
/// coordinate; `start` skips the leading indices.
std::vector<Point> halton_points(const Chart& chart, int count, unsigned long start = 1, double margin = 0.1);

/// Pairwise summation in index order.
double pairwise_sum(std::span<const double> x);

struct Extrapolation {
  double value = 0.0;
  /// Difference between the last two diagonal entries of the tableau.
  double error = 0.0;
  std::vector<double> diagonal;
};

/// Richardson extrapolation of samples taken at h, h/ratio, h/ratio², …
/// eliminating error terms h^p for the given powers in order.
Extrapolation richardson(std::span<const double> samples, double ratio, std::span<const int> powers);

/// Same with powers 1, 2, …, samples.size() - 1.
Extrapolation richardson(std::span<const double> samples, double ratio = 2.0);

}  // namespace adslab
