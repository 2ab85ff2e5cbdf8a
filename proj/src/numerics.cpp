#include "adslab/numerics.hpp"

#include <array>
#include <cmath>

#include "adslab/errors.hpp"

namespace adslab {

namespace {

constexpr std::array<unsigned, 8> kPrimes{2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace

double radical_inverse(unsigned long index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

std::vector<Point> halton_points(const Chart& chart, int count, unsigned long start, double margin) {
  if (count < 1) fail(ErrorKind::invalid_argument, "sample count must be at least 1");
  if (!(margin >= 0.0 && margin < 0.5)) fail(ErrorKind::invalid_argument, "sample margin must lie in [0, 0.5)");
  if (chart.dim() > static_cast<int>(kPrimes.size())) fail(ErrorKind::dimension, "too many coordinates for Halton");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Point p;
    for (int i = 0; i < chart.dim(); ++i) {
      const auto& iv = chart.interval(i);
      const double lo = iv.lo + margin * iv.width();
      const double hi = iv.hi - margin * iv.width();
      p.coords.push_back(lo + (hi - lo) * radical_inverse(start + static_cast<unsigned long>(k), kPrimes[static_cast<std::size_t>(i)]));
    }
    out.push_back(std::move(p));
  }
  return out;
}

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

Extrapolation richardson(std::span<const double> samples, double ratio, std::span<const int> powers) {
  if (samples.empty()) fail(ErrorKind::invalid_argument, "no samples to extrapolate");
  if (powers.size() + 1 < samples.size()) fail(ErrorKind::invalid_argument, "not enough powers for the samples");
  std::vector<double> row(samples.begin(), samples.end());
  Extrapolation out;
  out.diagonal.push_back(row.back());
  for (std::size_t level = 1; level < samples.size(); ++level) {
    const double factor = std::pow(ratio, powers[level - 1]);
    std::vector<double> next;
    for (std::size_t k = 0; k + 1 < row.size(); ++k) next.push_back((factor * row[k + 1] - row[k]) / (factor - 1.0));
    row = std::move(next);
    out.diagonal.push_back(row.back());
  }
  out.value = out.diagonal.back();
  out.error = out.diagonal.size() > 1 ? std::abs(out.diagonal.back() - out.diagonal[out.diagonal.size() - 2]) : 0.0;
  return out;
}

Extrapolation richardson(std::span<const double> samples, double ratio) {
  std::vector<int> powers;
  for (std::size_t p = 1; p < samples.size(); ++p) powers.push_back(static_cast<int>(p));
  return richardson(samples, ratio, powers);
}

}  // namespace adslab
