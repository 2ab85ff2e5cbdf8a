#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "adslab/jet.hpp"

namespace adslab {

/// Dense square matrix of jets (metric components, symmetric 2-tensors).
class JetMatrix {
 public:
  JetMatrix() = default;
  JetMatrix(int n, const Jet& fill) : n_(n), e_(static_cast<std::size_t>(n * n), fill) {}

  static JetMatrix zero(int n, int jet_dim, int order) { return {n, Jet::constant(0.0, jet_dim, order)}; }

  int size() const noexcept { return n_; }
  int order() const { return e_.front().order(); }
  int jet_dim() const { return e_.front().dim(); }

  Jet& operator()(int i, int j) { return e_[static_cast<std::size_t>(i * n_ + j)]; }
  const Jet& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * n_ + j)]; }

  Eigen::MatrixXd values() const;
  JetMatrix truncated(int order) const;

 private:
  int n_ = 0;
  std::vector<Jet> e_;
};

/// Inverse through the order of `a` via the terminating Neumann series
/// around the value-part inverse.
JetMatrix inverse(const JetMatrix& a);

/// Determinant by elimination with value-part partial pivoting.
Jet determinant(const JetMatrix& a);

/// Fixed-rank real tensor with every index running over [0, dim).
template <int Rank>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(int dim) : dim_(dim), data_(count(dim), 0.0) {}

  int dim() const noexcept { return dim_; }
  std::size_t flat_size() const noexcept { return data_.size(); }

  template <typename... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <typename... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  const std::vector<double>& data() const noexcept { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  static std::size_t count(int dim) {
    std::size_t c = 1;
    for (int r = 0; r < Rank; ++r) c *= static_cast<std::size_t>(dim);
    return c;
  }
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t o = 0;
    for (int i : idx) o = o * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    return o;
  }

  int dim_ = 0;
  std::vector<double> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

}  // namespace adslab
