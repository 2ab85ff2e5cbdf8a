#include "adslab/tensor.hpp"

#include <cmath>
#include <utility>

#include "adslab/errors.hpp"

namespace adslab {

Eigen::MatrixXd JetMatrix::values() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).value();
  return m;
}

JetMatrix JetMatrix::truncated(int order) const {
  JetMatrix out = *this;
  for (auto& x : out.e_) x = at_order(x, order);
  return out;
}

JetMatrix inverse(const JetMatrix& a) {
  const int n = a.size();
  const int order = a.order();
  const int dim = a.jet_dim();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a.values());
  if (!lu.isInvertible()) fail(ErrorKind::degenerate_metric, "singular value-part matrix");
  const Eigen::MatrixXd inv0 = lu.inverse();

  // a = a0 + nil, with nil nilpotent; p = -inv0 * nil.
  JetMatrix p = JetMatrix::zero(n, dim, order);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Jet nil = a(k, j);
        nil -= nil.value();
        p(i, j) -= inv0(i, k) * nil;
      }

  // s = I + p (I + p (I + ...)), order terms deep.
  JetMatrix s = JetMatrix::zero(n, dim, order);
  for (int i = 0; i < n; ++i) s(i, i) += 1.0;
  for (int depth = 0; depth < order; ++depth) {
    JetMatrix next = JetMatrix::zero(n, dim, order);
    for (int i = 0; i < n; ++i) {
      next(i, i) += 1.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) next(i, j) += p(i, k) * s(k, j);
    }
    s = std::move(next);
  }

  JetMatrix out = JetMatrix::zero(n, dim, order);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out(i, j) += s(i, k) * inv0(k, j);
  return out;
}

Jet determinant(const JetMatrix& a) {
  const int n = a.size();
  JetMatrix m = a;
  Jet det = Jet::constant(1.0, a.jet_dim(), a.order());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m(r, col).value()) > std::abs(m(pivot, col).value())) pivot = r;
    if (m(pivot, col).value() == 0.0) return Jet::constant(0.0, a.jet_dim(), a.order());
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(m(pivot, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    const Jet inv_pivot = reciprocal(m(col, col));
    for (int r = col + 1; r < n; ++r) {
      const Jet factor = m(r, col) * inv_pivot;
      for (int j = col; j < n; ++j) m(r, j) -= factor * m(col, j);
    }
  }
  return det;
}

}  // namespace adslab
