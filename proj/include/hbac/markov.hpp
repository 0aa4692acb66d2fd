#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hbac/types.hpp"

namespace hbac {

template <typename Derived>
bool is_column_stochastic(const Eigen::MatrixBase<Derived>& g,
                          typename Derived::Scalar tol = typename Derived::Scalar(kStochasticTol)) {
  using std::abs;
  if (g.rows() != g.cols()) return false;
  if ((g.array() < -tol).any()) return false;
  return ((g.colwise().sum().array() - typename Derived::Scalar(1)).abs() <= tol).all();
}

namespace detail {

/// Strongly connected components of the chain whose step c -> r exists when g(r, c) > 0.
/// Returns component id per state and, per component, whether it is closed.
template <typename Derived>
std::pair<std::vector<int>, std::vector<bool>> communicating_classes(const Eigen::MatrixBase<Derived>& g) {
  const int n = static_cast<int>(g.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int c = 0; c < n; ++c) {
    reach[c][c] = true;
    for (int r = 0; r < n; ++r)
      if (g(r, c) > 0) reach[c][r] = true;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (reach[i][k])
        for (int j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;

  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    for (int j = i; j < n; ++j)
      if (reach[i][j] && reach[j][i]) comp[j] = ncomp;
    ++ncomp;
  }
  std::vector<bool> closed(ncomp, true);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (reach[i][j] && comp[i] != comp[j]) closed[comp[i]] = false;
  return {comp, closed};
}

}  // namespace detail

template <typename Derived>
int closed_class_count(const Eigen::MatrixBase<Derived>& g) {
  auto [comp, closed] = detail::communicating_classes(g);
  return static_cast<int>(std::count(closed.begin(), closed.end(), true));
}

/// Stationary distribution of a column-stochastic matrix via the
/// Grassmann-Taksar-Heyman elimination (subtraction free, entrywise accurate).
/// Transient states get zero mass; several closed classes raise ReducibleMatrix.
template <typename Derived>
VectorX<typename Derived::Scalar> stationary_distribution(const Eigen::MatrixBase<Derived>& g) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  if (g.rows() != g.cols()) throw DimensionMismatch("stationary_distribution: matrix not square");
  if (!is_column_stochastic(g)) throw InvalidArgument("stationary_distribution: matrix not column-stochastic");

  auto [comp, closed] = detail::communicating_classes(g);
  const int nclosed = static_cast<int>(std::count(closed.begin(), closed.end(), true));
  if (nclosed != 1)
    throw ReducibleMatrix("stationary_distribution: " + std::to_string(nclosed) + " closed classes",
                          static_cast<std::size_t>(nclosed));
  const int cls = static_cast<int>(std::find(closed.begin(), closed.end(), true) - closed.begin());
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(g.rows()); ++i)
    if (comp[i] == cls) idx.push_back(i);

  const int m = static_cast<int>(idx.size());
  // row-stochastic transition matrix of the closed class
  MatrixX<Scalar> p(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) p(a, b) = g(idx[b], idx[a]);

  for (int k = m - 1; k > 0; --k) {
    Scalar s = p.row(k).head(k).sum();
    p.col(k).head(k) /= s;
    p.topLeftCorner(k, k) += p.col(k).head(k) * p.row(k).head(k);
  }
  VectorX<Scalar> pi = VectorX<Scalar>::Zero(m);
  pi[0] = 1;
  for (int k = 1; k < m; ++k) pi[k] = pi.head(k).dot(p.col(k).head(k));
  pi /= pi.sum();

  VectorX<Scalar> out = VectorX<Scalar>::Zero(g.rows());
  for (int a = 0; a < m; ++a) out[idx[a]] = pi[a];

  const Scalar residual = (g * out - out).cwiseAbs().maxCoeff();
  if (!(residual <= Scalar(1e-12)))
    throw Error("stationary_distribution: residual " + std::to_string(static_cast<double>(residual)) +
                " above 1e-12");
  return out;
}

/// Second-largest eigenvalue modulus.
template <typename Derived>
double subdominant_modulus(const Eigen::MatrixBase<Derived>& g) {
  Eigen::EigenSolver<Matrix> es(g.template cast<double>().eval(), false);
  std::vector<double> mods;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mods.push_back(std::abs(es.eigenvalues()[i]));
  std::sort(mods.begin(), mods.end(), std::greater<>());
  return mods.size() > 1 ? mods[1] : 0.0;
}

}  // namespace hbac
