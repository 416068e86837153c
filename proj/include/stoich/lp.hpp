#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stoich/ratlin.hpp"

namespace stoich::lp {

using ratlin::Matrix;

// Phase-one simplex with Bland's rule: some x >= 0 with a x = b, or nothing.
inline std::optional<Vector> nonnegative_solution(const Matrix& a, const Vector& b) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) throw DimensionError("lp: right-hand side length mismatch");
  const std::size_t width = n + m + 1;
  std::vector<Vector> t(m, Vector(width));
  for (std::size_t i = 0; i < m; ++i) {
    int s = sgn(b[i]) < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = s * a(i, j);
    t[i][n + i] = 1;
    t[i][width - 1] = s * b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  Vector cost(width);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < width; ++j)
      if (j < n || j == width - 1) cost[j] -= t[i][j];

  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (sgn(cost[j]) < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(t[i][enter]) <= 0) continue;
      Rational ratio = t[i][width - 1] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot occur in phase one
    Rational piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || sgn(t[i][enter]) == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    Rational f = cost[enter];
    for (std::size_t j = 0; j < width; ++j) cost[j] -= f * t[leave][j];
    basis[leave] = enter;
  }
  if (sgn(cost[width - 1]) != 0) return std::nullopt;
  Vector x(n);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = t[i][width - 1];
  return x;
}

// Some y with a y >= 1 componentwise (y free), or nothing.
inline std::optional<Vector> strictly_positive_direction(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  Matrix big(m, 2 * n + m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      big(i, j) = a(i, j);
      big(i, n + j) = -a(i, j);
    }
    big(i, 2 * n + i) = -1;
  }
  auto sol = nonnegative_solution(big, Vector(m, Rational(1)));
  if (!sol) return std::nullopt;
  Vector y(n);
  for (std::size_t j = 0; j < n; ++j) y[j] = (*sol)[j] - (*sol)[n + j];
  return y;
}

}  // namespace stoich::lp
