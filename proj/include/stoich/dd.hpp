#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "stoich/ratlin.hpp"

namespace stoich::dd {

using ratlin::Matrix;

// Generators of a polyhedral cone: lineality basis plus extreme rays modulo it.
struct ConeGenerators {
  std::vector<Vector> lineality;
  std::vector<Vector> rays;

  std::size_t dim(std::size_t ambient) const {
    auto all = lineality;
    all.insert(all.end(), rays.begin(), rays.end());
    return ratlin::rank(all, ambient);
  }
};

namespace detail {

using TightSet = std::vector<bool>;

inline bool subset(const TightSet& a, const TightSet& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

inline TightSet meet(const TightSet& a, const TightSet& b) {
  TightSet out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

}  // namespace detail

// Double description: generators of {y : eq y = 0, ineq y >= 0}.
inline ConeGenerators generators(std::size_t dim, const std::vector<Vector>& equalities,
                                 const std::vector<Vector>& inequalities) {
  for (const auto& e : equalities)
    if (e.size() != dim) throw DimensionError("cone equality has wrong length");
  for (const auto& a : inequalities)
    if (a.size() != dim) throw DimensionError("cone inequality has wrong length");

  std::vector<Vector> lin;
  if (equalities.empty()) {
    lin = Matrix::identity(dim).row_list();
  } else {
    lin = ratlin::nullspace_basis(Matrix::from_rows(equalities, dim));
  }
  for (auto& l : lin) l = primitive(l);

  const std::size_t k = inequalities.size();
  std::vector<Vector> rays;
  std::vector<detail::TightSet> tight;

  for (std::size_t c = 0; c < k; ++c) {
    const Vector& a = inequalities[c];
    std::size_t pivot = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i) {
      if (sgn(dot(a, lin[i])) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < lin.size()) {
      Vector l0 = lin[pivot];
      Rational al0 = dot(a, l0);
      std::vector<Vector> next;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        if (i == pivot) continue;
        Rational f = dot(a, lin[i]) / al0;
        Vector v = lin[i];
        for (std::size_t j = 0; j < dim; ++j) v[j] -= f * l0[j];
        next.push_back(primitive(v));
      }
      lin = std::move(next);
      for (std::size_t r = 0; r < rays.size(); ++r) {
        Rational f = dot(a, rays[r]) / al0;
        for (std::size_t j = 0; j < dim; ++j) rays[r][j] -= f * l0[j];
        rays[r] = primitive(rays[r]);
        tight[r][c] = true;
      }
      if (sgn(al0) < 0)
        for (auto& x : l0) x = -x;
      detail::TightSet t(k, false);
      for (std::size_t p = 0; p < c; ++p) t[p] = true;
      rays.push_back(l0);
      tight.push_back(t);
      continue;
    }

    std::vector<std::size_t> pos, neg, zero;
    std::vector<Rational> val(rays.size());
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(a, rays[r]);
      int s = sgn(val[r]);
      (s > 0 ? pos : s < 0 ? neg : zero).push_back(r);
    }
    if (neg.empty()) {
      for (auto r : zero) tight[r][c] = true;
      continue;
    }
    std::vector<Vector> next_rays;
    std::vector<detail::TightSet> next_tight;
    for (auto r : pos) {
      next_rays.push_back(rays[r]);
      next_tight.push_back(tight[r]);
    }
    for (auto r : zero) {
      next_rays.push_back(rays[r]);
      next_tight.push_back(tight[r]);
      next_tight.back()[c] = true;
    }
    for (auto p : pos) {
      for (auto n : neg) {
        detail::TightSet common = detail::meet(tight[p], tight[n]);
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (detail::subset(common, tight[r])) adjacent = false;
        }
        if (!adjacent) continue;
        Vector v(dim);
        for (std::size_t j = 0; j < dim; ++j) v[j] = val[p] * rays[n][j] - val[n] * rays[p][j];
        next_rays.push_back(primitive(v));
        common[c] = true;
        next_tight.push_back(common);
      }
    }
    rays = std::move(next_rays);
    tight = std::move(next_tight);
  }
  std::sort(rays.begin(), rays.end());
  return {lin, rays};
}

}  // namespace stoich::dd
