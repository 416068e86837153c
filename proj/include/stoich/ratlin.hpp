#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "stoich/rational.hpp"

namespace stoich::ratlin {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      for (long x : r) data_.emplace_back(x);
    }
  }

  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionError("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static Matrix from_rows(const std::vector<Vector>& rows) {
    return from_rows(rows, rows.empty() ? 0 : rows.front().size());
  }
  static Matrix from_columns(const std::vector<Vector>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw DimensionError("ragged matrix columns");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const {
    return Vector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  Vector col(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  std::vector<Vector> row_list() const {
    std::vector<Vector> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }
  std::vector<Vector> col_list() const {
    std::vector<Vector> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(col(j));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix select_columns(const std::vector<std::size_t>& idx) const {
    Matrix m(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) m(i, k) = (*this)(i, idx[k]);
    return m;
  }
  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(idx.size(), cols_);
    for (std::size_t k = 0; k < idx.size(); ++k)
      for (std::size_t j = 0; j < cols_; ++j) m(k, j) = (*this)(idx[k], j);
    return m;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw DimensionError("matrix product: inner dimensions differ");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Rational& a = (*this)(i, k);
        if (sgn(a) == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }
  Vector operator*(const Vector& v) const {
    if (cols_ != v.size()) throw DimensionError("matrix-vector product: length mismatch");
    Vector r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("hstack: row counts differ");
  Matrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw DimensionError("vstack: column counts differ");
  Matrix m(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, j) = b(i, j);
  return m;
}

struct Rref {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

// Reduced row echelon form; zero rows are dropped.
inline Rref rref(Matrix m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  Matrix reduced(r, m.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) reduced(i, j) = m(i, j);
  return {reduced, pivots};
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

inline std::size_t rank(const std::vector<Vector>& vs, std::size_t dim) {
  if (vs.empty()) return 0;
  return rank(Matrix::from_rows(vs, dim));
}

// Basis of {x : m x = 0}, one vector per free column.
inline std::vector<Vector> nullspace_basis(const Matrix& m) {
  Rref r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

struct AffineSolution {
  Vector particular;
  std::vector<Vector> directions;
};

inline std::optional<AffineSolution> solve_affine(const Matrix& m, const Vector& b) {
  if (b.size() != m.rows()) throw DimensionError("solve_affine: right-hand side length mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  Rref r = rref(aug);
  if (!r.pivots.empty() && r.pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols());
  for (std::size_t i = 0; i < r.pivots.size(); ++i) x[r.pivots[i]] = r.reduced(i, m.cols());
  return AffineSolution{x, nullspace_basis(m)};
}

// Subspace of Q^n stored by its RREF basis, so equal subspaces compare equal.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

  static Subspace span(std::size_t ambient, const std::vector<Vector>& vectors) {
    Subspace s(ambient);
    if (vectors.empty()) return s;
    s.basis_ = rref(Matrix::from_rows(vectors, ambient)).reduced;
    return s;
  }
  static Subspace whole(std::size_t ambient) { return span(ambient, Matrix::identity(ambient).row_list()); }
  static Subspace column_space(const Matrix& m) { return span(m.rows(), m.col_list()); }
  static Subspace row_space(const Matrix& m) { return span(m.cols(), m.row_list()); }
  static Subspace null_space(const Matrix& m) { return span(m.cols(), nullspace_basis(m)); }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  std::vector<Vector> basis_vectors() const { return basis_.row_list(); }

  bool contains(const Vector& v) const {
    if (v.size() != ambient_) throw DimensionError("subspace membership: length mismatch");
    if (is_zero(v)) return true;
    return rank(vstack(basis_, Matrix::from_rows({v}, ambient_))) == dim();
  }
  bool contains(const Subspace& o) const {
    check(o);
    for (const auto& v : o.basis_vectors())
      if (!contains(v)) return false;
    return true;
  }

  Subspace complement() const {
    if (dim() == 0) return whole(ambient_);
    return null_space(basis_);
  }

  bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }

  void check(const Subspace& o) const {
    if (ambient_ != o.ambient_) throw DimensionError("subspaces live in different ambient spaces");
  }

 private:
  std::size_t ambient_ = 0;
  Matrix basis_;
};

inline Subspace sum(const Subspace& a, const Subspace& b) {
  a.check(b);
  auto vs = a.basis_vectors();
  for (auto& v : b.basis_vectors()) vs.push_back(v);
  return Subspace::span(a.ambient_dim(), vs);
}

inline Subspace intersection(const Subspace& a, const Subspace& b) {
  a.check(b);
  return sum(a.complement(), b.complement()).complement();
}

inline std::size_t quotient_dim(const Subspace& a, const Subspace& b) {
  return a.dim() - intersection(a, b).dim();
}

// Orthogonal complement of a inside w.
inline Subspace complement_within(const Subspace& a, const Subspace& w) {
  return intersection(a.complement(), w);
}

// Coordinate projection onto the listed coordinates.
inline Vector project(const Vector& v, const std::vector<std::size_t>& coords) {
  Vector out;
  out.reserve(coords.size());
  for (auto c : coords) {
    if (c >= v.size()) throw DimensionError("projection coordinate out of range");
    out.push_back(v[c]);
  }
  return out;
}

inline Subspace project(const Subspace& s, const std::vector<std::size_t>& coords) {
  std::vector<Vector> vs;
  for (const auto& v : s.basis_vectors()) vs.push_back(project(v, coords));
  return Subspace::span(coords.size(), vs);
}

// Inclusion of coordinate vectors: zeros outside coords.
inline Vector embed(const Vector& v, const std::vector<std::size_t>& coords, std::size_t ambient) {
  if (v.size() != coords.size()) throw DimensionError("embedding: length mismatch");
  Vector out(ambient);
  for (std::size_t k = 0; k < coords.size(); ++k) out[coords[k]] = v[k];
  return out;
}

inline Subspace embed(const Subspace& s, const std::vector<std::size_t>& coords, std::size_t ambient) {
  std::vector<Vector> vs;
  for (const auto& v : s.basis_vectors()) vs.push_back(embed(v, coords, ambient));
  return Subspace::span(ambient, vs);
}

// Orthogonal projection of v onto z.
inline Vector orthogonal_projection(const Vector& v, const Subspace& z) {
  if (v.size() != z.ambient_dim()) throw DimensionError("orthogonal projection: length mismatch");
  if (z.dim() == 0) return Vector(v.size());
  const Matrix& b = z.basis();
  Matrix gram = b * b.transpose();
  Vector rhs = b * v;
  auto sol = solve_affine(gram, rhs);
  const Vector& mu = sol->particular;
  Vector out(v.size());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[j] += mu[i] * b(i, j);
  return out;
}

inline Subspace orthogonal_projection(const Subspace& a, const Subspace& z) {
  a.check(z);
  std::vector<Vector> vs;
  for (const auto& v : a.basis_vectors()) vs.push_back(orthogonal_projection(v, z));
  return Subspace::span(a.ambient_dim(), vs);
}

// {w in domain : w restricted to coords lies in target}.
inline Subspace preimage(const Subspace& target, const Subspace& domain, const std::vector<std::size_t>& coords) {
  if (target.ambient_dim() != coords.size()) throw DimensionError("preimage: target dimension mismatch");
  if (domain.dim() == 0) return domain;
  Matrix bk = domain.basis().select_columns(coords);
  Matrix perp = target.complement().basis();
  std::vector<Vector> coeffs;
  if (perp.rows() == 0) {
    coeffs = Matrix::identity(domain.dim()).row_list();
  } else {
    coeffs = nullspace_basis((bk * perp.transpose()).transpose());
  }
  std::vector<Vector> vs;
  for (const auto& c : coeffs) {
    Vector w(domain.ambient_dim());
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < w.size(); ++j) w[j] += c[i] * domain.basis()(i, j);
    vs.push_back(w);
  }
  return Subspace::span(domain.ambient_dim(), vs);
}

}  // namespace stoich::ratlin
