#pragma once

// Random instance generators shared by the experiments and the acceptance suite.

#include "lplab/random.hpp"
#include "lplab/tridiag.hpp"
#include "lplab/zoo.hpp"

#include <utility>
#include <vector>

namespace lplab::lab {

inline Matrix random_tridiagonal(Rng& rng, const BlockDecomposition& dec) {
  Matrix t = rng.matrix(dec.dim(), dec.dim());
  for (std::size_t i = 0; i < dec.count(); ++i)
    for (std::size_t j = 0; j < dec.count(); ++j)
      if ((i > j ? i - j : j - i) >= 2) t.block(dec.offset(i), dec.offset(j), dec.size(i), dec.size(j)).setZero();
  return t;
}

inline BlockMatrix random_banded(Rng& rng, const std::vector<Index>& sizes, std::size_t r) {
  BlockMatrix m(sizes);
  for (std::size_t i = 0; i < sizes.size(); ++i)
    for (std::size_t j = 0; j < sizes.size(); ++j)
      if ((i > j ? i - j : j - i) <= r) m.set(i, j, rng.matrix(sizes[i], sizes[j]));
  return m;
}

inline std::vector<Index> random_sizes(Rng& rng, std::size_t blocks, Index max_size) {
  std::vector<Index> s;
  for (std::size_t i = 0; i < blocks; ++i) s.push_back(rng.integer(1, max_size));
  return s;
}

// unimodular weights on a random permutation
inline Matrix random_monomial(Rng& rng, Index n) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (Index i = n - 1; i > 0; --i)
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(rng.integer(0, i))]);
  Matrix v = Matrix::Zero(n, n);
  for (Index c = 0; c < n; ++c) v(perm[static_cast<std::size_t>(c)], c) = std::polar(1.0, rng.uniform(0.0, 6.283));
  return v;
}

inline LaurentPolynomial random_laurent(Rng& rng, int degree) {
  std::map<int, Scalar> c;
  for (int k = -degree; k <= degree; ++k) c[k] = rng.complex_uniform();
  return LaurentPolynomial(c);
}

// perturbed oblique idempotent of the given size
inline Matrix perturbed_idempotent(Rng& rng, Index n, double scale) {
  Index rank = rng.integer(0, n);
  Matrix x = Matrix::Identity(n, n) + (0.3 / std::sqrt(static_cast<double>(n))) * rng.matrix(n, n);
  Vector ev = Vector::Zero(n);
  ev.head(rank).setOnes();
  return x * ev.asDiagonal() * x.inverse() + (rng.uniform(0.0, scale) / static_cast<double>(n)) * rng.matrix(n, n);
}

struct SplitInstance {
  Matrix l, r, t1, t2;
};

inline SplitInstance random_split_instance(Rng& rng, Index n1, Index n2, double delta) {
  SplitInstance s;
  Matrix j = Matrix::Zero(n2, n1);
  j.topRows(n1).setIdentity();
  s.l = j + delta * rng.matrix(n2, n1);
  s.r = Matrix(j.transpose()) + delta * rng.matrix(n1, n2);
  s.t1 = rng.matrix(n1, n1);
  Matrix pc = Matrix::Identity(n2, n2) - j * j.transpose();
  s.t2 = j * s.t1 * j.transpose() + pc * rng.matrix(n2, n2) * pc + delta * rng.matrix(n2, n2);
  return s;
}

// (T_i), (T~_i = V T_i V*), (K_i) for the neutral checks; T_1 = ... = T_{n1+1},
// and T_n = ... = T_{n+n1} when `flat_tail`.
struct NeutralFamily {
  std::vector<LpOperator> ts, tildes, ks;
};

inline NeutralFamily random_neutral_family(Rng& rng, const BlockDecomposition& d, Index n1, const Matrix& v,
                                           bool flat_tail) {
  NeutralFamily f;
  const std::size_t n = d.count();
  Matrix base = random_tridiagonal(rng, d);
  for (std::size_t i = 0; i < n + static_cast<std::size_t>(n1); ++i) {
    Matrix ti = base;
    if (i > static_cast<std::size_t>(n1)) ti = f.ts.back().matrix + rng.uniform(0.0, 0.3) * random_tridiagonal(rng, d);
    if (flat_tail && i >= n) ti = f.ts[n - 1].matrix;
    f.ts.emplace_back(ti);
    f.tildes.emplace_back(Matrix(v * ti * v.adjoint()));
    f.ks.emplace_back(i <= static_cast<std::size_t>(n1) ? Matrix(Matrix::Zero(d.dim(), d.dim()))
                                                       : Matrix(0.2 * rng.matrix(d.dim(), d.dim())));
  }
  return f;
}

}  // namespace lplab::lab
