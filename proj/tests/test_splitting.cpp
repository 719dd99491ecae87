#include "doctest.h"

#include "lplab/random.hpp"
#include "lplab/splitting.hpp"

#include <cmath>

using namespace lplab;

namespace {

double max_entry(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Matrix random_tridiagonal(Rng& rng, const BlockDecomposition& dec) {
  Matrix t = rng.matrix(dec.dim(), dec.dim());
  for (std::size_t i = 0; i < dec.count(); ++i)
    for (std::size_t j = 0; j < dec.count(); ++j)
      if ((i > j ? i - j : j - i) >= 2) t.block(dec.offset(i), dec.offset(j), dec.size(i), dec.size(j)).setZero();
  return t;
}

// unimodular weights on a random permutation: an l^p isometry for every p
Matrix random_monomial(Rng& rng, Index n) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (Index i = n - 1; i > 0; --i) std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(rng.integer(0, i))]);
  Matrix v = Matrix::Zero(n, n);
  for (Index c = 0; c < n; ++c) v(perm[static_cast<std::size_t>(c)], c) = std::polar(1.0, rng.uniform(0.0, 6.283));
  return v;
}

BlockDecomposition random_dec(Rng& rng, std::size_t blocks, Index max_size) {
  std::vector<Index> s;
  for (std::size_t i = 0; i < blocks; ++i) s.push_back(rng.integer(1, max_size));
  return BlockDecomposition::from_sizes(s);
}

}  // namespace

TEST_CASE("riesz idempotent examples") {
  RieszOptions loose;
  loose.require_defect = false;
  Matrix d(2, 2);
  d << 0.9, 0.0, 0.0, 0.05;
  // ||E^2 - E|| = 0.09 is outside the guaranteed regime
  CHECK_THROWS_AS(riesz_idempotent(LpOperator(d)), LabError);
  Matrix q = riesz_idempotent(LpOperator(d), loose).matrix;
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  CHECK(max_entry(q - expect) <= 1e-12);

  Matrix tri(2, 2);
  tri << 1.0, 0.1, 0.0, 0.0;
  CHECK(max_entry(riesz_idempotent(LpOperator(tri), {256, 1.2}).matrix - tri) <= 1e-12);

  Rng rng(3);
  Matrix x = Matrix::Identity(6, 6) + 0.1 * rng.matrix(6, 6);
  Vector ev = Vector::Zero(6);
  ev.head(2).setOnes();
  Matrix p = x * ev.asDiagonal() * x.inverse();
  RieszOptions big;
  big.C = 10.0;
  CHECK(max_entry(riesz_idempotent(LpOperator(p), big).matrix - p) <= 1e-12);

  Matrix on = 0.5 * Matrix::Identity(3, 3);
  try {
    riesz_idempotent(LpOperator(on), loose);
    CHECK(false);
  } catch (const LabError& e) {
    CHECK(e.kind() == ErrorKind::spectral_gap);
  }
}

TEST_CASE("riesz idempotent on perturbed idempotents") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    Index n = rng.integer(1, 32);
    Index rank = rng.integer(0, n);
    Matrix x = Matrix::Identity(n, n) + (0.3 / std::sqrt(static_cast<double>(n))) * rng.matrix(n, n);
    Vector ev = Vector::Zero(n);
    ev.head(rank).setOnes();
    Matrix e = x * ev.asDiagonal() * x.inverse() + (rng.uniform(0.0, 2e-3) / n) * rng.matrix(n, n);
    RieszOptions opt;
    opt.p = rng.uniform(1.2, 5.0);
    PExponent p(opt.p);
    opt.C = op_norm_upper(LpOperator(e), p) * (1 + 1e-9);
    double eta = op_norm_upper(LpOperator(Matrix(e * e - e)), p);
    REQUIRE(eta < 1.0 / 16.0);
    Matrix q = riesz_idempotent(LpOperator(e), opt).matrix;
    CHECK(op_norm_upper(LpOperator(Matrix(q * q - q)), p) <= 1e-10);
    CHECK(op_norm_bounds(LpOperator(Matrix(e - q)), p).lower <= 16.0 * (0.5 + opt.C) * eta + 1e-9);
  }
}

TEST_CASE("split constants") {
  auto c = split_constants(1e-3, 1.0);
  REQUIRE(c.feasible());
  CHECK(c.f == doctest::Approx(0.024).epsilon(1e-14));
  CHECK(c.denom == doctest::Approx(0.974).epsilon(1e-14));
  CHECK(c.s_bound == doctest::Approx(3.075334702258727).epsilon(1e-13));
  CHECK(c.G == doctest::Approx(0.2952321314168378).epsilon(1e-13));
  CHECK(split_constants(1e-4, 1.01).G == doctest::Approx(0.030502077068229348).epsilon(1e-13));
  CHECK(split_constants(0.0, 1.0).G == 0.0);
  CHECK_FALSE(split_constants(0.1, 1.0).feasible());
  CHECK_FALSE(split_constants(1e-3, 0.5).feasible());
}

TEST_CASE("split similarity examples") {
  Rng rng(4);
  PExponent p(3.0);
  Matrix t = rng.matrix(4, 4);
  LpOperator id(Matrix::Identity(4, 4));
  auto s = split_similarity(id, id, LpOperator(t), LpOperator(t), 1.0, p);
  CHECK(s.y3_dim == 0);
  CHECK(max_entry(s.Q.matrix - Matrix::Identity(4, 4)) <= 1e-12);
  CHECK(max_entry(s.K.matrix) <= 1e-12);
  CHECK(s.condition == doctest::Approx(1.0).epsilon(1e-12));

  Matrix j = Matrix::Zero(5, 3);
  j.topRows(3).setIdentity();
  Matrix t1 = rng.matrix(3, 3);
  Matrix t2 = Matrix::Zero(5, 5);
  t2.topLeftCorner(3, 3) = t1;
  t2.bottomRightCorner(2, 2) = rng.matrix(2, 2);
  auto e = split_similarity(LpOperator(j), LpOperator(Matrix(j.transpose())), LpOperator(t1), LpOperator(t2), 1.0, p);
  CHECK(e.y3_dim == 2);
  CHECK(max_entry(e.K.matrix) <= 1e-12);
  CHECK(e.similarity_defect <= 1e-12);

  CHECK_THROWS_AS(split_similarity(LpOperator(Matrix(0.5 * Matrix::Identity(4, 4))), id, LpOperator(t),
                                   LpOperator(t), 1.0, p),
                  LabError);
}

TEST_CASE("split similarity on perturbed pairs") {
  Rng rng(21);
  int bounded = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Index n1 = rng.integer(1, 10);
    Index n2 = n1 + rng.integer(0, 12);
    PExponent p(trial % 5 == 0 ? 2.0 : rng.uniform(1.2, 5.0));
    double delta = 2e-4 / static_cast<double>(n2);
    Matrix j = Matrix::Zero(n2, n1);
    j.topRows(n1).setIdentity();
    Matrix l = j + delta * rng.matrix(n2, n1);
    Matrix r = Matrix(j.transpose()) + delta * rng.matrix(n1, n2);
    Matrix t1 = rng.matrix(n1, n1);
    Matrix pcomp = Matrix::Identity(n2, n2) - j * j.transpose();
    Matrix t2 = j * t1 * j.transpose() + pcomp * rng.matrix(n2, n2) * pcomp + delta * rng.matrix(n2, n2);
    double beta = std::max({1.0, op_norm_upper(LpOperator(l), p), op_norm_upper(LpOperator(r), p)}) * (1 + 1e-9);
    auto s = split_similarity(LpOperator(l), LpOperator(r), LpOperator(t1), LpOperator(t2), beta, p);
    CHECK(s.inverse_defect <= 1e-10);
    CHECK(s.similarity_defect <= 1e-10);
    CHECK(s.condition <= 7.0 * std::pow(beta, 6) + 1e-6);
    if (s.k_bound) {
      ++bounded;
      CHECK(s.k_lower <= *s.k_bound + 1e-9);
    }
  }
  CHECK(bounded >= 90);
}

TEST_CASE("neutral embedding") {
  for (double pv : {1.5, 2.0, 4.0}) {
    PExponent p(pv);
    auto dec = BlockDecomposition::from_sizes({3});
    Rng rng(2);
    auto l = neutral_embed_L(identity(IndexSet::interval(3)), dec, 1, p);
    Vector x = rng.vector(3);
    Vector y = l.matrix * x;
    double c = std::pow(2.0, -1.0 / pv);
    CHECK(max_entry(y.head(3) - c * x) <= 1e-15);
    CHECK(max_entry(y.tail(3) - c * x) <= 1e-15);
  }
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto dec = random_dec(rng, static_cast<std::size_t>(rng.integer(1, 5)), 4);
    PExponent p(rng.uniform(1.2, 5.0));
    Index n1 = rng.integer(1, 4);
    auto l = neutral_embed_L(LpOperator(random_monomial(rng, dec.dim())), dec, n1, p);
    for (int k = 0; k < 100; ++k) {
      Vector x = rng.vector(dec.dim());
      CHECK(std::abs(lp_norm(Vector(l.matrix * x), p) - lp_norm(x, p)) <= 1e-10 * lp_norm(x, p));
    }
  }
  auto dec = BlockDecomposition::from_sizes({2, 2});
  CHECK_THROWS_AS(neutral_embed_L(LpOperator(Matrix(2.0 * Matrix::Identity(4, 4))), dec, 1, PExponent(3.0)),
                  LabError);
  Matrix rot(2, 2);
  rot << 1, -1, 1, 1;
  rot /= std::sqrt(2.0);
  Matrix big = Matrix::Identity(4, 4);
  big.topLeftCorner(2, 2) = rot;
  CHECK_NOTHROW(neutral_embed_L(LpOperator(big), dec, 1, PExponent(2.0)));
  CHECK_THROWS_AS(neutral_embed_L(LpOperator(big), dec, 1, PExponent(3.0)), LabError);
}

TEST_CASE("neutral embedding defect bound") {
  PExponent p(3.0);
  Rng rng(6);
  auto dec = BlockDecomposition::from_sizes({2, 2, 3});
  LpOperator t(random_tridiagonal(rng, dec));
  std::vector<LpOperator> same(4, t);
  auto id = identity(IndexSet::interval(7));
  auto c = neutral_L_check(id, dec, 1, same, same, std::nullopt, p);
  double sup = 0.0;
  for (std::size_t j = 0; j < 3; ++j) sup = std::max(sup, op_norm_upper(LpOperator(Matrix(t.matrix * dec.projection(j))), p));
  CHECK(c.bound == doctest::Approx(12.0 * std::pow(2.0, -1.0 / 3.0) * sup).epsilon(1e-14));
  CHECK(c.lower <= 12.0 * std::pow(2.0, -1.0 / 3.0) * op_norm_upper(t, p) + 1e-9);

  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = static_cast<std::size_t>(rng.integer(2, 5));
    Index n1 = rng.integer(1, 3);
    auto d = random_dec(rng, n, 3);
    PExponent pp(rng.uniform(1.2, 5.0));
    Matrix v = random_monomial(rng, d.dim());
    bool corrected = n1 >= 2 && trial % 2 == 0;
    std::vector<LpOperator> ts, tildes, ks;
    Matrix base = random_tridiagonal(rng, d);
    for (std::size_t i = 0; i < n + static_cast<std::size_t>(n1); ++i) {
      Matrix ti = base;
      if (i > static_cast<std::size_t>(n1)) ti = ts.back().matrix + rng.uniform(0.0, 0.3) * random_tridiagonal(rng, d);
      if (corrected && i >= n) ti = ts[n - 1].matrix;
      ts.emplace_back(ti);
      tildes.emplace_back(Matrix(v * ti * v.adjoint()));
      ks.emplace_back(i <= static_cast<std::size_t>(n1) ? Matrix(Matrix::Zero(d.dim(), d.dim()))
                                                        : Matrix(0.2 * rng.matrix(d.dim(), d.dim())));
    }
    auto r = neutral_L_check(LpOperator(v), d, n1, ts, tildes,
                             corrected ? std::optional<std::vector<LpOperator>>(ks) : std::nullopt, pp);
    CHECK(r.lower <= r.bound + 1e-9);
  }
}

TEST_CASE("neutral projection") {
  for (double pv : {1.5, 2.0, 4.0}) {
    PExponent p(pv);
    auto dec = BlockDecomposition::from_sizes({3});
    auto id = identity(IndexSet::interval(3));
    auto r = neutral_project_R(id, id, dec, 1, p);
    Rng rng(8);
    Vector y = rng.vector(6);
    Vector expect = std::pow(2.0, -(1.0 - 1.0 / pv)) * (y.head(3) + y.tail(3));
    CHECK(max_entry(r.matrix * y - expect) <= 1e-15);
    CHECK(op_norm_bounds(r, p).contains(1.0, 1e-9));
  }
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    auto dec = random_dec(rng, static_cast<std::size_t>(rng.integer(1, 5)), 4);
    PExponent p(rng.uniform(1.2, 5.0));
    Index n1 = rng.integer(1, 4);
    LpOperator v(random_monomial(rng, dec.dim()));
    LpOperator e(Matrix(v.matrix.adjoint()));
    auto l = neutral_embed_L(v, dec, n1, p);
    auto r = neutral_project_R(e, v, dec, n1, p);
    CHECK(max_entry(r.matrix * l.matrix - Matrix::Identity(dec.dim(), dec.dim())) <= 1e-12);
    CHECK(op_norm_bounds(r, p).contains(1.0, 1e-9));
    // the dual of the embedding is the projection at the conjugate exponent
    auto rq = neutral_project_R(e, v, dec, n1, p.dual());
    CHECK(max_entry(adjoint(l).matrix - rq.matrix) <= 1e-12);
  }
  auto dec = BlockDecomposition::from_sizes({2, 2});
  auto id = identity(IndexSet::interval(4));
  CHECK_THROWS_AS(neutral_project_R(LpOperator(Matrix(2.0 * Matrix::Identity(4, 4))),
                                    LpOperator(Matrix(0.5 * Matrix::Identity(4, 4))), dec, 1, PExponent(3.0)),
                  LabError);
  CHECK_THROWS_AS(neutral_project_R(id, LpOperator(Matrix(Matrix::Zero(4, 4))), dec, 1, PExponent(3.0)), LabError);
}

TEST_CASE("neutral projection defect bound") {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = static_cast<std::size_t>(rng.integer(2, 5));
    Index n1 = rng.integer(2, 3);
    auto d = random_dec(rng, n, 3);
    PExponent pp(rng.uniform(1.2, 5.0));
    Matrix v = random_monomial(rng, d.dim());
    Matrix e = v.adjoint();
    std::vector<LpOperator> ts, tildes, ks;
    Matrix base = random_tridiagonal(rng, d);
    for (std::size_t i = 0; i < n + static_cast<std::size_t>(n1); ++i) {
      Matrix ti = base;
      if (i > static_cast<std::size_t>(n1)) ti = ts.back().matrix + rng.uniform(0.0, 0.3) * random_tridiagonal(rng, d);
      if (i >= n) ti = ts[n - 1].matrix;
      ts.emplace_back(ti);
      tildes.emplace_back(Matrix(v * ti * e));
      ks.emplace_back(i <= static_cast<std::size_t>(n1) ? Matrix(Matrix::Zero(d.dim(), d.dim()))
                                                        : Matrix(0.2 * rng.matrix(d.dim(), d.dim())));
    }
    auto r = neutral_R_check(LpOperator(e), LpOperator(v), d, n1, ts, tildes,
                             trial % 2 ? std::optional<std::vector<LpOperator>>(ks) : std::nullopt, pp);
    CHECK(r.lower <= r.bound + 1e-9);
  }
}

namespace {

// straight from the piecewise definition, in doubles (all values are exact dyadics)
double t_oracle(const std::vector<long>& r, Index k, long x) {
  auto pow2 = [&](int j) {
    double start = static_cast<double>(r[(std::size_t{1} << (j + 1)) - 1]);
    double len = std::ldexp(1.0, j);
    return std::clamp((static_cast<double>(x) - start) / len, 0.0, 1.0);
  };
  int j = 0;
  while ((Index{1} << (j + 1)) <= k) ++j;
  double s = static_cast<double>(k - (Index{1} << j));
  double w = std::ldexp(1.0, j);
  return (1.0 - s / w) * pow2(j) + (s == 0.0 ? 0.0 : (s / w) * pow2(j + 1));
}

}  // namespace

TEST_CASE("staircase") {
  std::vector<long> lin;
  for (long k = 1; k <= 256; ++k) lin.push_back(k);
  auto s1 = staircase(lin, 1);
  CHECK(s1.value(1, 1) == 0.0);
  CHECK(s1.value(1, 2) == 0.0);
  CHECK(s1.value(1, 3) == 1.0);
  CHECK(s1.value(1, 4) == 1.0);
  CHECK(s1.value(1, 1000) == 1.0);

  CHECK_THROWS_AS(staircase(std::vector<long>(lin.begin(), lin.begin() + 100), 64), LabError);
  CHECK_THROWS_AS(staircase({1, 1, 2, 3}, 1), LabError);

  Rng rng(12);
  for (int t = 0; t < 3; ++t) {
    std::vector<long> sched;
    long cur = 0;
    for (int k = 0; k < 128; ++k) sched.push_back(cur += rng.integer(1, 40));
    auto s = staircase(sched, 64, 10000);
    CHECK(s.r_max >= 10000);
    auto c = check_staircase(s);
    CHECK(c.dyadic);
    CHECK(c.step_in_k);
    CHECK(c.step_in_r);
    CHECK(c.monotone);
    CHECK(c.zero_start);
    CHECK(c.reaches_one);
    for (Index k = 1; k <= 64; ++k) {
      CHECK(s.value(k, 1) == 0.0);
      for (long r = 1; r <= s.r_max; r += 7) REQUIRE(s.value(k, r) == t_oracle(sched, k, r));
    }
  }
}
