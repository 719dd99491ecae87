#include "doctest.h"

#include "lplab/obstruction.hpp"
#include "lplab/random.hpp"

#include <cmath>
#include <numbers>

using namespace lplab;

namespace {

Matrix circulant_oracle(const LaurentPolynomial& f, Index n) {
  // (f(B) x)_t = sum_k c_k x_{t-k}
  Matrix m = Matrix::Zero(n, n);
  for (const auto& [k, c] : f.coefficients())
    for (Index t = 0; t < n; ++t) m(((t + k) % n + n) % n, t) += c;
  return m;
}

double lp(const Vector& x, double p) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)), p);
  return std::pow(s, 1.0 / p);
}

Vector dual_dir(const Vector& y, double p) {
  Vector z(y.size());
  for (Index i = 0; i < y.size(); ++i) {
    double a = std::abs(y(i));
    z(i) = a == 0.0 ? Scalar(0.0) : y(i) * std::pow(a, p - 2.0);
  }
  return z;
}

// Boyd's power method with random restarts
double power_oracle(const Matrix& m, double p, int restarts, std::uint64_t seed) {
  const double q = p / (p - 1.0);
  Rng rng(seed);
  double best = 0.0;
  for (int s = 0; s < restarts; ++s) {
    Vector x = rng.vector(m.cols());
    x /= lp(x, p);
    double prev = 0.0;
    for (int it = 0; it < 20000; ++it) {
      Vector y = m * x;
      double r = lp(y, p);
      best = std::max(best, r);
      if (r - prev < 1e-15 * r) break;
      prev = r;
      x = dual_dir(Vector(m.adjoint() * dual_dir(y, p)), q);
      x /= lp(x, p);
    }
  }
  return best;
}

double dense_sup(const LaurentPolynomial& f, int grid) {
  double s = 0.0;
  for (int k = 0; k < grid; ++k) s = std::max(s, std::abs(f(std::polar(1.0, 2.0 * std::numbers::pi * k / grid))));
  return s;
}

}  // namespace

TEST_CASE("fixman ratio basics") {
  for (double pv : {1.5, 3.0, 4.0}) {
    for (int k : {-3, 1, 5}) {
      auto r = fixman_ratio(LaurentPolynomial({{k, Scalar(0.0, 2.0)}}), 32, PExponent(pv));
      CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    std::map<int, Scalar> c;
    int d = static_cast<int>(rng.integer(1, 6));
    for (int k = -d; k <= d; ++k) c[k] = rng.complex_uniform();
    LaurentPolynomial f(c);
    PExponent p(t % 4 == 0 ? 2.0 : rng.uniform(1.2, 5.0));
    auto r = fixman_ratio(f, 32, p);
    CHECK(r.ratio >= 1.0 - 1e-9);
    if (p.is_two()) CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(fixman_search(PExponent(3.0), 8, 16, 10, 1), LabError);
}

TEST_CASE("fixman search at p = 2") {
  auto r = fixman_search(PExponent(2.0), 8, 64, 200, 5);
  CHECK(r.score.ratio == doctest::Approx(1.0).epsilon(1e-6));
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1]);
}

TEST_CASE("fixman regression at p = 4") {
  PExponent p(4.0);
  auto r = fixman_search(p, 16, 128, 500, 1);
  CHECK(r.score.ratio == doctest::Approx(1.3871451491531566).epsilon(1e-9));
  CHECK(r.score.ratio > 1.0);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1]);
  // independent evaluation of the winner
  Matrix m = circulant_oracle(r.best, 128);
  CHECK((m - circulant(r.best, 128).matrix).cwiseAbs().maxCoeff() <= 1e-12);
  double symbol = 0.0;
  for (Index j = 0; j < 128; ++j)
    symbol = std::max(symbol, std::abs(r.best(std::polar(1.0, 2.0 * std::numbers::pi * j / 128.0))));
  // the reported lower bound is attained by its witness
  const Vector& w = r.score.witness;
  CHECK(std::abs(lp(Vector(m * w), 4.0) / lp(w, 4.0) / symbol - r.score.ratio) <= 1e-9);
  // random restarts land on nearby local maxima only
  double oracle = power_oracle(m, 4.0, 32, 99) / symbol;
  CHECK(oracle > 1.0);
  CHECK(std::abs(oracle - r.score.ratio) <= 1e-2);
  CHECK(r.score.circle_sup == doctest::Approx(dense_sup(r.best, 1 << 16)).epsilon(1e-4));
  CHECK(r.score.circle_sup <= dense_sup(r.best, 1 << 16) + 1e-12);
}

TEST_CASE("diagonal obstruction inequalities") {
  for (double pv : {1.5, 2.0, 4.0}) {
    PExponent p(pv);
    for (Index n : {1, 4, 16}) {
      double beta = std::pow(static_cast<double>(n), std::abs(0.5 - 1.0 / pv));
      Vector u(n);
      for (Index i = 0; i < n; ++i) u(i) = static_cast<double>(i + 1) / static_cast<double>(n);
      auto r = diag_obstruction_check(n, p, beta, u, Matrix::Identity(n, n));
      CHECK(r.commutator == 0.0);
      CHECK(r.rhs1 == doctest::Approx(beta * std::pow(static_cast<double>(n), 1.0 / pv)));
      CHECK(r.rhs2 == doctest::Approx(beta * std::sqrt(static_cast<double>(n))));
      CHECK(r.holds1());
      CHECK(r.holds2());
      CHECK(r.eps == doctest::Approx(1.0 / static_cast<double>(n)));
    }
  }
  auto one = diag_obstruction_check(1, PExponent(3.0), 1.5, Vector::Ones(1), Matrix::Identity(1, 1));
  CHECK(one.lhs1 == doctest::Approx(1.0 / 1.5));
  CHECK(one.holds1());
  CHECK_THROWS_AS(diag_obstruction_check(32, PExponent(4.0), 1.0, Vector::Ones(32), Matrix::Identity(32, 32)),
                  LabError);

  Rng rng(14);
  const Index n = 32;
  PExponent p(4.0);
  for (int t = 0; t < 50; ++t) {
    Index m = n + rng.integer(0, 16);
    Matrix l = Matrix::Zero(m, n);
    l.topRows(n).setIdentity();
    l *= std::polar(1.0, rng.uniform(0.0, 6.0));
    Vector d(m);
    for (Index i = 0; i < m; ++i) d(i) = static_cast<double>(rng.integer(0, 64)) / 64.0;
    auto r = diag_obstruction_check(n, p, std::pow(32.0, 0.25), d, l, static_cast<std::uint64_t>(t));
    CHECK(r.holds1());
    CHECK(r.holds2());
  }
}

TEST_CASE("staircase witness") {
  PExponent p(3.0);
  auto one = staircase_witness(1, p);
  CHECK(one.rows() == 1);
  CHECK(one.matrix(0, 0) == Scalar(1.0));
  auto t = staircase_witness(12, p);
  CHECK(t.rows() == 78);
  CHECK(t.domain.mixed());
  Index off = 0;
  for (Index r = 1; r <= 12; ++r) {
    double gap = INFINITY;
    for (Index i = 0; i < r; ++i) {
      CHECK(std::round(t.matrix(off + i, off + i).real() * static_cast<double>(r)) == static_cast<double>(i + 1));
      for (Index j = 0; j < i; ++j)
        gap = std::min(gap, std::abs(t.matrix(off + i, off + i) - t.matrix(off + j, off + j)));
    }
    if (r > 1) CHECK(gap == doctest::Approx(1.0 / static_cast<double>(r)).epsilon(1e-14));
    off += r;
  }
  CHECK((t.matrix - Matrix(t.matrix.diagonal().asDiagonal())).isZero());
}

TEST_CASE("staircase obstruction experiment") {
  auto flat = staircase_obstruction(8, PExponent(2.0), BlockEmbedding::identity, 4, 1);
  for (const auto& row : flat) {
    CHECK(row.w_min == 0.0);
    CHECK(row.beta == 1.0);
    CHECK(row.holds);
  }
  auto sign = staircase_obstruction(10, PExponent(4.0), BlockEmbedding::rademacher, 6, 2);
  for (const auto& row : sign) {
    CHECK(row.holds);
    CHECK(row.w_min + 1e-9 >= row.lower_bound);
  }
  CHECK(sign.back().lower_bound > 0.0);

  // the closed-form distortion really bounds the sign embedding
  Rng rng(3);
  for (double pv : {1.3, 1.5, 3.0, 4.0, 5.0}) {
    for (Index r = 1; r <= 6; ++r) {
      double beta = embedding_distortion(BlockEmbedding::rademacher, r, PExponent(pv));
      for (int k = 0; k < 50; ++k) {
        Vector x = rng.vector(r);
        double s = 0.0;
        for (Index mask = 0; mask < (Index{1} << r); ++mask) {
          Scalar z = 0.0;
          for (Index i = 0; i < r; ++i) z += ((mask >> i) & 1) ? x(i) : -x(i);
          s += std::pow(std::abs(z), pv);
        }
        double ratio = std::pow(s / static_cast<double>(Index{1} << r), 1.0 / pv) / x.norm();
        CHECK(ratio <= beta * (1 + 1e-12));
        CHECK(ratio * beta >= 1.0 - 1e-12);
      }
    }
  }
}
