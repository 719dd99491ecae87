#include "doctest.h"

#include "lplab/random.hpp"
#include "lplab/zoo.hpp"

#include <cmath>
#include <numbers>

using namespace lplab;

namespace {

LaurentPolynomial random_laurent(Rng& rng, int d) {
  std::map<int, Scalar> c;
  for (int k = -d; k <= d; ++k) c[k] = rng.complex_uniform();
  return LaurentPolynomial(c);
}

DiagonalOperator diag(std::initializer_list<double> w) {
  Vector v(static_cast<Index>(w.size()));
  Index i = 0;
  for (double x : w) v(i++) = x;
  return DiagonalOperator(v);
}

}  // namespace

TEST_CASE("shifts") {
  PExponent p(3.0);
  auto s = make_shift(ShiftKind::unilateral, 6);
  CHECK(op_norm_bounds(s, p).upper == 1.0);
  auto b = make_shift(ShiftKind::backward, 6);
  CHECK((b.matrix * s.matrix).topLeftCorner(5, 5).isIdentity());
  auto w = make_shift(ShiftKind::bilateral_window, 5);
  CHECK(w.domain.kind() == IndexSet::Kind::window);
  Matrix pw = Matrix::Identity(5, 5);
  for (int k = 0; k < 5; ++k) pw = w.matrix * pw;
  CHECK(pw.isZero());
  auto c = make_shift(ShiftKind::circular, 7);
  pw = Matrix::Identity(7, 7);
  for (int k = 0; k < 7; ++k) pw = c.matrix * pw;
  CHECK(pw.isIdentity());
}

TEST_CASE("ll_less") {
  CHECK(ll_less(diag({1, 0.5, 1.0 / 3, 0}), diag({1, 1, 1, 0.25})));
  CHECK_FALSE(ll_less(diag({1, 1, 1, 0.25}), diag({1, 0.5, 1.0 / 3, 0})));
  CHECK(ll_less(diag({0, 0, 0}), diag({0.3, 0.1, 0})));

  // transitivity on random chains of cut-offs
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const Index n = 12;
    auto make = [&](Index ones, Index tail) {
      Vector v = Vector::Zero(n);
      for (Index i = 0; i < std::min(ones, n); ++i) v(i) = 1.0;
      for (Index i = ones; i < std::min(ones + tail, n); ++i) v(i) = rng.uniform(0.01, 0.99);
      return DiagonalOperator(v);
    };
    std::vector<DiagonalOperator> chain;
    for (int k = 0; k < 3; ++k) chain.push_back(make(rng.integer(0, n), rng.integer(0, 4)));
    if (ll_less(chain[0], chain[1]) && ll_less(chain[1], chain[2])) CHECK(ll_less(chain[0], chain[2]));
  }
}

TEST_CASE("laurent apply and inverses") {
  auto c = make_shift(ShiftKind::circular, 5);
  LaurentPolynomial f({{1, 1.0}, {-1, 1.0}});
  CHECK_THROWS_AS(laurent_apply(f, c), LabError);
  LpOperator inv(c.matrix.transpose(), c.domain, c.codomain);
  auto ft = laurent_apply(f, c, inv);
  CHECK((ft.matrix - (c.matrix + c.matrix.transpose())).isZero());
  auto sq = (f * f).coefficients();
  CHECK(sq.at(0) == Scalar(2.0));
  CHECK(sq.at(2) == Scalar(1.0));
}

TEST_CASE("circle sup bound") {
  LaurentPolynomial f({{0, 1.0}, {1, 1.0}});
  auto s = laurent_circle_sup(f);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.upper >= 2.0);

  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    auto g = random_laurent(rng, static_cast<int>(rng.integer(1, 8)));
    auto cs = laurent_circle_sup(g, 256);
    double dense = 0.0;
    for (int k = 0; k < (1 << 16); ++k)
      dense = std::max(dense, std::abs(g(std::polar(1.0, 2 * std::numbers::pi * k / (1 << 16)))));
    CHECK(dense <= cs.upper);
    CHECK(cs.value <= dense + 1e-12);
  }
}

TEST_CASE("winding number and index") {
  LaurentPolynomial z({{1, 1.0}});
  CHECK(winding_number(z, 0.0) == 1);
  CHECK(fredholm_index(z, 0.0) == -1);
  CHECK(winding_number(LaurentPolynomial({{-2, 1.0}}), 0.0) == -2);
  CHECK(winding_number(z, 2.0) == 0);
  CHECK_THROWS_AS(winding_number(z, 1.0), LabError);

  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    auto g = random_laurent(rng, 3);
    Scalar lam = rng.complex_uniform();
    try {
      int w1 = winding_number(g, lam, 4096);
      int w2 = winding_number(g, lam, 16384);
      CHECK(w1 == w2);
    } catch (const LabError& e) {
      CHECK(e.kind() == ErrorKind::on_curve);
    }
  }
}

TEST_CASE("joint diagonal infimum against random unit vectors") {
  Rng rng(99);
  PExponent p(3.0);
  const Index n = 10;
  std::vector<DiagonalOperator> ds;
  std::vector<Scalar> lam;
  for (int i = 0; i < 3; ++i) {
    ds.emplace_back(rng.vector(n));
    lam.push_back(rng.complex_uniform());
  }
  double inf = joint_diag_infimum(ds, lam, p);
  double brute = INFINITY;
  for (int t = 0; t < 10000; ++t) {
    Vector x = rng.vector(n);
    x /= lp_norm(x, p);
    double s = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      Vector y = (ds[i].weights.array() - lam[i]).matrix().cwiseProduct(x);
      s += std::pow(lp_norm(y, p), 3.0);
    }
    brute = std::min(brute, s);
    CHECK(s >= inf - 1e-12);
  }
  // basis vectors attain it
  double basis = INFINITY;
  for (Index c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) s += std::pow(std::abs(ds[i].weights(c) - lam[i]), 3.0);
    basis = std::min(basis, s);
  }
  CHECK(basis == doctest::Approx(inf).epsilon(1e-14));
  CHECK(brute >= inf);
  CHECK_THROWS_AS(joint_diag_infimum({}, {}, p), LabError);
}

TEST_CASE("explicit T0") {
  std::vector<Index> bp{0, 1, 3, 5, 6, 8};
  for (double pv : {1.5, 2.0, 3.0, 6.0}) {
    PExponent p(pv);
    auto t0 = explicit_T0(bp, p);
    for (Index j = 0; j < t0.cols(); ++j) {
      double colsum = t0.matrix.col(j).cwiseAbs().sum();
      CHECK(colsum == (j + 1 < t0.cols() ? 1.0 : 0.0));
    }
    auto b = op_norm_bounds(t0, p);
    CHECK(b.upper <= std::pow(2.0, std::abs(0.5 - 1.0 / pv) + 1.0));
    CHECK(b.lower >= 1.0 - 1e-12);
  }
}

TEST_CASE("circulants: exact at p = 2, Fourier witness for all p") {
  Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    auto f = random_laurent(rng, static_cast<int>(rng.integer(1, 8)));
    Index n = t % 2 ? 16 : 64;
    double smax = circulant_symbol_max(f, n).value;
    auto b2 = circulant_norm_bounds(f, n, PExponent(2.0));
    CHECK(b2.contains(smax, 1e-8));
    for (double pv : {1.5, 3.0, 4.0}) {
      auto b = circulant_norm_bounds(f, n, PExponent(pv));
      CHECK(b.lower >= smax - 1e-9);
    }
  }
}

TEST_CASE("T0 sandwich") {
  // block sizes grow so the tail is block-tridiagonal for the symbol
  std::vector<Index> bp{0};
  for (Index s : {1, 1, 2, 3, 4, 5, 6, 7, 8}) bp.push_back(bp.back() + s);
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    auto f = random_laurent(rng, 3);
    for (double pv : {1.5, 3.0}) {
      auto r = t0_laurent_sandwich(f, bp, PExponent(pv), 4);
      CHECK(r.banded);
      CHECK(r.tail_upper <= r.bound);
    }
  }
}

TEST_CASE("circulant matches the functional calculus of B_N") {
  Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    Index n = rng.integer(1, 20);
    std::map<int, Scalar> c;
    int lo = static_cast<int>(rng.integer(-25, 3));
    int hi = static_cast<int>(rng.integer(lo, 25));
    for (int k = lo; k <= hi; ++k) c[k] = rng.complex_uniform();
    LaurentPolynomial f(c);
    auto b = make_shift(ShiftKind::circular, n);
    LpOperator inv(b.matrix.transpose(), b.domain, b.codomain);
    CHECK(circulant(f, n).matrix == laurent_apply(f, b, inv).matrix);
  }
}
