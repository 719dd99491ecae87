#include "doctest.h"

#include "lplab/core.hpp"
#include "lplab/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace lplab;

namespace {

double direct_norm(const Vector& x, double p) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)), p);
  return std::pow(s, 1.0 / p);
}

double sigma_oracle(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

TEST_CASE("exponent pairs") {
  PExponent p(3.0);
  CHECK(p.q() == doctest::Approx(1.5));
  CHECK(std::abs(1.0 / p.p() + 1.0 / p.q() - 1.0) <= 1e-14);
  CHECK(PExponent(2.0).q() == 2.0);
  CHECK_THROWS_AS(PExponent{INFINITY}, LabError);
  CHECK_THROWS_AS(PExponent{1.0}, LabError);
  CHECK_THROWS_AS(PExponent::from_pair(3.0, 2.0), LabError);
  CHECK(PExponent::from_pair(4.0, 4.0 / 3.0).p() == 4.0);
}

TEST_CASE("lp norms, flat and mixed") {
  Vector x(2);
  x << 3.0, 4.0;
  CHECK(lp_norm(x, PExponent(2.0)) == doctest::Approx(5.0).epsilon(1e-15));

  Vector y(3);
  y << 3.0, 4.0, 2.0;
  IndexSet mixed = IndexSet::blocks({2, 1}, 2.0);
  double expect = std::pow(std::pow(5.0, 4.0) + std::pow(2.0, 4.0), 0.25);
  CHECK(lp_norm(y, mixed, PExponent(4.0)) == doctest::Approx(expect).epsilon(1e-14));
  // inner exponent equal to the outer one is the flat norm
  IndexSet same = IndexSet::blocks({2, 1}, 3.0);
  CHECK(lp_norm(y, same, PExponent(3.0)) == doctest::Approx(direct_norm(y, 3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(lp_norm(y, IndexSet::interval(2), PExponent(2.0)), LabError);
}

TEST_CASE("duality map round trip") {
  Rng rng(11);
  for (double pv : {1.3, 2.0, 3.0, 5.5}) {
    PExponent p(pv);
    for (int t = 0; t < 20; ++t) {
      Index n = rng.integer(1, 12);
      LpVector x(rng.vector(n));
      LpVector psi = duality_map(x, p);
      double nx = lp_norm(x, p);
      CHECK(std::abs(pairing(psi, x) - std::pow(nx, pv)) <= 1e-10 * std::pow(nx, pv));
      CHECK(lp_norm(psi, p.dual()) == doctest::Approx(std::pow(nx, pv - 1.0)).epsilon(1e-12));
      LpVector back = duality_map(psi, p.dual());
      CHECK((back.entries - x.entries).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  // mixed blocks
  PExponent p(4.0);
  LpVector x(rng.vector(6), IndexSet::blocks({3, 1, 2}, 2.0));
  LpVector psi = duality_map(x, p);
  double nx = lp_norm(x, p);
  CHECK(std::abs(pairing(psi, x) - std::pow(nx, 4.0)) <= 1e-10 * std::pow(nx, 4.0));
  CHECK(lp_norm(psi, p.dual()) == doctest::Approx(std::pow(nx, 3.0)).epsilon(1e-12));
  LpVector back = duality_map(psi, p.dual());
  CHECK((back.entries - x.entries).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK_THROWS_AS(duality_map(LpVector(Vector::Zero(3)), p), LabError);
}

TEST_CASE("adjoint is an involution") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    LpOperator a(rng.matrix(rng.integer(1, 9), rng.integer(1, 9)));
    LpOperator b = adjoint(adjoint(a));
    CHECK(b.matrix == a.matrix);
    CHECK(b.domain == a.domain);
    // ||T*||_{q} and ||T||_{p} coincide, so the brackets intersect
    PExponent p(3.0);
    auto n1 = op_norm_bounds(a, p);
    auto n2 = op_norm_bounds(adjoint(a), p.dual());
    CHECK(n1.lower <= n2.upper * (1 + 1e-12));
    CHECK(n2.lower <= n1.upper * (1 + 1e-12));
  }
}

TEST_CASE("closed forms for monomial operators") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  d(2, 2) = 3.0;
  auto b = op_norm_bounds(LpOperator(d), PExponent(3.0));
  CHECK(b.lower == 3.0);
  CHECK(b.upper == 3.0);

  Matrix perm = Matrix::Zero(4, 4);
  perm(1, 0) = 2.0;
  perm(2, 1) = Scalar(0.0, 1.0);
  perm(3, 2) = 0.5;
  perm(0, 3) = 1.0;
  auto bp = op_norm_bounds(LpOperator(perm), PExponent(1.7));
  CHECK(bp.exact());
  CHECK(bp.upper == doctest::Approx(2.0));

  // one row: norm is the dual norm of the row
  Matrix row(1, 3);
  row << 1.0, 2.0, 2.0;
  auto br = op_norm_bounds(LpOperator(row), PExponent(2.0));
  CHECK(br.exact());
  CHECK(br.upper == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(ratio(LpOperator(row), br.witness, PExponent(2.0)) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("random operators: probes stay inside the bracket") {
  Rng rng(20240501);
  const double ps[] = {1.2, 1.5, 2.0, 3.0, 4.0, 7.0};
  for (int t = 0; t < 500; ++t) {
    Index rows = rng.integer(1, 64);
    Index cols = rng.integer(1, 64);
    if (t % 5 == 0) cols = rows = rng.integer(1, 16);
    PExponent p(ps[t % 6]);
    LpOperator a(rng.matrix(rows, cols));
    auto b = op_norm_bounds(a, p);
    REQUIRE(b.lower <= b.upper);
    CHECK(std::abs(ratio(a, b.witness, p) - b.lower) <= 1e-12 * std::max(1.0, b.lower));
    for (int k = 0; k < 100; ++k) {
      double r = ratio(a, rng.vector(cols), p);
      CHECK(r <= b.upper * (1 + 1e-12));
    }
    CHECK(b.budget_exhausted == (b.relative_gap() > 1e-6));
  }
}

TEST_CASE("p = 2 agrees with the singular value oracle") {
  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    Index n = rng.integer(1, 32);
    Index m = rng.integer(1, 32);
    LpOperator a(rng.matrix(n, m));
    auto b = op_norm_bounds(a, PExponent(2.0));
    double s = sigma_oracle(a.matrix);
    CHECK(b.contains(s, 1e-8));
    CHECK(b.upper - b.lower <= 1e-8 * s);
  }
}

TEST_CASE("mixed spaces") {
  Rng rng(3);
  PExponent p(4.0);
  IndexSet dom = IndexSet::blocks({2, 3, 1, 4}, 2.0);
  auto id = op_norm_bounds(identity(dom), p);
  CHECK(id.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id.upper == doctest::Approx(1.0).epsilon(1e-12));
  for (int t = 0; t < 30; ++t) {
    LpOperator a(rng.matrix(10, 10), dom, dom);
    auto b = op_norm_bounds(a, p);
    CHECK(b.lower <= b.upper);
    for (int k = 0; k < 100; ++k) CHECK(ratio(a, rng.vector(10), p) <= b.upper * (1 + 1e-12));
    // block majorant with coarser atoms is still an upper bound
    double bm = block_majorant_upper(a, p, {0, 5, 10});
    CHECK(b.lower <= bm * (1 + 1e-12));
  }
  CHECK_THROWS_AS(dom.slice(1, 3), LabError);
}

TEST_CASE("budget flag") {
  Rng rng(9);
  LpOperator a(rng.matrix(40, 40));
  NormEffort e;
  e.restarts = 1;
  e.iterations = 0;
  e.gap = 1e-12;
  auto b = op_norm_bounds(a, PExponent(3.0), e);
  CHECK(b.budget_exhausted);
  e.gap = 1e6;
  CHECK_FALSE(op_norm_bounds(a, PExponent(3.0), e).budget_exhausted);
}

TEST_CASE("tail norms") {
  Matrix d = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) d(i, i) = 1.0 / (i + 1);
  auto tn = tail_norms(LpOperator(d), PExponent(3.0), 2);
  CHECK(tn.right == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(tn.left == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  Rng rng(1);
  for (double pv : {1.5, 2.0, 4.0}) {
    LpOperator a(rng.matrix(24, 24));
    double prev_r = INFINITY, prev_l = INFINITY;
    for (Index n = 0; n <= 24; ++n) {
      auto t = tail_norms(a, PExponent(pv), n);
      CHECK(t.right <= prev_r);
      CHECK(t.left <= prev_l);
      prev_r = t.right;
      prev_l = t.left;
    }
    CHECK(prev_r == 0.0);
  }
}
