#include "doctest.h"

#include "lplab/geometry.hpp"
#include "lplab/random.hpp"
#include "lplab/unconditional.hpp"

#include <cmath>

using namespace lplab;

namespace {

Point pt(std::initializer_list<double> xs) {
  Point v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

std::vector<Point> random_points(Rng& rng, int d, int count) {
  std::vector<Point> out;
  for (int k = 0; k < count; ++k) {
    Point v(d);
    for (int i = 0; i < d; ++i) v(i) = rng.uniform(0.0, 1.0);
    out.push_back(v);
  }
  return out;
}

// membership by brute force over the whole grid
int count_boxes(const BoxCover& c, const Point& v) {
  int m = 0;
  for (const auto& b : c.boxes) {
    bool in = true;
    for (Index i = 0; i < v.size(); ++i)
      in = in && std::abs(v(i) - static_cast<double>(b[static_cast<std::size_t>(i)]) / static_cast<double>(c.n)) <
                     1.0 / static_cast<double>(c.n) * (1 + 1e-15);
    m += in;
  }
  return m;
}

}  // namespace

TEST_CASE("box cover examples") {
  auto c = box_cover({pt({0.0}), pt({0.5}), pt({1.0})}, 1.1);
  CHECK(c.n == 2);
  REQUIRE(c.size() == 3);
  CHECK(c.boxes[0][0] == 0);
  CHECK(c.boxes[1][0] == 1);
  CHECK(c.boxes[2][0] == 2);
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    auto m = c.members(pt({x}));
    CHECK(m.size() >= 1);
    CHECK(m.size() <= 2);
  }
  auto single = box_cover({pt({0.3, 0.7})}, 0.5);
  CHECK(single.members(pt({0.3, 0.7})).size() >= 1);
  CHECK(single.diameter() <= 0.5);

  Rng rng(1);
  auto pts = random_points(rng, 2, 100);
  auto c2 = box_cover(pts, 0.3);
  CHECK(c2.diameter() <= 0.3);
  for (const auto& v : pts) {
    int m = count_boxes(c2, v);
    CHECK(m >= 1);
    CHECK(m <= 4);
    CHECK(static_cast<int>(c2.members(v).size()) == m);
  }
}

TEST_CASE("multiplicity at most 2^d") {
  Rng rng(2);
  for (int d = 1; d <= 3; ++d) {
    auto pts = random_points(rng, d, 10000);
    for (double eps : {0.9, 0.35}) {
      auto c = box_cover(pts, eps);
      std::size_t worst = 0;
      for (const auto& v : pts) {
        auto m = c.members(v);
        CHECK_FALSE(m.empty());
        worst = std::max(worst, m.size());
      }
      CHECK(worst <= (std::size_t{1} << d));
      CHECK(c.diameter() <= eps);
    }
  }
}

TEST_CASE("partition of unity") {
  auto one = partition_of_unity({pt({0.5})}, 1.0);
  REQUIRE(one.size() == 1);
  CHECK(one.f(0, pt({0.5})) == 1.0);
  CHECK(one.g(0, pt({0.5})) == 1.0);

  // two overlapping boxes on the line
  std::vector<Point> ramp{pt({0.0}), pt({0.2}), pt({0.25}), pt({0.3}), pt({0.5})};
  auto two = partition_of_unity(ramp, 1.0);
  REQUIRE(two.size() == 2);
  CHECK(two.f(0, pt({0.25})) == doctest::Approx(0.5));
  double prev = 2.0;
  for (const auto& v : ramp) {
    double f0 = two.f(0, v), f1 = two.f(1, v);
    CHECK(f0 + f1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f0 <= prev);
    prev = f0;
  }

  Rng rng(3);
  for (int d = 1; d <= 3; ++d) {
    auto pts = random_points(rng, d, d == 2 ? 200 : 500);
    double eps = 0.4 + 0.2 * d;
    auto pu = partition_of_unity(pts, eps);
    auto chk = check_partition(pu, pts);
    CHECK(chk.range_violation <= 0.0);
    CHECK(chk.sum_f_error <= 1e-12);
    CHECK(chk.sum_g_max <= std::pow(2.0, d) + 1e-12);
    CHECK(chk.support_diameter <= eps);
    CHECK(chk.every_g_nonzero);
    CHECK(chk.plateau_violation == 0.0);
    CHECK(chk.max_multiplicity <= (1 << d));
    for (std::size_t i = 0; i < pu.size(); ++i) CHECK(pu.g(i, pu.anchors[i]) > 0.0);
  }
}

TEST_CASE("grid functions") {
  auto h = GridFunction::sample(2, 4, [](const Point& v) { return Scalar(v(0) + 2.0 * v(1), v(0) * v(1)); });
  // bilinear functions are reproduced exactly
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    Point v = pt({rng.uniform(0, 1), rng.uniform(0, 1)});
    Scalar expect(v(0) + 2.0 * v(1), v(0) * v(1));
    CHECK(std::abs(h(v) - expect) <= 1e-14);
  }
  CHECK(GridFunction::constant(3, 2.5)(pt({0.1, 0.2, 0.9})) == Scalar(2.5));
  CHECK_THROWS_AS(GridFunction(1, 3, {1.0, 2.0}), LabError);
}

TEST_CASE("partition intertwiner") {
  Rng rng(5);
  PExponent p(3.0);
  Vector w(32);
  for (Index k = 0; k < 32; ++k) w(k) = rng.uniform(0.0, 1.0);
  DiagonalOperator d(w);
  auto id = GridFunction::sample(1, 64, [](const Point& v) { return Scalar(v(0)); });
  auto c = GridFunction::constant(1, Scalar(0.7, 0.2));
  auto pi = partition_intertwiner({d}, {id, c}, 0.1, p);
  const auto& rep = pi.report;
  CHECK(rep.ew_defect <= 1e-12);
  Matrix ew = pi.E().matrix * pi.W().matrix;
  CHECK((ew - Matrix::Identity(32, 32)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(rep.w_defect[0].lower <= 0.1);
  CHECK(rep.w_defect[0].upper <= 0.1 + 1e-12);
  CHECK(rep.e_defect[0].lower <= 0.1);
  CHECK(rep.e_defect[0].upper <= 0.1 + 1e-12);
  // constant h: W psi(h) and eta(h) W agree exactly
  CHECK(rep.w_defect[1].upper == 0.0);
  CHECK(rep.e_defect[1].upper == 0.0);
  CHECK(rep.w_norm.lower <= rep.w_bound);
  CHECK(rep.w_norm.upper <= 1.0 + 1e-12);
  CHECK(rep.e_norm.lower <= rep.e_bound);
  CHECK(rep.e_norm.upper <= 2.0 + 1e-12);
  CHECK(pi.gamma <= 0.1);

  // W and E act as the dense matrices
  Vector x = rng.vector(32);
  auto wx = pi.apply_W(x);
  Vector dense = pi.W().matrix * x;
  for (std::size_t i = 0; i < pi.r(); ++i)
    CHECK((dense.segment(static_cast<Index>(i) * 32, 32) - wx[i]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((pi.apply_E(wx) - x).cwiseAbs().maxCoeff() <= 1e-12);

  // a jump cannot be resolved by any finite grid of boxes wider than the gap
  Vector close(2);
  close << 0.5, 0.5 + 1e-6;
  auto step = GridFunction::sample(1, 1 << 22, [](const Point& v) { return Scalar(v(0) > 0.5 ? 1.0 : 0.0); });
  CHECK_THROWS_AS(partition_intertwiner({DiagonalOperator(close)}, {step}, 0.1, p), LabError);
}

TEST_CASE("two-dimensional intertwiner") {
  Rng rng(6);
  PExponent p(2.5);
  Vector a(40), b(40);
  for (Index k = 0; k < 40; ++k) {
    a(k) = rng.uniform(0.0, 1.0);
    b(k) = rng.uniform(0.0, 1.0);
  }
  auto h = GridFunction::sample(2, 16, [](const Point& v) { return Scalar(std::cos(3 * v(0)), v(1) * v(1)); });
  auto pi = partition_intertwiner({DiagonalOperator(a), DiagonalOperator(b)}, {h}, 0.4, p, 30);
  CHECK(pi.report.ew_defect <= 1e-12);
  CHECK(pi.report.w_defect[0].upper <= 0.4 + 1e-12);
  CHECK(pi.report.e_defect[0].upper <= 0.4 + 1e-12);
  CHECK(pi.report.e_norm.upper <= 4.0 + 1e-12);
}

TEST_CASE("halving eps refines the cover") {
  // The measured defect itself is not monotone in eps: anchors and tents move
  // with the grid. Each run meets its own budget and the grid only refines.
  Rng rng(7);
  PExponent p(3.0);
  auto h = GridFunction::sample(1, 256, [](const Point& v) { return Scalar(std::sin(4 * v(0)), v(0)); });
  for (int t = 0; t < 10; ++t) {
    Vector w(30);
    for (Index k = 0; k < 30; ++k) w(k) = rng.uniform(0.0, 1.0);
    double eps = 0.4;
    auto coarse = partition_intertwiner({DiagonalOperator(w)}, {h}, eps, p, 10);
    auto fine = partition_intertwiner({DiagonalOperator(w)}, {h}, eps / 2, p, 10);
    CHECK(coarse.report.w_defect[0].upper <= eps + 1e-12);
    CHECK(fine.report.w_defect[0].upper <= eps / 2 + 1e-12);
    CHECK(fine.partition.cover.n >= coarse.partition.cover.n);
    CHECK(fine.gamma <= coarse.gamma);
  }
}
