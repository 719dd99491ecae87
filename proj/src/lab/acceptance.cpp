#include "instances.hpp"
#include "lplab/averaging.hpp"
#include "lplab/geometry.hpp"
#include "lplab/lab.hpp"
#include "lplab/obstruction.hpp"
#include "lplab/splitting.hpp"
#include "lplab/unconditional.hpp"

#include <cmath>
#include <sstream>

namespace lplab::lab {

namespace {

double max_entry(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Running tally of one criterion: failures by sub-check plus a worst value each.
class Tally {
 public:
  void check(const std::string& what, bool ok, double value) {
    auto& e = find(what);
    ++e.count;
    if (!ok) ++e.failed;
    e.worst = std::max(e.worst, value);
  }
  bool passed() const {
    for (const auto& e : entries_)
      if (e.failed) return false;
    return !entries_.empty();
  }
  std::string detail() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (i) os << "; ";
      os << e.name << ": " << e.count - e.failed << "/" << e.count << " worst " << format_double(e.worst);
    }
    return os.str();
  }

 private:
  struct Entry {
    std::string name;
    int count = 0;
    int failed = 0;
    double worst = 0.0;
  };
  Entry& find(const std::string& name) {
    for (auto& e : entries_)
      if (e.name == name) return e;
    entries_.push_back({name});
    return entries_.back();
  }
  std::vector<Entry> entries_;
};

Rng stream(std::uint64_t seed, int id) { return Rng(seed * 1000003ULL + static_cast<std::uint64_t>(id)); }

std::vector<Point> cloud(Rng& rng, Index d, int count) {
  std::vector<Point> out;
  for (int k = 0; k < count; ++k) {
    Point v(d);
    for (Index i = 0; i < d; ++i) v(i) = rng.uniform(0.0, 1.0);
    out.push_back(v);
  }
  return out;
}

// slack scaled to the size of the right-hand side
bool within(double lhs, double rhs, double slack) { return lhs <= rhs + slack * std::max(1.0, std::abs(rhs)); }

Criterion exact_identities(std::uint64_t seed, const Tolerances& tol) {
  Rng rng = stream(seed, 1);
  Tally t;
  for (int k = 0; k < 50; ++k) {
    Index n = rng.integer(1, 8), len = rng.integer(1, 32);
    PExponent p(rng.uniform(1.1, 6.0));
    auto f = folner_pair(n, len, folner_window(n, len), p);
    double d = max_entry(f.E.matrix * f.V.matrix - Matrix::Identity(n, n));
    t.check("EV=I", d <= tol.identity, d);
  }
  for (int k = 0; k < 50; ++k) {
    auto dec = BlockDecomposition::from_sizes(random_sizes(rng, static_cast<std::size_t>(rng.integer(1, 5)), 4));
    PExponent p(rng.uniform(1.2, 5.0));
    Index n1 = rng.integer(1, 4);
    LpOperator v(random_monomial(rng, dec.dim()));
    auto l = neutral_embed_L(v, dec, n1, p);
    auto r = neutral_project_R(LpOperator(Matrix(v.matrix.adjoint())), v, dec, n1, p);
    double d = max_entry(r.matrix * l.matrix - Matrix::Identity(dec.dim(), dec.dim()));
    t.check("RL=I", d <= tol.identity, d);
  }
  for (int k = 0; k < 20; ++k) {
    int d = k % 2 + 1;
    Index n = rng.integer(8, 32);
    std::vector<DiagonalOperator> ds;
    for (int i = 0; i < d; ++i) {
      Vector w(n);
      for (Index c = 0; c < n; ++c) w(c) = rng.uniform(0.0, 1.0);
      ds.emplace_back(w);
    }
    auto h = GridFunction::sample(d, 16, [](const Point& v) { return Scalar(v(0), v.sum()); });
    auto pi = partition_intertwiner(ds, {h}, 0.3, PExponent(rng.uniform(1.2, 5.0)), 5,
                                    static_cast<std::uint64_t>(k + 1));
    double e = max_entry(pi.E().matrix * pi.W().matrix - Matrix::Identity(n, n));
    t.check("EW=I", e <= tol.identity, e);
  }
  for (Index d = 1; d <= 3; ++d) {
    auto sample = cloud(rng, d, 10000);
    auto pu = partition_of_unity(sample, 0.3 + 0.2 * static_cast<double>(d));
    double worst = 0.0;
    for (const auto& v : sample) {
      double sum = 0.0;
      for (const auto& [i, f] : pu.f(v)) sum += f;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    t.check("sum f=1", worst <= tol.identity, worst);
  }
  return {1, "exact identities", t.passed(), t.detail()};
}

Criterion inequality_suite(std::uint64_t seed, const Tolerances& tol) {
  Rng rng = stream(seed, 2);
  Tally t;
  const double slack = tol.slack;
  const double ps[] = {1.5, 2.0, 3.0, 4.0};

  auto b = make_shift(ShiftKind::unilateral, 60);
  for (int k = 0; k < 100; ++k) {
    PExponent p(ps[k % 4]);
    std::vector<double> eps;
    for (Index i = 0, m = rng.integer(2, 5); i < m; ++i) eps.push_back(rng.uniform(0.1, 0.6));
    auto u = quasicentral_unit({b}, eps, p);
    auto r = pinch_check(u, LpVector(rng.vector(60)), {}, p);
    t.check("pinch 2", r.difference_ratio <= 2.0 + slack, r.difference_ratio);
    auto stage = [&](long j) -> Vector {
      if (j <= 0) return Vector::Zero(60);
      if (j > static_cast<long>(u.stages.size())) return Vector::Ones(60);
      return u.stages[static_cast<std::size_t>(j - 1)].weights;
    };
    std::vector<LpVector> blocks;
    for (long j = 1; j <= static_cast<long>(u.stages.size()) + 2; ++j) {
      Vector range = stage(j + 1) - stage(j - 2);
      Vector y = rng.vector(60);
      for (Index c = 0; c < 60; ++c) {
        if (range(c) == Scalar(0.0)) y(c) = 0.0;
        else if (k % 3 == 0) y(c) = std::abs(y(c));  // aligned phases
      }
      blocks.emplace_back(y);
    }
    auto rb = pinch_check(u, LpVector(rng.vector(60)), blocks, p);
    double bound = std::pow(4.0, p.p());
    t.check("pinch 4^p", within(rb.block_ratio, bound, slack), rb.block_ratio / bound);
  }

  for (int k = 0; k < 100; ++k) {
    auto d = BlockDecomposition::from_sizes(random_sizes(rng, static_cast<std::size_t>(rng.integer(1, 7)), 4));
    LpOperator op(random_tridiagonal(rng, d));
    auto r = tridiag_norm_check(op, d, PExponent(rng.uniform(1.2, 6.0)));
    t.check("tridiagonal 3", within(r.lower, r.bound, slack), r.lower / std::max(r.bound, 1e-300));
  }

  for (int k = 0; k < 100; ++k) {
    std::size_t r = static_cast<std::size_t>(k % 3);
    auto sz = random_sizes(rng, 6, 3);
    auto d = BlockDecomposition::from_sizes(sz, k % 2 ? std::optional<double>(2.0) : std::nullopt);
    auto m = random_banded(rng, sz, r);
    auto s = phi_tail_sandwich(m, d, PExponent(ps[k % 4]), static_cast<std::size_t>(rng.integer(0, 5)));
    double bound = static_cast<double>(2 * r + 1) * s.s_upper;
    t.check("sandwich 2r+1", within(s.t_lower, bound, slack) && s.bound <= bound * (1 + 1e-15),
            bound > 0 ? s.t_lower / bound : 0.0);
  }

  for (int k = 0; k < 100; ++k) {
    PExponent p(rng.uniform(1.1, 6.0));
    std::vector<Scalar> cs(static_cast<std::size_t>(rng.integer(1, 8)));
    double cmax = 0.0;
    for (auto& c : cs) cmax = std::max(cmax, std::abs(c = rng.complex_uniform() * 2.0));
    auto r = u_scalar_bound_check(cs, 30, p, 3, static_cast<std::uint64_t>(k));
    t.check("scalar 2", r.ratio <= 2.0 * cmax + slack, r.ratio / cmax);
  }

  for (int k = 0; k < 100; ++k) {
    auto d = BlockDecomposition::from_sizes(random_sizes(rng, static_cast<std::size_t>(rng.integer(2, 6)), 3));
    std::vector<LpOperator> ts;
    LpOperator base(random_tridiagonal(rng, d));
    ts.push_back(base);
    ts.push_back(base);
    while (ts.size() < d.count() + 1)
      ts.emplace_back(ts.back().matrix + random_tridiagonal(rng, d) * rng.uniform(0.0, 0.5));
    auto f = flip_defect(ts, d, PExponent(rng.uniform(1.2, 5.0)));
    t.check("flip", within(f.lower, f.bound, slack), f.bound > 0 ? f.lower / f.bound : 0.0);
  }

  for (int k = 0; k < 100; ++k) {
    auto d = BlockDecomposition::from_sizes(random_sizes(rng, static_cast<std::size_t>(rng.integer(2, 5)), 3));
    PExponent p(rng.uniform(1.2, 5.0));
    Index n1 = rng.integer(2, 3);
    Matrix v = random_monomial(rng, d.dim());
    auto fam = random_neutral_family(rng, d, n1, v, true);
    auto ks = k % 2 ? std::optional<std::vector<LpOperator>>(fam.ks) : std::nullopt;
    auto l = neutral_L_check(LpOperator(v), d, n1, fam.ts, fam.tildes, ks, p);
    t.check("neutral L", within(l.lower, l.bound, slack), l.bound > 0 ? l.lower / l.bound : 0.0);
    auto r = neutral_R_check(LpOperator(Matrix(v.adjoint())), LpOperator(v), d, n1, fam.ts, fam.tildes, ks, p);
    t.check("neutral R", within(r.lower, r.bound, slack), r.bound > 0 ? r.lower / r.bound : 0.0);
  }

  {
    const Index n = 16;
    PExponent p(4.0);
    const double beta = std::pow(static_cast<double>(n), 0.25);
    for (int k = 0; k < 100; ++k) {
      Index m = n + rng.integer(0, 8);
      Matrix l = Matrix::Zero(m, n);
      l.topRows(n).setIdentity();
      l *= std::polar(1.0, rng.uniform(0.0, 6.0));
      Vector d(m);
      for (Index i = 0; i < m; ++i) d(i) = static_cast<double>(rng.integer(0, 32)) / 32.0;
      auto r = diag_obstruction_check(n, p, beta, d, l, static_cast<std::uint64_t>(k + 1));
      t.check("diagonal bound 1", within(r.lhs1, r.rhs1, slack), r.lhs1 / r.rhs1);
      t.check("diagonal bound 2", within(r.lhs2, r.rhs2, slack), r.lhs2 / r.rhs2);
    }
  }

  for (int k = 0; k < 100; ++k) {
    Index n = rng.integer(1, 24);
    Matrix e = perturbed_idempotent(rng, n, 2e-3);
    RieszOptions opt;
    opt.p = rng.uniform(1.2, 5.0);
    PExponent p(opt.p);
    opt.C = op_norm_upper(LpOperator(e), p) * (1 + 1e-9);
    double eta = op_norm_upper(LpOperator(Matrix(e * e - e)), p);
    Matrix q = riesz_idempotent(LpOperator(e), opt).matrix;
    double lhs = op_norm_bounds(LpOperator(Matrix(e - q)), p).lower;
    double bound = 16.0 * (0.5 + opt.C) * eta;
    t.check("idem", lhs <= bound + slack, bound > 0 ? lhs / bound : 0.0);
  }

  for (int k = 0; k < 100; ++k) {
    Index n1 = rng.integer(1, 8);
    Index n2 = n1 + rng.integer(0, 8);
    PExponent p(k % 5 == 0 ? 2.0 : rng.uniform(1.2, 5.0));
    auto inst = random_split_instance(rng, n1, n2, 2e-4 / static_cast<double>(n2));
    double beta = std::max({1.0, op_norm_upper(LpOperator(inst.l), p), op_norm_upper(LpOperator(inst.r), p)}) * (1 + 1e-9);
    auto s = split_similarity(LpOperator(inst.l), LpOperator(inst.r), LpOperator(inst.t1), LpOperator(inst.t2), beta, p);
    double bound = 7.0 * std::pow(beta, 6);
    t.check("condition 7 beta^6", s.condition <= bound + tol.condition, s.condition / bound);
  }
  return {2, "constant inequalities", t.passed(), t.detail()};
}

Criterion riesz(std::uint64_t seed, const Tolerances& tol) {
  Rng rng = stream(seed, 3);
  Tally t;
  for (int k = 0; k < 100; ++k) {
    Index n = rng.integer(1, 32);
    Matrix e = perturbed_idempotent(rng, n, 2e-3);
    RieszOptions opt;
    opt.p = rng.uniform(1.2, 5.0);
    PExponent p(opt.p);
    opt.C = op_norm_upper(LpOperator(e), p) * (1 + 1e-9);
    Matrix q = riesz_idempotent(LpOperator(e), opt).matrix;
    double d = op_norm_upper(LpOperator(Matrix(q * q - q)), p);
    t.check("Q^2=Q", d <= tol.idempotent, d);
  }
  return {3, "Riesz idempotent", t.passed(), t.detail()};
}

Criterion circulants(std::uint64_t seed, const Tolerances& tol) {
  Rng rng = stream(seed, 4);
  Tally t;
  for (int k = 0; k < 50; ++k) {
    auto f = random_laurent(rng, static_cast<int>(rng.integer(1, 8)));
    Index n = k % 2 ? 16 : 64;
    double smax = circulant_symbol_max(f, n).value;
    auto b2 = circulant_norm_bounds(f, n, PExponent(2.0));
    t.check("p=2 exact", b2.contains(smax, tol.spectral), std::max(std::abs(b2.lower - smax), std::abs(b2.upper - smax)));
    for (double pv : {1.5, 3.0, 4.0}) {
      auto b = circulant_norm_bounds(f, n, PExponent(pv));
      t.check("lower >= symbol", b.lower >= smax - tol.slack, std::max(0.0, smax - b.lower));
    }
  }
  return {4, "circulant exactness", t.passed(), t.detail()};
}

constexpr double kFixmanFrozen = 1.3871451491531566;

Criterion fixman(std::uint64_t seed, const Tolerances& tol) {
  Tally t;
  auto two = fixman_search(PExponent(2.0), 8, 64, 200, seed);
  double d2 = std::abs(two.score.ratio - 1.0);
  t.check("p=2 ratio 1", d2 <= tol.fixman, d2);
  // the frozen instance has its own seed
  auto four = fixman_search(PExponent(4.0), 16, 128, 500, 1);
  double d4 = std::abs(four.score.ratio - kFixmanFrozen);
  t.check("p=4 frozen", d4 <= tol.fixman, d4);
  t.check("p=4 exceeds 1", four.score.ratio > 1.0, four.score.ratio);
  return {5, "Fixman regression", t.passed(), t.detail()};
}

Criterion commutator(std::uint64_t seed, const Tolerances& tol) {
  Rng rng = stream(seed, 6);
  Tally t;
  for (int k = 0; k < 100; ++k) {
    Index n = rng.integer(2, 40);
    Vector a = rng.vector(n);
    if (k % 2) a = a.real().cast<Scalar>();
    auto b = make_shift(ShiftKind::circular, n);
    auto cb = commutator_bounds(DiagonalOperator(a, b.domain), b, PExponent(rng.uniform(1.1, 5.0)));
    double expect = 0.0;
    for (Index j = 0; j < n; ++j) expect = std::max(expect, std::abs(a((j + 1) % n) - a(j)));
    double d = std::max(std::abs(cb.lower - expect), std::abs(cb.upper - expect));
    t.check("||[A,B]||", d <= tol.commutator, d);
  }
  return {6, "commutator identity", t.passed(), t.detail()};
}

Criterion staircase_family(std::uint64_t seed, const Tolerances&) {
  Rng rng = stream(seed, 7);
  Tally t;
  for (int k = 0; k < 3; ++k) {
    std::vector<long> sched;
    long cur = 0;
    for (int i = 0; i < 128; ++i) sched.push_back(cur += static_cast<long>(rng.integer(1, 40)));
    auto s = staircase(sched, 64, 10000);
    auto c = check_staircase(s);
    t.check("dyadic", c.dyadic, 0.0);
    t.check("step in k", c.step_in_k, 0.0);
    t.check("step in r", c.step_in_r, 0.0);
    t.check("monotone", c.monotone, 0.0);
    t.check("zero start", c.zero_start, 0.0);
    t.check("reaches one", c.reaches_one, 0.0);
  }
  return {7, "staircase family", t.passed(), t.detail()};
}

Criterion box_covers(std::uint64_t seed, const Tolerances&) {
  Rng rng = stream(seed, 8);
  Tally t;
  for (Index d = 1; d <= 3; ++d) {
    for (int k = 0; k < 20; ++k) {
      auto pts = cloud(rng, d, 10000);
      double eps = rng.uniform(0.2, 0.9);
      auto c = box_cover(pts, eps);
      std::size_t worst = 0;
      bool covered = true;
      for (const auto& v : pts) {
        auto m = c.members(v);
        covered = covered && !m.empty();
        worst = std::max(worst, m.size());
      }
      const std::string dim = "d=" + std::to_string(d);
      t.check(dim + " multiplicity", covered && worst <= (std::size_t{1} << d), static_cast<double>(worst));
      t.check(dim + " diameter/eps", c.diameter() <= eps, c.diameter() / eps);
    }
  }
  return {8, "box covers", t.passed(), t.detail()};
}

Criterion split_reconstruction(std::uint64_t seed, const Tolerances& tol) {
  Rng rng = stream(seed, 9);
  Tally t;
  for (int k = 0; k < 100; ++k) {
    Index n1 = rng.integer(1, 10);
    Index n2 = n1 + rng.integer(0, 12);
    PExponent p(k % 5 == 0 ? 2.0 : rng.uniform(1.2, 5.0));
    auto inst = random_split_instance(rng, n1, n2, 2e-4 / static_cast<double>(n2));
    double beta = std::max({1.0, op_norm_upper(LpOperator(inst.l), p), op_norm_upper(LpOperator(inst.r), p)}) * (1 + 1e-9);
    auto s = split_similarity(LpOperator(inst.l), LpOperator(inst.r), LpOperator(inst.t1), LpOperator(inst.t2), beta, p);
    t.check("similarity", s.similarity_defect <= tol.similarity, s.similarity_defect);
    double bound = 7.0 * std::pow(beta, 6);
    t.check("condition", s.condition <= bound + tol.condition, s.condition / bound);
  }
  return {9, "split reconstruction", t.passed(), t.detail()};
}

}  // namespace

std::vector<Criterion> acceptance_criteria(std::uint64_t seed, const Tolerances& tol) {
  using Fn = Criterion (*)(std::uint64_t, const Tolerances&);
  const Fn fns[] = {exact_identities, inequality_suite, riesz, circulants, fixman,
                    commutator, staircase_family, box_covers, split_reconstruction};
  std::vector<Criterion> out;
  for (std::size_t i = 0; i < std::size(fns); ++i) {
    try {
      out.push_back(fns[i](seed, tol));
    } catch (const LabError& e) {
      out.push_back({static_cast<int>(i + 1), "error", false, std::string(to_string(e.kind())) + ": " + e.what()});
    }
  }
  return out;
}

Table selftest(std::uint64_t seed, const Tolerances& tol) {
  Table t;
  t.experiment = "selftest";
  t.params["seed"] = seed;
  for (const auto& c : acceptance_criteria(seed, tol)) {
    Json row;
    row["criterion"] = c.id;
    row["name"] = c.name;
    row["passed"] = c.passed;
    row["detail"] = c.detail;
    t.rows.push_back(row);
    if (!c.passed) t.violations.push_back("criterion " + std::to_string(c.id) + " (" + c.name + "): " + c.detail);
  }
  Settings s;
  s.seed = seed;
  s.tol = tol;
  for (const auto& name : experiment_names()) {
    auto e = run_experiment(name, s);
    Json row;
    row["experiment"] = name;
    row["rows"] = e.rows.size();
    row["passed"] = e.violations.empty();
    t.rows.push_back(row);
    for (const auto& v : e.violations) t.violations.push_back(name + ": " + v);
  }
  return t;
}

}  // namespace lplab::lab
