#include "instances.hpp"
#include "lplab/averaging.hpp"
#include "lplab/geometry.hpp"
#include "lplab/lab.hpp"
#include "lplab/obstruction.hpp"
#include "lplab/splitting.hpp"
#include "lplab/unconditional.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace lplab::lab {

namespace {

struct Resolved {
  const Settings& s;
  Table& t;

  double p(double fallback) {
    double v = s.p.value_or(fallback);
    PExponent check(v);  // throws invalid_exponent
    t.params["p"] = v;
    return v;
  }
  Index dim(Index fallback, Index lo, Index hi) { return ranged("dim", s.dim.value_or(fallback), lo, hi); }
  Index r(Index fallback, Index lo, Index hi) { return ranged("r", s.r.value_or(fallback), lo, hi); }
  int trials(int fallback, int hi) { return static_cast<int>(ranged("trials", s.trials.value_or(fallback), 1, hi)); }
  std::uint64_t seed() {
    std::uint64_t v = s.seed.value_or(1);
    t.params["seed"] = v;
    return v;
  }
  std::vector<double> eps(std::vector<double> fallback) {
    auto v = s.eps.value_or(std::move(fallback));
    if (v.empty()) throw LabError(ErrorKind::invalid_argument, "--eps needs at least one value");
    for (double e : v)
      if (!(e > 0.0) || !std::isfinite(e)) throw LabError(ErrorKind::invalid_argument, "--eps values must be positive");
    t.params["eps"] = v;
    return v;
  }

  Index ranged(const char* key, Index v, Index lo, Index hi) {
    if (v < lo || v > hi) {
      std::ostringstream os;
      os << "--" << key << " must lie in [" << lo << ", " << hi << "], got " << v;
      throw LabError(ErrorKind::invalid_argument, os.str());
    }
    t.params[key] = v;
    return v;
  }
};

std::string fmt(double x) { return format_double(x); }

void violation(Table& t, const std::string& what) { t.violations.push_back(what); }

// ---------------------------------------------------------------------------

Table fixman(const Settings& s) {
  Table t;
  t.experiment = "fixman";
  Resolved in{s, t};
  PExponent p(in.p(4.0));
  Index dim = in.dim(64, 16, 512);
  int trials = in.trials(100, 5000);
  auto seed = in.seed();
  for (Index n : {dim / 4, dim / 2, dim}) {
    int degree = static_cast<int>(std::min<Index>(8, n / 4));
    auto r = fixman_search(p, degree, n, trials, seed);
    Json row;
    row["N"] = n;
    row["degree"] = degree;
    row["ratio"] = r.score.ratio;
    row["lower"] = r.score.lower;
    row["symbol_max"] = r.score.symbol_max;
    row["circle_ratio"] = r.score.circle_ratio;
    row["best_trial"] = r.best_trial;
    t.rows.push_back(row);
    if (r.score.ratio < 1.0 - s.tol.fixman) violation(t, "N=" + std::to_string(n) + ": ratio below 1");
    if (p.is_two() && std::abs(r.score.ratio - 1.0) > s.tol.fixman)
      violation(t, "N=" + std::to_string(n) + ": p = 2 ratio " + fmt(r.score.ratio) + " is not 1");
  }
  return t;
}

Table circular_approx(const Settings& s) {
  Table t;
  t.experiment = "circular-approx";
  Resolved in{s, t};
  PExponent p(in.p(3.0));
  Index dim = in.dim(256, 1, 4096);
  const Index n = 2;
  const long j = 1;
  t.params["n"] = n;
  t.params["j"] = j;
  double prev = INFINITY;
  for (Index k = 1; k <= dim; ++k) {
    double gap = folner_functional_gap(n, k, static_cast<long>(n) * j, p);
    double closed = std::pow(2.0 * static_cast<double>(std::min<Index>(j, k)) / static_cast<double>(k), 1.0 / p.q());
    Json row;
    row["k"] = k;
    row["gap"] = gap;
    row["closed_form"] = closed;
    row["error"] = std::abs(gap - closed);
    t.rows.push_back(row);
    if (std::abs(gap - closed) > s.tol.identity * std::max(1.0, closed))
      violation(t, "k=" + std::to_string(k) + ": gap " + fmt(gap) + " vs closed form " + fmt(closed));
    if (gap > prev + s.tol.identity) violation(t, "k=" + std::to_string(k) + ": gap increased");
    prev = gap;
  }
  return t;
}

Table khintchine(const Settings& s) {
  Table t;
  t.experiment = "khintchine";
  Resolved in{s, t};
  PExponent p(in.p(2.0));
  Index r = in.r(8, 1, static_cast<Index>(kExactSignLimit));
  int trials = in.trials(100, 100000);
  Rng rng(in.seed());
  for (int k = 0; k < trials; ++k) {
    std::vector<Scalar> v(static_cast<std::size_t>(r));
    for (auto& c : v) c = rng.complex_uniform();
    double ratio = khintchine_ratio(v, p);
    Json row;
    row["trial"] = k;
    row["ratio"] = ratio;
    t.rows.push_back(row);
    const std::string tag = "trial " + std::to_string(k) + ": ratio " + fmt(ratio);
    // E|S|^2 = sum |v_i|^2, so moments order the ratio around 1
    if (p.is_two() && std::abs(ratio - 1.0) > s.tol.identity) violation(t, tag + " is not 1");
    if (p.p() > 2.0 && ratio < 1.0 - s.tol.identity) violation(t, tag + " below 1");
    if (p.p() < 2.0 && ratio > 1.0 + s.tol.identity) violation(t, tag + " above 1");
  }
  return t;
}

Table quasicentral(const Settings& s) {
  Table t;
  t.experiment = "quasicentral";
  Resolved in{s, t};
  PExponent p(in.p(3.0));
  Index dim = in.dim(64, 4, 512);
  auto eps = in.eps({0.34, 0.26, 0.2});
  int trials = in.trials(20, 10000);
  Rng rng(in.seed());
  auto b = make_shift(ShiftKind::circular, dim);
  auto u = quasicentral_unit({b}, eps, p);
  for (std::size_t i = 0; i < u.stages.size(); ++i) {
    Json row;
    row["kind"] = "stage";
    row["stage"] = i + 1;
    row["start"] = u.starts[i];
    row["width"] = u.widths[i];
    row["eps"] = eps[i];
    row["defect"] = u.defects[i];
    t.rows.push_back(row);
    if (!(u.defects[i] < eps[i])) violation(t, "stage " + std::to_string(i + 1) + ": defect not below eps");
    if (i > 0 && !ll_less(u.stages[i - 1], u.stages[i])) violation(t, "stage " + std::to_string(i + 1) + ": not nested");
  }
  if (u.exhausted) {
    Json row;
    row["kind"] = "exhausted";
    row["stage"] = u.stages.size() + 1;
    row["defect"] = u.best_unmet_defect;
    t.rows.push_back(row);
  }
  for (int k = 0; k < trials; ++k) {
    auto r = pinch_check(u, LpVector(rng.vector(dim)), {}, p);
    Json row;
    row["kind"] = "pinch";
    row["trial"] = k;
    row["difference_ratio"] = r.difference_ratio;
    t.rows.push_back(row);
    if (r.difference_ratio > 2.0 + s.tol.slack) violation(t, "pinch trial " + std::to_string(k) + " exceeds 2");
  }
  return t;
}

Table tridiagonalize(const Settings& s) {
  Table t;
  t.experiment = "tridiagonalize";
  Resolved in{s, t};
  PExponent p(in.p(3.0));
  Index dim = in.dim(30, 2, 256);
  int trials = in.trials(10, 1000);
  Rng rng(in.seed());
  for (int k = 0; k < trials; ++k) {
    std::vector<LpOperator> fam;
    for (int m = 0; m < 3; ++m) {
      Matrix x = rng.matrix(dim, dim);
      for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) x(i, j) *= std::exp(-0.7 * std::abs(static_cast<double>(i - j)));
      fam.emplace_back(x);
    }
    auto q = quasitridiagonalize(fam, p);
    double worst = 0.0;
    for (std::size_t i = 0; i < q.defects.size(); ++i) {
      worst = std::max(worst, q.defects[i] / q.tolerances[i]);
      if (q.defects[i] > q.tolerances[i]) violation(t, "trial " + std::to_string(k) + ": stage " + std::to_string(i + 1) + " defect over schedule");
    }
    auto c = tridiag_compress(fam.front(), q.decomposition);
    auto nb = tridiag_norm_check(c, q.decomposition, p);
    Json row;
    row["trial"] = k;
    row["blocks"] = q.decomposition.count();
    row["worst_defect_ratio"] = worst;
    row["exhausted"] = q.exhausted;
    row["compressed_lower"] = nb.lower;
    row["compressed_bound"] = nb.bound;
    t.rows.push_back(row);
    if (nb.lower > nb.bound + s.tol.slack) violation(t, "trial " + std::to_string(k) + ": tridiagonal bound");
  }
  return t;
}

Table partition(const Settings& s) {
  Table t;
  t.experiment = "partition";
  Resolved in{s, t};
  Index d = in.dim(2, 1, 3);
  auto eps = in.eps({0.35});
  int trials = in.trials(5, 100);
  Rng rng(in.seed());
  const int samples = 10000;
  t.params["samples"] = samples;
  for (int k = 0; k < trials; ++k) {
    for (double e : eps) {
      std::vector<Point> pts;
      for (int i = 0; i < samples; ++i) {
        Point v(d);
        for (Index c = 0; c < d; ++c) v(c) = rng.uniform(0.0, 1.0);
        pts.push_back(v);
      }
      auto pu = partition_of_unity(pts, e);
      auto c = check_partition(pu, pts);
      Json row;
      row["cloud"] = k;
      row["eps"] = e;
      row["boxes"] = pu.size();
      row["max_multiplicity"] = c.max_multiplicity;
      row["diameter"] = pu.cover.diameter();
      row["sum_f_error"] = c.sum_f_error;
      row["sum_g_max"] = c.sum_g_max;
      row["plateau_violation"] = c.plateau_violation;
      t.rows.push_back(row);
      const std::string tag = "cloud " + std::to_string(k) + " eps " + fmt(e) + ": ";
      if (c.max_multiplicity > (1 << d)) violation(t, tag + "multiplicity above 2^d");
      if (pu.cover.diameter() > e) violation(t, tag + "box diameter above eps");
      if (c.sum_f_error > s.tol.identity) violation(t, tag + "sum f differs from 1");
      if (c.range_violation > 0.0) violation(t, tag + "values leave [0,1]");
      if (c.support_diameter > e) violation(t, tag + "support of g wider than eps");
      if (!c.every_g_nonzero) violation(t, tag + "some g vanishes on the sample");
      if (c.plateau_violation > 0.0) violation(t, tag + "g is not 1 on supp f");
    }
  }
  return t;
}

Table neutral_bounds(const Settings& s) {
  Table t;
  t.experiment = "neutral-bounds";
  Resolved in{s, t};
  PExponent p(in.p(3.0));
  int trials = in.trials(20, 1000);
  Rng rng(in.seed());
  for (int k = 0; k < trials; ++k) {
    auto dec = BlockDecomposition::from_sizes(random_sizes(rng, static_cast<std::size_t>(rng.integer(2, 5)), 3));
    Index n1 = rng.integer(2, 3);
    Matrix v = random_monomial(rng, dec.dim());
    bool corrected = k % 2 == 0;
    auto fam = random_neutral_family(rng, dec, n1, v, true);
    auto ks = corrected ? std::optional<std::vector<LpOperator>>(fam.ks) : std::nullopt;
    auto l = neutral_L_check(LpOperator(v), dec, n1, fam.ts, fam.tildes, ks, p);
    auto r = neutral_R_check(LpOperator(Matrix(v.adjoint())), LpOperator(v), dec, n1, fam.ts, fam.tildes, ks, p);
    for (const auto& [side, c] : {std::pair<const char*, NeutralCheck>{"L", l}, {"R", r}}) {
      Json row;
      row["trial"] = k;
      row["side"] = side;
      row["blocks"] = dec.count();
      row["n1"] = n1;
      row["corrected"] = corrected;
      row["lower"] = c.lower;
      row["upper"] = c.upper;
      row["bound"] = c.bound;
      t.rows.push_back(row);
      if (c.lower > c.bound + s.tol.slack) violation(t, "trial " + std::to_string(k) + " " + side + ": defect above bound");
    }
  }
  return t;
}

Table split_demo(const Settings& s) {
  Table t;
  t.experiment = "split-demo";
  Resolved in{s, t};
  PExponent p(in.p(3.0));
  Index dim = in.dim(8, 1, 64);
  int trials = in.trials(10, 1000);
  Rng rng(in.seed());
  for (int k = 0; k < trials; ++k) {
    Index n1 = rng.integer(1, dim);
    Index n2 = dim + rng.integer(0, dim);
    auto inst = random_split_instance(rng, n1, n2, 2e-4 / static_cast<double>(n2));
    double beta = std::max({1.0, op_norm_upper(LpOperator(inst.l), p), op_norm_upper(LpOperator(inst.r), p)}) * (1 + 1e-9);
    auto r = split_similarity(LpOperator(inst.l), LpOperator(inst.r), LpOperator(inst.t1), LpOperator(inst.t2), beta, p);
    Json row;
    row["trial"] = k;
    row["n1"] = n1;
    row["n2"] = n2;
    row["beta"] = beta;
    row["eps"] = r.eps;
    row["condition"] = r.condition;
    row["condition_bound"] = 7.0 * std::pow(beta, 6);
    row["similarity_defect"] = r.similarity_defect;
    row["inverse_defect"] = r.inverse_defect;
    row["k_lower"] = r.k_lower;
    row["k_bound"] = r.k_bound ? Json(*r.k_bound) : Json(nullptr);
    t.rows.push_back(row);
    const std::string tag = "trial " + std::to_string(k) + ": ";
    if (r.similarity_defect > s.tol.similarity) violation(t, tag + "similarity defect " + fmt(r.similarity_defect));
    if (r.inverse_defect > s.tol.similarity) violation(t, tag + "inverse defect " + fmt(r.inverse_defect));
    if (r.condition > 7.0 * std::pow(beta, 6) + s.tol.condition) violation(t, tag + "condition above 7 beta^6");
    if (r.k_bound && r.k_lower > *r.k_bound + s.tol.slack) violation(t, tag + "||K|| above its bound");
  }
  return t;
}

Table staircase_table(const Settings& s) {
  Table t;
  t.experiment = "staircase";
  Resolved in{s, t};
  Index k_max = in.dim(64, 1, 64);
  Index r_limit = in.r(10000, 1, 100000);
  Rng rng(in.seed());
  std::size_t need = std::size_t{2} << static_cast<int>(std::ceil(std::log2(static_cast<double>(k_max))));
  std::vector<long> sched;
  long cur = 0;
  for (std::size_t i = 0; i < need; ++i) sched.push_back(cur += static_cast<long>(rng.integer(1, 40)));
  auto st = staircase(sched, k_max, static_cast<long>(r_limit));
  auto c = check_staircase(st);
  t.params["denominator_exponent"] = st.denominator_exponent;
  for (Index k = 1; k <= k_max; ++k) {
    long first_positive = 0, first_one = 0;
    for (long r = 1; r <= st.r_max && !first_one; ++r) {
      double v = st.value(k, r);
      if (!first_positive && v > 0.0) first_positive = r;
      if (v == 1.0) first_one = r;
    }
    Json row;
    row["k"] = k;
    row["first_positive"] = first_positive;
    row["first_one"] = first_one;
    t.rows.push_back(row);
  }
  if (!c.dyadic) violation(t, "values are not dyadic");
  if (!c.step_in_k) violation(t, "step in k exceeds 2^-k");
  if (!c.step_in_r) violation(t, "step in r exceeds its bound");
  if (!c.monotone) violation(t, "not monotone");
  if (!c.zero_start) violation(t, "t_k(1) is not 0");
  if (!c.reaches_one) violation(t, "t_k does not reach 1");
  return t;
}

Table diag_obstruction(const Settings& s) {
  Table t;
  t.experiment = "diag-obstruction";
  Resolved in{s, t};
  PExponent p(in.p(4.0));
  Index r_max = in.r(10, 1, 64);
  int grid = in.trials(6, 64);
  auto seed = in.seed();
  auto embedding = r_max <= 10 ? BlockEmbedding::rademacher : BlockEmbedding::identity;
  t.params["embedding"] = embedding == BlockEmbedding::rademacher ? "rademacher" : "identity";
  for (const auto& w : staircase_obstruction(r_max, p, embedding, grid, seed)) {
    Json row;
    row["r"] = w.r;
    row["beta"] = w.beta;
    row["w_min"] = w.w_min;
    row["lower_bound"] = w.lower_bound;
    row["holds"] = w.holds;
    t.rows.push_back(row);
    if (!w.holds) violation(t, "r=" + std::to_string(w.r) + ": commutator below the implied lower bound");
  }
  return t;
}

using Runner = std::function<Table(const Settings&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r = {
      {"fixman", fixman},
      {"circular-approx", circular_approx},
      {"khintchine", khintchine},
      {"quasicentral", quasicentral},
      {"tridiagonalize", tridiagonalize},
      {"partition", partition},
      {"neutral-bounds", neutral_bounds},
      {"split-demo", split_demo},
      {"staircase", staircase_table},
      {"diag-obstruction", diag_obstruction},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [n, f] : registry()) out.push_back(n);
    return out;
  }();
  return names;
}

Table run_experiment(const std::string& name, const Settings& s) {
  for (const auto& [n, f] : registry())
    if (n == name) return f(s);
  throw LabError(ErrorKind::invalid_argument, "unknown experiment '" + name + "'");
}

}  // namespace lplab::lab
