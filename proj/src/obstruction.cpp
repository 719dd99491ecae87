#include "lplab/obstruction.hpp"

#include "lplab/random.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lplab {

FixmanRatio fixman_ratio(const LaurentPolynomial& f, Index n, PExponent p, const NormEffort& effort) {
  FixmanRatio out;
  out.symbol_max = circulant_symbol_max(f, n).value;
  if (out.symbol_max == 0.0) throw LabError(ErrorKind::zero_vector, "symbol vanishes on the N-th roots of unity");
  NormBracket b = circulant_norm_bounds(f, n, p, effort);
  out.lower = b.lower;
  out.witness = b.witness;
  out.circle_sup = laurent_circle_sup(f).value;
  out.ratio = out.lower / out.symbol_max;
  out.circle_ratio = out.lower / out.circle_sup;
  return out;
}

namespace {

LaurentPolynomial random_candidate(Rng& rng, int k, bool unimodular, int lo_power) {
  std::map<int, Scalar> c;
  for (int j = lo_power; j <= k; ++j)
    c[j] = unimodular ? std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI)) : rng.complex_uniform();
  return LaurentPolynomial(c);
}

}  // namespace

FixmanResult fixman_search(PExponent p, int degree, Index n, int trials, std::uint64_t seed) {
  if (degree < 1) throw LabError(ErrorKind::invalid_argument, "degree must be positive");
  if (trials < 1) throw LabError(ErrorKind::invalid_argument, "need at least one trial");
  if (n < 4 * static_cast<Index>(degree))
    throw LabError(ErrorKind::invalid_argument, "circulant size must be at least 4 * degree");
  Rng rng(seed);
  NormEffort effort;
  effort.restarts = 1;
  effort.iterations = 40;
  FixmanResult out;
  for (int t = 0; t < trials; ++t) {
    int k = static_cast<int>(rng.integer(1, degree));
    LaurentPolynomial f;
    switch (t % 3) {
      case 0:
        f = random_candidate(rng, k, false, -k);
        break;
      case 1:
        f = random_candidate(rng, k, true, -k);
        break;
      default:
        if (out.best_trial >= 0 && 2 * out.best.degree() <= degree)
          f = out.best * out.best;
        else
          f = random_candidate(rng, k, true, 0);
    }
    effort.seed = seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(t + 1));
    FixmanRatio r = fixman_ratio(f, n, p, effort);
    if (out.best_trial < 0 || r.ratio > out.score.ratio) {
      out.best = f;
      out.score = r;
      out.best_trial = t;
    }
    out.history.push_back(out.score.ratio);
  }
  // the winner gets a converged evaluation; both are lower bounds, keep the larger
  NormEffort strong;
  strong.restarts = 32;
  strong.iterations = 2000;
  strong.gap = 1e-12;
  strong.seed = seed;
  strong.starts.push_back(out.score.witness);
  FixmanRatio fin = fixman_ratio(out.best, n, p, strong);
  if (fin.ratio > out.score.ratio) {
    out.score = fin;
    out.history.back() = fin.ratio;
  }
  return out;
}

DiagObstruction diag_obstruction_check(Index n, PExponent p, double beta, const Vector& d, const Matrix& l,
                                       std::uint64_t seed) {
  if (n < 1) throw LabError(ErrorKind::invalid_argument, "n must be positive");
  if (!(beta >= 1.0)) throw LabError(ErrorKind::invalid_argument, "beta must be at least 1");
  if (l.cols() != n || l.rows() != d.size()) throw LabError(ErrorKind::shape_mismatch, "L is M x n, D has M entries");
  const Index m = l.rows();
  const IndexSet hilbert = IndexSet::blocks({n}, 2.0);
  const IndexSet ambient = IndexSet::interval(m);
  DiagObstruction out;

  Rng rng(seed);
  double hi = 0.0, lo = INFINITY;
  auto probe = [&](const Vector& x) {
    double r = lp_norm(Vector(l * x), p) / x.norm();
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  };
  for (Index i = 0; i < n; ++i) probe(Vector::Unit(n, i));
  probe(Vector::Ones(n));
  for (int k = 0; k < 200; ++k) probe(rng.vector(n));
  out.probe_distortion = lo == 0.0 ? INFINITY : std::max(hi, 1.0 / lo);
  if (out.probe_distortion > beta * (1 + 1e-12)) {
    std::ostringstream os;
    os << "probe distortion " << out.probe_distortion << " exceeds beta = " << beta;
    throw LabError(ErrorKind::distortion, os.str());
  }
  Matrix pinv = l.completeOrthogonalDecomposition().pseudoInverse();
  out.certified_beta = op_norm_upper(LpOperator(l, hilbert, ambient), p) <= beta &&
                       op_norm_upper(LpOperator(pinv, ambient, hilbert), p) <= beta;

  Vector u(n);
  for (Index i = 0; i < n; ++i) u(i) = static_cast<double>(i + 1) / static_cast<double>(n);
  Matrix c = d.asDiagonal() * l - l * u.asDiagonal();
  out.eps = 1.0 / static_cast<double>(n);
  out.commutator = op_norm_upper(LpOperator(c, hilbert, ambient), p);
  const double nn = static_cast<double>(n);
  const double n_p = std::pow(nn, 1.0 / p.p());
  out.lhs1 = std::sqrt(nn) / beta;
  out.rhs1 = 2.0 / out.eps * out.commutator * nn + beta * n_p;
  out.lhs2 = n_p / beta;
  out.rhs2 = 4.0 / out.eps * out.commutator * nn + beta * std::sqrt(nn);
  return out;
}

LpOperator staircase_witness(Index r_max, PExponent p) {
  if (r_max < 1) throw LabError(ErrorKind::invalid_argument, "r_max must be positive");
  (void)p;
  std::vector<Index> sizes;
  Index total = 0;
  for (Index r = 1; r <= r_max; ++r) {
    sizes.push_back(r);
    total += r;
  }
  Vector diag(total);
  Index k = 0;
  for (Index r = 1; r <= r_max; ++r)
    for (Index i = 1; i <= r; ++i) diag(k++) = static_cast<double>(i) / static_cast<double>(r);
  IndexSet label = IndexSet::blocks(sizes, 2.0);
  return LpOperator(Matrix(diag.asDiagonal()), label, label);
}

double embedding_distortion(BlockEmbedding embedding, Index r, PExponent p) {
  const double pp = p.p();
  if (embedding == BlockEmbedding::identity) return std::pow(static_cast<double>(r), std::abs(0.5 - 1.0 / pp));
  if (r == 1 || p.is_two()) return 1.0;
  if (pp > 2.0) {
    // ||S||_p <= ||S||_{2m} and E|S|^{2m} <= (2m-1)!! ||x||^{2m}; the lower side is Jensen
    int m = static_cast<int>(std::ceil(pp / 2.0));
    double dfact = 1.0;
    for (int k = 2 * m - 1; k > 1; k -= 2) dfact *= k;
    return std::pow(dfact, 1.0 / (2.0 * m));
  }
  // log-convexity between p and 4 with E|S|^4 <= 3 ||x||^4; the upper side is Jensen
  const double theta = pp / (4.0 - pp);
  return std::pow(3.0, (1.0 - theta) / (4.0 * theta));
}

std::vector<WitnessRow> staircase_obstruction(Index r_max, PExponent p, BlockEmbedding embedding, int grid,
                                              std::uint64_t seed) {
  if (r_max < 1) throw LabError(ErrorKind::invalid_argument, "r_max must be positive");
  if (embedding == BlockEmbedding::rademacher && r_max > 10)
    throw LabError(ErrorKind::invalid_argument, "sign embedding needs r_max <= 10");
  if (grid < 1) throw LabError(ErrorKind::invalid_argument, "grid must be positive");
  Rng rng(seed);
  std::vector<WitnessRow> rows;
  for (Index r = 1; r <= r_max; ++r) {
    Matrix l;
    if (embedding == BlockEmbedding::identity) {
      l = Matrix::Identity(r, r);
    } else {
      const Index m = Index{1} << r;
      const double c = std::pow(static_cast<double>(m), -1.0 / p.p());
      l.resize(m, r);
      for (Index s = 0; s < m; ++s)
        for (Index i = 0; i < r; ++i) l(s, i) = ((s >> i) & 1) ? c : -c;
    }
    const Index m = l.rows();
    const IndexSet hilbert = IndexSet::blocks({r}, 2.0);
    const IndexSet ambient = IndexSet::interval(m);
    Matrix pinv = l.completeOrthogonalDecomposition().pseudoInverse();
    WitnessRow row;
    row.r = r;
    row.beta = std::min(embedding_distortion(embedding, r, p),
                        std::max({1.0, op_norm_upper(LpOperator(l, hilbert, ambient), p),
                                  op_norm_upper(LpOperator(pinv, ambient, hilbert), p)}));

    Vector u(r);
    for (Index i = 0; i < r; ++i) u(i) = static_cast<double>(i + 1) / static_cast<double>(r);
    std::vector<Vector> family;
    for (int g = 0; g <= grid; ++g) family.push_back(Vector::Constant(m, static_cast<double>(g) / grid));
    if (embedding == BlockEmbedding::identity) family.push_back(u);
    for (int k = 0; k < grid; ++k) {
      Vector v(m);
      for (Index s = 0; s < m; ++s) v(s) = static_cast<double>(rng.integer(0, grid)) / grid;
      family.push_back(v);
    }

    const double b = row.beta;
    for (Index n = 1; n <= r; ++n) {
      if (r % n) continue;
      const double nn = static_cast<double>(n);
      const double n_p = std::pow(nn, 1.0 / p.p());
      row.lower_bound = std::max({row.lower_bound, (std::sqrt(nn) / b - b * n_p) / (2.0 * nn * nn),
                                  (n_p / b - b * std::sqrt(nn)) / (4.0 * nn * nn)});
    }
    row.w_min = INFINITY;
    for (const auto& d : family) {
      Matrix c = d.asDiagonal() * l - l * u.asDiagonal();
      double w = op_norm_upper(LpOperator(c, hilbert, ambient), p);
      row.w_min = std::min(row.w_min, w);
      if (row.lower_bound > w + 1e-9) row.holds = false;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lplab
