#include "lplab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace lplab {

namespace {

long mod(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

LpOperator translation(const IndexSet& window, long s) {
  const Index n = window.size();
  Matrix m = Matrix::Zero(n, n);
  for (Index t = 0; t < n; ++t) {
    Index u = t + s;
    if (u >= 0 && u < n) m(u, t) = 1.0;
  }
  return LpOperator(m, window, window);
}

}  // namespace

IndexSet folner_window(Index n, Index k) {
  return IndexSet::window(-static_cast<long>(n * k), 3 * n * k);
}

FolnerIntertwiner folner_pair(Index n, Index k, const IndexSet& window, PExponent p) {
  if (n < 1 || k < 1) throw LabError(ErrorKind::invalid_argument, "modulus and length must be positive");
  const long nk = static_cast<long>(n * k);
  const long lo = window.first();
  const long hi = lo + static_cast<long>(window.size()) - 1;
  if (lo > -nk || hi < 2 * nk - 1) {
    std::ostringstream os;
    os << "window [" << lo << "," << hi << "] does not contain [" << -nk << "," << 2 * nk - 1 << "]";
    throw LabError(ErrorKind::window_too_small, os.str());
  }
  const Index w = window.size();
  Matrix v = Matrix::Zero(w, n);
  Matrix e = Matrix::Zero(n, w);
  const double cv = std::pow(static_cast<double>(k), -1.0 / p.p());
  const double ce = std::pow(static_cast<double>(k), -1.0 / p.q());
  for (Index g = 0; g < n; ++g) {
    for (Index m = 0; m < k; ++m) {
      Index row = g + n * m - lo;
      v(row, g) = cv;
      e(g, row) = ce;
    }
  }
  FolnerIntertwiner out;
  IndexSet quotient = IndexSet::cyclic(n);
  out.V = LpOperator(v, quotient, window);
  out.E = LpOperator(e, window, quotient);
  out.n = n;
  out.k = k;
  out.window = window;
  return out;
}

IntertwiningDefect folner_intertwining_defect(const FolnerIntertwiner& f, long s, PExponent p) {
  if (std::abs(s) > static_cast<long>(f.n * f.k))
    throw LabError(ErrorKind::window_too_small, "shift leaves the padding");
  IntertwiningDefect out;
  const long lo = f.window.first();
  const Index w = f.window.size();
  LpOperator rho = translation(f.window, s);
  const double cv = std::pow(static_cast<double>(f.k), -1.0 / p.p());
  for (Index g = 0; g < f.n; ++g) {
    Vector vg = Vector::Zero(w);
    Vector vgs = Vector::Zero(w);
    for (Index m = 0; m < f.k; ++m) {
      vg(g + f.n * m - lo) = cv;
      vgs(g + s + f.n * m - lo) = cv;
    }
    Vector d = rho.matrix * vg - vgs;
    out.translate = std::max(out.translate, d.cwiseAbs().maxCoeff());
  }
  Matrix rh = Matrix::Zero(f.n, f.n);
  for (Index g = 0; g < f.n; ++g) rh(mod(g + s, static_cast<long>(f.n)), g) = 1.0;
  LpOperator diff(rho.matrix * f.V.matrix - f.V.matrix * rh, f.V.domain, f.V.codomain);
  out.coset = op_norm_upper(diff, p);
  return out;
}

double folner_functional_gap(Index n, Index k, long m, PExponent p) {
  if (n < 1 || k < 1) throw LabError(ErrorKind::invalid_argument, "modulus and length must be positive");
  if (m % static_cast<long>(n) != 0) throw LabError(ErrorKind::precondition, "shift must lie in nZ");
  const double c = std::pow(static_cast<double>(k), -1.0 / p.q());
  std::map<long, double> diff;
  for (Index i = 0; i < k; ++i) {
    diff[static_cast<long>(n * i)] += c;
    diff[static_cast<long>(n * i) + m] -= c;
  }
  Vector v(static_cast<Index>(diff.size()));
  Index j = 0;
  for (const auto& [pos, val] : diff) v(j++) = val;
  return lp_norm(v, p.dual());
}

std::optional<std::size_t> MultiQuotient::separation_stage(long g1, long g2) const {
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    long n = static_cast<long>(moduli[i]);
    if (mod(g1, n) != mod(g2, n)) return i + 1;
  }
  return std::nullopt;
}

MultiQuotient multi_quotient_V(const std::vector<Index>& moduli, const IndexSet& window, PExponent p) {
  if (moduli.empty()) throw LabError(ErrorKind::empty_list, "no moduli");
  Index rows = 0;
  for (Index n : moduli) {
    if (n < 1) throw LabError(ErrorKind::invalid_argument, "moduli must be positive");
    rows += n;
  }
  const double c = std::pow(static_cast<double>(moduli.size()), -1.0 / p.p());
  Matrix v = Matrix::Zero(rows, window.size());
  for (Index col = 0; col < window.size(); ++col) {
    long g = window.first() + static_cast<long>(col);
    Index off = 0;
    for (Index n : moduli) {
      v(off + mod(g, static_cast<long>(n)), col) = c;
      off += n;
    }
  }
  MultiQuotient out;
  out.V = LpOperator(v, window, IndexSet::blocks(moduli));
  out.moduli = moduli;
  out.window = window;
  return out;
}

std::vector<Index> exhaustion_rank(const IndexSet& label) {
  const Index n = label.size();
  std::vector<Index> rank(static_cast<std::size_t>(n));
  switch (label.kind()) {
    case IndexSet::Kind::cyclic:
      for (Index c = 0; c < n; ++c) rank[static_cast<std::size_t>(c)] = std::min(c, n - c) + 1;
      break;
    case IndexSet::Kind::window: {
      long zero = -label.first();
      Index centre = (zero >= 0 && zero < n) ? zero : n / 2;
      for (Index c = 0; c < n; ++c) rank[static_cast<std::size_t>(c)] = std::abs(c - centre) + 1;
      break;
    }
    default:
      for (Index c = 0; c < n; ++c) rank[static_cast<std::size_t>(c)] = c + 1;
  }
  return rank;
}

ApproximateUnit quasicentral_unit(const std::vector<LpOperator>& family, const std::vector<double>& eps,
                                  PExponent p, const std::optional<std::vector<Index>>& support_floors) {
  if (family.empty()) throw LabError(ErrorKind::empty_list, "empty family");
  const Index n = family.front().rows();
  for (const auto& x : family)
    if (x.rows() != n || x.cols() != n) throw LabError(ErrorKind::shape_mismatch, "family members differ in size");
  for (double e : eps)
    if (!(e > 0.0)) throw LabError(ErrorKind::invalid_argument, "tolerances must be positive");
  const IndexSet label = family.front().domain;
  const auto rank = exhaustion_rank(label);
  const Index rmax = *std::max_element(rank.begin(), rank.end());

  auto weights = [&](Index a, Index w) {
    Vector v(n);
    for (Index c = 0; c < n; ++c) {
      double t = static_cast<double>(a + w - rank[static_cast<std::size_t>(c)]) / static_cast<double>(w);
      v(c) = std::clamp(t, 0.0, 1.0);
    }
    return v;
  };

  ApproximateUnit out;
  Index prev_end = 0;  // A_{i-1} is supported on rank <= prev_end
  for (std::size_t i = 0; i < eps.size(); ++i) {
    // A_i dominates P_i, so the stages exhaust the space
    Index a = std::max<Index>(prev_end, static_cast<Index>(i) + 1);
    // support floor: A_i == 1 on the first m_{i+1} coordinates
    if (support_floors && i + 1 < support_floors->size()) a = std::max(a, (*support_floors)[i + 1]);
    std::size_t members = std::min(i + 1, family.size());
    double best = INFINITY;
    bool met = false;
    for (Index w = 1; a + w - 1 <= rmax || w == 1; ++w) {
      Vector wt = weights(a, w);
      double worst = 0.0;
      for (std::size_t m = 0; m < members && worst < eps[i]; ++m) {
        const Matrix& x = family[m].matrix;
        Matrix c = wt.asDiagonal() * x - x * wt.asDiagonal();
        worst = std::max(worst, op_norm_upper(LpOperator(c, label, label), p));
      }
      best = std::min(best, worst);
      if (worst < eps[i]) {
        out.stages.emplace_back(wt, label);
        out.defects.push_back(worst);
        out.starts.push_back(a);
        out.widths.push_back(w);
        prev_end = a + w - 1;
        met = true;
        break;
      }
    }
    if (!met) {
      if (out.stages.empty()) {
        std::ostringstream os;
        os << "stage 1 cannot reach eps=" << eps[i] << " in dimension " << n << "; best defect " << best;
        throw LabError(ErrorKind::infeasible, os.str());
      }
      out.exhausted = true;
      out.best_unmet_defect = best;
      break;
    }
  }
  return out;
}

PinchResult pinch_check(const ApproximateUnit& unit, const LpVector& x, const std::vector<LpVector>& blocks,
                        PExponent p) {
  if (unit.stages.empty()) throw LabError(ErrorKind::empty_list, "unit has no stages");
  const Index n = unit.stages.front().size();
  if (x.size() != n) throw LabError(ErrorKind::shape_mismatch, "vector not on the unit's space");
  const double pp = p.p();
  PinchResult out;
  double nx = lp_norm(x.entries, p);
  if (nx == 0.0) throw LabError(ErrorKind::zero_vector, "pinch_check at the zero vector");
  Vector prev = Vector::Zero(n);
  double sum = 0.0;
  for (const auto& st : unit.stages) {
    Vector d = (st.weights - prev).cwiseProduct(x.entries);
    sum += std::pow(lp_norm(d, p) / nx, pp);
    prev = st.weights;
  }
  out.difference_ratio = sum;

  // A_k for k <= 0 is 0; past the last stage it is I.
  auto stage = [&](long k) -> Vector {
    if (k <= 0) return Vector::Zero(n);
    if (k > static_cast<long>(unit.stages.size())) return Vector::Ones(n);
    return unit.stages[static_cast<std::size_t>(k - 1)].weights;
  };
  Vector total = Vector::Zero(n);
  double denom = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& xb = blocks[i];
    if (xb.size() != n) throw LabError(ErrorKind::shape_mismatch, "block vector not on the unit's space");
    long k = static_cast<long>(i) + 1;
    Vector range = stage(k + 1) - stage(k - 2);
    for (Index c = 0; c < n; ++c) {
      if (xb.entries(c) != Scalar(0.0) && range(c) == Scalar(0.0)) {
        std::ostringstream os;
        os << "x_" << k << " has mass at coordinate " << c << " outside range(A_" << k + 1 << " - A_" << k - 2 << ")";
        throw LabError(ErrorKind::range_violation, os.str());
      }
    }
    total += xb.entries;
    denom += std::pow(lp_norm(xb.entries, p), pp);
  }
  out.block_ratio = denom == 0.0 ? 0.0 : std::pow(lp_norm(total, p), pp) / denom;
  return out;
}

NormBracket commutator_bounds(const DiagonalOperator& a, const LpOperator& b, PExponent p) {
  if (a.size() != b.rows() || b.rows() != b.cols())
    throw LabError(ErrorKind::shape_mismatch, "commutator sizes differ");
  Matrix c = a.weights.asDiagonal() * b.matrix - b.matrix * a.weights.asDiagonal();
  return op_norm_bounds(LpOperator(c, b.domain, b.codomain), p);
}

}  // namespace lplab
