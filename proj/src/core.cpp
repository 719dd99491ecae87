#include "lplab/core.hpp"

#include "lplab/random.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lplab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_exponent: return "invalid-exponent";
    case ErrorKind::shape_mismatch: return "shape-mismatch";
    case ErrorKind::zero_vector: return "zero-vector";
    case ErrorKind::missing_inverse: return "missing-inverse";
    case ErrorKind::on_curve: return "on-curve";
    case ErrorKind::empty_list: return "empty-list";
    case ErrorKind::window_too_small: return "window-too-small";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::range_violation: return "range-violation";
    case ErrorKind::not_tridiagonal: return "not-tridiagonal";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::exact_mode_size: return "exact-mode-size";
    case ErrorKind::continuity_budget: return "continuity-budget";
    case ErrorKind::spectral_gap: return "spectral-gap";
    case ErrorKind::feasibility: return "feasibility";
    case ErrorKind::non_isometry: return "non-isometry";
    case ErrorKind::non_partial_isometry: return "non-partial-isometry";
    case ErrorKind::schedule_too_short: return "schedule-too-short";
    case ErrorKind::distortion: return "distortion";
  }
  return "unknown";
}

LabError::LabError(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

PExponent::PExponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw LabError(ErrorKind::invalid_exponent, "p must satisfy 1 < p < inf");
  p_ = p;
  q_ = p / (p - 1.0);
}

PExponent PExponent::from_pair(double p, double q) {
  if (!std::isfinite(p) || !std::isfinite(q) || std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-14)
    throw LabError(ErrorKind::invalid_exponent, "1/p + 1/q != 1");
  return PExponent(p);
}

// ---------------------------------------------------------------- IndexSet

IndexSet IndexSet::interval(Index n) {
  IndexSet s;
  s.kind_ = Kind::interval;
  s.size_ = n;
  s.first_ = 1;
  return s;
}

IndexSet IndexSet::window(long first, Index n) {
  IndexSet s;
  s.kind_ = Kind::window;
  s.size_ = n;
  s.first_ = first;
  return s;
}

IndexSet IndexSet::cyclic(Index n) {
  IndexSet s;
  s.kind_ = Kind::cyclic;
  s.size_ = n;
  s.first_ = 0;
  return s;
}

IndexSet IndexSet::blocks(const std::vector<Index>& sizes, std::optional<double> inner) {
  std::vector<Block> b;
  Index off = 0;
  for (Index sz : sizes) {
    b.push_back({off, sz, inner});
    off += sz;
  }
  return blocks(std::move(b));
}

IndexSet IndexSet::blocks(std::vector<Block> list) {
  IndexSet s;
  s.kind_ = Kind::blocks;
  s.first_ = 1;
  Index off = 0;
  for (auto& b : list) {
    if (b.size <= 0 || b.offset != off)
      throw LabError(ErrorKind::invalid_argument, "blocks must be contiguous and non-empty");
    if (b.inner && !(*b.inner > 1.0 && std::isfinite(*b.inner)))
      throw LabError(ErrorKind::invalid_exponent, "inner exponent out of range");
    off += b.size;
  }
  s.size_ = off;
  s.blocks_ = std::move(list);
  return s;
}

bool IndexSet::mixed() const {
  return std::any_of(blocks_.begin(), blocks_.end(),
                     [](const Block& b) { return b.inner.has_value() && b.size > 1; });
}

IndexSet IndexSet::dual() const {
  IndexSet d = *this;
  for (auto& b : d.blocks_)
    if (b.inner) b.inner = *b.inner / (*b.inner - 1.0);
  return d;
}

IndexSet IndexSet::slice(Index offset, Index n) const {
  if (offset < 0 || n < 0 || offset + n > size_)
    throw LabError(ErrorKind::shape_mismatch, "slice out of range");
  if (kind_ != Kind::blocks) {
    IndexSet s = *this;
    s.size_ = n;
    if (kind_ == Kind::cyclic) s.kind_ = Kind::window;
    s.first_ = first_ + static_cast<long>(offset);
    return s;
  }
  std::vector<Block> out;
  Index end = offset + n;
  for (const auto& b : blocks_) {
    Index lo = std::max(b.offset, offset);
    Index hi = std::min(b.offset + b.size, end);
    if (lo >= hi) continue;
    if (b.inner && b.size > 1 && (lo != b.offset || hi != b.offset + b.size))
      throw LabError(ErrorKind::shape_mismatch, "slice cuts a mixed block");
    out.push_back({lo - offset, hi - lo, b.inner});
  }
  if (out.empty()) return interval(0);
  return blocks(std::move(out));
}

std::string IndexSet::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::interval: os << "[1," << size_ << "]"; break;
    case Kind::window: os << "Z[" << first_ << "," << first_ + static_cast<long>(size_) - 1 << "]"; break;
    case Kind::cyclic: os << "Z/" << size_ << "Z"; break;
    case Kind::blocks:
      os << "blocks(" << blocks_.size() << ")";
      if (!blocks_.empty() && blocks_.front().inner) os << "_l" << *blocks_.front().inner;
      break;
  }
  return os.str();
}

bool IndexSet::operator==(const IndexSet& o) const {
  if (kind_ != o.kind_ || size_ != o.size_ || first_ != o.first_ || blocks_.size() != o.blocks_.size())
    return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& a = blocks_[i];
    const auto& b = o.blocks_[i];
    if (a.offset != b.offset || a.size != b.size || a.inner != b.inner) return false;
  }
  return true;
}

LpVector::LpVector(Vector v) : entries(std::move(v)), label(IndexSet::interval(entries.size())) {}

LpVector::LpVector(Vector v, IndexSet l) : entries(std::move(v)), label(std::move(l)) {
  if (label.size() != entries.size())
    throw LabError(ErrorKind::shape_mismatch, "vector length does not match its index set");
}

LpOperator::LpOperator(Matrix m)
    : matrix(std::move(m)),
      domain(IndexSet::interval(matrix.cols())),
      codomain(IndexSet::interval(matrix.rows())) {}

LpOperator::LpOperator(Matrix m, IndexSet dom, IndexSet cod)
    : matrix(std::move(m)), domain(std::move(dom)), codomain(std::move(cod)) {
  if (domain.size() != matrix.cols() || codomain.size() != matrix.rows())
    throw LabError(ErrorKind::shape_mismatch, "matrix shape does not match domain/codomain");
}

double NormBracket::relative_gap() const {
  if (upper <= 0.0) return 0.0;
  return (upper - lower) / upper;
}

bool NormBracket::contains(double value, double tol) const {
  return lower - tol <= value && value <= upper + tol;
}

// ---------------------------------------------------------------- geometry

namespace {

struct Segment {
  Index offset;
  Index size;
  double r;
  bool plain;
};

struct Geometry {
  double p;
  bool plain;
  std::vector<Segment> segs;
};

Geometry make_geometry(const IndexSet& label, double p) {
  Geometry g{p, true, {}};
  if (!label.mixed()) return g;
  g.plain = false;
  for (const auto& b : label.block_list()) {
    bool plain = !b.inner || b.size == 1 || *b.inner == p;
    double r = plain ? p : *b.inner;
    if (plain && !g.segs.empty() && g.segs.back().plain &&
        g.segs.back().offset + g.segs.back().size == b.offset) {
      g.segs.back().size += b.size;
    } else {
      g.segs.push_back({b.offset, b.size, r, plain});
    }
  }
  if (std::all_of(g.segs.begin(), g.segs.end(), [](const Segment& s) { return s.plain; })) {
    g.plain = true;
    g.segs.clear();
  }
  return g;
}

Geometry dual_geometry(const Geometry& g) {
  Geometry d = g;
  d.p = g.p / (g.p - 1.0);
  for (auto& s : d.segs) s.r = s.r / (s.r - 1.0);
  return d;
}

template <class V>
double plain_norm(const V& x, double p) {
  double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0 || !std::isfinite(m)) return m;
  double s = (x.cwiseAbs() / m).array().pow(p).sum();
  return m * std::pow(s, 1.0 / p);
}

double geo_norm(const Vector& x, const Geometry& g) {
  if (x.size() == 0) return 0.0;
  if (g.plain) return plain_norm(x, g.p);
  // block norms and plain coordinates feed one scaled p-sum
  double total_max = 0.0;
  std::vector<double> terms;
  for (const auto& s : g.segs) {
    auto seg = x.segment(s.offset, s.size);
    if (s.plain) {
      for (Index i = 0; i < s.size; ++i) terms.push_back(std::abs(seg(i)));
    } else {
      terms.push_back(plain_norm(seg, s.r));
    }
  }
  for (double t : terms) total_max = std::max(total_max, t);
  if (total_max == 0.0) return 0.0;
  double sum = 0.0;
  for (double t : terms) sum += std::pow(t / total_max, g.p);
  return total_max * std::pow(sum, 1.0 / g.p);
}

// conj(sgn x)|x|^{r-1}
Vector signed_power(const Vector& x, double r) {
  Vector out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    double a = std::abs(x(i));
    out(i) = a == 0.0 ? Scalar(0.0) : std::conj(x(i) / a) * std::pow(a, r - 1.0);
  }
  return out;
}

Vector geo_duality(const Vector& x, const Geometry& g) {
  if (g.plain) return signed_power(x, g.p);
  Vector out(x.size());
  for (const auto& s : g.segs) {
    Vector seg = x.segment(s.offset, s.size);
    if (s.plain) {
      out.segment(s.offset, s.size) = signed_power(seg, g.p);
    } else {
      double nb = plain_norm(seg, s.r);
      if (nb == 0.0) {
        out.segment(s.offset, s.size).setZero();
      } else {
        out.segment(s.offset, s.size) = signed_power(seg, s.r) * std::pow(nb, g.p - s.r);
      }
    }
  }
  return out;
}

bool near_zero(const Vector& v) { return v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0; }

// ---------------------------------------------------------------- upper bounds

constexpr double kPad = 1e-13;

double sigma_max(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// Bound for ||M : l^r -> l^s|| with plain coordinates on both sides.
double sub_norm_bound(const Matrix& m, double r, double s) {
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  double rq = r / (r - 1.0);
  if (m.rows() == 1) return plain_norm(m.row(0).transpose().eval(), rq);
  if (m.cols() == 1) return plain_norm(m.col(0).eval(), s);
  double base;
  if (r == 2.0) {
    base = sigma_max(m);
  } else {
    base = interpolation_bound(m.cwiseAbs(), PExponent(r));
  }
  if (r == s) return base;
  double e = std::max(0.0, 1.0 / s - 1.0 / r);
  return base * std::pow(static_cast<double>(m.rows()), e);
}

struct Atom {
  Index offset;
  Index size;
  double r;
};

std::vector<Atom> atoms_of(const Geometry& g, Index n) {
  std::vector<Atom> out;
  if (g.plain) {
    for (Index i = 0; i < n; ++i) out.push_back({i, 1, g.p});
    return out;
  }
  for (const auto& s : g.segs) {
    if (s.plain) {
      for (Index i = 0; i < s.size; ++i) out.push_back({s.offset + i, 1, g.p});
    } else {
      out.push_back({s.offset, s.size, s.r});
    }
  }
  return out;
}

bool rows_single(const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    int c = 0;
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != Scalar(0.0) && ++c > 1) return false;
  }
  return true;
}

bool cols_single(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    int c = 0;
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != Scalar(0.0) && ++c > 1) return false;
  }
  return true;
}

struct UpperInfo {
  double value = 0.0;
  std::string tag;
  bool exact = false;
  Vector witness;
};

UpperInfo upper_info(const LpOperator& t, PExponent p) {
  const Matrix& m = t.matrix;
  UpperInfo info;
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) {
    info.value = 0.0;
    info.tag = "zero";
    info.exact = true;
    info.witness = Vector::Zero(m.cols());
    if (m.cols() > 0) info.witness(0) = 1.0;
    return info;
  }
  Geometry gd = make_geometry(t.domain, p.p());
  Geometry gc = make_geometry(t.codomain, p.p());
  if (gd.plain && gc.plain) {
    if (rows_single(m)) {
      // disjoint column supports: ||T|| = max_j ||T e_j||
      Index best = 0;
      double bv = -1.0;
      for (Index j = 0; j < m.cols(); ++j) {
        double v = plain_norm(m.col(j).eval(), p.p());
        if (v > bv) { bv = v; best = j; }
      }
      info.value = bv;
      info.tag = "exact:disjoint-columns";
      info.exact = true;
      info.witness = Vector::Zero(m.cols());
      info.witness(best) = 1.0;
      return info;
    }
    if (cols_single(m)) {
      Index best = 0;
      double bv = -1.0;
      for (Index i = 0; i < m.rows(); ++i) {
        double v = plain_norm(m.row(i).transpose().eval(), p.q());
        if (v > bv) { bv = v; best = i; }
      }
      info.value = bv;
      info.tag = "exact:disjoint-rows";
      info.exact = true;
      // x_j = conj(sgn r_j)|r_j|^{q-1} attains |r . x| = ||r||_q ||x||_p
      info.witness = signed_power(m.row(best).transpose().eval(), p.q());
      return info;
    }
  }
  // Block majorant with Riesz-Thorin.
  auto ad = atoms_of(gd, m.cols());
  auto ac = atoms_of(gc, m.rows());
  Eigen::MatrixXd maj(static_cast<Index>(ac.size()), static_cast<Index>(ad.size()));
  if (gd.plain && gc.plain) {
    maj = m.cwiseAbs();
  } else {
    for (std::size_t a = 0; a < ac.size(); ++a)
      for (std::size_t b = 0; b < ad.size(); ++b)
        maj(static_cast<Index>(a), static_cast<Index>(b)) =
            sub_norm_bound(m.block(ac[a].offset, ad[b].offset, ac[a].size, ad[b].size), ad[b].r,
                           ac[a].r);
  }
  info.value = interpolation_bound(maj, p) * (1.0 + kPad);
  info.tag = gd.plain && gc.plain ? "interpolation" : "block-majorant";
  if (p.is_two() && gd.plain && gc.plain) {
    double s = sigma_max(m) * (1.0 + kPad);
    if (s < info.value) {
      info.value = s;
      info.tag = "svd";
    }
  }
  return info;
}

}  // namespace

double interpolation_bound(const Eigen::MatrixXd& maj, PExponent p) {
  if (maj.size() == 0) return 0.0;
  double col = maj.colwise().sum().maxCoeff();
  double row = maj.rowwise().sum().maxCoeff();
  if (col == 0.0 || row == 0.0) return 0.0;
  return std::pow(col, 1.0 / p.p()) * std::pow(row, 1.0 / p.q());
}

double lp_norm(const Vector& x, PExponent p) { return plain_norm(x, p.p()); }

double lp_norm(const Vector& x, const IndexSet& label, PExponent p) {
  if (label.size() != x.size())
    throw LabError(ErrorKind::shape_mismatch, "vector length does not match its index set");
  return geo_norm(x, make_geometry(label, p.p()));
}

double lp_norm(const LpVector& x, PExponent p) { return lp_norm(x.entries, x.label, p); }

LpVector duality_map(const LpVector& x, PExponent p) {
  if (near_zero(x.entries)) throw LabError(ErrorKind::zero_vector, "duality map of the zero vector");
  Geometry g = make_geometry(x.label, p.p());
  return LpVector(geo_duality(x.entries, g), x.label.dual());
}

Scalar pairing(const LpVector& psi, const LpVector& x) {
  if (psi.size() != x.size()) throw LabError(ErrorKind::shape_mismatch, "pairing length mismatch");
  return (psi.entries.array() * x.entries.array()).sum();
}

LpOperator adjoint(const LpOperator& t) {
  return LpOperator(t.matrix.adjoint(), t.codomain.dual(), t.domain.dual());
}

LpOperator compose(const LpOperator& a, const LpOperator& b) {
  if (a.cols() != b.rows()) throw LabError(ErrorKind::shape_mismatch, "compose: inner sizes differ");
  return LpOperator(a.matrix * b.matrix, b.domain, a.codomain);
}

LpOperator identity(const IndexSet& label) {
  return LpOperator(Matrix::Identity(label.size(), label.size()), label, label);
}

double ratio(const LpOperator& t, const Vector& x, PExponent p) {
  double nx = lp_norm(x, t.domain, p);
  if (nx == 0.0) throw LabError(ErrorKind::zero_vector, "ratio at the zero vector");
  return lp_norm(Vector(t.matrix * x), t.codomain, p) / nx;
}

double op_norm_upper(const LpOperator& t, PExponent p) { return upper_info(t, p).value; }

NormBracket op_norm_bounds(const LpOperator& t, PExponent p, const NormEffort& effort) {
  NormBracket out;
  UpperInfo up = upper_info(t, p);
  out.upper = up.value;
  out.tags.push_back(up.tag);
  const Matrix& m = t.matrix;
  if (up.exact) {
    // closed form; the witness ratio agrees with it to rounding
    out.lower = up.value;
    out.witness = up.witness;
    return out;
  }

  Geometry gd = make_geometry(t.domain, p.p());
  Geometry gc = make_geometry(t.codomain, p.p());
  Geometry gdd = dual_geometry(gd);
  const Index n = m.cols();

  double best = 0.0;
  Vector best_x = Vector::Zero(n);

  auto consider = [&](const Vector& x) -> double {
    double nx = geo_norm(x, gd);
    if (nx == 0.0) return 0.0;
    double r = geo_norm(Vector(m * x), gc) / nx;
    if (r > best) {
      best = r;
      best_x = x / nx;
    }
    return r;
  };

  // basis vectors are cheap lower bounds
  Index bj = 0;
  double bcol = -1.0;
  for (Index j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n);
    e(j) = 1.0;
    double r = geo_norm(Vector(m.col(j)), gc) / geo_norm(e, gd);
    if (r > bcol) { bcol = r; bj = j; }
  }
  {
    Vector e = Vector::Zero(n);
    e(bj) = 1.0;
    consider(e);
  }

  std::vector<Vector> starts = effort.starts;
  starts.push_back(best_x);
  Rng rng(effort.seed);
  int total = static_cast<int>(effort.starts.size()) + std::max(1, effort.restarts);
  const Matrix mt = m.transpose();
  for (int s = 0; s < total; ++s) {
    if (out.upper > 0.0 && best >= out.upper * (1.0 - effort.gap)) break;
    Vector x = s < static_cast<int>(starts.size()) ? starts[static_cast<std::size_t>(s)] : rng.vector(n);
    if (x.size() != n || near_zero(x)) continue;
    double prev = consider(x);
    for (int it = 0; it < effort.iterations; ++it) {
      Vector y = m * x;
      if (near_zero(y)) break;
      Vector g = mt * geo_duality(y, gc);
      if (near_zero(g)) break;
      x = geo_duality(g, gdd);
      double nx = geo_norm(x, gd);
      if (nx == 0.0 || !std::isfinite(nx)) break;
      x /= nx;
      double r = consider(x);
      if (r - prev <= 1e-15 * std::max(r, 1e-300)) break;
      prev = r;
    }
  }
  out.lower = best;
  out.witness = best_x;
  out.tags.push_back("power-iteration");
  if (out.lower > out.upper) {
    out.upper = out.lower;
    out.tags.push_back("clamped");
  }
  out.budget_exhausted = out.relative_gap() > effort.gap;
  return out;
}

double block_majorant_upper(const LpOperator& t, PExponent p, const std::vector<Index>& breaks) {
  if (breaks.size() < 2 || breaks.front() != 0 || breaks.back() != t.cols() || t.rows() != t.cols())
    throw LabError(ErrorKind::shape_mismatch, "breakpoints must cover a square operator");
  const Index k = static_cast<Index>(breaks.size()) - 1;
  Eigen::MatrixXd maj = Eigen::MatrixXd::Zero(k, k);
  for (Index a = 0; a < k; ++a) {
    Index ra = breaks[static_cast<std::size_t>(a)];
    Index na = breaks[static_cast<std::size_t>(a) + 1] - ra;
    for (Index b = 0; b < k; ++b) {
      Index rb = breaks[static_cast<std::size_t>(b)];
      Index nb = breaks[static_cast<std::size_t>(b) + 1] - rb;
      Matrix sub = t.matrix.block(ra, rb, na, nb);
      if (sub.cwiseAbs().maxCoeff() == 0.0) continue;
      LpOperator op(sub, t.domain.slice(rb, nb), t.codomain.slice(ra, na));
      maj(a, b) = op_norm_upper(op, p);
    }
  }
  return interpolation_bound(maj, p) * (1.0 + kPad);
}

TailNorms tail_norms(const LpOperator& t, PExponent p, Index n) {
  if (n < 0) throw LabError(ErrorKind::invalid_argument, "negative tail index");
  LpOperator right = t;
  LpOperator left = t;
  Index c = std::min(n, t.cols());
  Index r = std::min(n, t.rows());
  right.matrix.leftCols(c).setZero();
  left.matrix.topRows(r).setZero();
  return {op_norm_upper(right, p), op_norm_upper(left, p)};
}

}  // namespace lplab
