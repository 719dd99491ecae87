#include "lplab/geometry.hpp"

#include "lplab/random.hpp"
#include "lplab/unconditional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lplab {

namespace {

constexpr double kTent = 0.6;

// Grid indices j with |v n - j| < 1, one list per axis.
std::vector<std::vector<long>> axis_candidates(const Point& v, Index n) {
  std::vector<std::vector<long>> out(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) {
    double t = v(i) * static_cast<double>(n);
    long f = static_cast<long>(std::floor(t));
    for (long j = f - 1; j <= f + 1; ++j)
      if (std::abs(t - static_cast<double>(j)) < 1.0) out[static_cast<std::size_t>(i)].push_back(j);
  }
  return out;
}

template <typename F>
void for_each_product(const std::vector<std::vector<long>>& axes, F&& visit) {
  std::vector<long> idx(axes.size());
  std::vector<std::size_t> pos(axes.size(), 0);
  for (const auto& a : axes)
    if (a.empty()) return;
  while (true) {
    for (std::size_t i = 0; i < axes.size(); ++i) idx[i] = axes[i][pos[i]];
    visit(idx);
    std::size_t i = 0;
    while (i < axes.size() && ++pos[i] == axes[i].size()) pos[i++] = 0;
    if (i == axes.size()) return;
  }
}

void check_points(const std::vector<Point>& points) {
  if (points.empty()) throw LabError(ErrorKind::empty_list, "no points");
  const Index d = points.front().size();
  if (d < 1) throw LabError(ErrorKind::invalid_argument, "points need at least one coordinate");
  for (const auto& v : points) {
    if (v.size() != d) throw LabError(ErrorKind::shape_mismatch, "points differ in dimension");
    for (Index i = 0; i < d; ++i)
      if (!(v(i) >= 0.0 && v(i) <= 1.0)) throw LabError(ErrorKind::invalid_argument, "points must lie in [0,1]^d");
  }
}

double offset(const std::vector<long>& box, Index n, const Point& v, Index i) {
  return std::abs(v(i) * static_cast<double>(n) - static_cast<double>(box[static_cast<std::size_t>(i)]));
}

double tent(const std::vector<long>& box, Index n, const Point& v) {
  double t = 1.0;
  for (Index i = 0; i < v.size(); ++i) t *= std::max(0.0, 1.0 - offset(box, n, v, i) / kTent);
  return t;
}

double plateau(const std::vector<long>& box, Index n, const Point& v) {
  double t = 1.0;
  for (Index i = 0; i < v.size(); ++i) t *= std::clamp((1.0 - offset(box, n, v, i)) / (1.0 - kTent), 0.0, 1.0);
  return t;
}

}  // namespace

bool BoxCover::contains(std::size_t box, const Point& v) const {
  for (Index i = 0; i < v.size(); ++i)
    if (!(offset(boxes[box], n, v, i) < 1.0)) return false;
  return true;
}

std::vector<std::size_t> BoxCover::members(const Point& v) const {
  std::vector<std::size_t> out;
  for_each_product(axis_candidates(v, n), [&](const std::vector<long>& idx) {
    auto it = lookup.find(idx);
    if (it != lookup.end()) out.push_back(it->second);
  });
  std::sort(out.begin(), out.end());
  return out;
}

double BoxCover::diameter() const { return 2.0 * std::sqrt(static_cast<double>(d)) / static_cast<double>(n); }

Point BoxCover::centre(std::size_t box) const {
  Point c(d);
  for (int i = 0; i < d; ++i) c(i) = static_cast<double>(boxes[box][static_cast<std::size_t>(i)]) / static_cast<double>(n);
  return c;
}

BoxCover box_cover_n(const std::vector<Point>& points, Index n) {
  check_points(points);
  if (n < 1) throw LabError(ErrorKind::invalid_argument, "grid parameter must be positive");
  BoxCover out;
  out.d = static_cast<int>(points.front().size());
  out.n = n;
  out.eps = out.diameter();
  for (const auto& v : points)
    for_each_product(axis_candidates(v, n), [&](const std::vector<long>& idx) {
      if (!out.lookup.count(idx)) out.lookup.emplace(idx, 0);
    });
  // boxes in lexicographic order of their grid index
  for (auto& [idx, pos] : out.lookup) {
    pos = out.boxes.size();
    out.boxes.push_back(idx);
  }
  return out;
}

BoxCover box_cover(const std::vector<Point>& points, double eps) {
  if (!(eps > 0.0)) throw LabError(ErrorKind::invalid_argument, "eps must be positive");
  check_points(points);
  const double d = static_cast<double>(points.front().size());
  auto c = box_cover_n(points, static_cast<Index>(std::ceil(2.0 * std::sqrt(d) / eps)));
  c.eps = eps;
  return c;
}

std::vector<std::pair<std::size_t, double>> PartitionOfUnity::f(const Point& v) const {
  std::vector<std::pair<std::size_t, double>> out;
  double total = 0.0;
  for (std::size_t i : cover.members(v)) {
    double t = tent(cover.boxes[i], cover.n, v);
    if (t > 0.0) {
      out.emplace_back(i, t);
      total += t;
    }
  }
  for (auto& [i, t] : out) t /= total;
  return out;
}

std::vector<std::pair<std::size_t, double>> PartitionOfUnity::g(const Point& v) const {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i : cover.members(v)) {
    double t = plateau(cover.boxes[i], cover.n, v);
    if (t > 0.0) out.emplace_back(i, t);
  }
  return out;
}

double PartitionOfUnity::f(std::size_t i, const Point& v) const {
  for (const auto& [j, t] : f(v))
    if (j == i) return t;
  return 0.0;
}

double PartitionOfUnity::g(std::size_t i, const Point& v) const {
  return cover.contains(i, v) ? plateau(cover.boxes[i], cover.n, v) : 0.0;
}

PartitionOfUnity partition_from_cover(const std::vector<Point>& points, BoxCover cover) {
  PartitionOfUnity out;
  out.cover = std::move(cover);
  const std::size_t r = out.cover.size();
  std::vector<double> best(r, INFINITY);
  out.anchors.assign(r, Point());
  for (const auto& v : points)
    for (std::size_t i : out.cover.members(v)) {
      double dist = 0.0;
      for (Index a = 0; a < v.size(); ++a) dist = std::max(dist, offset(out.cover.boxes[i], out.cover.n, v, a));
      if (dist < best[i]) {
        best[i] = dist;
        out.anchors[i] = v;
      }
    }
  for (std::size_t i = 0; i < r; ++i)
    if (out.anchors[i].size() == 0) throw LabError(ErrorKind::precondition, "retained box holds no sample point");
  return out;
}

PartitionOfUnity partition_of_unity(const std::vector<Point>& points, double eps) {
  return partition_from_cover(points, box_cover(points, eps));
}

PartitionCheck check_partition(const PartitionOfUnity& pu, const std::vector<Point>& sample) {
  PartitionCheck out;
  const std::size_t r = pu.size();
  const int d = pu.cover.d;
  std::vector<Point> lo(r, Point::Constant(d, INFINITY)), hi(r, Point::Constant(d, -INFINITY));
  std::vector<bool> seen(r, false);
  for (const auto& v : sample) {
    auto fs = pu.f(v);
    auto gs = pu.g(v);
    out.max_multiplicity = std::max(out.max_multiplicity, static_cast<int>(pu.cover.members(v).size()));
    double sf = 0.0, sg = 0.0;
    for (const auto& [i, t] : fs) {
      sf += t;
      out.range_violation = std::max({out.range_violation, -t, t - 1.0});
      out.plateau_violation = std::max(out.plateau_violation, std::abs(pu.g(i, v) - 1.0));
    }
    for (const auto& [i, t] : gs) {
      sg += t;
      out.range_violation = std::max({out.range_violation, -t, t - 1.0});
      seen[i] = true;
      lo[i] = lo[i].cwiseMin(v);
      hi[i] = hi[i].cwiseMax(v);
    }
    out.sum_f_error = std::max(out.sum_f_error, std::abs(sf - 1.0));
    out.sum_g_max = std::max(out.sum_g_max, sg);
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (!seen[i]) {
      out.every_g_nonzero = false;
      continue;
    }
    // bounding-box diagonal, never below the true diameter
    out.support_diameter = std::max(out.support_diameter, (hi[i] - lo[i]).norm());
  }
  return out;
}

GridFunction::GridFunction(int d, Index g, std::vector<Scalar> values) : d_(d), g_(g), values_(std::move(values)) {
  if (d < 1 || g < 1) throw LabError(ErrorKind::invalid_argument, "grid needs d >= 1 and at least one cell");
  std::size_t expect = 1;
  for (int i = 0; i < d; ++i) expect *= static_cast<std::size_t>(g + 1);
  if (values_.size() != expect) throw LabError(ErrorKind::shape_mismatch, "grid values have the wrong count");
}

GridFunction GridFunction::sample(int d, Index g, const std::function<Scalar(const Point&)>& h) {
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(g + 1);
  std::vector<Scalar> vals(total);
  Point v(d);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rest = k;
    for (int i = 0; i < d; ++i) {
      v(i) = static_cast<double>(rest % static_cast<std::size_t>(g + 1)) / static_cast<double>(g);
      rest /= static_cast<std::size_t>(g + 1);
    }
    vals[k] = h(v);
  }
  return GridFunction(d, g, std::move(vals));
}

GridFunction GridFunction::constant(int d, Scalar c) {
  return sample(d, 1, [c](const Point&) { return c; });
}

Scalar GridFunction::operator()(const Point& v) const {
  if (v.size() != d_) throw LabError(ErrorKind::shape_mismatch, "grid function evaluated off its dimension");
  std::vector<Index> base(static_cast<std::size_t>(d_));
  std::vector<double> frac(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) {
    double t = std::clamp(v(i), 0.0, 1.0) * static_cast<double>(g_);
    Index b = std::min<Index>(static_cast<Index>(std::floor(t)), g_ - 1);
    base[static_cast<std::size_t>(i)] = b;
    frac[static_cast<std::size_t>(i)] = t - static_cast<double>(b);
  }
  // gather the 2^d corner values, then fold one axis at a time with a + t(b - a)
  std::vector<Scalar> corner(std::size_t{1} << d_);
  for (std::size_t c = 0; c < corner.size(); ++c) {
    std::size_t idx = 0, stride = 1;
    for (int i = 0; i < d_; ++i) {
      idx += static_cast<std::size_t>(base[static_cast<std::size_t>(i)] + ((c >> i) & 1)) * stride;
      stride *= static_cast<std::size_t>(g_ + 1);
    }
    corner[c] = values_[idx];
  }
  for (int i = 0; i < d_; ++i) {
    double t = frac[static_cast<std::size_t>(i)];
    std::size_t half = corner.size() >> 1;
    std::vector<Scalar> next(half);
    for (std::size_t c = 0; c < half; ++c) next[c] = corner[2 * c] + t * (corner[2 * c + 1] - corner[2 * c]);
    corner.swap(next);
  }
  return corner[0];
}

std::vector<Vector> PartitionIntertwiner::apply_W(const Vector& x) const {
  if (x.size() != size()) throw LabError(ErrorKind::shape_mismatch, "W applied to a vector of the wrong size");
  std::vector<Vector> out;
  out.reserve(r());
  for (const auto& f : f_diag) out.push_back(f.cwiseProduct(x));
  return out;
}

Vector PartitionIntertwiner::apply_E(const std::vector<Vector>& ys) const {
  if (ys.size() != r()) throw LabError(ErrorKind::shape_mismatch, "E needs one component per box");
  Vector out = Vector::Zero(size());
  for (std::size_t i = 0; i < r(); ++i) out += g_diag[i].cwiseProduct(ys[i]);
  return out;
}

LpOperator PartitionIntertwiner::W() const {
  const Index n = size();
  Matrix m = Matrix::Zero(static_cast<Index>(r()) * n, n);
  for (std::size_t i = 0; i < r(); ++i) m.block(static_cast<Index>(i) * n, 0, n, n) = f_diag[i].asDiagonal();
  return LpOperator(m, IndexSet::interval(n), IndexSet::blocks(std::vector<Index>(r(), n)));
}

LpOperator PartitionIntertwiner::E() const {
  const Index n = size();
  Matrix m = Matrix::Zero(n, static_cast<Index>(r()) * n);
  for (std::size_t i = 0; i < r(); ++i) m.block(0, static_cast<Index>(i) * n, n, n) = g_diag[i].asDiagonal();
  return LpOperator(m, IndexSet::blocks(std::vector<Index>(r(), n)), IndexSet::interval(n));
}

namespace {

// Coordinates k where some of the given components are nonzero, with those entries.
std::vector<std::vector<std::pair<std::size_t, Scalar>>> active_entries(const std::vector<Vector>& comps, Index n) {
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> out(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (Index k = 0; k < n; ++k)
      if (comps[i](k) != Scalar(0.0)) out[static_cast<std::size_t>(k)].emplace_back(i, comps[i](k));
  return out;
}

std::vector<Scalar> values_of(const std::vector<std::pair<std::size_t, Scalar>>& e) {
  std::vector<Scalar> z;
  for (const auto& [i, v] : e) z.push_back(v);
  return z;
}

// x -> (a_i . x)_i into the u-sum. Vertices e_k give E|Z_k| exactly; Jensen caps
// every x by max_k (E|Z_k|^p)^{1/p}.
NormBracket diagonal_into_u(const std::vector<Vector>& a, Index n, PExponent p, Rng& rng, int probes) {
  NormBracket out;
  for (const auto& e : active_entries(a, n)) {
    if (e.empty()) continue;
    auto m = sign_moments(values_of(e), p);
    out.lower = std::max(out.lower, m.mean);
    out.upper = std::max(out.upper, m.moment);
  }
  for (int t = 0; t < probes; ++t) {
    Vector x = rng.vector(n);
    std::vector<Vector> img;
    for (const auto& ai : a) img.push_back(ai.cwiseProduct(x));
    out.lower = std::max(out.lower, u_norm_bracket(SignedSumElement(img), p).lower / lp_norm(x, p));
  }
  out.upper = std::max(out.upper, out.lower);
  return out;
}

// y -> sum_i b_i . y_i out of the u-sum. The upper value is the sign supremum
// of the coefficient sums; probes divide by the upper u-norm bracket.
NormBracket diagonal_out_of_u(const std::vector<Vector>& b, Index n, PExponent p, Rng& rng, int probes,
                              const std::vector<Vector>& support) {
  NormBracket out;
  const std::size_t r = b.size();
  auto probe = [&](const std::vector<Vector>& ys) {
    Vector img = Vector::Zero(n);
    for (std::size_t i = 0; i < r; ++i) img += b[i].cwiseProduct(ys[i]);
    double u = u_norm_bracket(SignedSumElement(ys), p).upper;
    if (u > 0.0) out.lower = std::max(out.lower, lp_norm(img, p) / u);
  };
  auto act = active_entries(b, n);
  for (Index k = 0; k < n; ++k) {
    const auto& e = act[static_cast<std::size_t>(k)];
    if (e.empty()) continue;
    double s = 0.0;
    for (const auto& [i, v] : e) s += std::abs(v);
    out.upper = std::max(out.upper, s);
    // y_i = conj phase of b_i(k) at coordinate k
    std::vector<Vector> ys(r, Vector::Zero(n));
    for (const auto& [i, v] : e) ys[i](k) = std::conj(v) / std::abs(v);
    probe(ys);
  }
  for (int t = 0; t < probes; ++t) {
    std::vector<Vector> ys(r);
    for (std::size_t i = 0; i < r; ++i) {
      ys[i] = Vector::Zero(n);
      for (Index k = 0; k < n; ++k)
        if (support[i](k) != Scalar(0.0)) ys[i](k) = rng.complex_uniform();
    }
    probe(ys);
  }
  out.upper = std::max(out.upper, out.lower);
  return out;
}

}  // namespace

PartitionIntertwiner partition_intertwiner(const std::vector<DiagonalOperator>& ds,
                                           const std::vector<GridFunction>& omega, double eps, PExponent p,
                                           int probes, std::uint64_t seed) {
  if (ds.empty()) throw LabError(ErrorKind::empty_list, "no diagonals");
  if (!(eps > 0.0)) throw LabError(ErrorKind::invalid_argument, "eps must be positive");
  const int d = static_cast<int>(ds.size());
  const Index n = ds.front().size();
  if (n < 1) throw LabError(ErrorKind::invalid_argument, "empty diagonal");
  PartitionIntertwiner out;
  out.spectrum.assign(static_cast<std::size_t>(n), Point(d));
  for (int a = 0; a < d; ++a) {
    if (ds[static_cast<std::size_t>(a)].size() != n) throw LabError(ErrorKind::shape_mismatch, "diagonals differ in size");
    for (Index k = 0; k < n; ++k) {
      Scalar w = ds[static_cast<std::size_t>(a)].weights(k);
      if (w.imag() != 0.0) throw LabError(ErrorKind::invalid_argument, "diagonal weights must be real");
      out.spectrum[static_cast<std::size_t>(k)](a) = w.real();
    }
  }
  for (const auto& h : omega)
    if (h.dim() != d) throw LabError(ErrorKind::shape_mismatch, "test function dimension differs from the tuple");

  // gamma: stay strictly below the closest pair of points that some h separates by more than eps/2^d
  const double thr = eps / std::pow(2.0, d);
  std::vector<std::vector<Scalar>> hv;
  for (const auto& h : omega) {
    std::vector<Scalar> vals;
    for (const auto& v : out.spectrum) vals.push_back(h(v));
    hv.push_back(std::move(vals));
  }
  double closest_bad = INFINITY;
  for (Index k = 0; k < n; ++k)
    for (Index l = k + 1; l < n; ++l) {
      bool bad = false;
      for (const auto& vals : hv)
        if (std::abs(vals[static_cast<std::size_t>(k)] - vals[static_cast<std::size_t>(l)]) > thr) bad = true;
      if (bad) closest_bad = std::min(closest_bad, (out.spectrum[static_cast<std::size_t>(k)] - out.spectrum[static_cast<std::size_t>(l)]).norm());
    }
  const double span = 2.0 * std::sqrt(static_cast<double>(d));
  Index grid = 1;
  if (std::isfinite(closest_bad)) {
    double want = std::floor(span / closest_bad) + 1.0;
    if (want > static_cast<double>(kContinuityGridLimit)) {
      std::ostringstream os;
      os << "continuity needs boxes finer than 1/" << kContinuityGridLimit << " (closest separated pair at distance "
         << closest_bad << ")";
      throw LabError(ErrorKind::continuity_budget, os.str());
    }
    grid = static_cast<Index>(want);
    while (span / static_cast<double>(grid) >= closest_bad) ++grid;
  }
  out.partition = partition_from_cover(out.spectrum, box_cover_n(out.spectrum, grid));
  out.gamma = out.partition.cover.diameter();

  const std::size_t r = out.partition.size();
  out.f_diag.assign(r, Vector::Zero(n));
  out.g_diag.assign(r, Vector::Zero(n));
  for (Index k = 0; k < n; ++k) {
    const auto& v = out.spectrum[static_cast<std::size_t>(k)];
    for (const auto& [i, t] : out.partition.f(v)) out.f_diag[i](k) = t;
    for (const auto& [i, t] : out.partition.g(v)) out.g_diag[i](k) = t;
  }

  auto& rep = out.report;
  for (Index k = 0; k < n; ++k) {
    Scalar s = 0.0;
    for (std::size_t i = 0; i < r; ++i) s += out.g_diag[i](k) * out.f_diag[i](k);
    rep.ew_defect = std::max(rep.ew_defect, std::abs(s - 1.0));
  }
  // h -> h(D) has norm one in the finite model
  rep.w_bound = 2.0;
  rep.e_bound = std::pow(2.0, d) + 1.0;
  Rng rng(seed);
  rep.w_norm = diagonal_into_u(out.f_diag, n, p, rng, probes);
  rep.e_norm = diagonal_out_of_u(out.g_diag, n, p, rng, probes, out.g_diag);
  for (const auto& vals : hv) {
    std::vector<Vector> a(r), b(r);
    for (std::size_t i = 0; i < r; ++i) {
      Scalar hw = 0.0;
      // h(w_i): the anchor is one of the spectrum points
      for (Index k = 0; k < n; ++k)
        if (out.spectrum[static_cast<std::size_t>(k)] == out.partition.anchors[i]) {
          hw = vals[static_cast<std::size_t>(k)];
          break;
        }
      a[i] = Vector::Zero(n);
      b[i] = Vector::Zero(n);
      for (Index k = 0; k < n; ++k) {
        Scalar diff = vals[static_cast<std::size_t>(k)] - hw;
        a[i](k) = out.f_diag[i](k) * diff;
        b[i](k) = -out.g_diag[i](k) * diff;
      }
    }
    rep.w_defect.push_back(diagonal_into_u(a, n, p, rng, probes));
    rep.e_defect.push_back(diagonal_out_of_u(b, n, p, rng, probes, out.g_diag));
  }
  return out;
}

}  // namespace lplab
