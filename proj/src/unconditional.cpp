#include "lplab/unconditional.hpp"

#include "lplab/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lplab {

namespace {

void require_exact(std::size_t r) {
  if (r > kExactSignLimit) {
    std::ostringstream os;
    os << "exact sign enumeration needs r <= " << kExactSignLimit << ", got " << r;
    throw LabError(ErrorKind::exact_mode_size, os.str());
  }
}

// Norms of sum delta_i y_i over every delta with delta_1 = +1. Each sum is
// formed afresh and the norms are added in sorted order, so the result does not
// depend on the pattern order or on flipping the sign of a component.
template <typename F>
double sign_average(const std::vector<Vector>& ys, F&& value) {
  const std::size_t r = ys.size();
  const std::uint64_t count = std::uint64_t{1} << (r - 1);
  std::vector<double> vals;
  vals.reserve(count);
  Vector s(ys.front().size());
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    s = ys[0];
    for (std::size_t i = 1; i < r; ++i) {
      if ((mask >> (i - 1)) & 1)
        s -= ys[i];
      else
        s += ys[i];
    }
    vals.push_back(value(s));
  }
  std::sort(vals.begin(), vals.end());
  double total = 0.0;
  for (double v : vals) total += v;
  return total / static_cast<double>(count);
}

std::vector<Vector> entries_of(const SignedSumElement& y) {
  std::vector<Vector> out;
  out.reserve(y.r());
  for (const auto& c : y.components) out.push_back(c.entries);
  return out;
}

}  // namespace

SignedSumElement::SignedSumElement(std::vector<LpVector> ys) : components(std::move(ys)) {
  if (components.empty()) throw LabError(ErrorKind::empty_list, "signed sum with no components");
  for (const auto& c : components)
    if (c.size() != components.front().size() || !(c.label == components.front().label))
      throw LabError(ErrorKind::shape_mismatch, "components live on different spaces");
}

SignedSumElement::SignedSumElement(const std::vector<Vector>& ys) {
  std::vector<LpVector> cs;
  for (const auto& y : ys) cs.emplace_back(y);
  *this = SignedSumElement(std::move(cs));
}

double u_norm(const SignedSumElement& y, PExponent p) {
  require_exact(y.r());
  const IndexSet& label = y.components.front().label;
  return sign_average(entries_of(y), [&](const Vector& s) { return lp_norm(s, label, p); });
}

double u_moment(const SignedSumElement& y, PExponent p) {
  require_exact(y.r());
  const IndexSet& label = y.components.front().label;
  double mean = sign_average(entries_of(y), [&](const Vector& s) { return std::pow(lp_norm(s, label, p), p.p()); });
  return std::pow(mean, 1.0 / p.p());
}

UNormEstimate u_norm_monte_carlo(const SignedSumElement& y, PExponent p, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw LabError(ErrorKind::invalid_argument, "need at least two samples");
  Rng rng(seed);
  const IndexSet& label = y.components.front().label;
  double mean = 0.0, m2 = 0.0;
  Vector s(y.dim());
  for (std::size_t k = 0; k < samples; ++k) {
    s.setZero();
    for (const auto& c : y.components) s += rng.sign() * c.entries;
    double v = lp_norm(s, label, p);
    double d = v - mean;
    mean += d / static_cast<double>(k + 1);
    m2 += d * (v - mean);
  }
  double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

SignMoments sign_moments(const std::vector<Scalar>& z, PExponent p) {
  SignMoments out;
  if (z.empty()) return out;
  require_exact(z.size());
  std::vector<Vector> ys;
  for (const auto& c : z) ys.push_back(Vector::Constant(1, c));
  out.mean = sign_average(ys, [](const Vector& s) { return std::abs(s(0)); });
  out.moment = std::pow(sign_average(ys, [&](const Vector& s) { return std::pow(std::abs(s(0)), p.p()); }), 1.0 / p.p());
  sign_average(ys, [&](const Vector& s) {
    out.sup = std::max(out.sup, std::abs(s(0)));
    return 0.0;
  });
  return out;
}

NormBracket u_norm_bracket(const SignedSumElement& y, PExponent p) {
  const IndexSet& label = y.components.front().label;
  NormBracket out;
  if (y.r() <= 6) {
    out.lower = out.upper = u_norm(y, p);
    out.tags.push_back("exact");
    return out;
  }
  if (label.mixed()) throw LabError(ErrorKind::precondition, "local bracket needs a plain l^p label");
  double lo = 0.0, hi = 0.0;
  std::vector<Scalar> z;
  for (Index k = 0; k < y.dim(); ++k) {
    z.clear();
    for (const auto& c : y.components)
      if (c.entries(k) != Scalar(0.0)) z.push_back(c.entries(k));
    if (z.empty()) continue;
    auto m = sign_moments(z, p);
    lo += std::pow(m.mean, p.p());
    hi += std::pow(m.moment, p.p());
  }
  out.lower = std::pow(lo, 1.0 / p.p());
  out.upper = std::max(out.lower, std::pow(hi, 1.0 / p.p()));
  out.tags.push_back("local-signs");
  return out;
}

ScalarBoundCheck u_scalar_bound_check(const std::vector<Scalar>& cs, int probes, PExponent p, Index dim,
                                      std::uint64_t seed) {
  if (cs.empty()) throw LabError(ErrorKind::empty_list, "no scalars");
  if (cs.size() > 12) throw LabError(ErrorKind::exact_mode_size, "scalar check limited to r <= 12");
  ScalarBoundCheck out;
  double cmax = 0.0;
  bool real = true;
  for (const auto& c : cs) {
    cmax = std::max(cmax, std::abs(c));
    real = real && c.imag() == 0.0;
  }
  out.bound = 2.0 * cmax;
  out.sharp = real ? cmax : out.bound;
  Rng rng(seed);
  const std::size_t r = cs.size();
  auto probe = [&](const std::vector<Vector>& ys) {
    SignedSumElement y(ys);
    double base = u_norm(y, p);
    if (base == 0.0) return;
    std::vector<Vector> scaled = ys;
    for (std::size_t i = 0; i < r; ++i) scaled[i] *= cs[i];
    out.ratio = std::max(out.ratio, u_norm(SignedSumElement(scaled), p) / base);
  };
  // disjoint supports and a repeated vector, then random
  if (static_cast<Index>(r) <= dim) {
    std::vector<Vector> ys(r, Vector::Zero(dim));
    for (std::size_t i = 0; i < r; ++i) ys[i](static_cast<Index>(i)) = 1.0;
    probe(ys);
  }
  probe(std::vector<Vector>(r, Vector::Ones(dim)));
  for (int k = 0; k < probes; ++k) {
    std::vector<Vector> ys;
    for (std::size_t i = 0; i < r; ++i) ys.push_back(rng.vector(dim));
    probe(ys);
  }
  return out;
}

RepeatNormCheck u_repeat_norm_check(const LpOperator& t, std::size_t r, int probes, PExponent p,
                                    std::uint64_t seed) {
  if (r < 1 || r > 12) throw LabError(ErrorKind::exact_mode_size, "repeat check limited to 1 <= r <= 12");
  RepeatNormCheck out;
  NormBracket b = op_norm_bounds(t, p);
  out.lower = b.lower;
  out.upper = b.upper;
  auto apply = [&](const std::vector<Vector>& ys) {
    std::vector<LpVector> in, img;
    for (const auto& y : ys) {
      in.emplace_back(y, t.domain);
      img.emplace_back(Vector(t.matrix * y), t.codomain);
    }
    double base = u_norm(SignedSumElement(in), p);
    return base == 0.0 ? 0.0 : u_norm(SignedSumElement(img), p) / base;
  };
  if (b.witness.size() == t.cols() && b.witness.size() > 0)
    out.diagonal_ratio = apply(std::vector<Vector>(r, b.witness));
  Rng rng(seed);
  out.ratio = out.diagonal_ratio;
  for (int k = 0; k < probes; ++k) {
    std::vector<Vector> ys;
    for (std::size_t i = 0; i < r; ++i) ys.push_back(rng.vector(t.cols()));
    out.ratio = std::max(out.ratio, apply(ys));
  }
  return out;
}

double khintchine_ratio(const std::vector<Scalar>& vs, PExponent p) {
  if (vs.empty()) throw LabError(ErrorKind::empty_list, "no scalars");
  require_exact(vs.size());
  double l2 = 0.0;
  for (const auto& v : vs) l2 += std::norm(v);
  if (l2 == 0.0) throw LabError(ErrorKind::zero_vector, "khintchine_ratio of the zero vector");
  std::vector<Vector> ys;
  for (const auto& v : vs) ys.push_back(Vector::Constant(1, v));
  double mean = sign_average(ys, [&](const Vector& s) { return std::pow(std::abs(s(0)), p.p()); });
  double moment = std::pow(mean, 1.0 / p.p());
  return moment / std::sqrt(l2);
}

SDistortion s_isomorphism_distortion(const SignedSumElement& y, PExponent p) {
  if (y.r() > 12) throw LabError(ErrorKind::exact_mode_size, "distortion limited to r <= 12");
  SDistortion out;
  // S_n y = (y_1(n), ..., y_r(n)) in l^2(r); then l^p over n
  double acc = 0.0;
  for (Index n = 0; n < y.dim(); ++n) {
    double col = 0.0;
    for (const auto& c : y.components) col += std::norm(c.entries(n));
    acc += std::pow(std::sqrt(col), p.p());
  }
  out.s_norm = std::pow(acc, 1.0 / p.p());
  out.u_norm = u_norm(y, p);
  if (out.u_norm == 0.0) throw LabError(ErrorKind::zero_vector, "distortion at the zero element");
  double moment = u_moment(y, p);
  out.distortion = out.s_norm / out.u_norm;
  out.khintchine_factor = out.s_norm / moment;
  out.kahane_factor = moment / out.u_norm;
  return out;
}

InterchangeBound u_interchange_bound(const std::vector<LpOperator>& ts, const SignedSumElement& y,
                                     const std::vector<Index>& support, PExponent p) {
  if (ts.size() != y.r()) throw LabError(ErrorKind::shape_mismatch, "need one operator per component");
  if (y.r() > 12) throw LabError(ErrorKind::exact_mode_size, "interchange bound limited to r <= 12");
  if (support.empty()) throw LabError(ErrorKind::empty_list, "empty subspace");
  const Index n = y.dim();
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (Index c : support) {
    if (c < 0 || c >= n) throw LabError(ErrorKind::invalid_argument, "support coordinate out of range");
    in[static_cast<std::size_t>(c)] = true;
  }
  for (const auto& comp : y.components)
    for (Index c = 0; c < n; ++c)
      if (!in[static_cast<std::size_t>(c)] && comp.entries(c) != Scalar(0.0))
        throw LabError(ErrorKind::precondition, "component leaves the declared subspace");
  for (const auto& t : ts)
    if (t.cols() != n || t.rows() != ts.front().rows()) throw LabError(ErrorKind::shape_mismatch, "operator sizes differ");

  InterchangeBound out;
  const IndexSet& codomain = ts.front().codomain;
  Vector sum = Vector::Zero(ts.front().rows());
  std::vector<LpVector> images;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    Vector ti = ts[i].matrix * y.components[i].entries;
    sum += ti;
    images.emplace_back(ti, codomain);
  }
  out.lhs = lp_norm(sum, codomain, p);
  out.variant_lhs = u_norm(SignedSumElement(images), p);
  out.u = u_norm(y, p);

  const Index k = static_cast<Index>(support.size());
  std::vector<Matrix> restricted;
  for (const auto& t : ts) {
    Matrix m(t.rows(), k);
    for (Index j = 0; j < k; ++j) m.col(j) = t.matrix.col(support[static_cast<std::size_t>(j)]);
    restricted.push_back(std::move(m));
  }
  // ||-A|| = ||A||, so delta_1 = +1 suffices
  const std::size_t r = ts.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (r - 1)); ++mask) {
    Matrix m = restricted[0];
    for (std::size_t i = 1; i < r; ++i) m += ((mask >> (i - 1)) & 1 ? -1.0 : 1.0) * restricted[i];
    out.sign_sup = std::max(out.sign_sup, op_norm_upper(LpOperator(m, IndexSet::interval(k), codomain), p));
  }
  out.rhs = out.sign_sup * out.u;
  return out;
}

}  // namespace lplab
