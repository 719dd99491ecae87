#include "lplab/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lplab {

LpOperator make_shift(ShiftKind kind, Index size) {
  if (size <= 0) throw LabError(ErrorKind::invalid_argument, "shift size must be positive");
  Matrix m = Matrix::Zero(size, size);
  switch (kind) {
    case ShiftKind::unilateral:
      for (Index j = 0; j + 1 < size; ++j) m(j + 1, j) = 1.0;
      return LpOperator(m);
    case ShiftKind::backward:
      for (Index j = 1; j < size; ++j) m(j - 1, j) = 1.0;
      return LpOperator(m);
    case ShiftKind::bilateral_window: {
      for (Index j = 0; j + 1 < size; ++j) m(j + 1, j) = 1.0;
      IndexSet w = IndexSet::window(-static_cast<long>(size / 2), size);
      return LpOperator(m, w, w);
    }
    case ShiftKind::circular: {
      for (Index j = 0; j < size; ++j) m((j + 1) % size, j) = 1.0;
      IndexSet c = IndexSet::cyclic(size);
      return LpOperator(m, c, c);
    }
  }
  throw LabError(ErrorKind::invalid_argument, "unknown shift kind");
}

DiagonalOperator::DiagonalOperator(Vector w) : weights(std::move(w)), label(IndexSet::interval(weights.size())) {}

DiagonalOperator::DiagonalOperator(Vector w, IndexSet l) : weights(std::move(w)), label(std::move(l)) {
  if (label.size() != weights.size()) throw LabError(ErrorKind::shape_mismatch, "diagonal label size");
}

LpOperator DiagonalOperator::to_operator() const {
  return LpOperator(Matrix(weights.asDiagonal()), label, label);
}

std::vector<Index> DiagonalOperator::support() const {
  std::vector<Index> s;
  for (Index i = 0; i < weights.size(); ++i)
    if (weights(i) != Scalar(0.0)) s.push_back(i);
  return s;
}

bool ll_less(const DiagonalOperator& a, const DiagonalOperator& b, double tol) {
  if (a.size() != b.size()) throw LabError(ErrorKind::shape_mismatch, "ll_less size mismatch");
  for (Index i = 0; i < a.size(); ++i)
    if (a.weights(i) != Scalar(0.0) && std::abs(b.weights(i) - 1.0) > tol) return false;
  return true;
}

// ---------------------------------------------------------------- Laurent

LaurentPolynomial::LaurentPolynomial(std::map<int, Scalar> coeffs) {
  for (auto& [k, v] : coeffs)
    if (v != Scalar(0.0)) c_[k] = v;
}

Scalar LaurentPolynomial::operator()(Scalar z) const {
  Scalar s = 0.0;
  for (const auto& [k, v] : c_) s += v * std::pow(z, k);
  return s;
}

int LaurentPolynomial::min_power() const { return c_.empty() ? 0 : c_.begin()->first; }
int LaurentPolynomial::max_power() const { return c_.empty() ? 0 : c_.rbegin()->first; }
int LaurentPolynomial::degree() const { return std::max(std::abs(min_power()), std::abs(max_power())); }

double LaurentPolynomial::derivative_mass() const {
  double s = 0.0;
  for (const auto& [k, v] : c_) s += std::abs(k) * std::abs(v);
  return s;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& o) const {
  std::map<int, Scalar> out;
  for (const auto& [a, u] : c_)
    for (const auto& [b, v] : o.c_) out[a + b] += u * v;
  return LaurentPolynomial(out);
}

LpOperator laurent_apply(const LaurentPolynomial& f, const LpOperator& t,
                         const std::optional<LpOperator>& t_inverse) {
  if (t.rows() != t.cols()) throw LabError(ErrorKind::shape_mismatch, "laurent_apply needs a square operator");
  if (f.has_negative_powers() && !t_inverse)
    throw LabError(ErrorKind::missing_inverse, "negative powers requested without an inverse");
  const Index n = t.rows();
  Matrix acc = Matrix::Zero(n, n);
  Matrix pw = Matrix::Identity(n, n);
  for (int k = 0; k <= std::max(0, f.max_power()); ++k) {
    auto it = f.coefficients().find(k);
    if (it != f.coefficients().end()) acc += it->second * pw;
    pw = t.matrix * pw;
  }
  if (f.has_negative_powers()) {
    if (t_inverse->rows() != n || t_inverse->cols() != n)
      throw LabError(ErrorKind::shape_mismatch, "inverse has the wrong shape");
    pw = t_inverse->matrix;
    for (int k = -1; k >= f.min_power(); --k) {
      auto it = f.coefficients().find(k);
      if (it != f.coefficients().end()) acc += it->second * pw;
      pw = t_inverse->matrix * pw;
    }
  }
  return LpOperator(acc, t.domain, t.codomain);
}

CircleSup laurent_circle_sup(const LaurentPolynomial& f, int grid) {
  if (grid < 1) throw LabError(ErrorKind::invalid_argument, "grid must be positive");
  CircleSup out;
  out.grid = grid;
  for (int k = 0; k < grid; ++k) {
    double th = 2.0 * std::numbers::pi * k / grid;
    double v = std::abs(f(std::polar(1.0, th)));
    if (v > out.value) {
      out.value = v;
      out.argument = th;
    }
  }
  double d = f.degree();
  double g = grid;
  out.upper = (1.0 + std::numbers::pi * std::numbers::pi * (2 * d + 1) * (2 * d + 1) / (g * g)) * out.value;
  return out;
}

int winding_number(const LaurentPolynomial& f, Scalar lambda, int grid) {
  if (grid < 3) throw LabError(ErrorKind::invalid_argument, "grid too coarse");
  const double spacing = 2.0 * std::numbers::pi / grid;
  std::vector<Scalar> vals(static_cast<std::size_t>(grid));
  double dmin = INFINITY;
  for (int k = 0; k < grid; ++k) {
    vals[static_cast<std::size_t>(k)] = f(std::polar(1.0, spacing * k)) - lambda;
    dmin = std::min(dmin, std::abs(vals[static_cast<std::size_t>(k)]));
  }
  if (!(dmin > 10.0 * spacing * f.derivative_mass()))
    throw LabError(ErrorKind::on_curve, "lambda is too close to the curve f(T) for this grid");
  double total = 0.0;
  for (int k = 0; k < grid; ++k)
    total += std::arg(vals[static_cast<std::size_t>((k + 1) % grid)] / vals[static_cast<std::size_t>(k)]);
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

double joint_diag_infimum(const std::vector<DiagonalOperator>& ds, const std::vector<Scalar>& lambdas,
                          PExponent p) {
  if (ds.empty()) throw LabError(ErrorKind::empty_list, "no diagonal operators");
  if (ds.size() != lambdas.size()) throw LabError(ErrorKind::shape_mismatch, "one lambda per operator");
  const Index n = ds.front().size();
  for (const auto& d : ds)
    if (d.size() != n) throw LabError(ErrorKind::shape_mismatch, "diagonals of different sizes");
  double best = INFINITY;
  for (Index c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) s += std::pow(std::abs(ds[i].weights(c) - lambdas[i]), p.p());
    best = std::min(best, s);
  }
  return best;
}

LpOperator explicit_T0(const std::vector<Index>& breakpoints, PExponent) {
  if (breakpoints.size() < 2 || breakpoints.front() != 0)
    throw LabError(ErrorKind::invalid_argument, "breakpoints must start at 0");
  std::vector<Index> sizes;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (breakpoints[i] <= breakpoints[i - 1])
      throw LabError(ErrorKind::invalid_argument, "breakpoints must increase");
    sizes.push_back(breakpoints[i] - breakpoints[i - 1]);
  }
  const Index n = breakpoints.back();
  IndexSet label = IndexSet::blocks(sizes, 2.0);
  Matrix m = Matrix::Zero(n, n);
  for (Index j = 0; j + 1 < n; ++j) m(j + 1, j) = 1.0;
  return LpOperator(m, label, label);
}

LpOperator circulant(const LaurentPolynomial& f, Index n) {
  LpOperator b = make_shift(ShiftKind::circular, n);
  // B_N permutes coordinates; place c_k on B_N^k directly, in laurent_apply's order
  std::vector<Index> fwd(static_cast<std::size_t>(n)), back(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    Index i = 0;
    b.matrix.col(j).cwiseAbs().maxCoeff(&i);
    fwd[static_cast<std::size_t>(j)] = i;
    back[static_cast<std::size_t>(i)] = j;
  }
  Matrix acc = Matrix::Zero(n, n);
  auto place = [&](const std::vector<Index>& step, int from, int to, int dir) {
    std::vector<Index> pos(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) pos[static_cast<std::size_t>(j)] = dir > 0 ? j : step[static_cast<std::size_t>(j)];
    for (int k = from; dir > 0 ? k <= to : k >= to; k += dir) {
      auto it = f.coefficients().find(k);
      if (it != f.coefficients().end())
        for (Index j = 0; j < n; ++j) acc(pos[static_cast<std::size_t>(j)], j) += it->second;
      for (auto& x : pos) x = step[static_cast<std::size_t>(x)];
    }
  };
  place(fwd, 0, std::max(0, f.max_power()), 1);
  if (f.has_negative_powers()) place(back, -1, f.min_power(), -1);
  return LpOperator(acc, b.domain, b.codomain);
}

Vector fourier_vector(Index n, Index j) {
  Vector v(n);
  for (Index t = 0; t < n; ++t)
    v(t) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((j * t) % n) / static_cast<double>(n));
  return v;
}

SymbolMax circulant_symbol_max(const LaurentPolynomial& f, Index n) {
  SymbolMax out;
  out.value = -1.0;
  for (Index j = 0; j < n; ++j) {
    double v = std::abs(f(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n))));
    if (v > out.value) {
      out.value = v;
      out.index = j;
    }
  }
  return out;
}

NormBracket circulant_norm_bounds(const LaurentPolynomial& f, Index n, PExponent p, NormEffort effort) {
  SymbolMax sm = circulant_symbol_max(f, n);
  // B_N v_j = w^{-j} v_j, so f(w^j) sits on v_{-j}
  effort.starts.insert(effort.starts.begin(), fourier_vector(n, (n - sm.index) % n));
  return op_norm_bounds(circulant(f, n), p, effort);
}

SandwichReport t0_laurent_sandwich(const LaurentPolynomial& f, const std::vector<Index>& breakpoints,
                                   PExponent p, std::size_t tail_block) {
  LpOperator t0 = explicit_T0(breakpoints, p);
  LpOperator back(t0.matrix.transpose(), t0.domain, t0.codomain);
  LpOperator ft = laurent_apply(f, t0, back);
  if (tail_block + 1 >= breakpoints.size())
    throw LabError(ErrorKind::invalid_argument, "tail block out of range");
  SandwichReport out;
  out.banded = true;
  for (std::size_t j = tail_block == 0 ? 0 : tail_block - 1; j + 1 < breakpoints.size(); ++j)
    if (breakpoints[j + 1] - breakpoints[j] < f.degree()) out.banded = false;
  out.tail_upper = tail_norms(ft, p, breakpoints[tail_block]).right;
  out.sup_upper = laurent_circle_sup(f).upper;
  out.bound = 3.0 * out.sup_upper;
  return out;
}

}  // namespace lplab
