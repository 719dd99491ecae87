#include "lplab/splitting.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lplab {

namespace {

double upper(const Matrix& m, PExponent p) {
  return op_norm_upper(LpOperator(m), p);
}

double max_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_plain(const LpOperator& t, const char* name) {
  if (t.domain.mixed() || t.codomain.mixed())
    throw LabError(ErrorKind::invalid_argument, std::string(name) + " must act between plain l^p spaces");
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------------ Riesz

LpOperator riesz_idempotent(const LpOperator& e, const RieszOptions& opt) {
  if (e.rows() != e.cols()) throw LabError(ErrorKind::shape_mismatch, "E must be square");
  if (opt.points < 8) throw LabError(ErrorKind::invalid_argument, "need at least 8 contour points");
  const Index n = e.rows();
  const Matrix& m = e.matrix;
  if (opt.require_defect) {
    const PExponent pe(opt.p);
    LpOperator defect(m * m - m, e.domain, e.codomain);
    double eta = op_norm_upper(defect, pe);
    if (!(eta < 1.0 / 16.0)) {
      std::ostringstream os;
      os << "||E^2 - E|| = " << eta << " is not below 1/16";
      throw LabError(ErrorKind::precondition, os.str());
    }
    double en = op_norm_upper(e, pe);
    if (en > opt.C * (1 + 1e-12)) {
      std::ostringstream os;
      os << "||E|| = " << en << " exceeds the declared C = " << opt.C;
      throw LabError(ErrorKind::precondition, os.str());
    }
  }
  const int k = opt.points;
  Matrix q = Matrix::Zero(n, n);
  for (int j = 0; j < k; ++j) {
    double theta = 2.0 * std::numbers::pi * j / k;
    Scalar w = 0.5 * std::polar(1.0, theta);
    Scalar z = 1.0 + w;
    Matrix a = z * Matrix::Identity(n, n) - m;
    Eigen::PartialPivLU<Matrix> lu(a);
    Matrix res = lu.inverse();
    double rn = res.cwiseAbs().rowwise().sum().maxCoeff();
    if (!std::isfinite(rn) || rn > 1e8) {
      std::ostringstream os;
      os << "resolvent norm " << rn << " at z = " << z.real() << "+" << z.imag() << "i";
      throw LabError(ErrorKind::spectral_gap, os.str());
    }
    q += w * res;
  }
  q /= static_cast<double>(k);
  return LpOperator(q, e.domain, e.codomain);
}

// ------------------------------------------------------------------ splitting

SplitConstants split_constants(double eps, double beta) {
  SplitConstants c;
  c.eps = eps;
  c.beta = beta;
  const double b2 = beta * beta;
  c.f = 16.0 * (0.5 + b2) * b2 * eps;
  c.denom = (1.0 - eps) / beta - beta * (eps + c.f);
  auto fail = [&](const std::string& why) {
    if (c.violated.empty()) c.violated = why;
  };
  if (!(beta >= 1.0)) fail("beta >= 1");
  if (!(b2 * eps < 1.0 / 16.0)) fail("beta^2 eps < 1/16");
  if (!((b2 + c.f) * c.f < 1.0)) fail("(beta^2 + f) f < 1");
  if (!(c.denom > 0.0)) fail("(1 - eps)/beta - beta (eps + f) > 0");
  if (c.violated.empty()) {
    // ||(QL)^{-1}|| <= 1/denom, ||Q|| <= beta^2 + f, ||I - Q|| <= 1 + beta^2 + f
    c.s_bound = (b2 + c.f) / c.denom + 1.0 + b2 + c.f;
    c.s_inv_bound = (b2 + c.f) * beta + 1.0;
    if (!(c.s_inv_bound * c.s_bound <= 7.0 * std::pow(beta, 6))) fail("||S|| ||S^-1|| chain <= 7 beta^6");
    double c0 = (b2 + c.f) * eps + 2.0 * b2 * eps + 2.0 * beta * eps;
    double c1 = 2.0 * beta * c.f + 2.0 * c.f;
    c.G = std::max(c0, c1) * c.s_bound;
  }
  return c;
}

SplitResult split_similarity(const LpOperator& l, const LpOperator& r, const LpOperator& t1, const LpOperator& t2,
                             double beta, PExponent p) {
  for (const auto* t : {&l, &r, &t1, &t2}) require_plain(*t, "split_similarity operands");
  const Index n1 = l.cols();
  const Index n2 = l.rows();
  if (r.rows() != n1 || r.cols() != n2 || t1.rows() != n1 || t1.cols() != n1 || t2.rows() != n2 ||
      t2.cols() != n2)
    throw LabError(ErrorKind::shape_mismatch, "L: Y1 -> Y2, R: Y2 -> Y1, T1 on Y1, T2 on Y2");
  const Matrix& L = l.matrix;
  const Matrix& R = r.matrix;
  const Matrix& T1 = t1.matrix;
  const Matrix& T2 = t2.matrix;
  const Matrix I1 = Matrix::Identity(n1, n1);
  const Matrix I2 = Matrix::Identity(n2, n2);

  double nl = upper(L, p), nr = upper(R, p);
  if (nl > beta * (1 + 1e-12) || nr > beta * (1 + 1e-12)) {
    std::ostringstream os;
    os << "||L|| <= beta and ||R|| <= beta (" << nl << ", " << nr << " vs " << beta << ")";
    throw LabError(ErrorKind::feasibility, os.str());
  }
  SplitResult out;
  out.eps = upper(R * L - I1, p);
  out.constants = split_constants(out.eps, beta);
  if (!out.constants.feasible())
    throw LabError(ErrorKind::feasibility, "violated: " + out.constants.violated);

  RieszOptions ro;
  ro.C = beta * beta;
  ro.require_defect = false;  // implied by beta^2 eps < 1/16
  const Matrix Q = riesz_idempotent(LpOperator(L * R), ro).matrix;
  const Matrix QL = Q * L;
  const Matrix A = QL.colPivHouseholderQr().solve(Q);  // (QL)^{-1} Q on range(Q)
  const Matrix P3 = I2 - Q;

  Matrix S(n1 + n2, n2);
  S << A, P3;
  Matrix Sinv(n2, n1 + n2);
  Sinv << QL, P3;
  const Matrix T3 = P3 * T2 * P3;
  const Matrix K = QL * T1 * A + T3 - T2;
  const Matrix D = block_diagonal({T1, T3});

  const IndexSet y2 = IndexSet::interval(n2), y13 = IndexSet::interval(n1 + n2);
  out.Q = LpOperator(Q, y2, y2);
  out.S = LpOperator(S, y2, y13);
  out.S_inverse = LpOperator(Sinv, y13, y2);
  out.T3 = LpOperator(T3, y2, y2);
  out.K = LpOperator(K, y2, y2);
  out.y3_dim = n2 - n1;

  out.inverse_defect = std::max(max_entry(Sinv * S - I2), max_entry(S * Sinv - block_diagonal({I1, P3})));
  out.similarity_defect = max_entry(S * (T2 + K) * Sinv - D);
  out.condition = op_norm_upper(out.S, p) * op_norm_upper(out.S_inverse, p);
  if (out.condition > 7.0 * std::pow(beta, 6) + 1e-6) {
    std::ostringstream os;
    os << "condition " << out.condition << " exceeds 7 beta^6";
    throw LabError(ErrorKind::feasibility, os.str());
  }

  out.commutator = std::max(upper(L * T1 - T2 * L, p), upper(T1 * R - R * T2, p));
  auto ck = split_constants(std::max(out.eps, out.commutator), beta);
  out.k_lower = op_norm_bounds(out.K, p).lower;
  if (ck.feasible()) out.k_bound = ck.G * (upper(T2, p) + 1.0);
  return out;
}

// ------------------------------------------------------------------ neutral L / R

bool is_isometry(const Matrix& v, PExponent p, double tol) {
  if (p.is_two()) {
    return max_entry(v.adjoint() * v - Matrix::Identity(v.cols(), v.cols())) <= tol;
  }
  // finite l^p isometries for p != 2: disjointly supported columns of norm one
  std::vector<char> used(static_cast<std::size_t>(v.rows()), 0);
  for (Index c = 0; c < v.cols(); ++c) {
    if (std::abs(lp_norm(Vector(v.col(c)), p) - 1.0) > tol) return false;
    for (Index i = 0; i < v.rows(); ++i) {
      if (std::abs(v(i, c)) <= tol) continue;
      if (used[static_cast<std::size_t>(i)]) return false;
      used[static_cast<std::size_t>(i)] = 1;
    }
  }
  return true;
}

namespace {

// adjacency of block j (0-based) to copy i (0-based)
bool covers(std::size_t j, std::size_t i, Index n1) {
  return i >= j && i <= j + static_cast<std::size_t>(n1);
}

void check_neutral_shape(const Matrix& m, const BlockDecomposition& dec, Index n1) {
  if (n1 < 1) throw LabError(ErrorKind::invalid_argument, "n1 must be positive");
  if (m.rows() != dec.dim() || m.cols() != dec.dim())
    throw LabError(ErrorKind::shape_mismatch, "operator does not act on the decomposed space");
  if (dec.inner()) throw LabError(ErrorKind::invalid_argument, "decomposition must be plain l^p");
}

}  // namespace

LpOperator neutral_embed_L(const LpOperator& v, const BlockDecomposition& dec, Index n1, PExponent p) {
  check_neutral_shape(v.matrix, dec, n1);
  if (!is_isometry(v.matrix, p)) throw LabError(ErrorKind::non_isometry, "V is not an l^p isometry");
  const Index N = dec.dim();
  const std::size_t n = dec.count();
  const std::size_t copies = n + static_cast<std::size_t>(n1);
  const double c = std::pow(static_cast<double>(n1 + 1), -1.0 / p.p());
  Matrix out = Matrix::Zero(static_cast<Index>(copies) * N, N);
  for (std::size_t j = 0; j < n; ++j) {
    Matrix vd = c * v.matrix.middleCols(dec.offset(j), dec.size(j));
    for (std::size_t i = j; i <= j + static_cast<std::size_t>(n1); ++i)
      out.block(static_cast<Index>(i) * N, dec.offset(j), N, dec.size(j)) += vd;
  }
  return LpOperator(out, IndexSet::interval(N), IndexSet::interval(static_cast<Index>(copies) * N));
}

LpOperator neutral_project_R(const LpOperator& e, const LpOperator& e_right_inverse, const BlockDecomposition& dec,
                             Index n1, PExponent p) {
  check_neutral_shape(e.matrix, dec, n1);
  const Index N = dec.dim();
  if (e_right_inverse.rows() != N || e_right_inverse.cols() != N)
    throw LabError(ErrorKind::shape_mismatch, "right inverse has the wrong shape");
  if (max_entry(e.matrix * e_right_inverse.matrix - Matrix::Identity(N, N)) > 1e-10)
    throw LabError(ErrorKind::non_partial_isometry, "E * right inverse != I");
  if (upper(e.matrix, p) > 1 + 1e-10 || upper(e_right_inverse.matrix, p) > 1 + 1e-10)
    throw LabError(ErrorKind::non_partial_isometry, "E or its right inverse has norm above 1");
  const std::size_t n = dec.count();
  const std::size_t copies = n + static_cast<std::size_t>(n1);
  const double c = std::pow(static_cast<double>(n1 + 1), -(1.0 - 1.0 / p.p()));
  Matrix out = Matrix::Zero(N, static_cast<Index>(copies) * N);
  for (std::size_t j = 0; j < n; ++j) {
    Matrix de = c * e.matrix.middleRows(dec.offset(j), dec.size(j));
    for (std::size_t i = j; i <= j + static_cast<std::size_t>(n1); ++i)
      out.block(dec.offset(j), static_cast<Index>(i) * N, dec.size(j), N) += de;
  }
  return LpOperator(out, IndexSet::interval(static_cast<Index>(copies) * N), IndexSet::interval(N));
}

namespace {

struct NeutralParts {
  std::size_t n = 0;
  std::size_t copies = 0;
  Matrix diag_tilde;  // blockdiag(T~_i + K_i)
  Matrix sum_td;      // sum_j T_j D_j
};

NeutralParts neutral_parts(const BlockDecomposition& dec, Index n1, const std::vector<LpOperator>& ts,
                           const std::vector<LpOperator>& tildes, const std::optional<std::vector<LpOperator>>& ks) {
  NeutralParts np;
  np.n = dec.count();
  np.copies = np.n + static_cast<std::size_t>(n1);
  const Index N = dec.dim();
  if (ts.size() != np.copies || tildes.size() != np.copies || (ks && ks->size() != np.copies))
    throw LabError(ErrorKind::shape_mismatch, "need n + n1 operators in each family");
  for (std::size_t i = 0; i < np.copies; ++i) {
    if (ts[i].rows() != N || ts[i].cols() != N || tildes[i].rows() != N || tildes[i].cols() != N ||
        (ks && ((*ks)[i].rows() != N || (*ks)[i].cols() != N)))
      throw LabError(ErrorKind::shape_mismatch, "family member has the wrong size");
  }
  for (std::size_t j = 0; j < np.n; ++j) {
    if (!is_block_tridiagonal(ts[j].matrix, dec, 1e-12)) {
      std::ostringstream os;
      os << "T_" << j + 1 << " is not block tridiagonal";
      throw LabError(ErrorKind::not_tridiagonal, os.str());
    }
  }
  if (ks) {
    if (np.n < 2 || n1 < 2) throw LabError(ErrorKind::precondition, "the corrected form needs n, n1 >= 2");
    for (std::size_t i = 1; i <= static_cast<std::size_t>(n1); ++i)
      if (max_entry(ts[i].matrix - ts[0].matrix) > 0.0)
        throw LabError(ErrorKind::precondition, "T_1 = ... = T_{n1+1} required");
    for (std::size_t i = np.n; i < np.copies; ++i)
      if (max_entry(ts[i].matrix - ts[np.n - 1].matrix) > 0.0)
        throw LabError(ErrorKind::precondition, "T_n = ... = T_{n+n1} required");
    for (std::size_t i = 0; i <= static_cast<std::size_t>(n1); ++i)
      if (max_entry((*ks)[i].matrix) > 0.0) throw LabError(ErrorKind::precondition, "K_1 = ... = K_{n1+1} = 0 required");
  }
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < np.copies; ++i)
    blocks.push_back(ks ? Matrix(tildes[i].matrix + (*ks)[i].matrix) : tildes[i].matrix);
  np.diag_tilde = block_diagonal(blocks);
  np.sum_td = Matrix::Zero(N, N);
  for (std::size_t j = 0; j < np.n; ++j)
    np.sum_td.middleCols(dec.offset(j), dec.size(j)) = ts[j].matrix.middleCols(dec.offset(j), dec.size(j));
  return np;
}

Matrix complement_first(const BlockDecomposition& dec) {
  return Matrix::Identity(dec.dim(), dec.dim()) - dec.projection(0);
}

}  // namespace

NeutralCheck neutral_L_check(const LpOperator& v, const BlockDecomposition& dec, Index n1,
                             const std::vector<LpOperator>& ts, const std::vector<LpOperator>& tildes,
                             const std::optional<std::vector<LpOperator>>& ks, PExponent p) {
  LpOperator L = neutral_embed_L(v, dec, n1, p);
  auto np = neutral_parts(dec, n1, ts, tildes, ks);
  for (std::size_t i = 0; i < np.copies; ++i)
    if (max_entry(tildes[i].matrix * v.matrix - v.matrix * ts[i].matrix) > 1e-10)
      throw LabError(ErrorKind::precondition, "T~_i V = V T_i fails");
  Matrix lhs = L.matrix * np.sum_td - np.diag_tilde * L.matrix;
  NeutralCheck out;
  auto b = op_norm_bounds(LpOperator(lhs, L.domain, L.codomain), p);
  out.lower = b.lower;
  out.upper = b.upper;

  const Matrix comp = complement_first(dec);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (std::size_t j = 0; j < np.n; ++j) {
    const Matrix dj = dec.projection(j);
    s1 = std::max(s1, upper(ts[j].matrix * dj, p));
    for (std::size_t i = j; i < np.copies; ++i) {
      if (!covers(j, i, n1)) continue;
      const Matrix diff = ts[i].matrix - ts[j].matrix;
      s2 = std::max(s2, upper(diff * (ks ? comp : dj), p));
    }
  }
  if (ks)
    for (std::size_t i = 0; i < np.copies; ++i) s3 = std::max(s3, upper((*ks)[i].matrix * v.matrix * comp, p));
  out.bound = 12.0 * std::pow(static_cast<double>(n1 + 1), -1.0 / p.p()) * s1 + 3.0 * s2 +
              2.0 * static_cast<double>(np.n) * static_cast<double>(n1) * s3;
  return out;
}

NeutralCheck neutral_R_check(const LpOperator& e, const LpOperator& e_right_inverse, const BlockDecomposition& dec,
                             Index n1, const std::vector<LpOperator>& ts, const std::vector<LpOperator>& tildes,
                             const std::optional<std::vector<LpOperator>>& ks, PExponent p) {
  LpOperator R = neutral_project_R(e, e_right_inverse, dec, n1, p);
  auto np = neutral_parts(dec, n1, ts, tildes, ks);
  if (np.n < 2 || n1 < 2) throw LabError(ErrorKind::precondition, "the defect bound needs n, n1 >= 2");
  if (!ks) {
    // the statement always carries the corrected form; K = 0 is the plain case
    for (std::size_t i = 1; i <= static_cast<std::size_t>(n1); ++i)
      if (max_entry(ts[i].matrix - ts[0].matrix) > 0.0)
        throw LabError(ErrorKind::precondition, "T_1 = ... = T_{n1+1} required");
    for (std::size_t i = np.n; i < np.copies; ++i)
      if (max_entry(ts[i].matrix - ts[np.n - 1].matrix) > 0.0)
        throw LabError(ErrorKind::precondition, "T_n = ... = T_{n+n1} required");
  }
  for (std::size_t i = 0; i < np.n; ++i)
    if (!is_block_tridiagonal(ts[i].matrix, dec, 1e-12))
      throw LabError(ErrorKind::not_tridiagonal, "T_i must be block tridiagonal for i <= n");
  for (std::size_t i = 0; i < np.copies; ++i)
    if (max_entry(e.matrix * tildes[i].matrix - ts[i].matrix * e.matrix) > 1e-10)
      throw LabError(ErrorKind::precondition, "E T~_i = T_i E fails");
  Matrix lhs = np.sum_td * R.matrix - R.matrix * np.diag_tilde;
  NeutralCheck out;
  auto b = op_norm_bounds(LpOperator(lhs, R.domain, R.codomain), p);
  out.lower = b.lower;
  out.upper = b.upper;

  const Matrix comp = complement_first(dec);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (std::size_t j = 0; j < np.n; ++j) {
    s1 = std::max(s1, upper(dec.projection(j) * ts[j].matrix, p));
    for (std::size_t i = j; i < np.copies; ++i)
      if (covers(j, i, n1)) s2 = std::max(s2, upper(comp * (ts[i].matrix - ts[j].matrix), p));
  }
  if (ks)
    for (std::size_t i = 0; i < np.copies; ++i) s3 = std::max(s3, upper(comp * e.matrix * (*ks)[i].matrix, p));
  for (std::size_t j = 1; j < np.n; ++j) {
    double a = upper((ts[j - 1].matrix - ts[j].matrix) * comp, p);
    double c = upper((ts[j + 1].matrix - ts[j].matrix) * comp, p);
    s4 = std::max(s4, a + c);
  }
  out.bound = 12.0 * std::pow(static_cast<double>(n1 + 1), -(1.0 - 1.0 / p.p())) * s1 + 3.0 * s2 +
              2.0 * static_cast<double>(np.n) * static_cast<double>(n1) * s3 + 3.0 * s4;
  return out;
}

// ------------------------------------------------------------------ staircase

std::int64_t StaircaseFamily::numerator(Index k, long r) const {
  if (k < 1 || k > k_max || r < 1) throw LabError(ErrorKind::invalid_argument, "staircase index out of range");
  if (r > r_max) return std::int64_t{1} << denominator_exponent;
  return numerators[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(r - 1)];
}

double StaircaseFamily::value(Index k, long r) const {
  return std::ldexp(static_cast<double>(numerator(k, r)), -denominator_exponent);
}

StaircaseFamily staircase(const std::vector<long>& r_schedule, Index k_max, long r_limit) {
  if (k_max < 1) throw LabError(ErrorKind::invalid_argument, "k_max must be positive");
  int top = 0;  // ceil(log2 k_max)
  while ((Index{1} << top) < k_max) ++top;
  if (top > 30) throw LabError(ErrorKind::invalid_argument, "k_max too large for exact storage");
  const std::size_t need = std::size_t{1} << (top + 1);
  if (r_schedule.size() < need) {
    std::ostringstream os;
    os << "schedule has " << r_schedule.size() << " entries, needs r(1..." << need << ")";
    throw LabError(ErrorKind::schedule_too_short, os.str());
  }
  for (std::size_t i = 0; i < r_schedule.size(); ++i)
    if (r_schedule[i] < 1 || (i > 0 && r_schedule[i] <= r_schedule[i - 1]))
      throw LabError(ErrorKind::invalid_argument, "schedule must be strictly increasing and positive");
  auto rk = [&](std::size_t k) { return r_schedule[k - 1]; };

  StaircaseFamily out;
  out.r_schedule = r_schedule;
  out.k_max = k_max;
  out.denominator_exponent = 2 * top + 1;
  const int D = out.denominator_exponent;
  long r_end = std::max<long>(r_limit, 1);
  for (int j = 0; j <= top; ++j) r_end = std::max(r_end, rk(std::size_t{1} << (j + 1)) + (1L << j));
  out.r_max = r_end;

  // t_{2^j}(r) as a numerator over 2^D
  std::vector<std::vector<std::int64_t>> pow2(static_cast<std::size_t>(top + 1));
  for (int j = 0; j <= top; ++j) {
    auto& row = pow2[static_cast<std::size_t>(j)];
    row.resize(static_cast<std::size_t>(r_end));
    const long start = rk(std::size_t{1} << (j + 1));
    const long len = 1L << j;
    for (long r = 1; r <= r_end; ++r) {
      long steps = std::clamp(r - start, 0L, len);
      row[static_cast<std::size_t>(r - 1)] = static_cast<std::int64_t>(steps) << (D - j);
    }
  }
  out.numerators.resize(static_cast<std::size_t>(k_max));
  for (Index k = 1; k <= k_max; ++k) {
    int j = 0;
    while ((Index{1} << (j + 1)) <= k) ++j;
    const std::int64_t s = k - (Index{1} << j);
    const std::int64_t w = std::int64_t{1} << j;
    auto& row = out.numerators[static_cast<std::size_t>(k - 1)];
    row.resize(static_cast<std::size_t>(r_end));
    for (long r = 1; r <= r_end; ++r) {
      const auto idx = static_cast<std::size_t>(r - 1);
      std::int64_t a = pow2[static_cast<std::size_t>(j)][idx];
      std::int64_t b = s ? pow2[static_cast<std::size_t>(j + 1)][idx] : 0;
      // exact: (w - s) a + s b is divisible by w since a, b carry 2^{D-j-1} factors and D >= 2j + 1
      row[idx] = ((w - s) * (a >> j) + s * (b >> j));
    }
  }
  return out;
}

StaircaseCheck check_staircase(const StaircaseFamily& s) {
  StaircaseCheck c;
  const int D = s.denominator_exponent;
  const std::int64_t one = std::int64_t{1} << D;
  for (Index k = 1; k <= s.k_max; ++k) {
    const auto& row = s.numerators[static_cast<std::size_t>(k - 1)];
    const std::int64_t grain = k >= D ? 1 : (std::int64_t{1} << (D - k));
    const std::int64_t step_cap = (std::int64_t{2} << D) / k;  // floor(2^{D+1} / k)
    for (long r = 1; r <= s.r_max; ++r) {
      std::int64_t v = row[static_cast<std::size_t>(r - 1)];
      if (v < 0 || v > one || v % grain != 0) c.dyadic = false;
      if (r <= s.r_schedule[static_cast<std::size_t>(k - 1)] && v != 0) c.zero_start = false;
      std::int64_t next = r < s.r_max ? row[static_cast<std::size_t>(r)] : one;
      if (next < v) c.monotone = false;
      if (std::abs(next - v) > step_cap) c.step_in_r = false;
      if (k < s.k_max) {
        std::int64_t up = s.numerators[static_cast<std::size_t>(k)][static_cast<std::size_t>(r - 1)];
        if (std::abs(up - v) > step_cap) c.step_in_k = false;
      }
    }
    if (row.back() != one) c.reaches_one = false;
  }
  return c;
}

}  // namespace lplab
