#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lplab {

using Index = Eigen::Index;
using Scalar = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

enum class ErrorKind {
  invalid_argument,
  invalid_exponent,
  shape_mismatch,
  zero_vector,
  missing_inverse,
  on_curve,
  empty_list,
  window_too_small,
  infeasible,
  range_violation,
  not_tridiagonal,
  precondition,
  exact_mode_size,
  continuity_budget,
  spectral_gap,
  feasibility,
  non_isometry,
  non_partial_isometry,
  schedule_too_short,
  distortion,
};

const char* to_string(ErrorKind kind);

class LabError : public std::runtime_error {
 public:
  LabError(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Exponent pair 1 < p < inf with its conjugate q.
class PExponent {
 public:
  explicit PExponent(double p);
  static PExponent from_pair(double p, double q);

  double p() const { return p_; }
  double q() const { return q_; }
  PExponent dual() const { return PExponent(q_); }
  bool is_two() const { return p_ == 2.0; }

 private:
  double p_;
  double q_;
};

struct Block {
  Index offset = 0;
  Index size = 0;
  std::optional<double> inner;  // nullopt: plain coordinates
};

// Coordinate set of a finite space. Blocks may carry their own inner exponent,
// giving the mixed norm (sum_b ||x_b||_{r_b}^p)^{1/p}.
class IndexSet {
 public:
  enum class Kind { interval, window, cyclic, blocks };

  IndexSet() = default;
  static IndexSet interval(Index n);
  static IndexSet window(long first, Index n);
  static IndexSet cyclic(Index n);
  static IndexSet blocks(const std::vector<Index>& sizes,
                         std::optional<double> inner = std::nullopt);
  static IndexSet blocks(std::vector<Block> blocks);

  Kind kind() const { return kind_; }
  Index size() const { return size_; }
  long first() const { return first_; }
  const std::vector<Block>& block_list() const { return blocks_; }
  bool mixed() const;

  IndexSet dual() const;
  // Sub-range [offset, offset + n); inner-tagged blocks may not be cut.
  IndexSet slice(Index offset, Index n) const;
  std::string describe() const;

  bool operator==(const IndexSet& other) const;

 private:
  Kind kind_ = Kind::interval;
  Index size_ = 0;
  long first_ = 1;
  std::vector<Block> blocks_;
};

struct LpVector {
  Vector entries;
  IndexSet label;

  LpVector() = default;
  explicit LpVector(Vector v);
  LpVector(Vector v, IndexSet l);
  Index size() const { return entries.size(); }
};

struct LpOperator {
  Matrix matrix;
  IndexSet domain;
  IndexSet codomain;

  LpOperator() = default;
  explicit LpOperator(Matrix m);
  LpOperator(Matrix m, IndexSet dom, IndexSet cod);
  Index rows() const { return matrix.rows(); }
  Index cols() const { return matrix.cols(); }
};

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::string> tags;
  Vector witness;
  bool budget_exhausted = false;

  bool exact() const { return lower == upper; }
  double relative_gap() const;
  bool contains(double value, double tol) const;
};

struct NormEffort {
  int restarts = 8;
  int iterations = 200;
  double gap = 1e-6;
  std::uint64_t seed = 0x5eed5eedULL;
  std::vector<Vector> starts;  // extra starting vectors tried first
};

double lp_norm(const Vector& x, PExponent p);
double lp_norm(const Vector& x, const IndexSet& label, PExponent p);
double lp_norm(const LpVector& x, PExponent p);

// psi = J(x) in the dual space: psi(x) = ||x||^p, ||psi||_q = ||x||^{p-1}.
LpVector duality_map(const LpVector& x, PExponent p);
Scalar pairing(const LpVector& psi, const LpVector& x);

LpOperator adjoint(const LpOperator& t);
LpOperator compose(const LpOperator& a, const LpOperator& b);  // a * b
LpOperator identity(const IndexSet& label);

NormBracket op_norm_bounds(const LpOperator& t, PExponent p, const NormEffort& effort = {});
double op_norm_upper(const LpOperator& t, PExponent p);
// Upper bound from the majorant of block norms; breaks cut both sides (square operators).
double block_majorant_upper(const LpOperator& t, PExponent p, const std::vector<Index>& breaks);
double ratio(const LpOperator& t, const Vector& x, PExponent p);

struct TailNorms {
  double right = 0.0;  // ||T (I - R_n)||
  double left = 0.0;   // ||(I - R_n) T||
};
// Upper brackets; R_n projects onto the first n coordinates.
TailNorms tail_norms(const LpOperator& t, PExponent p, Index n);

double interpolation_bound(const Eigen::MatrixXd& majorant, PExponent p);

}  // namespace lplab
