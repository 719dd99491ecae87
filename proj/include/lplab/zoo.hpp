#pragma once

#include "lplab/core.hpp"

#include <map>
#include <optional>
#include <vector>

namespace lplab {

enum class ShiftKind { unilateral, backward, bilateral_window, circular };

// unilateral: e_j -> e_{j+1} (last one dies); backward: e_j -> e_{j-1};
// bilateral_window: the bilateral shift cut to a window of Z (nilpotent);
// circular: B_N on Z/NZ.
LpOperator make_shift(ShiftKind kind, Index size);

struct DiagonalOperator {
  Vector weights;
  IndexSet label;

  DiagonalOperator() = default;
  explicit DiagonalOperator(Vector w);
  DiagonalOperator(Vector w, IndexSet l);
  LpOperator to_operator() const;
  std::vector<Index> support() const;
  Index size() const { return weights.size(); }
};

// A << B: B equals 1 on the support of A.
bool ll_less(const DiagonalOperator& a, const DiagonalOperator& b, double tol = 0.0);

class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  explicit LaurentPolynomial(std::map<int, Scalar> coeffs);

  Scalar operator()(Scalar z) const;
  const std::map<int, Scalar>& coefficients() const { return c_; }
  int min_power() const;
  int max_power() const;
  int degree() const;            // max |k|
  double derivative_mass() const;  // sum |k c_k|
  bool has_negative_powers() const { return min_power() < 0; }
  LaurentPolynomial operator*(const LaurentPolynomial& o) const;

 private:
  std::map<int, Scalar> c_;
};

LpOperator laurent_apply(const LaurentPolynomial& f, const LpOperator& t,
                         const std::optional<LpOperator>& t_inverse = std::nullopt);

struct CircleSup {
  double value = 0.0;  // max over the grid
  double upper = 0.0;  // guaranteed sup bound
  double argument = 0.0;
  int grid = 0;
};
CircleSup laurent_circle_sup(const LaurentPolynomial& f, int grid = 4096);

int winding_number(const LaurentPolynomial& f, Scalar lambda, int grid = 4096);
inline int fredholm_index(const LaurentPolynomial& f, Scalar lambda, int grid = 4096) {
  return -winding_number(f, lambda, grid);
}

// min_n sum_i |u_{n,i} - lambda_i|^p
double joint_diag_infimum(const std::vector<DiagonalOperator>& ds,
                          const std::vector<Scalar>& lambdas, PExponent p);

// Successor map on the blocks given by breakpoints (0 = m_1 < ... = N), l^2 inside l^p.
LpOperator explicit_T0(const std::vector<Index>& breakpoints, PExponent p);

// circulant f(B_N)
LpOperator circulant(const LaurentPolynomial& f, Index n);
Vector fourier_vector(Index n, Index j);
struct SymbolMax {
  double value = 0.0;
  Index index = 0;
};
SymbolMax circulant_symbol_max(const LaurentPolynomial& f, Index n);  // max_j |f(w^j)|
NormBracket circulant_norm_bounds(const LaurentPolynomial& f, Index n, PExponent p,
                                  NormEffort effort = {});

struct SandwichReport {
  double tail_upper = 0.0;
  double sup_upper = 0.0;
  double bound = 0.0;  // 3 sup
  bool banded = false;  // every tail block at least as long as deg f
};
// ||f(T0)(I - R)|| for the tail starting at block `tail_block` (0-based).
SandwichReport t0_laurent_sandwich(const LaurentPolynomial& f, const std::vector<Index>& breakpoints,
                                   PExponent p, std::size_t tail_block);

}  // namespace lplab
