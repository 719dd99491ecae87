#pragma once

#include "lplab/core.hpp"
#include "lplab/zoo.hpp"

#include <cstdint>
#include <vector>

namespace lplab {

// lower(||f(B_N)||_p) / max_j |f(w_N^j)|; the denominator is the exact l^2 norm.
struct FixmanRatio {
  double ratio = 0.0;
  double lower = 0.0;
  double symbol_max = 0.0;
  double circle_sup = 0.0;
  double circle_ratio = 0.0;  // lower / sup over the grid on the circle
  Vector witness;             // unit vector attaining `lower`
};
FixmanRatio fixman_ratio(const LaurentPolynomial& f, Index n, PExponent p, const NormEffort& effort = {});

struct FixmanResult {
  LaurentPolynomial best;
  FixmanRatio score;
  std::vector<double> history;  // best ratio after each trial
  int best_trial = -1;
};
FixmanResult fixman_search(PExponent p, int degree, Index n, int trials, std::uint64_t seed);

struct DiagObstruction {
  double eps = 0.0;         // min gap of T = 1/n
  double commutator = 0.0;  // upper ||DL - LT||
  double probe_distortion = 0.0;
  bool certified_beta = false;  // upper ||L|| <= beta and upper ||L^+|| <= beta
  double lhs1 = 0.0, rhs1 = 0.0;
  double lhs2 = 0.0, rhs2 = 0.0;
  bool holds1() const { return lhs1 <= rhs1 + 1e-9; }
  bool holds2() const { return lhs2 <= rhs2 + 1e-9; }
};
// L: l^2([1,n]) -> l^p(M) as an M x n matrix; D holds M diagonal entries.
DiagObstruction diag_obstruction_check(Index n, PExponent p, double beta, const Vector& d, const Matrix& l,
                                       std::uint64_t seed = 1);

// (+)_{r=1}^{r_max} diag(1/r, ..., r/r) on the l^p sum of l^2([1,r]).
LpOperator staircase_witness(Index r_max, PExponent p);

enum class BlockEmbedding { identity, rademacher };

struct WitnessRow {
  Index r = 0;
  double beta = 0.0;        // certified distortion of L J_r
  double w_min = 0.0;       // min over the D family of upper ||D L J_r - L J_r T_r||
  double lower_bound = 0.0; // max over n | r of the two implied lower bounds on w_r
  bool holds = true;        // lower_bound <= w for every D in the family
};
// max(||L_r||, ||L_r^{-1}||) for the block embedding, from moment comparisons
double embedding_distortion(BlockEmbedding embedding, Index r, PExponent p);

// rademacher: (L x)_delta = 2^{-r/p} sum_i delta_i x_i into l^p(2^r), r <= 10.
std::vector<WitnessRow> staircase_obstruction(Index r_max, PExponent p, BlockEmbedding embedding, int grid,
                                              std::uint64_t seed);

}  // namespace lplab
