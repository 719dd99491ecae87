#pragma once

#include "lplab/core.hpp"
#include "lplab/tridiag.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace lplab {

struct RieszOptions {
  int points = 256;
  double C = 1.0;              // declared bound on ||E||
  bool require_defect = true;  // enforce ||E^2 - E|| < 1/16 and ||E|| <= C
  double p = 2.0;              // exponent of the norms in those checks
};

// (1/2 pi i) contour integral of (zI - E)^{-1} over |z - 1| = 1/2, trapezoidal.
LpOperator riesz_idempotent(const LpOperator& e, const RieszOptions& opt = {});

// Sufficient conditions for the splitting similarity, with
// f = 16 (1/2 + beta^2) beta^2 eps.
struct SplitConstants {
  double eps = 0.0;
  double beta = 1.0;
  double f = 0.0;
  double denom = 0.0;     // (1 - eps)/beta - beta (eps + f)
  double s_bound = 0.0;   // bound on ||S||
  double s_inv_bound = 0.0;
  double G = 0.0;         // ||K|| <= G (||T2|| + 1)
  std::string violated;   // empty when feasible
  bool feasible() const { return violated.empty(); }
};
SplitConstants split_constants(double eps, double beta);

struct SplitResult {
  LpOperator Q;
  LpOperator S;          // Y2 -> Y1 (+) Y3, Y3 kept inside Y2 coordinates
  LpOperator S_inverse;  // [QL, I - Q]
  LpOperator T3;         // (I - Q) T2 (I - Q)
  LpOperator K;
  double condition = 0.0;  // upper ||S|| * upper ||S^{-1}||
  double inverse_defect = 0.0;
  double similarity_defect = 0.0;  // max entry of S(T2 + K)S^{-1} - T1 (+) T3
  double eps = 0.0;                // upper ||RL - I||
  double commutator = 0.0;         // max of the two intertwining defects (upper)
  SplitConstants constants;        // at eps
  std::optional<double> k_bound;   // G (||T2|| + 1) at max(eps, commutator), when feasible
  double k_lower = 0.0;
  Index y3_dim = 0;
};
SplitResult split_similarity(const LpOperator& l, const LpOperator& r, const LpOperator& t1, const LpOperator& t2,
                             double beta, PExponent p);

bool is_isometry(const Matrix& v, PExponent p, double tol = 1e-10);

// Rows are [block i of Y^(n+n1)] stacked; the codomain is plain l^p.
LpOperator neutral_embed_L(const LpOperator& v, const BlockDecomposition& dec, Index n1, PExponent p);
// e_right_inverse witnesses surjectivity: E * e_right_inverse = I.
LpOperator neutral_project_R(const LpOperator& e, const LpOperator& e_right_inverse, const BlockDecomposition& dec,
                             Index n1, PExponent p);

struct NeutralCheck {
  double lower = 0.0;  // lower bracket of the commutator
  double upper = 0.0;
  double bound = 0.0;  // right-hand side assembled from upper brackets
};
// ts and tildes have n + n1 entries. With ks, the compact-correction form is
// used (n, n1 >= 2 and K_1 = ... = K_{n1+1} = 0).
NeutralCheck neutral_L_check(const LpOperator& v, const BlockDecomposition& dec, Index n1,
                             const std::vector<LpOperator>& ts, const std::vector<LpOperator>& tildes,
                             const std::optional<std::vector<LpOperator>>& ks, PExponent p);
NeutralCheck neutral_R_check(const LpOperator& e, const LpOperator& e_right_inverse, const BlockDecomposition& dec,
                             Index n1, const std::vector<LpOperator>& ts, const std::vector<LpOperator>& tildes,
                             const std::optional<std::vector<LpOperator>>& ks, PExponent p);

// t_k(r) stored as exact numerators over 2^denominator_exponent.
struct StaircaseFamily {
  std::vector<long> r_schedule;  // r(1), r(2), ...
  Index k_max = 0;
  int denominator_exponent = 0;
  long r_max = 0;                          // values stored for 1 <= r <= r_max
  std::vector<std::vector<std::int64_t>> numerators;  // [k-1][r-1]

  std::int64_t numerator(Index k, long r) const;
  double value(Index k, long r) const;
};

StaircaseFamily staircase(const std::vector<long>& r_schedule, Index k_max, long r_limit = 0);

struct StaircaseCheck {
  bool dyadic = true;       // t_k(r) in {0, ..., 2^k} / 2^k
  bool step_in_k = true;    // |t_{k+1}(r) - t_k(r)| <= 2/k
  bool step_in_r = true;    // |t_k(r+1) - t_k(r)| <= 2/k
  bool monotone = true;     // nondecreasing in r
  bool zero_start = true;   // t_k(r) = 0 for r <= r(k)
  bool reaches_one = true;  // t_k = 1 at the end of the range
  bool all() const { return dyadic && step_in_k && step_in_r && monotone && zero_start && reaches_one; }
};
StaircaseCheck check_staircase(const StaircaseFamily& s);

}  // namespace lplab
