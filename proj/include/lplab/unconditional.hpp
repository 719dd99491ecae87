#pragma once

#include "lplab/core.hpp"

#include <cstdint>
#include <vector>

namespace lplab {

// (y_1, ..., y_r) normed by E || sum delta_i y_i || over uniform signs.
struct SignedSumElement {
  std::vector<LpVector> components;

  SignedSumElement() = default;
  explicit SignedSumElement(std::vector<LpVector> ys);
  explicit SignedSumElement(const std::vector<Vector>& ys);
  std::size_t r() const { return components.size(); }
  Index dim() const { return components.front().size(); }
};

constexpr std::size_t kExactSignLimit = 14;

// Exact average over sign patterns; throws exact_mode_size above the limit.
double u_norm(const SignedSumElement& y, PExponent p);

struct UNormEstimate {
  double value = 0.0;
  double std_error = 0.0;
};
UNormEstimate u_norm_monte_carlo(const SignedSumElement& y, PExponent p, std::size_t samples, std::uint64_t seed);

// (E || sum delta_i y_i ||^p)^{1/p}
double u_moment(const SignedSumElement& y, PExponent p);

// Sign statistics of sum delta_i z_i for at most kExactSignLimit scalars.
struct SignMoments {
  double mean = 0.0;    // E |sum|
  double moment = 0.0;  // (E |sum|^p)^{1/p}
  double sup = 0.0;     // max over sign patterns
};
SignMoments sign_moments(const std::vector<Scalar>& z, PExponent p);

// Bracket on ||y||_u for any r, provided no coordinate is shared by more than
// kExactSignLimit components: || (E|Z_k|)_k ||_p <= E||Z|| <= (E||Z||^p)^{1/p}.
NormBracket u_norm_bracket(const SignedSumElement& y, PExponent p);

struct ScalarBoundCheck {
  double ratio = 0.0;   // best probe value of ||(c_i y_i)|| / ||y||
  double bound = 0.0;   // 2 max |c_i|
  double sharp = 0.0;   // max |c_i| when every c_i is real, else the bound
};
ScalarBoundCheck u_scalar_bound_check(const std::vector<Scalar>& cs, int probes, PExponent p,
                                      Index dim = 3, std::uint64_t seed = 1);

struct RepeatNormCheck {
  double ratio = 0.0;           // best random probe of (T + ... + T)_u
  double diagonal_ratio = 0.0;  // probe (w, ..., w) at the norm witness
  double lower = 0.0;
  double upper = 0.0;
};
RepeatNormCheck u_repeat_norm_check(const LpOperator& t, std::size_t r, int probes, PExponent p,
                                    std::uint64_t seed = 1);

double khintchine_ratio(const std::vector<Scalar>& vs, PExponent p);

struct SDistortion {
  double s_norm = 0.0;
  double u_norm = 0.0;
  double distortion = 0.0;         // ||Sy|| / ||y||_u
  double khintchine_factor = 0.0;  // ||Sy|| / (E||.||^p)^{1/p}
  double kahane_factor = 0.0;      // (E||.||^p)^{1/p} / E||.||
};
SDistortion s_isomorphism_distortion(const SignedSumElement& y, PExponent p);

struct InterchangeBound {
  double lhs = 0.0;          // || sum T_i y_i ||
  double sign_sup = 0.0;     // sup_delta upper || sum delta_i T_i |_{Y0} ||
  double u = 0.0;            // ||y||_u
  double rhs = 0.0;          // sign_sup * u
  double variant_lhs = 0.0;  // ||(T_1 y_1, ..., T_r y_r)||_u
};
// support lists the coordinates spanning Y0.
InterchangeBound u_interchange_bound(const std::vector<LpOperator>& ts, const SignedSumElement& y,
                                     const std::vector<Index>& support, PExponent p);

}  // namespace lplab
