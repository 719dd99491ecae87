#pragma once

#include "lplab/core.hpp"
#include "lplab/zoo.hpp"

#include <optional>
#include <vector>

namespace lplab {

struct FolnerIntertwiner {
  LpOperator V;  // l^p(Z/nZ) -> l^p(window)
  LpOperator E;  // l^p(window) -> l^p(Z/nZ)
  Index n = 1;
  Index k = 1;
  IndexSet window;
};

// Smallest window that holds every translate g F_k padded by one F_k per side.
IndexSet folner_window(Index n, Index k);
FolnerIntertwiner folner_pair(Index n, Index k, const IndexSet& window, PExponent p);

struct IntertwiningDefect {
  double translate = 0.0;  // max |rho(s) v_{gF} - v_{(g+s)F}| over g
  double coset = 0.0;      // upper ||rho(s) V - V rho_H(s)||, boundary cosets included
};
IntertwiningDefect folner_intertwining_defect(const FolnerIntertwiner& f, long s, PExponent p);

// ||x*_{gF_k} - x*_{(g+m)F_k}||_q, m a multiple of n
double folner_functional_gap(Index n, Index k, long m, PExponent p);

struct MultiQuotient {
  LpOperator V;  // l^p(window) -> (+)_stages l^p(Z/n_i Z)
  std::vector<Index> moduli;
  IndexSet window;
  // 1-based stage where g1, g2 first fall in different cosets
  std::optional<std::size_t> separation_stage(long g1, long g2) const;
};
MultiQuotient multi_quotient_V(const std::vector<Index>& moduli, const IndexSet& window, PExponent p);

struct ApproximateUnit {
  std::vector<DiagonalOperator> stages;
  std::vector<double> defects;
  std::vector<Index> starts;   // Cesaro window (start, width) in exhaustion rank
  std::vector<Index> widths;
  bool exhausted = false;      // stopped before all tolerances were used
  double best_unmet_defect = 0.0;
};

// Exhaustion rank of each coordinate (1-based): left to right on intervals,
// centre-out on windows of Z and on Z/NZ.
std::vector<Index> exhaustion_rank(const IndexSet& label);

ApproximateUnit quasicentral_unit(const std::vector<LpOperator>& family, const std::vector<double>& eps,
                                  PExponent p,
                                  const std::optional<std::vector<Index>>& support_floors = std::nullopt);

struct PinchResult {
  double difference_ratio = 0.0;  // sum ||(A_n - A_{n-1})x||^p / ||x||^p
  double block_ratio = 0.0;       // ||sum x_n||^p / sum ||x_n||^p
};
PinchResult pinch_check(const ApproximateUnit& unit, const LpVector& x, const std::vector<LpVector>& blocks,
                        PExponent p);

// ||[A, B]|| for diagonal A
NormBracket commutator_bounds(const DiagonalOperator& a, const LpOperator& b, PExponent p);

}  // namespace lplab
