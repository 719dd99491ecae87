#pragma once

#include "lplab/core.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace lplab {

// Coordinates split at 0 = m_1 < m_2 < ... < m_{n+1} = N; block j (0-based)
// covers [m_j, m_{j+1}).
class BlockDecomposition {
 public:
  BlockDecomposition() = default;
  explicit BlockDecomposition(std::vector<Index> breakpoints, std::optional<double> inner = std::nullopt);
  static BlockDecomposition from_sizes(const std::vector<Index>& sizes,
                                       std::optional<double> inner = std::nullopt);

  const std::vector<Index>& breakpoints() const { return bp_; }
  std::optional<double> inner() const { return inner_; }
  std::size_t count() const { return bp_.size() - 1; }
  Index dim() const { return bp_.back(); }
  Index offset(std::size_t j) const { return bp_[j]; }
  Index size(std::size_t j) const { return bp_[j + 1] - bp_[j]; }
  std::size_t block_of(Index coordinate) const;
  IndexSet label() const;
  Matrix projection(std::size_t j) const;  // D_j

 private:
  std::vector<Index> bp_{0};
  std::optional<double> inner_;
};

class BlockMatrix {
 public:
  explicit BlockMatrix(std::vector<Index> sizes);
  static BlockMatrix identity(std::vector<Index> sizes);

  void set(std::size_t i, std::size_t j, Matrix block);
  const Matrix* get(std::size_t i, std::size_t j) const;
  const std::map<std::pair<std::size_t, std::size_t>, Matrix>& blocks() const { return blocks_; }
  const std::vector<Index>& sizes() const { return sizes_; }
  std::size_t bandwidth() const;

  BlockMatrix operator*(const BlockMatrix& o) const;
  BlockMatrix operator+(const BlockMatrix& o) const;

 private:
  std::vector<Index> sizes_;
  std::map<std::pair<std::size_t, std::size_t>, Matrix> blocks_;
};

struct QuasiTridiagResult {
  BlockDecomposition decomposition;
  std::vector<double> defects;  // stage r: worst off-band upper bracket
  std::vector<double> tolerances;
  bool exhausted = false;       // dimension ran out before every member got a stage
};
QuasiTridiagResult quasitridiagonalize(const std::vector<LpOperator>& family, PExponent p);

LpOperator assemble_phi(const BlockMatrix& m, const BlockDecomposition& dec);

struct TailSandwich {
  double s_upper = 0.0;  // sup over tail blocks of block upper brackets
  double s_lower = 0.0;  // same with lower brackets
  double t_upper = 0.0;  // ||Phi(M)(I - R)|| upper
  double t_lower = 0.0;  // lower, including block-witness values
  double bound = 0.0;    // (2r+1) s_upper
};
// Tail from block `tail_block` (0-based) on.
TailSandwich phi_tail_sandwich(const BlockMatrix& m, const BlockDecomposition& dec, PExponent p,
                               std::size_t tail_block);

bool is_block_tridiagonal(const Matrix& t, const BlockDecomposition& dec, double tol = 0.0);

struct TridiagNorm {
  double lower = 0.0;
  double upper = 0.0;
  double bound = 0.0;  // 3 max_j upper ||T D_j||
};
TridiagNorm tridiag_norm_check(const LpOperator& t, const BlockDecomposition& dec, PExponent p);

struct FlipDefect {
  double lower = 0.0;
  double upper = 0.0;
  double bound = 0.0;
};
// ts holds T_1..T_{n+1} for n blocks.
FlipDefect flip_defect(const std::vector<LpOperator>& ts, const BlockDecomposition& dec, PExponent p);

LpOperator tridiag_compress(const LpOperator& t, const BlockDecomposition& dec);

// min of the global upper bound and the block-majorant bound over dec
double decomposed_upper(const LpOperator& t, const BlockDecomposition& dec, PExponent p);

}  // namespace lplab
