#include "lplab/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lplab {

BlockDecomposition::BlockDecomposition(std::vector<Index> breakpoints, std::optional<double> inner)
    : bp_(std::move(breakpoints)), inner_(inner) {
  if (bp_.size() < 2 || bp_.front() != 0)
    throw LabError(ErrorKind::invalid_argument, "breakpoints must start at 0 and have a block");
  for (std::size_t i = 1; i < bp_.size(); ++i)
    if (bp_[i] <= bp_[i - 1]) throw LabError(ErrorKind::invalid_argument, "breakpoints must increase");
}

BlockDecomposition BlockDecomposition::from_sizes(const std::vector<Index>& sizes, std::optional<double> inner) {
  std::vector<Index> bp{0};
  for (Index s : sizes) bp.push_back(bp.back() + s);
  return BlockDecomposition(bp, inner);
}

std::size_t BlockDecomposition::block_of(Index c) const {
  auto it = std::upper_bound(bp_.begin(), bp_.end(), c);
  return static_cast<std::size_t>(it - bp_.begin()) - 1;
}

IndexSet BlockDecomposition::label() const {
  std::vector<Index> sizes;
  for (std::size_t j = 0; j < count(); ++j) sizes.push_back(size(j));
  return IndexSet::blocks(sizes, inner_);
}

Matrix BlockDecomposition::projection(std::size_t j) const {
  Matrix d = Matrix::Zero(dim(), dim());
  for (Index c = offset(j); c < offset(j) + size(j); ++c) d(c, c) = 1.0;
  return d;
}

// ---------------------------------------------------------------- BlockMatrix

BlockMatrix::BlockMatrix(std::vector<Index> sizes) : sizes_(std::move(sizes)) {}

BlockMatrix BlockMatrix::identity(std::vector<Index> sizes) {
  BlockMatrix m(sizes);
  for (std::size_t i = 0; i < sizes.size(); ++i) m.set(i, i, Matrix::Identity(sizes[i], sizes[i]));
  return m;
}

void BlockMatrix::set(std::size_t i, std::size_t j, Matrix block) {
  if (i >= sizes_.size() || j >= sizes_.size() || block.rows() != sizes_[i] || block.cols() != sizes_[j])
    throw LabError(ErrorKind::shape_mismatch, "block shape does not match the decomposition");
  blocks_[{i, j}] = std::move(block);
}

const Matrix* BlockMatrix::get(std::size_t i, std::size_t j) const {
  auto it = blocks_.find({i, j});
  return it == blocks_.end() ? nullptr : &it->second;
}

std::size_t BlockMatrix::bandwidth() const {
  std::size_t r = 0;
  for (const auto& [ij, b] : blocks_) {
    if (b.cwiseAbs().maxCoeff() == 0.0) continue;
    std::size_t d = ij.first > ij.second ? ij.first - ij.second : ij.second - ij.first;
    r = std::max(r, d);
  }
  return r;
}

BlockMatrix BlockMatrix::operator*(const BlockMatrix& o) const {
  if (sizes_ != o.sizes_) throw LabError(ErrorKind::shape_mismatch, "block structures differ");
  BlockMatrix out(sizes_);
  for (const auto& [ik, a] : blocks_) {
    for (const auto& [kj, b] : o.blocks_) {
      if (ik.second != kj.first) continue;
      auto key = std::make_pair(ik.first, kj.second);
      auto it = out.blocks_.find(key);
      if (it == out.blocks_.end()) {
        out.blocks_[key] = a * b;
      } else {
        it->second += a * b;
      }
    }
  }
  return out;
}

BlockMatrix BlockMatrix::operator+(const BlockMatrix& o) const {
  if (sizes_ != o.sizes_) throw LabError(ErrorKind::shape_mismatch, "block structures differ");
  BlockMatrix out = *this;
  for (const auto& [ij, b] : o.blocks_) {
    auto it = out.blocks_.find(ij);
    if (it == out.blocks_.end()) {
      out.blocks_[ij] = b;
    } else {
      it->second += b;
    }
  }
  return out;
}

// ---------------------------------------------------------------- operations

double decomposed_upper(const LpOperator& t, const BlockDecomposition& dec, PExponent p) {
  return std::min(op_norm_upper(t, p), block_majorant_upper(t, p, dec.breakpoints()));
}

QuasiTridiagResult quasitridiagonalize(const std::vector<LpOperator>& family, PExponent p) {
  if (family.empty()) throw LabError(ErrorKind::empty_list, "empty family");
  const Index n = family.front().rows();
  for (const auto& x : family)
    if (x.rows() != n || x.cols() != n) throw LabError(ErrorKind::shape_mismatch, "family members differ in size");
  const IndexSet label = family.front().domain;

  // ||R_a X (I - R_b)|| and ||(I - R_b) X R_a||
  auto defect = [&](const Matrix& x, Index a, Index b) {
    if (a == 0 || b >= n) return 0.0;
    Matrix up = Matrix::Zero(n, n);
    up.block(0, b, a, n - b) = x.block(0, b, a, n - b);
    Matrix lo = Matrix::Zero(n, n);
    lo.block(b, 0, n - b, a) = x.block(b, 0, n - b, a);
    return std::max(op_norm_upper(LpOperator(up, label, label), p),
                    op_norm_upper(LpOperator(lo, label, label), p));
  };

  QuasiTridiagResult out;
  std::vector<Index> bp{0, std::min<Index>(1, n)};
  out.defects.push_back(0.0);
  out.tolerances.push_back(0.5);
  for (std::size_t r = 2; bp.back() < n; ++r) {
    const double tol = std::ldexp(1.0, -static_cast<int>(r));
    const Index mr = bp.back();
    std::size_t members = std::min(r, family.size());
    Index chosen = n;
    double achieved = 0.0;
    for (Index m = mr + 1; m <= n; ++m) {
      double worst = 0.0;
      for (std::size_t i = 0; i < members && worst <= tol; ++i)
        worst = std::max(worst, defect(family[i].matrix, mr, m));
      if (worst <= tol) {
        chosen = m;
        achieved = worst;
        break;
      }
    }
    bp.push_back(chosen);
    out.defects.push_back(achieved);
    out.tolerances.push_back(tol);
  }
  out.decomposition = BlockDecomposition(bp);
  out.exhausted = out.decomposition.count() < family.size();
  return out;
}

LpOperator assemble_phi(const BlockMatrix& m, const BlockDecomposition& dec) {
  if (m.sizes().size() != dec.count()) throw LabError(ErrorKind::shape_mismatch, "block count mismatch");
  for (std::size_t j = 0; j < dec.count(); ++j)
    if (m.sizes()[j] != dec.size(j)) throw LabError(ErrorKind::shape_mismatch, "block size mismatch");
  Matrix out = Matrix::Zero(dec.dim(), dec.dim());
  for (const auto& [ij, b] : m.blocks())
    out.block(dec.offset(ij.first), dec.offset(ij.second), b.rows(), b.cols()) += b;
  IndexSet label = dec.label();
  return LpOperator(out, label, label);
}

TailSandwich phi_tail_sandwich(const BlockMatrix& m, const BlockDecomposition& dec, PExponent p,
                               std::size_t tail_block) {
  if (tail_block >= dec.count()) throw LabError(ErrorKind::invalid_argument, "tail index out of range");
  LpOperator phi = assemble_phi(m, dec);
  const IndexSet label = dec.label();
  TailSandwich out;
  LpOperator tail = phi;
  tail.matrix.leftCols(dec.offset(tail_block)).setZero();

  double witness = 0.0;
  for (const auto& [ij, b] : m.blocks()) {
    if (ij.second < tail_block || b.cwiseAbs().maxCoeff() == 0.0) continue;
    LpOperator blk(b, label.slice(dec.offset(ij.second), dec.size(ij.second)),
                   label.slice(dec.offset(ij.first), dec.size(ij.first)));
    NormBracket nb = op_norm_bounds(blk, p);
    out.s_upper = std::max(out.s_upper, nb.upper);
    out.s_lower = std::max(out.s_lower, nb.lower);
    // the block witness, embedded in column block j, bounds the tail from below
    Vector x = Vector::Zero(dec.dim());
    x.segment(dec.offset(ij.second), dec.size(ij.second)) = nb.witness;
    witness = std::max(witness, ratio(tail, x, p));
  }
  NormBracket tb = op_norm_bounds(tail, p);
  out.t_lower = std::max(tb.lower, witness);
  out.t_upper = std::min(tb.upper, block_majorant_upper(tail, p, dec.breakpoints()));
  out.bound = static_cast<double>(2 * m.bandwidth() + 1) * out.s_upper;
  return out;
}

bool is_block_tridiagonal(const Matrix& t, const BlockDecomposition& dec, double tol) {
  if (t.rows() != dec.dim() || t.cols() != dec.dim()) throw LabError(ErrorKind::shape_mismatch, "operator size");
  for (std::size_t i = 0; i < dec.count(); ++i)
    for (std::size_t j = 0; j < dec.count(); ++j) {
      if ((i > j ? i - j : j - i) < 2) continue;
      if (t.block(dec.offset(i), dec.offset(j), dec.size(i), dec.size(j)).cwiseAbs().maxCoeff() > tol)
        return false;
    }
  return true;
}

TridiagNorm tridiag_norm_check(const LpOperator& t, const BlockDecomposition& dec, PExponent p) {
  if (!is_block_tridiagonal(t.matrix, dec))
    throw LabError(ErrorKind::not_tridiagonal, "operator has mass outside the block band");
  TridiagNorm out;
  NormBracket b = op_norm_bounds(t, p);
  out.lower = b.lower;
  out.upper = std::min(b.upper, block_majorant_upper(t, p, dec.breakpoints()));
  double worst = 0.0;
  for (std::size_t j = 0; j < dec.count(); ++j) {
    LpOperator tj = t;
    tj.matrix = t.matrix * dec.projection(j);
    worst = std::max(worst, decomposed_upper(tj, dec, p));
  }
  out.bound = 3.0 * worst;
  return out;
}

FlipDefect flip_defect(const std::vector<LpOperator>& ts, const BlockDecomposition& dec, PExponent p) {
  const std::size_t n = dec.count();
  if (ts.size() != n + 1) throw LabError(ErrorKind::shape_mismatch, "need T_1..T_{n+1}");
  for (const auto& t : ts)
    if (t.rows() != dec.dim() || t.cols() != dec.dim()) throw LabError(ErrorKind::shape_mismatch, "operator size");
  if (n >= 2 && (ts[0].matrix - ts[1].matrix).cwiseAbs().maxCoeff() > 0.0)
    throw LabError(ErrorKind::precondition, "T_1 must equal T_2");
  for (std::size_t i = 0; i < n; ++i)
    if (!is_block_tridiagonal(ts[i].matrix, dec))
      throw LabError(ErrorKind::precondition, "every T_i must be block-tridiagonal");
  const IndexSet& label = ts[0].domain;
  Matrix lhs = Matrix::Zero(dec.dim(), dec.dim());
  for (std::size_t j = 0; j < n; ++j) {
    Matrix d = dec.projection(j);
    lhs += d * ts[j].matrix - ts[j].matrix * d;
  }
  FlipDefect out;
  NormBracket b = op_norm_bounds(LpOperator(lhs, label, label), p);
  out.lower = b.lower;
  out.upper = std::min(b.upper, block_majorant_upper(LpOperator(lhs, label, label), p, dec.breakpoints()));
  double sup = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    Matrix d = dec.projection(j);
    LpOperator a((ts[j - 1].matrix - ts[j].matrix) * d, label, label);
    LpOperator c((ts[j + 1].matrix - ts[j].matrix) * d, label, label);
    sup = std::max(sup, decomposed_upper(a, dec, p) + decomposed_upper(c, dec, p));
  }
  out.bound = 3.0 * sup;
  return out;
}

LpOperator tridiag_compress(const LpOperator& t, const BlockDecomposition& dec) {
  if (t.rows() != dec.dim() || t.cols() != dec.dim()) throw LabError(ErrorKind::shape_mismatch, "operator size");
  Matrix out = Matrix::Zero(dec.dim(), dec.dim());
  const std::size_t n = dec.count();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t lo = j == 0 ? 0 : j - 1;
    std::size_t hi = std::min(n - 1, j + 1);
    Index r0 = dec.offset(lo);
    Index rn = dec.offset(hi) + dec.size(hi) - r0;
    out.block(r0, dec.offset(j), rn, dec.size(j)) = t.matrix.block(r0, dec.offset(j), rn, dec.size(j));
  }
  return LpOperator(out, t.domain, t.codomain);
}

}  // namespace lplab
