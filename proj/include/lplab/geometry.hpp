#pragma once

#include "lplab/core.hpp"
#include "lplab/zoo.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace lplab {

using Point = Eigen::VectorXd;

// Open boxes prod_i ((j_i - 1)/n, (j_i + 1)/n) that meet the input set.
struct BoxCover {
  int d = 1;
  Index n = 1;
  double eps = 0.0;
  std::vector<std::vector<long>> boxes;
  std::map<std::vector<long>, std::size_t> lookup;

  std::size_t size() const { return boxes.size(); }
  bool contains(std::size_t box, const Point& v) const;
  std::vector<std::size_t> members(const Point& v) const;  // boxes containing v
  double diameter() const;                                 // Euclidean, same for every box
  Point centre(std::size_t box) const;
};

BoxCover box_cover(const std::vector<Point>& points, double eps);
// Same cover with the grid parameter given directly.
BoxCover box_cover_n(const std::vector<Point>& points, Index n);

// Product tents with half-width 0.6/n normalized to sum one; plateau bumps equal
// to 1 within 0.6/n of the centre and vanishing at the box boundary.
struct PartitionOfUnity {
  BoxCover cover;
  std::vector<Point> anchors;  // w_i: input point nearest the centre of box i

  std::size_t size() const { return cover.size(); }
  std::vector<std::pair<std::size_t, double>> f(const Point& v) const;  // nonzero f_i(v)
  std::vector<std::pair<std::size_t, double>> g(const Point& v) const;  // nonzero g_i(v)
  double f(std::size_t i, const Point& v) const;
  double g(std::size_t i, const Point& v) const;
};

PartitionOfUnity partition_of_unity(const std::vector<Point>& points, double eps);
PartitionOfUnity partition_from_cover(const std::vector<Point>& points, BoxCover cover);

// The six partition properties measured on a sample; each field is a worst case.
struct PartitionCheck {
  double range_violation = 0.0;   // how far any f_i or g_i leaves [0,1]
  double sum_f_error = 0.0;       // max |sum_i f_i - 1|
  double sum_g_max = 0.0;         // max sum_i g_i
  double support_diameter = 0.0;  // of sampled supp g_i
  bool every_g_nonzero = true;
  double plateau_violation = 0.0;  // max |g_i - 1| where f_i > 0
  int max_multiplicity = 0;
};
PartitionCheck check_partition(const PartitionOfUnity& pu, const std::vector<Point>& sample);

// Multilinear interpolation of values on the uniform grid with G+1 nodes per
// axis of [0,1]^d.
class GridFunction {
 public:
  GridFunction(int d, Index g, std::vector<Scalar> values);
  static GridFunction sample(int d, Index g, const std::function<Scalar(const Point&)>& h);
  static GridFunction constant(int d, Scalar c);

  Scalar operator()(const Point& v) const;
  int dim() const { return d_; }

 private:
  int d_;
  Index g_;
  std::vector<Scalar> values_;
};

struct IntertwinerReport {
  double ew_defect = 0.0;                // max entry of |EW - I|
  NormBracket w_norm;                    // ||W|| from l^p to the u-sum
  double w_bound = 0.0;                  // ||psi|| + 1
  NormBracket e_norm;                    // ||E|| from the u-sum to l^p
  double e_bound = 0.0;                  // 2^d ||psi|| + 1
  std::vector<NormBracket> w_defect;     // ||W psi(h) - eta(h) W||, one per h
  std::vector<NormBracket> e_defect;     // ||E eta(h) - psi(h) E||
};

// psi(h) = h(D_1, ..., D_d) on commuting real diagonals with spectrum in [0,1]^d.
struct PartitionIntertwiner {
  PartitionOfUnity partition;
  std::vector<Point> spectrum;  // v_k = (D_1(k), ..., D_d(k))
  double gamma = 0.0;
  std::vector<Vector> f_diag;   // psi(f_i) as weights over coordinates
  std::vector<Vector> g_diag;   // psi(g_i)
  IntertwinerReport report;

  std::size_t r() const { return f_diag.size(); }
  Index size() const { return static_cast<Index>(spectrum.size()); }
  std::vector<Vector> apply_W(const Vector& x) const;
  Vector apply_E(const std::vector<Vector>& ys) const;
  LpOperator W() const;  // dense rN x N; the codomain carries the u-norm
  LpOperator E() const;
};

constexpr Index kContinuityGridLimit = 4096;

PartitionIntertwiner partition_intertwiner(const std::vector<DiagonalOperator>& ds,
                                           const std::vector<GridFunction>& omega, double eps, PExponent p,
                                           int probes = 100, std::uint64_t seed = 1);

}  // namespace lplab
