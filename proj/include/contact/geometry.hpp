#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "contact/expr.hpp"
#include "contact/rng.hpp"

namespace contact {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Interval {
  double lo;
  double hi;
};

// Coordinate box. `sampling` is the sub-box used when drawing random points;
// it equals the domain unless the domain is unbounded or very large.
class Chart {
 public:
  Chart() = default;
  Chart(std::vector<std::string> coords, std::vector<Interval> domain,
        std::vector<Interval> sampling = {});

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<Interval>& domain() const { return domain_; }
  const std::vector<Interval>& sampling() const { return sampling_; }
  bool contains(const Vec& p) const;
  void require_contains(const Vec& p) const;

 private:
  std::vector<std::string> coords_;
  std::vector<Interval> domain_;
  std::vector<Interval> sampling_;
};

// Symmetric tensor field given by expressions on the upper triangle.
class MetricField {
 public:
  MetricField() = default;
  // upper[i][j - i] holds g_ij for j >= i.
  MetricField(Chart chart, std::vector<std::vector<Expression>> upper);
  static MetricField from_strings(Chart chart, const std::vector<std::vector<std::string>>& upper);

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  const Expression& component(int i, int j) const;
  Mat value(const Vec& p) const;
  // Jets of g_ij for all i <= j, in row-major upper-triangle order.
  std::vector<Jet> jets(const Vec& p, int order) const;
  static int packed(int i, int j, int d);

 private:
  Chart chart_;
  std::vector<Expression> upper_;
};

class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int d) : d_(d), a_(static_cast<std::size_t>(d) * d * d, 0.0) {}
  double& operator()(int i, int j, int k) { return a_[(i * d_ + j) * d_ + k]; }
  double operator()(int i, int j, int k) const { return a_[(i * d_ + j) * d_ + k]; }
  int dim() const { return d_; }

 private:
  int d_ = 0;
  std::vector<double> a_;
};

class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int d) : d_(d), a_(static_cast<std::size_t>(d) * d * d * d, 0.0) {}
  double& operator()(int i, int j, int k, int l) { return a_[((i * d_ + j) * d_ + k) * d_ + l]; }
  double operator()(int i, int j, int k, int l) const {
    return a_[((i * d_ + j) * d_ + k) * d_ + l];
  }
  int dim() const { return d_; }

 private:
  int d_ = 0;
  std::vector<double> a_;
};

// Metric, connection and curvature at one point. gamma(k,i,j) = Γ^k_ij,
// dg(k,i,j) = ∂_k g_ij, riemann(l,i,j,k) = (R(∂_j,∂_k)∂_i)^l with
// R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z.
struct PointGeometry {
  Vec point;
  Mat g;
  Mat g_inv;
  Tensor3 dg;
  Tensor3 gamma;
  Tensor4 riemann;

  int dim() const { return static_cast<int>(point.size()); }
  double inner(const Vec& u, const Vec& v) const { return u.dot(g * v); }
  double norm(const Vec& u) const;
  // Γ^k_ij u^i v^j
  Vec gamma_contract(const Vec& u, const Vec& v) const;
  // M(k,j) = Γ^k_ij u^i, so that ∇_u V = (∂V) u + M V.
  Mat gamma_along(const Vec& u) const;
  Vec curvature(const Vec& x, const Vec& y, const Vec& z) const;
  // ⟨R(∂_j,∂_k)∂_i, ∂_l⟩
  double riemann_lowered(int l, int i, int j, int k) const;
};

// Metric and Christoffel symbols only (first derivatives of g); what the
// geodesic equation needs.
struct Connection {
  Vec point;
  Mat g;
  Tensor3 gamma;
};

PointGeometry point_geometry(const MetricField& metric, const Vec& p);
Connection connection_at(const MetricField& metric, const Vec& p);

double sectional(const PointGeometry& pg, const Vec& u, const Vec& v);
double ricci_direction(const PointGeometry& pg, const Vec& v);

// Columns: a g-orthonormal basis whose first column is v / |v|.
Mat orthonormal_completion(const Mat& g, const Vec& v);
// Gram-Schmidt of the columns of `vectors` in the inner product g; columns
// that become dependent are dropped.
Mat gram_schmidt(const Mat& g, const Mat& vectors);

struct SecSampler {
  int points = 50;
  int planes = 20;
  std::uint64_t seed = 0;
};

struct SecRange {
  double kappa = 0.0;
  double K = 0.0;
  int evaluations = 0;
  bool estimate = true;
};

// Min/max of sectional curvature over random points and planes. When
// `adapted_frame` is given, all coordinate planes of the returned orthonormal
// frame are included at every point as well.
SecRange sec_range_estimate(const MetricField& metric, const SecSampler& sampler,
                            const std::function<Mat(const Vec&)>& adapted_frame = {});

Vec sample_point(const Chart& chart, Rng& rng);

}  // namespace contact
