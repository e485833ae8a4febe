#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contact/geometry.hpp"

namespace contact {

struct OrbitSeed {
  Vec point;
  std::optional<double> period;
};

struct ContactModel {
  std::string name;
  MetricField metric;
  std::vector<Expression> alpha;
  // Full d×d matrix J^i_j when the user supplies J; otherwise J = A/c.
  std::optional<std::vector<std::vector<Expression>>> j_field;
  std::optional<double> inj;
  std::optional<double> conv;
  int n = 1;
  std::vector<OrbitSeed> orbits;
  // inj is a chart-safe stand-in on an open manifold.
  bool chart_truncated = false;

  const Chart& chart() const { return metric.chart(); }
  int dim() const { return metric.dim(); }
  void validate() const;
};

// Everything at one point. Matrices act on coordinate vectors:
// phi * v is φ(v), dalpha(i,j) = ∂_i α_j − ∂_j α_i, II(i,j) is the bilinear
// form u^T II v (meaningful for u, v in ξ). Derivative blocks:
// d_alpha(k,j) = ∂_k α_j, d_reeb(i,k) = ∂_k R^i, d_n(i,k) = ∂_k n^i,
// d_phi[k] = ∂_k φ.
struct ContactFrame {
  PointGeometry geo;
  int n = 1;
  Vec alpha;
  Mat dalpha;
  Vec reeb;
  double rho = 0.0;
  Mat phi;
  Mat J;
  Mat h;
  Mat II;
  double theta_prime = 0.0;
  double c = 0.0;
  Vec n_unit;

  Mat d_alpha;
  Mat d_reeb;
  Mat d_n;
  std::vector<Mat> d_phi;

  const Vec& point() const { return geo.point; }
  int dim() const { return geo.dim(); }
  double inner(const Vec& u, const Vec& v) const { return geo.inner(u, v); }
  double norm(const Vec& u) const { return geo.norm(u); }
  double dalpha_of(const Vec& u, const Vec& v) const { return u.dot(dalpha * v); }
  // v − g(v, n) n
  Vec xi_part(const Vec& v) const;
};

struct AlphaJet {
  Vec alpha;
  Mat d;        // d(k,j) = ∂_k α_j
  Tensor3 dd;   // dd(m,k,j) = ∂_m ∂_k α_j (order 2 only)
  Mat omega;    // (dα)_ij
};

AlphaJet alpha_jet(const ContactModel& model, const Vec& p, int order);

Vec reeb_at(const ContactModel& model, const Vec& p);
ContactFrame frame_at(const ContactModel& model, const Vec& p);

// (∇_{∂_k} V)^i for a vector field with value V and partials dV(i,k).
Mat nabla_vector(const PointGeometry& pg, const Vec& V, const Mat& dV);
// (∇_u φ) as a matrix.
Mat nabla_phi(const ContactFrame& f, const Vec& u);
// (∇_u R_α)
Vec nabla_reeb(const ContactFrame& f, const Vec& u);
// [φ,φ](v,w) from the coordinate formula of the torsion tensor.
Vec phi_torsion(const ContactFrame& f, const Vec& v, const Vec& w);
Vec nijenhuis_at(const ContactFrame& f, const Vec& v, const Vec& w);

// g-orthonormal columns X_1, φX_1, ..., X_n, φX_n, n_unit.
Mat adapted_basis(const ContactFrame& f);
// Random unit vector of ξ_p (uses rng.normal()).
Vec random_xi_vector(const ContactFrame& f, Rng& rng);
Vec random_unit_vector(const ContactFrame& f, Rng& rng);

enum class Verdict { Incompatible, WeaklyCompatible, Compatible };
const char* verdict_name(Verdict v);

struct ClassifyTest {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  Vec worst_point;
  bool pass = true;
};

struct Classification {
  Verdict verdict = Verdict::Incompatible;
  double theta_prime = 0.0;       // mean of θ′ samples
  std::vector<double> c_samples;  // per sample point
  std::vector<ClassifyTest> tests;
  std::vector<std::string> failed;  // names of failing tests
};

Classification compatibility_classify(const ContactModel& model, int points = 50,
                                      std::uint64_t seed = 0);

struct CrResult {
  bool is_cr = true;
  double worst = 0.0;
  Vec worst_point;
};

CrResult is_CR(const ContactModel& model, int points = 50, std::uint64_t seed = 0);

// Sectional range with the contact-adapted planes (ξ-planes, R_α-planes)
// added to the random ones.
SecRange sec_range_estimate(const ContactModel& model, const SecSampler& sampler);

}  // namespace contact
