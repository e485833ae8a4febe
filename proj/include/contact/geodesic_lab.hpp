#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contact/bounds.hpp"
#include "contact/contact_metric.hpp"
#include "contact/ode.hpp"

namespace contact {

struct GeodesicSample {
  double s = 0.0;
  Vec point;
  Vec velocity;
};

struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  OdeStats stats;
  double speed_drift = 0.0;  // max |‖γ′‖_g − 1| over samples
  OdeTrajectory trajectory;  // state [x, v]; dense output via at()
};

// Unit-speed geodesic from p with initial velocity v, sampled at n_samples+1
// evenly spaced arclengths. Throws LeftChartDomain or StepFailure.
GeodesicPath integrate_geodesic(const MetricField& metric, const Vec& p, const Vec& v,
                                double length, int n_samples = 64);

// Jacobi fields along a geodesic, carried as components c_a in a parallel
// orthonormal frame E: J = E c, J′ = ∇_γ′ J = E c′, c″ = −M c with
// M_ab = ⟨R(E_b, γ′)γ′, E_a⟩.
struct JacobiSample {
  double s = 0.0;
  Vec point;
  Vec velocity;
  Mat frame;  // columns E_a
  Mat C;      // columns: components of J_i
  Mat Cp;     // columns: components of J_i′
  Mat J() const { return frame * C; }
  Mat Jp() const { return frame * Cp; }
};

struct JacobiSolution {
  std::vector<JacobiSample> samples;
  OdeStats stats;
  OdeTrajectory trajectory;
};

// Columns of J0, J0p are initial values and covariant derivatives of the
// fields. `frame0` is a g-orthonormal basis at p (orthonormal_completion of v
// when empty). Samples are taken exactly at `sample_s` (plus s = 0).
JacobiSolution jacobi_along(const MetricField& metric, const Vec& p, const Vec& v, double length,
                            const Mat& J0, const Mat& J0p, const std::vector<double>& sample_s,
                            const Mat& frame0 = Mat());
JacobiSolution jacobi_along(const MetricField& metric, const GeodesicPath& path, const Mat& J0,
                            const Mat& J0p);

// Right-hand side of the augmented system at one state, for spot checks:
// returns c″ as predicted by the Jacobi equation for the given sample.
Mat jacobi_acceleration(const MetricField& metric, const JacobiSample& sample);

// Flow of R_α from p for time T.
OdeTrajectory integrate_reeb_flow(const ContactModel& model, const Vec& p, double T,
                                  const std::vector<double>& outputs = {});

struct ProbeGrid {
  int n_dirs = 32;
  int n_radii = 16;
  std::uint64_t seed = 0;  // direction draws when n > 1
};

// Constants the probes compare against.
struct ProbeContext {
  BoundInputs inputs;
  BoundConstants constants;
  BoundReport bounds;
};
ProbeContext make_probe_context(const BoundInputs& inputs);

struct DiskSample {
  int dir = 0;
  double s = 0.0;
  Vec point;
  Mat tangent;  // X_i = J_i(s)/s, images of the adapted ξ_p basis
  Vec n_D;
  // Parallel-frame data for the margin computations.
  Mat frame;
  Mat C;
  Mat Cp;
  Vec n_components;
};

struct DiskFrame {
  Vec center;
  double radius = 0.0;
  Mat xi_basis;  // X_1, J X_1, ..., X_n, J X_n at p
  std::vector<Vec> directions;
  std::vector<DiskSample> samples;  // dir-major, s ascending, s = 0 first
};

// Samples of exp_p(D_ξ(r)) along n_dirs radial geodesics. Throws
// RadiusTooLarge when r ≥ min(inj/2, π/(2√K)).
DiskFrame disk_frame(const ContactModel& model, const Vec& p, double r, const ProbeGrid& grid,
                     double K_upper);

struct NamedMargin {
  std::string name;
  double min = 0.0;
  int worst_dir = -1;
  double worst_s = 0.0;
  int samples = 0;  // 0: nothing to check (reported as vacuous)
};

struct TraceRow {
  int dir = 0;
  double s = 0.0;
  double margin = 0.0;
};

struct ProbeReport {
  std::string probe_id;
  double radius = 0.0;
  int samples = 0;
  double tolerance = 1e-6;
  double margin_min = 0.0;
  int worst_dir = -1;
  double worst_s = 0.0;
  Vec worst_direction;
  bool pass = false;
  std::vector<NamedMargin> margins;
  // probe-specific scalars (closure defect, raw transversality, ...)
  std::vector<std::pair<std::string, double>> extras;
  std::vector<std::string> notes;
  std::vector<TraceRow> trace;
};

ProbeReport twisting_probe(const ContactModel& model, const Vec& p, double r,
                           const ProbeGrid& grid, const ProbeContext& ctx, double A, double B);
ProbeReport jacobi_bound_probe(const ContactModel& model, const Vec& p, double r,
                               const ProbeGrid& grid, const ProbeContext& ctx);
ProbeReport taming_probe(const ContactModel& model, const Vec& p, double r, const ProbeGrid& grid,
                         const ProbeContext& ctx);
ProbeReport hessian_distance_probe(const ContactModel& model, const Vec& p, double r,
                                   const ProbeGrid& grid, const ProbeContext& ctx);

struct TubeGrid {
  int orbit_points = 16;
  ProbeGrid disk{16, 8, 0};
};

// Throws OrbitNotClosed when the closure defect exceeds 1e-4, RadiusTooLarge
// when r ≥ tube_embed_radius or r ≥ r_perp.
ProbeReport reeb_tube_probe(const ContactModel& model, const OrbitSeed& seed, double r,
                            const TubeGrid& grid, const ProbeContext& ctx);

std::string probe_trace_csv(const ProbeReport& report);

}  // namespace contact
