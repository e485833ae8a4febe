#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "contact/geometry.hpp"

namespace contact {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double hmax = std::numeric_limits<double>::infinity();
  double hmin = 1e-9;
  double h0 = 0.0;  // 0: pick from the span
  long max_steps = 1000000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

using OdeRhs = std::function<void(double t, const Vec& y, Vec& dy)>;

// Accepted steps with their derivatives, so any t in range can be
// reconstructed by cubic Hermite interpolation.
struct OdeTrajectory {
  std::vector<double> t;
  std::vector<Vec> y;
  std::vector<Vec> dy;
  OdeStats stats;

  Vec at(double s) const;
  // State at `s` when s is one of the requested output times (exact node).
  const Vec& node(double s) const;
};

// Dormand–Prince 5(4) with a PI step-size controller. Every time listed in
// `outputs` (inside [t0, t1]) becomes a step boundary. Throws StepFailure
// when the step size drops below hmin or the state turns non-finite.
OdeTrajectory integrate_dopri5(const OdeRhs& rhs, double t0, const Vec& y0, double t1,
                               const OdeOptions& opts, std::vector<double> outputs = {});

}  // namespace contact
