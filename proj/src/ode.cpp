#include "contact/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "contact/errors.hpp"

namespace contact {

namespace {

// Dormand–Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b − b̂ (fifth minus fourth order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - 0.75 * kBeta;  // 0.17
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;  // smallest shrink factor
constexpr double kFacMax = 10.0;

}  // namespace

Vec OdeTrajectory::at(double s) const {
  if (t.empty()) fail("InvalidInputs", "empty trajectory");
  if (s <= t.front()) return y.front();
  if (s >= t.back()) return y.back();
  const auto it = std::upper_bound(t.begin(), t.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
  const double h = t[i + 1] - t[i];
  const double th = (s - t[i]) / h;
  const double h00 = (1 + 2 * th) * (1 - th) * (1 - th), h10 = th * (1 - th) * (1 - th);
  const double h01 = th * th * (3 - 2 * th), h11 = th * th * (th - 1);
  return h00 * y[i] + h10 * h * dy[i] + h01 * y[i + 1] + h11 * h * dy[i + 1];
}

const Vec& OdeTrajectory::node(double s) const {
  const auto it = std::lower_bound(t.begin(), t.end(), s);
  if (it == t.end() || *it != s) fail("InvalidInputs", "time is not a trajectory node");
  return y[static_cast<std::size_t>(it - t.begin())];
}

OdeTrajectory integrate_dopri5(const OdeRhs& rhs, double t0, const Vec& y0, double t1,
                               const OdeOptions& opts, std::vector<double> outputs) {
  if (!(t1 > t0)) fail("InvalidInputs", "integration interval must be increasing");
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::remove_if(outputs.begin(), outputs.end(),
                               [&](double s) { return !(s > t0 && s < t1); }),
                outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
  outputs.push_back(t1);

  OdeTrajectory tr;
  const int n = static_cast<int>(y0.size());
  Vec y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n), tmp(n);
  double t = t0;
  rhs(t, y, k1);
  ++tr.stats.evaluations;
  tr.t.push_back(t);
  tr.y.push_back(y);
  tr.dy.push_back(k1);

  const double span = t1 - t0;
  double h = opts.h0 > 0 ? opts.h0 : std::min(opts.hmax, 1e-3 * span);
  double err_old = 1e-4;
  std::size_t next_out = 0;
  bool last_rejected = false;

  while (t < t1) {
    if (tr.stats.accepted + tr.stats.rejected >= opts.max_steps)
      fail("StepFailure", "step budget exhausted");
    h = std::min(h, opts.hmax);
    const double target = outputs[next_out];
    bool hits_target = false;
    if (t + h >= target || target - (t + h) < 1e-12 * span) {
      h = target - t;
      hits_target = true;
    }
    if (h < opts.hmin && !hits_target) {
      std::ostringstream os;
      os << "step size " << h << " below minimum at t = " << t;
      fail("StepFailure", os.str());
    }

    tmp = y + h * a21 * k1;
    rhs(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, tmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, ynew, k7);
    tr.stats.evaluations += 6;

    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double sc = opts.atol + opts.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / n);
    if (!std::isfinite(err) || !ynew.allFinite()) {
      if (h <= opts.hmin) fail("StepFailure", "non-finite state");
      h *= kFacMin;
      ++tr.stats.rejected;
      last_rejected = true;
      continue;
    }

    const double fac_err = std::pow(err, kExpo);
    if (err <= 1.0) {
      double fac = fac_err / std::pow(err_old, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      err_old = std::max(err, 1e-4);
      t = hits_target ? target : t + h;
      y = ynew;
      k1 = k7;
      ++tr.stats.accepted;
      tr.t.push_back(t);
      tr.y.push_back(y);
      tr.dy.push_back(k1);
      if (hits_target) ++next_out;
      last_rejected = false;
      // Do not let a short clipped step shrink the next one.
      h = hits_target ? std::max(hnew, h) : hnew;
    } else {
      h /= std::min(1.0 / kFacMin, fac_err / kSafety);
      ++tr.stats.rejected;
      last_rejected = true;
    }
  }
  return tr;
}

}  // namespace contact
