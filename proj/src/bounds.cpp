#include "contact/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "contact/errors.hpp"

namespace contact {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

// π/(2√K), or +∞ when K ≤ 0.
double quarter_period(double K) {
  return K > 0.0 ? std::numbers::pi / (2.0 * std::sqrt(K)) : kInf;
}

// sn_k(t)/t, continuous at t = 0.
double sn_ratio(double k, double t) { return t == 0.0 ? 1.0 : sn(k, t) / t; }

double simpson(const auto& f, double a, double b, double fa, double fm, double fb, double whole,
               double tol, int depth, long& budget) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || --budget <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget);
}

double integrate(const auto& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  long budget = 1000000;
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50, budget);
}

}  // namespace

double sn(double k, double r) {
  if (k > 0.0) {
    const double s = std::sqrt(k);
    return std::sin(s * r) / s;
  }
  if (k < 0.0) {
    const double s = std::sqrt(-k);
    return std::sinh(s * r) / s;
  }
  return r;
}

double ct(double k, double r) {
  if (!(r > 0.0)) fail("OutOfRange", "ct needs r > 0, got r = " + num(r));
  if (k > 0.0) {
    const double s = std::sqrt(k);
    if (!(r < std::numbers::pi / s))
      fail("OutOfRange", "ct needs r < π/√k, got r = " + num(r) + ", k = " + num(k));
    return s / std::tan(s * r);
  }
  if (k < 0.0) {
    const double s = std::sqrt(-k);
    return s / std::tanh(s * r);
  }
  return 1.0 / r;
}

double sn_inv(double k, double y) {
  if (!(y >= 0.0)) fail("OutOfRange", "sn_inv needs y ≥ 0, got y = " + num(y));
  if (k > 0.0) {
    const double s = std::sqrt(k);
    const double a = s * y;
    if (a > 1.0 + 1e-15)
      fail("OutOfRange", "sn_inv needs y ≤ 1/√k, got y = " + num(y) + ", k = " + num(k));
    return std::asin(std::min(a, 1.0)) / s;
  }
  if (k < 0.0) {
    const double s = std::sqrt(-k);
    return std::asinh(s * y) / s;
  }
  return y;
}

void validate(const BoundInputs& in) {
  if (in.n < 1) fail("InvalidInputs", "n must be at least 1");
  if (!(in.inj > 0.0)) fail("InvalidInputs", "inj must be positive");
  if (!std::isfinite(in.kappa) || !std::isfinite(in.K_upper))
    fail("InvalidInputs", "curvature bounds must be finite");
  if (!(in.kappa <= in.K_upper)) fail("InvalidInputs", "kappa must not exceed K_upper");
  if (!(in.sec_abs >= 0.0)) fail("InvalidInputs", "sec_abs must be non-negative");
  if (!(in.theta_prime > 0.0)) fail("InvalidInputs", "theta_prime must be positive");
  if (!std::isfinite(in.ric_min)) fail("InvalidInputs", "ric_min must be finite");
  const double b2 = in.n * in.theta_prime * in.theta_prime / 4.0 - in.ric_min / 2.0;
  if (b2 < 0.0) fail("InvalidInputs", "n·θ′²/4 − ric_min/2 must be non-negative");
}

BoundConstants compute_constants(const BoundInputs& in) {
  validate(in);
  BoundConstants c;
  const int n = in.n;
  c.r_max = std::min(0.5 * in.inj, quarter_period(in.K_upper));
  c.A = 4.0 / 3.0 * (2 * n - 1) * in.sec_abs;
  c.B = in.theta_prime / 2.0 +
        std::sqrt(n * in.theta_prime * in.theta_prime / 4.0 - in.ric_min / 2.0);
  if (in.kappa >= 0.0) {
    c.Hbar1 = std::sqrt(2.0);
  } else {
    const double q = sn(in.kappa, c.r_max) / c.r_max;
    c.Hbar1 = std::sqrt(1.0 + q * q);
  }
  c.Hbar2 = 4.0 / 3.0 * in.sec_abs * c.Hbar1 * c.r_max;
  c.Hbar = 4.0 * (c.Hbar2 + c.B * c.Hbar1) * c.Hbar1;
  const double m = 1.0 + 2.0 * n * (n - 1);
  c.c_n = 1.0 / (192.0 * m * std::sqrt(double(n)));
  c.d_n = 1.0 / (96.0 * m * std::sqrt(double(n)));
  return c;
}

double H1_of_r(double r, double kappa) {
  if (!(r > 0.0)) fail("OutOfRange", "H1 needs r > 0");
  const double q = sn_ratio(kappa, r);
  return std::sqrt(1.0 + q * q);
}

double H2_of_r(double r, double kappa, double sec_abs) {
  if (!(r > 0.0)) fail("OutOfRange", "H2 needs r > 0");
  auto h1 = [kappa](double t) {
    const double q = sn_ratio(kappa, t);
    return std::sqrt(1.0 + q * q);
  };
  const double integral = integrate(h1, 0.0, r, 1e-10);
  return 4.0 / 3.0 * sec_abs * (r * h1(r) + integral);
}

double twist_factor(double r, double A, double B) { return 1.0 - B * r - 0.5 * A * r * r; }

double Q_of_r(double r, double K_upper, double A, double B) {
  if (!(r >= 0.0)) fail("OutOfRange", "Q needs r ≥ 0");
  const double f = twist_factor(r, A, B);
  if (f < 0.0) fail("OutOfRange", "1 − Br − ½Ar² < 0 at r = " + num(r) + " (r beyond r_perp)");
  if (f > 1.0) fail("OutOfRange", "1 − Br − ½Ar² > 1 at r = " + num(r));
  if (r > quarter_period(K_upper))
    fail("OutOfRange", "Q needs r ≤ π/(2√K), got r = " + num(r));
  return sn_inv(K_upper, f * sn(K_upper, r));
}

BoundReport radius_bounds(const BoundInputs& in) {
  const BoundConstants c = compute_constants(in);
  const int n = in.n;
  BoundReport b;
  b.r_max = c.r_max;
  b.A = c.A;
  b.B = c.B;
  b.Hbar1 = c.Hbar1;
  b.Hbar2 = c.Hbar2;
  b.Hbar = c.Hbar;
  b.c_n = c.c_n;
  b.d_n = c.d_n;
  const double half_inj = 0.5 * in.inj;
  const double twist = 2.0 / (std::sqrt(2.0 * c.A + c.B * c.B) + c.B);
  const double taming = 1.0 / ((1.0 + 2.0 * n * (n - 1)) * c.Hbar);
  b.r_perp = std::min(half_inj, twist);
  b.r_tau = std::min({half_inj, twist, taming});
  b.Q_at_r_tau = Q_of_r(b.r_tau, in.K_upper, c.A, c.B);
  b.darboux_refined = b.Q_at_r_tau;
  const double curv = std::max({in.sec_abs, std::fabs(in.kappa), std::fabs(in.K_upper)});
  const double rho = std::max(std::sqrt(curv), in.theta_prime);
  b.darboux_rough = std::min(half_inj, c.c_n / rho);
  b.darboux_rough_chain = 0.5 * std::min(half_inj, c.d_n / rho);
  if (n == 1) b.bound_3d = std::min({half_inj, quarter_period(in.K_upper), twist});
  b.tightness_bound = in.K_upper > 0.0 ? std::min(in.inj, quarter_period(in.K_upper)) : in.inj;
  b.tube_embed_radius = std::min(half_inj, quarter_period(in.K_upper));
  return b;
}

double ball_in_cylinder(double r0, double K_upper, double P_r0) {
  if (!(r0 > 0.0)) fail("OutOfRange", "ball_in_cylinder needs r0 > 0");
  if (!(P_r0 >= 0.0 && P_r0 <= 1.0)) fail("OutOfRange", "P(r0) must lie in [0, 1]");
  if (!(r0 < quarter_period(K_upper)))
    fail("OutOfRange", "ball_in_cylinder needs r0 < π/(2√K)");
  return sn_inv(K_upper, sn(K_upper, r0) * (1.0 - P_r0));
}

InterpolationConstants interpolation_constants(double C, double C0, double C1, double T0,
                                               double T) {
  if (!(C > 0.0 && C0 > 0.0 && C1 > 0.0)) fail("InvalidInputs", "C, C0, C1 must be positive");
  if (!(T0 >= 1.0 && T > T0)) fail("InvalidInputs", "need 1 ≤ T0 < T");
  InterpolationConstants r;
  const double w = T - T0;
  r.epsilon = 0.5 * C1 / (4.0 * C / w + C1);
  r.lambda = 8.0 * C * (1.0 - r.epsilon) / (w * r.epsilon * C0);
  r.first = -C * 2.0 * r.epsilon / (w / 2.0) + (1.0 - r.epsilon) * C1;
  r.second = -C * 2.0 * (1.0 - r.epsilon) / (w / 2.0) + r.lambda * r.epsilon * C0;
  if (!(r.first > 0.0 && r.second > 0.0))
    fail("InternalError", "interpolation constants violate their inequalities");
  return r;
}

}  // namespace contact
