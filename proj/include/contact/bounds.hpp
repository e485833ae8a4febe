#pragma once

#include <optional>
#include <string>

namespace contact {

// Comparison functions for constant curvature k.
double sn(double k, double r);
double ct(double k, double r);
// Inverse of sn on its principal branch ([0, π/(2√k)] when k > 0).
double sn_inv(double k, double y);

struct BoundInputs {
  int n = 1;
  double inj = 0.0;
  double kappa = 0.0;
  double K_upper = 0.0;
  double sec_abs = 0.0;
  double theta_prime = 0.0;
  double ric_min = 0.0;
};

// Throws InvalidInputs naming the violated condition.
void validate(const BoundInputs& in);

struct BoundConstants {
  double r_max = 0.0;
  double A = 0.0;
  double B = 0.0;
  double Hbar1 = 0.0;
  double Hbar2 = 0.0;
  double Hbar = 0.0;
  double c_n = 0.0;
  double d_n = 0.0;
};

BoundConstants compute_constants(const BoundInputs& in);

double H1_of_r(double r, double kappa);
double H2_of_r(double r, double kappa, double sec_abs);
// sn_K⁻¹((1 − Br − ½Ar²) sn_K(r))
double Q_of_r(double r, double K_upper, double A, double B);
// 1 − Br − ½Ar²
double twist_factor(double r, double A, double B);

struct BoundReport {
  double r_max = 0.0;
  double A = 0.0;
  double B = 0.0;
  double Hbar1 = 0.0;
  double Hbar2 = 0.0;
  double Hbar = 0.0;
  double r_perp = 0.0;
  double r_tau = 0.0;
  double Q_at_r_tau = 0.0;
  double darboux_refined = 0.0;
  double darboux_rough = 0.0;
  // What the proof of the rough bound actually delivers: min(inj/2, d_n/ρ)/2.
  double darboux_rough_chain = 0.0;
  std::optional<double> bound_3d;
  double tightness_bound = 0.0;
  double tube_embed_radius = 0.0;
  double c_n = 0.0;
  double d_n = 0.0;
};

BoundReport radius_bounds(const BoundInputs& in);

double ball_in_cylinder(double r0, double K_upper, double P_r0);

struct InterpolationConstants {
  double epsilon = 0.0;
  double lambda = 0.0;
  // Values of the two inequalities that must be positive.
  double first = 0.0;
  double second = 0.0;
};

InterpolationConstants interpolation_constants(double C, double C0, double C1, double T0, double T);

}  // namespace contact
