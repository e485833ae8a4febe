#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "contact/bounds.hpp"
#include "contact/errors.hpp"
#include "contact/rng.hpp"

using namespace contact;
using std::numbers::pi;

namespace {

// Reference values below come from a 40-digit evaluation of the same
// formulas with an independent script (mpmath).
void close(double got, double want, double rel = 1e-12) {
  CHECK(std::fabs(got - want) <= rel * std::max(1.0, std::fabs(want)));
}

BoundInputs round_s3() { return {1, pi, 1.0, 1.0, 1.0, 2.0, 2.0}; }
BoundInputs heisenberg3() { return {1, 10.0, -3.0, 1.0, 3.0, 2.0, 2.0}; }
BoundInputs heisenberg5() { return {2, 10.0, -3.0, 1.0, 3.0, 2.0, 4.0}; }

std::string kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return "none";
}

}  // namespace

TEST_CASE("comparison functions") {
  CHECK(ct(0, 2) == 0.5);
  close(sn(1, pi / 2), 1.0, 1e-15);
  close(sn_inv(1, 0.5), pi / 6, 1e-15);
  close(ct(-1, 1), 1.3130352854993313036, 1e-15);
  close(ct(4, 0.3), 2.0 / std::tan(0.6), 1e-15);
  close(sn(-4, 0.3), std::sinh(0.6) / 2, 1e-15);
  CHECK(kind_of([] { ct(1, 4.0); }) == "OutOfRange");
  CHECK(kind_of([] { ct(1, 0.0); }) == "OutOfRange");
  CHECK(kind_of([] { sn_inv(1, 1.5); }) == "OutOfRange");
  CHECK(kind_of([] { sn_inv(0, -1.0); }) == "OutOfRange");
}

TEST_CASE("sn_inv inverts sn on the principal branch") {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const double k = rng.uniform(-4, 4);
    const double top = k > 0 ? pi / (2 * std::sqrt(k)) : 3.0;
    const double r = rng.uniform(0, top);
    CHECK(std::fabs(sn_inv(k, sn(k, r)) - r) < 1e-7 * std::max(1.0, r));
  }
}

TEST_CASE("continuity in k") {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const double k = rng.uniform(-1e-4, 1e-4);
    const double r = rng.uniform(0.01, 3.0);
    CHECK(std::fabs(sn(k, r) - r) <= std::fabs(k) * r * r * r);
  }
  for (double k : {1e-6, -1e-6, 1e-9, -1e-9}) close(ct(k, 0.7), 1 / 0.7, 1e-5);
}

TEST_CASE("constants for the round sphere") {
  const BoundConstants c = compute_constants(round_s3());
  close(c.r_max, pi / 2);
  close(c.A, 4.0 / 3.0);
  close(c.B, 1.0);
  CHECK(c.Hbar1 == std::sqrt(2.0));
  close(c.Hbar2, 2.9619219587722441647);
  close(c.Hbar, 24.755160819145563938);
  close(c.c_n, 1.0 / 192);
  close(c.d_n, 1.0 / 96);
}

TEST_CASE("radius bounds for the round sphere") {
  const BoundReport b = radius_bounds(round_s3());
  close(b.r_perp, 0.68614066163450716496);
  close(b.r_tau, 0.040395617192945203095);
  close(b.Q_at_r_tau, 0.038719010026699097284);
  close(b.darboux_refined, b.Q_at_r_tau, 0.0);
  close(b.darboux_rough, 0.0026041666666666666667);
  close(b.darboux_rough_chain, 0.0026041666666666666667);
  close(b.tightness_bound, pi / 2);
  REQUIRE(b.bound_3d.has_value());
  close(*b.bound_3d, b.r_perp);
  close(b.tube_embed_radius, pi / 2);
  CHECK(b.Q_at_r_tau <= b.r_tau);
}

TEST_CASE("radius bounds for the Heisenberg models") {
  const BoundReport h3 = radius_bounds(heisenberg3());
  close(h3.Hbar1, 2.954044568115793191);
  close(h3.Hbar2, 18.560809427138818909);
  close(h3.Hbar, 254.223350313945033);
  close(h3.r_perp, 0.5);
  close(h3.r_tau, 0.0039335489787428331664);
  close(h3.Q_at_r_tau, 0.00391795436512861848);

  const BoundReport h5 = radius_bounds(heisenberg5());
  close(h5.A, 12.0);
  close(h5.r_perp, 1.0 / 3.0);
  close(h5.r_tau, 0.00078670979574856663328);
  close(h5.Q_at_r_tau, 0.00078608796189147747648);
  close(h5.darboux_rough, 0.00036828478186799350229);
  close(h5.c_n, 0.00073656956373598700458);
  close(h5.d_n, 0.0014731391274719740092);
  CHECK_FALSE(h5.bound_3d.has_value());
}

TEST_CASE("degenerate and non-positive curvature inputs") {
  const BoundReport flat = radius_bounds({1, 10.0, 0.0, 0.0, 0.0, 2.0, 0.0});
  CHECK(flat.A == 0.0);
  CHECK(flat.B == 2.0);
  close(flat.r_perp, 0.5);
  CHECK(flat.tightness_bound == 10.0);
  CHECK(flat.tube_embed_radius == 5.0);
  const BoundReport neg = radius_bounds({1, 4.0, -2.0, -0.5, 2.0, 2.0, -1.0});
  CHECK(neg.tightness_bound == 4.0);
  CHECK(kind_of([] { radius_bounds({1, 1.0, 1.0, 0.5, 1.0, 2.0, 2.0}); }) == "InvalidInputs");
  CHECK(kind_of([] { radius_bounds({1, 1.0, 0.0, 1.0, 1.0, 2.0, 5.0}); }) == "InvalidInputs");
  CHECK(kind_of([] { radius_bounds({0, 1.0, 0.0, 1.0, 1.0, 2.0, 0.0}); }) == "InvalidInputs");
  CHECK(kind_of([] { radius_bounds({1, -1.0, 0.0, 1.0, 1.0, 2.0, 0.0}); }) == "InvalidInputs");
}

TEST_CASE("H1 and H2") {
  close(H1_of_r(1.0, -1.0), 1.5430806348152437785);
  close(H1_of_r(0.8, 0.0), std::sqrt(2.0), 1e-15);
  close(H2_of_r(0.7, 0.0, 2.0), 8 * std::sqrt(2.0) / 3 * 2.0 * 0.7, 1e-10);
  close(H2_of_r(0.5, -1.0, 1.0), 1.9123499905913682412, 1e-10);
  close(H2_of_r(1.0, -1.0, 1.0), 3.9983589432269683987, 1e-10);
  close(H2_of_r(0.5, 1.0, 1.0), 1.8599664205482975512, 1e-10);
  close(H2_of_r(1.0, 1.0, 1.0), 3.5786538627412589336, 1e-10);
  close(H2_of_r(0.5, -3.0, 1.0), 1.9691160613653323324, 1e-10);
  close(H2_of_r(1.0, -3.0, 1.0), 4.5635404807013825804, 1e-10);
  for (double k : {-3.0, 0.0, 2.0})
    close(H2_of_r(1e-6, k, 1.0) / 1e-6, 8 * std::sqrt(2.0) / 3, 1e-6);
  CHECK_THROWS(H1_of_r(0.0, 1.0));
}

TEST_CASE("Q") {
  close(Q_of_r(0.3, 1.0, 4.0 / 3.0, 1.0), 0.19027906666235158342);
  CHECK(Q_of_r(0.4, 2.0, 0.0, 0.0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(kind_of([] { Q_of_r(0.9, 1.0, 4.0 / 3.0, 1.0); }) == "OutOfRange");
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double A = rng.uniform(0, 5), B = rng.uniform(0, 3), K = rng.uniform(-3, 3);
    const double rp = 2.0 / (std::sqrt(2 * A + B * B) + B);
    const double r = rng.uniform(0, std::min(rp, K > 0 ? pi / (2 * std::sqrt(K)) : 10.0));
    const double q = Q_of_r(r, K, A, B);
    CHECK(std::fabs(sn(K, q) - twist_factor(r, A, B) * sn(K, r)) <=
          1e-12 * std::max(1e-300, std::fabs(sn(K, r))) + 1e-300);
    CHECK(q <= r + 1e-15);
  }
}

TEST_CASE("Q is increasing where the scaled sine is increasing") {
  // Q' has the sign of d/dr[(1 − Br − ½Ar²) sn_K(r)] because sn_K⁻¹ is
  // increasing; check on the initial interval where that derivative is ≥ 0.
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const double A = rng.uniform(0, 5), B = rng.uniform(0.1, 3), K = rng.uniform(-3, 3);
    const double rp = 2.0 / (std::sqrt(2 * A + B * B) + B);
    const double top = std::min(rp, K > 0 ? pi / (2 * std::sqrt(K)) : 1e9);
    auto cs = [K](double r) {
      return K > 0 ? std::cos(std::sqrt(K) * r) : K < 0 ? std::cosh(std::sqrt(-K) * r) : 1.0;
    };
    double prev = -1.0;
    for (int i = 0; i <= 400; ++i) {
      const double r = top * i / 400.0;
      const double slope = (-B - A * r) * sn(K, r) + twist_factor(r, A, B) * cs(r);
      if (slope < 0) break;
      const double q = Q_of_r(r, K, A, B);
      CHECK(q >= prev);
      prev = q;
    }
  }
}

TEST_CASE("Q can decrease before the twist factor reaches one half") {
  // A = 4/3, B = 1, K = 0: the factor is ½ at r ≈ 0.3956 while Q′ = −½Ar² there.
  const double A = 4.0 / 3.0, B = 1.0;
  const double r = (-B + std::sqrt(B * B + A)) / A;
  CHECK(twist_factor(r, A, B) == doctest::Approx(0.5));
  CHECK(Q_of_r(r, 0.0, A, B) < Q_of_r(r - 0.01, 0.0, A, B));
}

TEST_CASE("rough bound inequalities over random symmetric inputs") {
  Rng rng(5);
  double worst_B = 1e300, worst_H1 = 1e300, worst_H = 1e300, worst_f = 1e300, worst_Q = 1e300;
  for (int i = 0; i < 1000; ++i) {
    BoundInputs in;
    in.n = 1 + static_cast<int>(rng.uniform() * 4);
    const double K = std::exp(rng.uniform(-6, 4));
    in.kappa = -K;
    in.K_upper = K;
    in.sec_abs = K;
    in.theta_prime = std::exp(rng.uniform(-4, 4));
    in.ric_min = -2.0 * in.n * K;
    in.inj = std::exp(rng.uniform(-3, 4));
    const BoundReport b = radius_bounds(in);
    const double rho = std::max(std::sqrt(K), in.theta_prime);
    const double sn_ = std::sqrt(double(in.n));
    worst_B = std::min(worst_B, 2 * sn_ * rho - b.B);
    worst_H1 = std::min(worst_H1, 2.0 - b.Hbar1);
    worst_H = std::min(worst_H, 96 * sn_ * rho - b.Hbar);
    const double r0 = rng.uniform() * b.d_n / rho;
    if (r0 > 0.0) {
      worst_f = std::min(worst_f, twist_factor(r0, b.A, b.B) - 0.97);
      worst_Q = std::min(worst_Q, Q_of_r(r0, in.K_upper, b.A, b.B) - r0 / 2);
    }
    CHECK(b.r_tau >= std::min(in.inj / 2, b.d_n / rho) * (1 - 1e-12));
  }
  CHECK(worst_B >= -1e-9);
  CHECK(worst_H1 > 0.0);
  CHECK(worst_H >= -1e-9);
  CHECK(worst_f >= -1e-9);
  CHECK(worst_Q >= -1e-9);
}

TEST_CASE("r_perp lies below the conjugate radius") {
  Rng rng(6);
  for (int i = 0; i < 500; ++i) {
    BoundInputs in;
    in.n = 1 + static_cast<int>(rng.uniform() * 3);
    in.K_upper = rng.uniform(0.01, 5);
    in.kappa = -rng.uniform(0, 5);
    in.sec_abs = std::max(in.K_upper, -in.kappa);
    in.theta_prime = rng.uniform(0.1, 4);
    in.ric_min = -2.0 * in.n * in.sec_abs;
    in.inj = 100;
    const BoundReport b = radius_bounds(in);
    CHECK(b.r_perp < pi / (2 * std::sqrt(in.K_upper)));
    CHECK(b.r_tau > 0);
    CHECK(b.Q_at_r_tau > 0);
    CHECK(b.darboux_rough > 0);
  }
}

TEST_CASE("ball in cylinder") {
  CHECK(ball_in_cylinder(0.5, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  close(ball_in_cylinder(0.5, 1.0, 0.2), 0.39362686861880634537);
  CHECK(ball_in_cylinder(0.5, 0.0, 0.2) == 0.5 * 0.8);
  CHECK(kind_of([] { ball_in_cylinder(2.0, 1.0, 0.1); }) == "OutOfRange");
}

TEST_CASE("interpolation constants") {
  const InterpolationConstants c = interpolation_constants(1, 1, 1, 1, 2);
  close(c.epsilon, 0.1);
  close(c.lambda, 72);
  close(c.first, 0.5);
  close(c.second, 3.6);
  CHECK(interpolation_constants(1e-9, 1, 1, 1, 2).epsilon == doctest::Approx(0.5).epsilon(1e-8));
  const InterpolationConstants d = interpolation_constants(1, 2, 1, 1, 2);
  close(d.epsilon, c.epsilon);
  close(d.lambda, c.lambda / 2);
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double T0 = rng.uniform(1, 5);
    const auto r = interpolation_constants(rng.uniform(0.01, 10), rng.uniform(0.01, 10),
                                           rng.uniform(0.01, 10), T0, T0 + rng.uniform(0.01, 5));
    CHECK(r.first > 0);
    CHECK(r.second > 0);
  }
}
