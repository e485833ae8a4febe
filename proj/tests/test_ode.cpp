#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "contact/errors.hpp"
#include "contact/ode.hpp"

using namespace contact;

TEST_CASE("harmonic oscillator") {
  auto rhs = [](double, const Vec& y, Vec& dy) {
    dy.resize(2);
    dy << y[1], -y[0];
  };
  Vec y0(2);
  y0 << 0.0, 1.0;
  const double T = 2 * std::numbers::pi;
  const auto tr = integrate_dopri5(rhs, 0.0, y0, T, OdeOptions{}, {1.0, 2.0});
  CHECK(std::fabs(tr.y.back()[0]) < 1e-8);
  CHECK(std::fabs(tr.y.back()[1] - 1.0) < 1e-8);
  CHECK(std::fabs(tr.node(1.0)[0] - std::sin(1.0)) < 1e-8);
  CHECK(std::fabs(tr.node(2.0)[1] - std::cos(2.0)) < 1e-8);
  CHECK(tr.t.back() == T);
  CHECK(tr.stats.accepted > 0);
}

TEST_CASE("dense output") {
  auto rhs = [](double, const Vec& y, Vec& dy) { dy = -y; };
  Vec y0 = Vec::Ones(1);
  OdeOptions o;
  o.hmax = 0.05;
  const auto tr = integrate_dopri5(rhs, 0.0, y0, 1.0, o);
  for (double t : {0.013, 0.31, 0.777})
    CHECK(std::fabs(tr.at(t)[0] - std::exp(-t)) < 1e-7);
  // steps never exceed hmax
  for (std::size_t i = 1; i < tr.t.size(); ++i) CHECK(tr.t[i] - tr.t[i - 1] <= 0.05 + 1e-15);
}

TEST_CASE("tolerance is met on a stiffish decay") {
  auto rhs = [](double, const Vec& y, Vec& dy) { dy = -50.0 * y; };
  const auto tr = integrate_dopri5(rhs, 0.0, Vec::Ones(1), 1.0, OdeOptions{});
  CHECK(std::fabs(tr.y.back()[0] - std::exp(-50.0)) < 1e-10);
}

TEST_CASE("blow-up raises StepFailure") {
  auto rhs = [](double, const Vec& y, Vec& dy) { dy = y.cwiseProduct(y); };
  try {
    integrate_dopri5(rhs, 0.0, Vec::Ones(1), 2.0, OdeOptions{});
    FAIL("expected StepFailure");
  } catch (const Error& e) {
    CHECK(e.kind() == "StepFailure");
  }
}

TEST_CASE("bad interval") {
  auto rhs = [](double, const Vec& y, Vec& dy) { dy = y; };
  CHECK_THROWS_AS(integrate_dopri5(rhs, 1.0, Vec::Ones(1), 0.5, OdeOptions{}), Error);
}
