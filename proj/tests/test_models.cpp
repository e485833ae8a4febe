#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "contact/errors.hpp"
#include "contact/models.hpp"

using namespace contact;

TEST_CASE("registry contents") {
  const auto names = list_models();
  CHECK(names == std::vector<std::string>{"heisenberg3", "heisenberg5", "round-s3"});
  CHECK(get_model("round-s3").expected.theta_prime == 2.0);
  try {
    get_model("x");
    FAIL("expected UnknownModel");
  } catch (const Error& e) {
    CHECK(e.kind() == "UnknownModel");
  }
}

TEST_CASE("metadata") {
  const ModelSpec& s3 = get_model("round-s3");
  CHECK(*s3.model.inj == doctest::Approx(std::numbers::pi));
  CHECK(*s3.model.conv == doctest::Approx(std::numbers::pi / 2));
  REQUIRE(s3.model.orbits.size() == 1);
  CHECK(*s3.model.orbits[0].period == doctest::Approx(2 * std::numbers::pi));
  const ModelSpec& h3 = get_model("heisenberg3");
  CHECK(h3.model.chart_truncated);
  CHECK(*h3.model.inj == 10.0);
  CHECK(h3.model.orbits.empty());
  CHECK(get_model("heisenberg5").model.n == 2);
}

TEST_CASE("self-test of every registered model") {
  for (const auto& name : list_models()) {
    const auto issues = model_self_test(get_model(name), 20, 1);
    for (const auto& s : issues) MESSAGE(s);
    CHECK_MESSAGE(issues.empty(), name);
  }
}

TEST_CASE("round sphere chart covers the unit geodesic ball of the origin") {
  // Geodesic distance from the origin is 2 atan|u|; distance 1 is |u| = tan ½.
  const Chart& c = get_model("round-s3").model.chart();
  const double r = std::tan(0.5);
  for (int i = 0; i < 3; ++i) {
    Vec p = Vec::Zero(3);
    p[i] = r;
    CHECK(c.contains(p));
    CHECK(c.contains(-p));
  }
}

TEST_CASE("hopf seed is a Reeb orbit") {
  const ContactModel& m = get_model("round-s3").model;
  for (double t : {0.0, 0.7, 2.0, 4.5}) {
    Vec p(3);
    p << std::cos(t), std::sin(t), 0.0;
    const Vec R = reeb_at(m, p);
    Vec tangent(3);
    tangent << -std::sin(t), std::cos(t), 0.0;
    CHECK((R - tangent).norm() < 1e-12);
  }
}
