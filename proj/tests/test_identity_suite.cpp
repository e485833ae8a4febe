#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "contact/errors.hpp"
#include "contact/identity_suite.hpp"
#include "contact/models.hpp"
#include "contact/rng.hpp"

using namespace contact;

namespace {

const CheckResult& find(const std::vector<CheckResult>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.check_id == id) return r;
  FAIL("missing check " << id);
  return rs.front();
}

bool same(double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; }

}  // namespace

TEST_CASE("all checks pass on the built-in models") {
  for (const auto& name : list_models()) {
    const auto results = run_identity_suite(get_model(name).model, {40, 3, 1e-6, {}});
    REQUIRE(results.size() == identity_check_ids().size());
    for (const auto& r : results) {
      INFO(name << " " << r.check_id << " residual " << r.residual << " margin " << r.margin
                << " " << r.reason);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("ricci-h is an equality in dimension 3") {
  const auto rs = run_identity_suite(get_model("heisenberg3").model, {100, 0, 1e-6, {"ricci-h"}});
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].pass);
  CHECK(std::fabs(rs[0].margin) < 1e-7);
  CHECK(std::fabs(rs[0].residual) < 1e-7);
}

TEST_CASE("check subset and ordering") {
  const auto rs =
      run_identity_suite(get_model("round-s3").model, {10, 0, 1e-6, {"levi", "phi-square"}});
  REQUIRE(rs.size() == 2);
  // report order follows the check table, not the request
  CHECK(rs[0].check_id == "phi-square");
  CHECK(rs[1].check_id == "levi");
  CHECK(rs[0].samples > 0);
}

TEST_CASE("torsion-3d is gated on higher dimension") {
  const auto rs =
      run_identity_suite(get_model("heisenberg5").model, {10, 0, 1e-6, {"torsion-3d"}});
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].pass);
  CHECK(rs[0].reason.find("not applicable") != std::string::npos);
}

TEST_CASE("unknown check id") {
  try {
    run_identity_suite(get_model("round-s3").model, {10, 0, 1e-6, {"no-such-check"}});
    FAIL("expected InvalidInputs");
  } catch (const Error& e) {
    CHECK(e.kind() == "InvalidInputs");
  }
}

TEST_CASE("conformal control is refused") {
  try {
    run_identity_suite(heisenberg3_conformal_control(), {20, 0, 1e-6, {}});
    FAIL("expected NotCompatible");
  } catch (const Error& e) {
    CHECK(e.kind() == "NotCompatible");
    const std::string msg = e.what();
    CHECK(msg.find("reeb-unit") != std::string::npos);
  }
}

TEST_CASE("xi-scaled heisenberg3 is still a compatible structure") {
  // Scaling g on ξ by a constant keeps the metric associated, with θ′ = 2/1.21,
  // so every identity holds, nabla-reeb included.
  const auto rs = run_identity_suite(heisenberg3_xi_scaled_control(), {40, 0, 1e-6, {}});
  CHECK(find(rs, "nabla-reeb").residual < 1e-10);
  for (const auto& r : rs) CHECK(r.pass);
}

TEST_CASE("wrong theta' is caught by nabla-reeb") {
  // Feed the parent's θ′ = 2 into the identity at a point of the scaled model.
  const auto model = heisenberg3_xi_scaled_control();
  Rng rng(5);
  Vec p(3);
  p << 0.3, -1.1, 0.7;
  const auto f = frame_at(model, p);
  CHECK(std::fabs(f.theta_prime - 2.0 / 1.21) < 1e-10);
  const Vec v = random_xi_vector(f, rng);
  const Vec lhs = nabla_reeb(f, v);
  const Vec wrong = f.phi * (1.0 * v - f.h * v);
  const Vec right = f.phi * (0.5 * f.theta_prime * v - f.h * v);
  CHECK((lhs - right).norm() < 1e-10);
  CHECK((lhs - wrong).norm() / std::max(1.0, wrong.norm()) > 1e-2);
}

TEST_CASE("levi samples lie in the complex tangent") {
  const auto& model = get_model("heisenberg5").model;
  const auto fns = levi_test_functions(model, 11);
  REQUIRE(fns.size() >= model.dim() + 2);
  Rng rng(2);
  int nontrivial = 0;
  for (int k = 0; k < 40; ++k) {
    Vec p(model.dim());
    for (int i = 0; i < model.dim(); ++i) p[i] = rng.uniform(-2, 2);
    const auto f = frame_at(model, p);
    Vec w(model.dim() + 1);
    for (int i = 0; i < w.size(); ++i) w[i] = rng.normal();
    const auto s = levi_sample(f, fns[k % fns.size()], w);
    CHECK(s.df_v < 1e-10);
    CHECK(s.df_Jv < 1e-10);
    CHECK(std::fabs(s.L - s.hessian) / std::max(1.0, std::fabs(s.hessian)) < 1e-8);
    if (std::fabs(s.L) > 1e-3) ++nontrivial;
  }
  CHECK(nontrivial >= 8);
}

TEST_CASE("same seed, same results") {
  const auto& model = get_model("round-s3").model;
  const auto a = run_identity_suite(model, {25, 9, 1e-6, {}});
  const auto b = run_identity_suite(model, {25, 9, 1e-6, {}});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(same(a[i].residual, b[i].residual));
    CHECK(same(a[i].margin, b[i].margin));
    CHECK(a[i].worst_point == b[i].worst_point);
  }
}
