#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "contact/errors.hpp"
#include "contact/geodesic_lab.hpp"
#include "contact/models.hpp"

using namespace contact;

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

std::string error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "none";
}

ProbeContext context_for(const std::string& name) {
  return make_probe_context(metadata_inputs(get_model(name)).inputs);
}

const ProbeGrid kSmall{12, 8, 0};

}  // namespace

TEST_CASE("flat geodesics are straight lines") {
  const MetricField flat = flat_metric(3);
  const Vec p = vec3(0.1, -0.2, 0.3);
  const Vec v = vec3(0.6, 0.0, 0.8);
  const GeodesicPath path = integrate_geodesic(flat, p, v, 1.0, 10);
  for (const auto& smp : path.samples) CHECK((smp.point - (p + smp.s * v)).norm() < 1e-12);
  // reflection symmetry of exp_p
  const GeodesicPath back = integrate_geodesic(flat, p, -v, 1.0, 10);
  for (std::size_t i = 0; i < path.samples.size(); ++i)
    CHECK((path.samples[i].point + back.samples[i].point - 2 * p).norm() < 1e-12);
}

TEST_CASE("round-s3 geodesics follow great circles") {
  const ContactModel& m = get_model("round-s3").model;
  // Through the chart origin the great circle is w·tan(s/2).
  const Vec w = vec3(1, 2, 2) / 3.0;
  const GeodesicPath path = integrate_geodesic(m.metric, Vec::Zero(3), w / 2.0, 2.0, 20);
  for (const auto& smp : path.samples)
    CHECK((smp.point - w * std::tan(smp.s / 2)).norm() < 1e-7);
  CHECK(path.speed_drift < 1e-8);
  // The equatorial circle through (1,0,0) reaches the antipode at s = π.
  const GeodesicPath eq = integrate_geodesic(m.metric, vec3(1, 0, 0), vec3(0, 1, 0),
                                             std::numbers::pi, 8);
  CHECK((eq.samples.back().point - vec3(-1, 0, 0)).norm() < 1e-7);
  CHECK(eq.speed_drift < 1e-8);
}

TEST_CASE("Reeb flow lines are geodesics") {
  const ContactModel& m = get_model("heisenberg3").model;
  const Vec p = vec3(0.3, -0.4, -2.0);
  const Vec R = reeb_at(m, p);
  const GeodesicPath path = integrate_geodesic(m.metric, p, R, 1.5, 15);
  std::vector<double> stops;
  for (const auto& smp : path.samples) stops.push_back(smp.s);
  const OdeTrajectory flow = integrate_reeb_flow(m, p, 1.5, stops);
  for (const auto& smp : path.samples) {
    const Vec q = smp.s == 0.0 ? p : Vec(flow.node(smp.s));
    CHECK((q - smp.point).norm() < 1e-8);
    CHECK((reeb_at(m, q) - smp.velocity).norm() < 1e-8);
  }
}

TEST_CASE("leaving the chart") {
  const ContactModel& m = get_model("heisenberg3").model;
  CHECK(error_kind([&] { integrate_geodesic(m.metric, vec3(4.9, 0, 0), vec3(2, 0, 0), 2.0); }) ==
        "LeftChartDomain");
  CHECK(error_kind([&] { integrate_geodesic(m.metric, vec3(0, 0, 0), vec3(1, 0, 0), 1.0); }) ==
        "NotUnit");
}

TEST_CASE("Jacobi fields: flat, sphere, hyperbolic") {
  std::vector<double> s;
  for (int j = 1; j <= 10; ++j) s.push_back(0.1 * j);

  const MetricField flat = flat_metric(3);
  const Vec w = vec3(0, 0.6, 0.8);
  const JacobiSolution fl =
      jacobi_along(flat, Vec::Zero(3), vec3(1, 0, 0), 1.0, Mat::Zero(3, 1), Mat(w), s);
  for (const auto& js : fl.samples) CHECK((js.J().col(0) - js.s * w).norm() < 1e-12);

  const ContactModel& s3 = get_model("round-s3").model;
  const JacobiSolution sp = jacobi_along(s3.metric, Vec::Zero(3), vec3(0.5, 0, 0), 1.0,
                                         Mat::Zero(3, 1), Mat(vec3(0, 0.5, 0)), s);
  for (const auto& js : sp.samples) {
    const PointGeometry pg = point_geometry(s3.metric, js.point);
    CHECK(std::fabs(pg.norm(js.J().col(0)) - std::sin(js.s)) < 1e-7);
  }

  const MetricField hyp = hyperbolic_ball_metric(3);
  const JacobiSolution hy = jacobi_along(hyp, Vec::Zero(3), vec3(0.5, 0, 0), 1.0,
                                         Mat::Zero(3, 1), Mat(vec3(0, 0, 0.5)), s);
  for (const auto& js : hy.samples) {
    const PointGeometry pg = point_geometry(hyp, js.point);
    CHECK(std::fabs(pg.norm(js.J().col(0)) - std::sinh(js.s)) < 1e-6);
  }
}

TEST_CASE("Jacobi residual and Gauss lemma on heisenberg3") {
  const ContactModel& m = get_model("heisenberg3").model;
  const Vec p = vec3(0.2, 0.1, -0.3);
  const ContactFrame f = frame_at(m, p);
  const Mat B = adapted_basis(f);
  const Vec v = (B.col(0) + B.col(2)) / std::sqrt(2.0);
  const Mat E0 = orthonormal_completion(f.geo.g, v);
  const Mat W = E0.rightCols(2);
  const double h = 1e-3;
  const JacobiSolution sol = jacobi_along(m.metric, p, v, 0.8, Mat::Zero(3, 2), W,
                                          {0.4 - 2 * h, 0.4 - h, 0.4, 0.4 + h, 0.4 + 2 * h}, E0);
  REQUIRE(sol.samples.size() == 6);
  const auto& S = sol.samples;
  const Mat fd = (-S[5].Cp + 8 * S[4].Cp - 8 * S[2].Cp + S[1].Cp) / (12 * h);
  CHECK((fd - jacobi_acceleration(m.metric, S[3])).norm() < 1e-6);
  for (const auto& js : sol.samples) {
    const PointGeometry pg = point_geometry(m.metric, js.point);
    for (int i = 0; i < 2; ++i) CHECK(std::fabs(pg.inner(js.J().col(i), js.velocity)) < 1e-8);
    // the transported frame stays orthonormal
    CHECK((js.frame.transpose() * pg.g * js.frame - Mat::Identity(3, 3)).norm() < 1e-8);
  }
}

TEST_CASE("disk frame") {
  const ContactModel& s3 = get_model("round-s3").model;
  const DiskFrame disk = disk_frame(s3, Vec::Zero(3), 0.6, {16, 12, 0}, 1.0);
  CHECK(disk.samples.size() == 16 * 13);
  double worst_cond = 0.0;
  for (const auto& ds : disk.samples) {
    const PointGeometry pg = point_geometry(s3.metric, ds.point);
    const Mat gram = ds.tangent.transpose() * pg.g * ds.tangent;
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    worst_cond = std::max(worst_cond, es.eigenvalues()(1) / es.eigenvalues()(0));
    CHECK(std::fabs(pg.norm(ds.n_D) - 1.0) < 1e-9);
    CHECK((ds.tangent.transpose() * pg.g * ds.n_D).norm() < 1e-8);
  }
  CHECK(worst_cond < 10.0);

  // Near the center n_D approaches R_α(p).
  const ContactModel& h3 = get_model("heisenberg3").model;
  const DiskFrame small = disk_frame(h3, Vec::Zero(3), 1e-3, {8, 2, 0}, 1.0);
  for (const auto& ds : small.samples) {
    const Vec R = reeb_at(h3, ds.point);
    CHECK(R.dot(h3.metric.value(ds.point) * ds.n_D) > 1 - 1e-5);
  }
  CHECK(error_kind([&] { disk_frame(s3, Vec::Zero(3), 1.6, kSmall, 1.0); }) == "RadiusTooLarge");
}

TEST_CASE("twisting probe") {
  const ProbeContext s3 = context_for("round-s3");
  const ContactModel& m = get_model("round-s3").model;
  const ProbeReport rep =
      twisting_probe(m, Vec::Zero(3), 0.5, kSmall, s3, s3.constants.A, s3.constants.B);
  CHECK(rep.pass);
  CHECK(rep.margin_min >= -1e-8);
  CHECK(rep.samples == 12 * 9);
  // On the sphere ⟨R_α, n_D⟩ = cos s, so the margin has a closed form.
  for (const auto& row : rep.trace)
    CHECK(std::fabs(row.margin - (std::cos(row.s) - twist_factor(row.s, 4.0 / 3, 1.0))) < 1e-9);
  // cos s ≥ 1 − ⅔s², so dropping B alone still passes; dropping A too fails.
  CHECK(twisting_probe(m, Vec::Zero(3), 0.5, kSmall, s3, s3.constants.A, 0.0).pass);
  const ProbeReport neg = twisting_probe(m, Vec::Zero(3), 0.5, kSmall, s3, 0.0, 0.0);
  CHECK_FALSE(neg.pass);
  CHECK(neg.margin_min == doctest::Approx(std::cos(0.5) - 1.0).epsilon(1e-9));
  CHECK(error_kind([&] {
          twisting_probe(m, Vec::Zero(3), 2.0, kSmall, s3, s3.constants.A, s3.constants.B);
        }) == "RadiusTooLarge");

  const ProbeContext h3 = context_for("heisenberg3");
  const ProbeReport hr = twisting_probe(get_model("heisenberg3").model, Vec::Zero(3), 0.3, kSmall,
                                        h3, h3.constants.A, h3.constants.B);
  CHECK(hr.pass);
  const std::string csv = probe_trace_csv(hr);
  CHECK(csv.rfind("dir_index,s,margin\n", 0) == 0);
}

TEST_CASE("jacobi bound probe") {
  for (const char* name : {"round-s3", "heisenberg3"}) {
    const ProbeReport rep =
        jacobi_bound_probe(get_model(name).model, Vec::Zero(3), 0.3, kSmall, context_for(name));
    CHECK_MESSAGE(rep.pass, name);
    REQUIRE(rep.margins.size() == 3);
  }
  // sin(s)/s ≤ H1(s) with room to spare on the sphere
  const ProbeReport s3 = jacobi_bound_probe(get_model("round-s3").model, Vec::Zero(3), 1.0,
                                            kSmall, context_for("round-s3"));
  CHECK(s3.margins[0].min > 0.0);
}

TEST_CASE("hessian of distance probe") {
  const ProbeReport s3 = hessian_distance_probe(get_model("round-s3").model, Vec::Zero(3), 1.0,
                                                kSmall, context_for("round-s3"));
  CHECK(std::fabs(s3.margin_min) < 1e-7);
  for (const auto& row : s3.trace) CHECK(std::fabs(row.margin) < 1e-7);
  const ProbeReport h3 = hessian_distance_probe(get_model("heisenberg3").model, Vec::Zero(3), 0.3,
                                                kSmall, context_for("heisenberg3"));
  CHECK(h3.pass);
}

TEST_CASE("taming probe") {
  const ProbeContext ctx = context_for("round-s3");
  const ContactModel& m = get_model("round-s3").model;
  const ProbeReport rep = taming_probe(m, Vec::Zero(3), ctx.bounds.r_tau, kSmall, ctx);
  CHECK(rep.pass);
  CHECK(std::isnan(rep.margins[1].min));  // no off-diagonal pairs when n = 1
  CHECK(rep.margins[2].min > 0.0);
  // At the center F is the standard symplectic matrix.
  const DiskFrame disk = disk_frame(m, Vec::Zero(3), 0.1, kSmall, 1.0);
  const Mat F = disk.xi_basis.transpose() * frame_at(m, Vec::Zero(3)).dalpha * disk.xi_basis / 2.0;
  CHECK(std::fabs(F(0, 1) - 1.0) < 1e-12);
  const ProbeReport far = taming_probe(m, Vec::Zero(3), 0.6, kSmall, ctx);
  CHECK(far.margins[2].min > 0.0);
  CHECK_FALSE(far.notes.empty());

  const ProbeContext c5 = context_for("heisenberg5");
  const ProbeReport h5 =
      taming_probe(get_model("heisenberg5").model, Vec::Zero(5), c5.bounds.r_tau, kSmall, c5);
  CHECK(h5.pass);
  CHECK(h5.margins[1].samples > 0);
}

TEST_CASE("reeb tube probe") {
  const ProbeContext ctx = context_for("round-s3");
  const ContactModel& m = get_model("round-s3").model;
  const TubeGrid grid{8, {8, 6, 0}};
  const ProbeReport rep = reeb_tube_probe(m, m.orbits.at(0), 0.3, grid, ctx);
  CHECK(rep.pass);
  double defect = -1;
  for (const auto& [k, v] : rep.extras)
    if (k == "closure_defect") defect = v;
  CHECK(defect >= 0.0);
  CHECK(defect < 1e-7);
  CHECK(error_kind([&] { reeb_tube_probe(m, m.orbits.at(0), 1.6, grid, ctx); }) ==
        "RadiusTooLarge");

  const ContactModel& h3 = get_model("heisenberg3").model;
  const OrbitSeed fake{vec3(0, 0, -4), 1.0};
  CHECK(error_kind([&] { reeb_tube_probe(h3, fake, 0.2, grid, context_for("heisenberg3")); }) ==
        "OrbitNotClosed");
}
