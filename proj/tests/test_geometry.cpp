#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "contact/contact_metric.hpp"
#include "contact/errors.hpp"
#include "contact/models.hpp"

using namespace contact;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(xs.size());
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vec random_vec(Rng& rng, int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.normal();
  return v;
}

double max_abs_riemann(const PointGeometry& pg) {
  const int d = pg.dim();
  double m = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) m = std::max(m, std::fabs(pg.riemann(a, b, c, e)));
  return m;
}

}  // namespace

TEST_CASE("flat space has no connection or curvature") {
  const MetricField flat = flat_metric(3);
  const PointGeometry pg = point_geometry(flat, vec({0.2, -0.4, 0.7}));
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(pg.gamma(k, i, j) == 0.0);
  CHECK(max_abs_riemann(pg) == 0.0);
  CHECK(sectional(pg, vec({1, 0, 0}), vec({0.3, 1, 2})) == 0.0);
  CHECK(ricci_direction(pg, vec({0, 1, 0})) == 0.0);
}

TEST_CASE("polar coordinates") {
  Chart chart({"r", "t"}, {{0.0, 10.0}, {-4.0, 4.0}});
  const MetricField g = MetricField::from_strings(chart, {{"1", "0"}, {"r^2"}});
  const PointGeometry pg = point_geometry(g, vec({2.0, 0.3}));
  CHECK(pg.gamma(0, 1, 1) == doctest::Approx(-2.0));
  CHECK(pg.gamma(1, 0, 1) == doctest::Approx(0.5));
  CHECK(pg.gamma(1, 1, 0) == doctest::Approx(0.5));
  CHECK(max_abs_riemann(pg) < 1e-14);
}

TEST_CASE("round sphere has sectional curvature one") {
  const ContactModel& m = get_model("round-s3").model;
  Rng rng(3);
  const PointGeometry pg = point_geometry(m.metric, Vec::Zero(3));
  for (int k = 0; k < 20; ++k)
    CHECK(sectional(pg, random_vec(rng, 3), random_vec(rng, 3)) == doctest::Approx(1.0).epsilon(1e-9));
  for (int k = 0; k < 10; ++k) {
    const PointGeometry q = point_geometry(m.metric, sample_point(m.chart(), rng));
    Vec v = random_vec(rng, 3);
    v /= q.norm(v);
    CHECK(std::fabs(ricci_direction(q, v) - 2.0) < 1e-8);
  }
}

TEST_CASE("heisenberg curvature on contact and Reeb planes") {
  const ContactModel& m = get_model("heisenberg3").model;
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const Vec p = sample_point(m.chart(), rng);
    const PointGeometry pg = point_geometry(m.metric, p);
    const Vec e1 = vec({1, 0, p[1]}), e2 = vec({0, 1, 0}), R = vec({0, 0, 2});
    CHECK(std::fabs(sectional(pg, e1, e2) + 3.0) < 1e-8);
    CHECK(std::fabs(sectional(pg, e1, R) - 1.0) < 1e-8);
    CHECK(std::fabs(sectional(pg, R, e1 + 0.3 * e2) - 1.0) < 1e-8);
    CHECK(std::fabs(ricci_direction(pg, R) - 2.0) < 1e-8);
  }
}

TEST_CASE("degenerate planes and non-unit directions are rejected") {
  const PointGeometry pg = point_geometry(flat_metric(3), Vec::Zero(3));
  CHECK_THROWS_AS(sectional(pg, vec({1, 2, 3}), vec({2, 4, 6})), Error);
  CHECK_THROWS_AS(ricci_direction(pg, vec({1, 1, 0})), Error);
  try {
    point_geometry(get_model("heisenberg3").model.metric, vec({6, 0, 0}));
    FAIL("expected OutOfDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == "OutOfDomain");
  }
  Chart chart({"x", "y"}, {{-1, 1}, {-1, 1}});
  const MetricField bad = MetricField::from_strings(chart, {{"1", "2"}, {"1"}});
  try {
    point_geometry(bad, vec({0, 0}));
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.kind() == "NotPositiveDefinite");
  }
}

TEST_CASE("curvature symmetries, Bianchi and metric compatibility") {
  std::vector<MetricField> metrics = {get_model("heisenberg3").model.metric,
                                      get_model("heisenberg5").model.metric,
                                      get_model("round-s3").model.metric,
                                      hyperbolic_ball_metric(3)};
  for (const auto& metric : metrics) {
    Rng rng(11);
    const int d = metric.dim();
    double sym = 0.0, bianchi = 0.0, compat = 0.0;
    for (int k = 0; k < 100; ++k) {
      const PointGeometry pg = point_geometry(metric, sample_point(metric.chart(), rng));
      double scale = 1.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          for (int c = 0; c < d; ++c)
            for (int e = 0; e < d; ++e)
              scale = std::max(scale, std::fabs(pg.riemann_lowered(a, b, c, e)));
      for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            for (int m = 0; m < d; ++m) {
              const double r = pg.riemann_lowered(l, i, j, m);
              sym = std::max(sym, std::fabs(r + pg.riemann_lowered(i, l, j, m)) / scale);
              sym = std::max(sym, std::fabs(r + pg.riemann_lowered(l, i, m, j)) / scale);
              sym = std::max(sym, std::fabs(r - pg.riemann_lowered(j, m, l, i)) / scale);
              const double cyc =
                  pg.riemann(l, i, j, m) + pg.riemann(l, j, m, i) + pg.riemann(l, m, i, j);
              bianchi = std::max(bianchi, std::fabs(cyc) / scale);
            }
      for (int kk = 0; kk < d; ++kk)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            double r = pg.dg(kk, i, j);
            for (int l = 0; l < d; ++l)
              r -= pg.gamma(l, kk, i) * pg.g(l, j) + pg.gamma(l, kk, j) * pg.g(i, l);
            compat = std::max(compat, std::fabs(r));
          }
    }
    CHECK(sym < 1e-9);
    CHECK(bianchi < 1e-9);
    CHECK(compat < 1e-10);
  }
}

TEST_CASE("curvature tensor bounded by four thirds of the sectional bound") {
  for (const char* name : {"heisenberg3", "heisenberg5", "round-s3"}) {
    const ContactModel& m = get_model(name).model;
    const SecRange sr = sec_range_estimate(m, SecSampler{20, 20, 5});
    const double sec_abs = std::max(std::fabs(sr.kappa), std::fabs(sr.K));
    Rng rng(6);
    const int d = m.dim();
    double worst = -1e300;
    for (int k = 0; k < 20; ++k) {
      const PointGeometry pg = point_geometry(m.metric, sample_point(m.chart(), rng));
      Mat cand(d, d);
      for (int c = 0; c < d; ++c) cand.col(c) = random_vec(rng, d);
      const Mat e = gram_schmidt(pg.g, cand);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          for (int c = 0; c < d; ++c)
            for (int f = 0; f < d; ++f) {
              if (a == b || c == f) continue;
              const double r = pg.inner(pg.curvature(e.col(a), e.col(b), e.col(c)), e.col(f));
              worst = std::max(worst, std::fabs(r) - 4.0 / 3.0 * sec_abs);
            }
    }
    CHECK_MESSAGE(worst <= 1e-6, name);
  }
}

TEST_CASE("Christoffel symbols agree with finite differences of the metric") {
  for (const char* name : {"heisenberg3", "heisenberg5", "round-s3"}) {
    const MetricField& metric = get_model(name).model.metric;
    const int d = metric.dim();
    Rng rng(8);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Vec p = sample_point(metric.chart(), rng);
      const PointGeometry pg = point_geometry(metric, p);
      const double h = 1e-4;
      std::vector<Mat> dg(d);
      for (int m = 0; m < d; ++m) {
        Vec a = p, b = p, c = p, e = p;
        a[m] += 2 * h;
        b[m] += h;
        c[m] -= h;
        e[m] -= 2 * h;
        dg[m] = (-metric.value(a) + 8 * metric.value(b) - 8 * metric.value(c) + metric.value(e)) /
                (12 * h);
      }
      for (int kk = 0; kk < d; ++kk)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            double fd = 0.0;
            for (int l = 0; l < d; ++l)
              fd += 0.5 * pg.g_inv(kk, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
            worst = std::max(worst, std::fabs(fd - pg.gamma(kk, i, j)) / std::max(1.0, std::fabs(fd)));
          }
    }
    CHECK_MESSAGE(worst < 1e-6, name);
  }
}

TEST_CASE("sectional range estimates") {
  const SecRange s3 = sec_range_estimate(get_model("round-s3").model, SecSampler{50, 20, 1});
  CHECK(std::fabs(s3.kappa - 1.0) < 1e-8);
  CHECK(std::fabs(s3.K - 1.0) < 1e-8);
  CHECK(s3.estimate);
  const SecRange h3 = sec_range_estimate(get_model("heisenberg3").model, SecSampler{200, 20, 1});
  CHECK(std::fabs(h3.kappa + 3.0) < 1e-8);
  CHECK(std::fabs(h3.K - 1.0) < 1e-8);
  const SecRange flat = sec_range_estimate(flat_metric(3), SecSampler{10, 10, 1});
  CHECK(flat.kappa == 0.0);
  CHECK(flat.K == 0.0);
  CHECK_THROWS(sec_range_estimate(flat_metric(3), SecSampler{0, 10, 1}));
}

TEST_CASE("hyperbolic ball has curvature minus one") {
  const MetricField m = hyperbolic_ball_metric(3);
  Rng rng(2);
  for (int k = 0; k < 10; ++k) {
    const PointGeometry pg = point_geometry(m, sample_point(m.chart(), rng));
    CHECK(sectional(pg, random_vec(rng, 3), random_vec(rng, 3)) == doctest::Approx(-1.0).epsilon(1e-9));
  }
}
