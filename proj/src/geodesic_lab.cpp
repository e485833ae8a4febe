#include "contact/geodesic_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "contact/errors.hpp"
#include "contact/parallel.hpp"

namespace contact {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Domain exits inside a right-hand side become LeftChartDomain at time t.
template <class F>
void in_chart(double t, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    if (e.kind() != "OutOfDomain") throw;
    std::ostringstream os;
    os << "left the chart domain at s = " << t << ": " << e.what();
    fail("LeftChartDomain", os.str());
  }
}

std::vector<double> even_grid(double length, int n) {
  std::vector<double> s;
  for (int j = 1; j <= n; ++j) s.push_back(length * j / n);
  return s;
}

OdeOptions path_options(double length) {
  OdeOptions o;
  o.hmax = length / 50.0;
  return o;
}

// Offsets of the blocks in the Jacobi state [x, v, E, C, C′].
struct JacobiLayout {
  int d, m;
  int x() const { return 0; }
  int v() const { return d; }
  int E() const { return 2 * d; }
  int C() const { return 2 * d + d * d; }
  int Cp() const { return 2 * d + d * d + d * m; }
  int size() const { return 2 * d + d * d + 2 * d * m; }
};

Mat curvature_operator(const PointGeometry& pg, const Mat& E, const Vec& v) {
  const int d = pg.dim();
  Mat RV(d, d);
  for (int b = 0; b < d; ++b) RV.col(b) = pg.curvature(E.col(b), v, v);
  return E.transpose() * pg.g * RV;
}

JacobiSample unpack(const JacobiLayout& L, double s, const Vec& y) {
  JacobiSample out;
  out.s = s;
  out.point = y.segment(L.x(), L.d);
  out.velocity = y.segment(L.v(), L.d);
  out.frame = Eigen::Map<const Mat>(y.data() + L.E(), L.d, L.d);
  out.C = Eigen::Map<const Mat>(y.data() + L.C(), L.d, L.m);
  out.Cp = Eigen::Map<const Mat>(y.data() + L.Cp(), L.d, L.m);
  return out;
}

double inj_of(const ContactModel& model) { return model.inj.value_or(kInf); }

double disk_limit(const ContactModel& model, double K_upper) {
  double lim = 0.5 * inj_of(model);
  if (K_upper > 0.0) lim = std::min(lim, std::numbers::pi / (2.0 * std::sqrt(K_upper)));
  return lim;
}

void check_radius(double r, double limit, const std::string& what) {
  if (!(r > 0.0)) fail("InvalidInputs", "radius must be positive");
  if (!(r < limit)) {
    std::ostringstream os;
    os << "radius " << r << " is not below " << what << " = " << limit;
    fail("RadiusTooLarge", os.str());
  }
}

double sigma_max(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

double lambda_min_sym(const Mat& m) {
  const Mat s = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Unit directions in ξ_p: an angle sweep when n = 1, otherwise ± the adapted
// basis followed by seeded random combinations.
std::vector<Vec> xi_directions(const Mat& W, int count, std::uint64_t seed) {
  std::vector<Vec> dirs;
  const int m = static_cast<int>(W.cols());
  if (m == 2) {
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * k / count;
      dirs.push_back(std::cos(t) * W.col(0) + std::sin(t) * W.col(1));
    }
    return dirs;
  }
  for (int i = 0; i < m && static_cast<int>(dirs.size()) < count; ++i) {
    dirs.push_back(W.col(i));
    if (static_cast<int>(dirs.size()) < count) dirs.push_back(-W.col(i));
  }
  Rng rng(seed);
  while (static_cast<int>(dirs.size()) < count) {
    Vec a(m);
    for (int i = 0; i < m; ++i) a[i] = rng.normal();
    dirs.push_back(W * (a / a.norm()));
  }
  return dirs;
}

// Margin bookkeeping shared by the probes. Per sample, each named margin is
// either a value or NaN (not applicable).
class MarginSet {
 public:
  MarginSet(std::string probe, double r, std::vector<std::string> names) {
    report_.probe_id = std::move(probe);
    report_.radius = r;
    for (auto& n : names) report_.margins.push_back({std::move(n), kInf, -1, 0.0, 0});
  }

  void add(int dir, double s, const std::vector<double>& values) {
    double lo = kInf;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double v = values[i];
      if (std::isnan(v)) continue;
      NamedMargin& m = report_.margins[i];
      ++m.samples;
      if (v < m.min) {
        m.min = v;
        m.worst_dir = dir;
        m.worst_s = s;
      }
      lo = std::min(lo, v);
    }
    ++report_.samples;
    if (lo < kInf) report_.trace.push_back({dir, s, lo});
  }

  ProbeReport finish(const std::vector<Vec>& directions, double tolerance = 1e-6) {
    ProbeReport& r = report_;
    r.tolerance = tolerance;
    r.margin_min = kInf;
    for (auto& m : r.margins) {
      if (m.samples == 0) {
        m.min = std::numeric_limits<double>::quiet_NaN();
        r.notes.push_back(m.name + ": vacuous, no sample applies");
        continue;
      }
      if (m.min < r.margin_min) {
        r.margin_min = m.min;
        r.worst_dir = m.worst_dir;
        r.worst_s = m.worst_s;
      }
    }
    if (r.worst_dir >= 0 && r.worst_dir < static_cast<int>(directions.size()))
      r.worst_direction = directions[r.worst_dir];
    r.pass = r.margin_min >= -tolerance;
    return r;
  }

 private:
  ProbeReport report_;
};

}  // namespace

GeodesicPath integrate_geodesic(const MetricField& metric, const Vec& p, const Vec& v,
                                double length, int n_samples) {
  const int d = metric.dim();
  if (p.size() != d || v.size() != d) fail("InvalidInputs", "point/velocity dimension mismatch");
  if (!(length > 0.0)) fail("InvalidInputs", "geodesic length must be positive");
  if (n_samples < 1) fail("InvalidInputs", "need at least one sample");
  in_chart(0.0, [&] { metric.chart().require_contains(p); });
  const Mat g0 = metric.value(p);
  const double speed = std::sqrt(v.dot(g0 * v));
  if (std::fabs(speed - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "initial velocity must be unit, |v|_g = " << speed;
    fail("NotUnit", os.str());
  }

  auto rhs = [&](double t, const Vec& y, Vec& dy) {
    in_chart(t, [&] {
      const Connection c = connection_at(metric, y.head(d));
      const Vec u = y.tail(d);
      dy.resize(2 * d);
      dy.head(d) = u;
      for (int k = 0; k < d; ++k) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) acc += c.gamma(k, i, j) * u[i] * u[j];
        dy[d + k] = -acc;
      }
    });
  };
  Vec y0(2 * d);
  y0 << p, v;
  const std::vector<double> grid = even_grid(length, n_samples);

  GeodesicPath path;
  path.trajectory = integrate_dopri5(rhs, 0.0, y0, length, path_options(length), grid);
  path.stats = path.trajectory.stats;
  std::vector<double> all{0.0};
  all.insert(all.end(), grid.begin(), grid.end());
  for (double s : all) {
    const Vec& y = path.trajectory.node(s);
    GeodesicSample smp{s, y.head(d), y.tail(d)};
    const Mat g = metric.value(smp.point);
    path.speed_drift =
        std::max(path.speed_drift, std::fabs(std::sqrt(smp.velocity.dot(g * smp.velocity)) - 1.0));
    path.samples.push_back(std::move(smp));
  }
  return path;
}

JacobiSolution jacobi_along(const MetricField& metric, const Vec& p, const Vec& v, double length,
                            const Mat& J0, const Mat& J0p, const std::vector<double>& sample_s,
                            const Mat& frame0) {
  const int d = metric.dim();
  if (J0.rows() != d || J0p.rows() != d || J0.cols() != J0p.cols())
    fail("InvalidInputs", "Jacobi initial data must be d×m with matching shapes");
  if (!(length > 0.0)) fail("InvalidInputs", "geodesic length must be positive");
  in_chart(0.0, [&] { metric.chart().require_contains(p); });
  const Mat g0 = metric.value(p);
  const double speed = std::sqrt(v.dot(g0 * v));
  if (std::fabs(speed - 1.0) > 1e-9) fail("NotUnit", "initial velocity must be unit");
  const Mat E0 = frame0.size() ? frame0 : orthonormal_completion(g0, v);
  if (E0.rows() != d || E0.cols() != d) fail("InvalidInputs", "frame must be a d×d basis");

  const JacobiLayout L{d, static_cast<int>(J0.cols())};
  Vec y0(L.size());
  y0.segment(L.x(), d) = p;
  y0.segment(L.v(), d) = v;
  Eigen::Map<Mat>(y0.data() + L.E(), d, d) = E0;
  // E0 is g-orthonormal, so E0⁻¹ = E0ᵀ g.
  Eigen::Map<Mat>(y0.data() + L.C(), d, L.m) = E0.transpose() * g0 * J0;
  Eigen::Map<Mat>(y0.data() + L.Cp(), d, L.m) = E0.transpose() * g0 * J0p;

  auto rhs = [&](double t, const Vec& y, Vec& dy) {
    in_chart(t, [&] {
      const Vec x = y.segment(L.x(), d);
      const Vec u = y.segment(L.v(), d);
      const Eigen::Map<const Mat> E(y.data() + L.E(), d, d);
      const Eigen::Map<const Mat> C(y.data() + L.C(), d, L.m);
      const Eigen::Map<const Mat> Cp(y.data() + L.Cp(), d, L.m);
      const PointGeometry pg = point_geometry(metric, x);
      dy.resize(L.size());
      dy.segment(L.x(), d) = u;
      dy.segment(L.v(), d) = -pg.gamma_contract(u, u);
      Eigen::Map<Mat>(dy.data() + L.E(), d, d) = -pg.gamma_along(u) * E;
      Eigen::Map<Mat>(dy.data() + L.C(), d, L.m) = Cp;
      Eigen::Map<Mat>(dy.data() + L.Cp(), d, L.m) = -curvature_operator(pg, E, u) * C;
    });
  };

  JacobiSolution sol;
  sol.trajectory = integrate_dopri5(rhs, 0.0, y0, length, path_options(length), sample_s);
  sol.stats = sol.trajectory.stats;
  std::vector<double> all{0.0};
  for (double s : sample_s)
    if (s > 0.0 && s <= length) all.push_back(s);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (double s : all) sol.samples.push_back(unpack(L, s, sol.trajectory.node(s)));
  return sol;
}

JacobiSolution jacobi_along(const MetricField& metric, const GeodesicPath& path, const Mat& J0,
                            const Mat& J0p) {
  if (path.samples.size() < 2) fail("InvalidInputs", "path has no samples");
  std::vector<double> s;
  for (std::size_t i = 1; i < path.samples.size(); ++i) s.push_back(path.samples[i].s);
  return jacobi_along(metric, path.samples.front().point, path.samples.front().velocity,
                      path.samples.back().s, J0, J0p, s);
}

Mat jacobi_acceleration(const MetricField& metric, const JacobiSample& sample) {
  const PointGeometry pg = point_geometry(metric, sample.point);
  return -curvature_operator(pg, sample.frame, sample.velocity) * sample.C;
}

OdeTrajectory integrate_reeb_flow(const ContactModel& model, const Vec& p, double T,
                                  const std::vector<double>& outputs) {
  in_chart(0.0, [&] { model.chart().require_contains(p); });
  auto rhs = [&](double t, const Vec& y, Vec& dy) {
    in_chart(t, [&] { dy = reeb_at(model, y); });
  };
  return integrate_dopri5(rhs, 0.0, p, T, path_options(T), outputs);
}

ProbeContext make_probe_context(const BoundInputs& inputs) {
  ProbeContext ctx;
  ctx.inputs = inputs;
  ctx.constants = compute_constants(inputs);
  ctx.bounds = radius_bounds(inputs);
  return ctx;
}

DiskFrame disk_frame(const ContactModel& model, const Vec& p, double r, const ProbeGrid& grid,
                     double K_upper) {
  if (grid.n_dirs < 1 || grid.n_radii < 1) fail("InvalidInputs", "probe grid must be positive");
  check_radius(r, disk_limit(model, K_upper), "min(inj/2, π/(2√K))");
  in_chart(0.0, [&] { model.chart().require_contains(p); });
  const ContactFrame f = frame_at(model, p);
  const int d = f.dim(), m = 2 * f.n;

  DiskFrame disk;
  disk.center = p;
  disk.radius = r;
  disk.xi_basis = adapted_basis(f).leftCols(m);
  disk.directions = xi_directions(disk.xi_basis, grid.n_dirs, grid.seed);
  const std::vector<double> radii = even_grid(r, grid.n_radii);

  std::vector<std::vector<DiskSample>> per_dir(disk.directions.size());
  parallel_for(static_cast<int>(disk.directions.size()), [&](int k) {
    const Vec& v = disk.directions[k];
    const Mat E0 = orthonormal_completion(f.geo.g, v);
    const JacobiSolution sol =
        jacobi_along(model.metric, p, v, r, Mat::Zero(d, m), disk.xi_basis, radii, E0);
    Vec prev = E0.transpose() * f.geo.g * f.n_unit;
    auto& out = per_dir[k];
    for (const JacobiSample& js : sol.samples) {
      DiskSample ds;
      ds.dir = k;
      ds.s = js.s;
      ds.point = js.point;
      ds.frame = js.frame;
      ds.C = js.C;
      ds.Cp = js.Cp;
      if (js.s == 0.0) {
        ds.tangent = disk.xi_basis;
        ds.n_components = prev;
        ds.n_D = f.n_unit;
      } else {
        ds.tangent = js.frame * js.C / js.s;
        Eigen::JacobiSVD<Mat> svd(js.C, Eigen::ComputeFullU);
        Vec nc = svd.matrixU().col(d - 1);
        if (nc.dot(prev) < 0.0) nc = -nc;
        prev = nc;
        ds.n_components = nc;
        ds.n_D = js.frame * nc;
      }
      out.push_back(std::move(ds));
    }
  });
  for (auto& v : per_dir)
    for (auto& s : v) disk.samples.push_back(std::move(s));
  return disk;
}

namespace {

// Evaluates `fn` on every disk sample in parallel and merges in sample order.
template <class F>
std::vector<std::vector<double>> per_sample(const DiskFrame& disk, F&& fn) {
  std::vector<std::vector<double>> vals(disk.samples.size());
  parallel_for(static_cast<int>(disk.samples.size()),
               [&](int i) { vals[i] = fn(disk.samples[i]); });
  return vals;
}

double reeb_alignment(const ContactModel& model, const DiskSample& ds) {
  const Vec R = reeb_at(model, ds.point);
  return R.dot(model.metric.value(ds.point) * ds.n_D);
}

}  // namespace

ProbeReport twisting_probe(const ContactModel& model, const Vec& p, double r,
                           const ProbeGrid& grid, const ProbeContext& ctx, double A, double B) {
  check_radius(r, ctx.bounds.r_perp, "r_perp");
  const DiskFrame disk = disk_frame(model, p, r, grid, ctx.inputs.K_upper);
  const auto vals = per_sample(disk, [&](const DiskSample& ds) {
    return std::vector<double>{reeb_alignment(model, ds) - twist_factor(ds.s, A, B)};
  });
  MarginSet ms("twisting", r, {"reeb-normal"});
  for (std::size_t i = 0; i < vals.size(); ++i)
    ms.add(disk.samples[i].dir, disk.samples[i].s, vals[i]);
  ProbeReport rep = ms.finish(disk.directions);
  rep.extras.push_back({"A", A});
  rep.extras.push_back({"B", B});
  return rep;
}

ProbeReport jacobi_bound_probe(const ContactModel& model, const Vec& p, double r,
                               const ProbeGrid& grid, const ProbeContext& ctx) {
  const DiskFrame disk = disk_frame(model, p, r, grid, ctx.inputs.K_upper);
  const double kappa = ctx.inputs.kappa, sec_abs = ctx.inputs.sec_abs;
  // H1 and H2 depend only on s, which is shared by all directions.
  std::vector<double> radii = even_grid(r, grid.n_radii), h1, h2;
  for (double s : radii) {
    h1.push_back(H1_of_r(s, kappa));
    h2.push_back(H2_of_r(s, kappa, sec_abs));
  }
  const auto vals = per_sample(disk, [&](const DiskSample& ds) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (ds.s == 0.0) return std::vector<double>{nan, nan, nan};
    const auto j = static_cast<std::size_t>(std::lround(ds.s / r * grid.n_radii)) - 1;
    const double s = ds.s;
    const Mat X = ds.C / s;
    const Mat dX = (ds.Cp - X) / s;
    // sup over J in the span of |⟨n_D, J′⟩| / ‖J(s)‖
    const Vec b = ds.Cp.transpose() * ds.n_components;
    const Mat gram = ds.C.transpose() * ds.C;
    const double ratio = gram.llt().matrixL().solve(b).norm();
    return std::vector<double>{h1[j] - sigma_max(X), h2[j] - sigma_max(dX),
                               4.0 / 3.0 * sec_abs * s - ratio};
  });
  MarginSet ms("jacobi", r, {"X-norm", "nabla-X", "nD-Jprime"});
  for (std::size_t i = 0; i < vals.size(); ++i)
    ms.add(disk.samples[i].dir, disk.samples[i].s, vals[i]);
  return ms.finish(disk.directions);
}

ProbeReport taming_probe(const ContactModel& model, const Vec& p, double r, const ProbeGrid& grid,
                         const ProbeContext& ctx) {
  const DiskFrame disk = disk_frame(model, p, r, grid, ctx.inputs.K_upper);
  const int m = static_cast<int>(disk.xi_basis.cols());
  const double Hbar = ctx.constants.Hbar, tp = ctx.inputs.theta_prime;
  Mat Jm = Mat::Zero(m, m);
  for (int i = 0; i + 1 < m; i += 2) {
    Jm(i + 1, i) = 1.0;
    Jm(i, i + 1) = -1.0;
  }
  const auto vals = per_sample(disk, [&](const DiskSample& ds) {
    const Mat omega = alpha_jet(model, ds.point, 1).omega;
    const Mat F = ds.tangent.transpose() * omega * ds.tangent / tp;
    double diag = kInf, off = kInf;
    for (int k = 0; k < m; ++k)
      for (int l = k + 1; l < m; ++l) {
        if (k % 2 == 0 && l == k + 1)
          diag = std::min(diag, F(k, l) - (1.0 - Hbar * ds.s));
        else
          off = std::min(off, Hbar * ds.s - std::fabs(F(k, l)));
      }
    if (off == kInf) off = std::numeric_limits<double>::quiet_NaN();
    return std::vector<double>{diag, off, lambda_min_sym(F * Jm)};
  });
  MarginSet ms("taming", r, {"diagonal", "off-diagonal", "taming-ratio"});
  for (std::size_t i = 0; i < vals.size(); ++i)
    ms.add(disk.samples[i].dir, disk.samples[i].s, vals[i]);
  ProbeReport rep = ms.finish(disk.directions);
  rep.extras.push_back({"Hbar", Hbar});
  rep.extras.push_back({"r_tau", ctx.bounds.r_tau});
  if (r > ctx.bounds.r_tau)
    rep.notes.push_back("radius exceeds r_tau; the bound does not cover this radius");
  return rep;
}

ProbeReport hessian_distance_probe(const ContactModel& model, const Vec& p, double r,
                                   const ProbeGrid& grid, const ProbeContext& ctx) {
  if (grid.n_dirs < 1 || grid.n_radii < 1) fail("InvalidInputs", "probe grid must be positive");
  const double K = ctx.inputs.K_upper;
  check_radius(r, disk_limit(model, K), "min(inj/2, π/(2√K))");
  in_chart(0.0, [&] { model.chart().require_contains(p); });
  const ContactFrame f = frame_at(model, p);
  const int d = f.dim();
  const Mat basis = adapted_basis(f);

  // Directions in all of T_pM: ± the adapted basis, then seeded draws.
  std::vector<Vec> dirs;
  for (int i = 0; i < d && static_cast<int>(dirs.size()) < grid.n_dirs; ++i) {
    dirs.push_back(basis.col(i));
    if (static_cast<int>(dirs.size()) < grid.n_dirs) dirs.push_back(-basis.col(i));
  }
  Rng rng(grid.seed);
  while (static_cast<int>(dirs.size()) < grid.n_dirs) {
    Vec a(d);
    for (int i = 0; i < d; ++i) a[i] = rng.normal();
    dirs.push_back(basis * (a / a.norm()));
  }

  const std::vector<double> radii = even_grid(r, grid.n_radii);
  std::vector<std::vector<std::vector<double>>> vals(dirs.size());
  std::vector<std::vector<double>> svals(dirs.size());
  parallel_for(static_cast<int>(dirs.size()), [&](int k) {
    const Mat E0 = orthonormal_completion(f.geo.g, dirs[k]);
    const Mat W = E0.rightCols(d - 1);
    const JacobiSolution sol =
        jacobi_along(model.metric, p, dirs[k], r, Mat::Zero(d, d - 1), W, radii, E0);
    for (const JacobiSample& js : sol.samples) {
      if (js.s == 0.0) continue;
      const Mat form = js.C.transpose() * js.Cp - ct(K, js.s) * js.C.transpose() * js.C;
      vals[k].push_back({lambda_min_sym(form)});
      svals[k].push_back(js.s);
    }
  });
  MarginSet ms("hessian", r, {"hessian-comparison"});
  for (std::size_t k = 0; k < dirs.size(); ++k)
    for (std::size_t j = 0; j < vals[k].size(); ++j)
      ms.add(static_cast<int>(k), svals[k][j], vals[k][j]);
  ProbeReport rep = ms.finish(dirs);
  rep.extras.push_back({"K_upper", K});
  return rep;
}

ProbeReport reeb_tube_probe(const ContactModel& model, const OrbitSeed& seed, double r,
                            const TubeGrid& grid, const ProbeContext& ctx) {
  if (grid.orbit_points < 1) fail("InvalidInputs", "need at least one orbit point");
  check_radius(r, ctx.bounds.tube_embed_radius, "tube_embed_radius");
  check_radius(r, ctx.bounds.r_perp, "r_perp");
  if (!seed.period) fail("OrbitNotClosed", "orbit seed has no known period");
  const double T = *seed.period;
  if (!(T > 0.0)) fail("InvalidInputs", "orbit period must be positive");
  std::vector<double> stops;
  for (int k = 1; k < grid.orbit_points; ++k) stops.push_back(T * k / grid.orbit_points);
  const OdeTrajectory orbit = integrate_reeb_flow(model, seed.point, T, stops);
  const Vec gap = orbit.y.back() - seed.point;
  const double defect = std::sqrt(gap.dot(model.metric.value(seed.point) * gap));
  if (defect > 1e-4) {
    std::ostringstream os;
    os << "Reeb orbit does not close: defect " << defect << " after time " << T;
    fail("OrbitNotClosed", os.str());
  }

  const double A = ctx.constants.A, B = ctx.constants.B;
  MarginSet ms("reeb-tube", r, {"reeb-normal"});
  std::vector<Vec> dirs;
  double transversality = kInf;
  stops.insert(stops.begin(), 0.0);
  for (int k = 0; k < grid.orbit_points; ++k) {
    const Vec q = k == 0 ? seed.point : Vec(orbit.node(stops[k]));
    const DiskFrame disk = disk_frame(model, q, r, grid.disk, ctx.inputs.K_upper);
    const auto vals = per_sample(disk, [&](const DiskSample& ds) {
      return std::vector<double>{reeb_alignment(model, ds)};
    });
    const int base = static_cast<int>(dirs.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const DiskSample& ds = disk.samples[i];
      transversality = std::min(transversality, vals[i][0]);
      ms.add(base + ds.dir, ds.s, {vals[i][0] - twist_factor(ds.s, A, B)});
    }
    dirs.insert(dirs.end(), disk.directions.begin(), disk.directions.end());
  }
  ProbeReport rep = ms.finish(dirs);
  rep.extras.push_back({"period", T});
  rep.extras.push_back({"closure_defect", defect});
  rep.extras.push_back({"transversality_min", transversality});
  if (defect > 1e-6) {
    rep.pass = false;
    rep.notes.push_back("closure defect above 1e-6");
  }
  return rep;
}

std::string probe_trace_csv(const ProbeReport& report) {
  std::string out = "dir_index,s,margin\n";
  char buf[96];
  for (const TraceRow& row : report.trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", row.dir, row.s, row.margin);
    out += buf;
  }
  return out;
}

}  // namespace contact
