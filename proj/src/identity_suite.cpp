#include "contact/identity_suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>

#include "contact/errors.hpp"
#include "contact/parallel.hpp"

namespace contact {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rel(double diff, std::initializer_list<double> terms) {
  double scale = 1.0;
  for (double t : terms) scale = std::max(scale, std::fabs(t));
  return diff / scale;
}

// g-orthonormal basis O, so that O⁻¹ = Oᵀg.
Mat on(const ContactFrame& f, const Mat& m, const Mat& O) {
  return O.transpose() * f.geo.g * m * O;
}

double op_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

// Σ_a X^a ∂_a φ
Mat phi_along(const ContactFrame& f, const Vec& x) {
  Mat m = Mat::Zero(f.dim(), f.dim());
  for (int a = 0; a < f.dim(); ++a) m += x[a] * f.d_phi[a];
  return m;
}

// Partials of the ξ-section V = w − α(w)R_α through w ∈ ξ_p, at p:
// column k is ∂_k V.
Mat xi_section_partials(const ContactFrame& f, const Vec& w) {
  return -f.reeb * (f.d_alpha * w).transpose();
}

// Partials of φV = φ w.
Mat phi_section_partials(const ContactFrame& f, const Vec& w) {
  Mat m(f.dim(), f.dim());
  for (int k = 0; k < f.dim(); ++k) m.col(k) = f.d_phi[k] * w;
  return m;
}

Vec bracket(const Vec& X, const Mat& dX, const Vec& Y, const Mat& dY) { return dY * X - dX * Y; }

Vec nabla(const ContactFrame& f, const Vec& X, const Vec& Y, const Mat& dY) {
  return dY * X + f.geo.gamma_contract(X, Y);
}

// Evaluation context at one sample point.
struct PointCtx {
  const ContactFrame& f;
  Mat O;  // adapted g-orthonormal basis
  double B;
  Rng& rng;
  const std::vector<Expression>& levi_fns;
  int index;

  Vec xi() const { return random_xi_vector(f, rng); }
  Vec any() const { return random_unit_vector(f, rng); }
};

struct Value {
  double residual = kNaN;  // identities
  double margin = kNaN;    // inequalities
};

using CheckFn = std::function<Value(const PointCtx&)>;

struct CheckDef {
  std::string id;
  bool inequality;
  CheckFn fn;
};

Value reeb_geodesic(const PointCtx& c) {
  const ContactFrame& f = c.f;
  const Vec nrr = nabla_reeb(f, f.reeb);
  double worst = rel(f.norm(nrr), {});
  for (int t = 0; t < 3; ++t) {
    const Vec w = c.xi();
    const Vec v = f.phi * w;  // a ξ-valued field through a point of ξ
    const Vec dv = phi_along(f, f.reeb) * w + f.geo.gamma_along(f.reeb) * v;
    worst = std::max(worst, rel(std::fabs(f.inner(dv, f.reeb)), {f.norm(dv)}));
  }
  return {worst, kNaN};
}

Value phi_square(const PointCtx& c) {
  const ContactFrame& f = c.f;
  const int d = f.dim();
  const Mat phi2 = f.phi * f.phi;
  const Mat diff = phi2 + Mat::Identity(d, d) - f.reeb * f.alpha.transpose();
  return {rel(on(f, diff, c.O).norm(), {on(f, phi2, c.O).norm()}), kNaN};
}

Value h_symmetric(const PointCtx& c) {
  const Mat H = on(c.f, c.f.h, c.O);
  return {rel((H - H.transpose()).norm(), {H.norm()}), kNaN};
}

Value nabla_reeb_identity(const PointCtx& c) {
  const ContactFrame& f = c.f;
  double worst = 0.0;
  std::vector<Vec> vs;
  for (int i = 0; i < 2 * f.n; ++i) vs.push_back(c.O.col(i));
  for (int t = 0; t < 3; ++t) vs.push_back(c.xi());
  for (const Vec& v : vs) {
    const Vec lhs = nabla_reeb(f, v);
    const Vec rhs = f.phi * (0.5 * f.theta_prime * v - f.h * v);
    worst = std::max(worst, rel(f.norm(lhs - rhs), {f.norm(lhs), f.norm(rhs)}));
  }
  return {worst, kNaN};
}

Value anticommute(const PointCtx& c) {
  const ContactFrame& f = c.f;
  const Mat a = on(f, f.phi * f.h, c.O), b = on(f, f.h * f.phi, c.O);
  return {rel((a + b).norm(), {a.norm(), b.norm()}), kNaN};
}

Value ii_trace(const PointCtx& c) {
  const ContactFrame& f = c.f;
  double worst = 0.0;
  for (int t = 0; t < 4; ++t) {
    const Vec v = c.xi();
    const Vec Jv = f.phi * v;
    const double a = v.dot(f.II * v), b = Jv.dot(f.II * Jv);
    worst = std::max(worst, rel(std::fabs(a + b), {a, b}));
  }
  return {worst, kNaN};
}

Value reeb_J_commute(const PointCtx& c) {
  const ContactFrame& f = c.f;
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const Vec w = c.xi();
    const Vec lhs = nabla(f, f.reeb, f.phi * w, phi_section_partials(f, w));
    const Vec rhs = f.phi * nabla(f, f.reeb, w, xi_section_partials(f, w));
    worst = std::max(worst, rel(f.norm(lhs - rhs), {f.norm(lhs), f.norm(rhs)}));
  }
  return {worst, kNaN};
}

Value nabla_phi_formula(const PointCtx& c) {
  const ContactFrame& f = c.f;
  const double tp = f.theta_prime;
  double worst = 0.0;
  auto one = [&](const Vec& u, const Vec& v, const Vec& w) {
    const double lhs = f.inner(nabla_phi(f, u) * v, w);
    const Vec ux = f.xi_part(u), vx = f.xi_part(v), wx = f.xi_part(w);
    const double t1 = f.inner(phi_torsion(f, v, w), f.phi * u);
    const double t2 = tp * f.alpha.dot(w) * f.inner(ux, vx);
    const double t3 = tp * f.alpha.dot(v) * f.inner(ux, wx);
    const double rhs = 0.5 * (t1 - t2 + t3);
    worst = std::max(worst, rel(std::fabs(lhs - rhs), {lhs, t1, t2, t3}));
  };
  one(c.any(), c.any(), c.any());
  one(f.reeb, c.any(), c.any());
  one(c.xi(), f.reeb, c.any());
  one(c.any(), c.xi(), f.reeb);
  one(c.xi() + 0.7 * f.reeb, c.xi() - 0.4 * f.reeb, c.xi() + 1.3 * f.reeb);
  return {worst, kNaN};
}

Value ricci_h(const PointCtx& c) {
  const ContactFrame& f = c.f;
  const double hn = op_norm(on(f, f.h, c.O));
  const double lhs = hn * hn;
  const double ric = ricci_direction(f.geo, f.n_unit);
  const double rhs = f.n * 0.25 * f.theta_prime * f.theta_prime - 0.5 * ric;
  const double m = rel(rhs - lhs, {lhs, rhs});
  return {f.n == 1 ? std::fabs(m) : kNaN, m};
}

Value nabla_reeb_norm(const PointCtx& c) {
  const ContactFrame& f = c.f;
  const Mat D = nabla_vector(f.geo, f.reeb, f.d_reeb);
  return {kNaN, rel(c.B - op_norm(on(f, D, c.O)), {c.B})};
}

Value nabla_phi_norm(const PointCtx& c) {
  const ContactFrame& f = c.f;
  double worst = 0.0;
  std::vector<Vec> us;
  for (int i = 0; i < f.dim(); ++i) us.push_back(c.O.col(i));
  for (int t = 0; t < 4; ++t) us.push_back(c.any());
  for (const Vec& u : us) worst = std::max(worst, op_norm(on(f, nabla_phi(f, u), c.O)));
  return {kNaN, rel(2.0 * c.B - worst, {2.0 * c.B})};
}

Value levi(const PointCtx& c) {
  const ContactFrame& f = c.f;
  const Expression& fn = c.levi_fns[c.index % c.levi_fns.size()];
  double worst = 0.0;
  for (int t = 0; t < 2; ++t) {
    Vec w(f.dim() + 1);
    for (int i = 0; i < w.size(); ++i) w[i] = c.rng.normal();
    const LeviSample s = levi_sample(f, fn, w);
    worst = std::max(worst, rel(std::fabs(s.L - s.hessian), {s.L, s.hessian}));
    worst = std::max(worst, std::max(s.df_v, s.df_Jv));
  }
  return {worst, kNaN};
}

Value levi_AB(const PointCtx& c) {
  const ContactFrame& f = c.f;
  const int d = f.dim();
  const double tp = f.theta_prime;
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const Vec w = c.xi();
    const Vec Jw = f.phi * w;
    const Mat dV = xi_section_partials(f, w), dJV = phi_section_partials(f, w);
    // A(v) = J[Jv, v] − ∇_v v − ∇_{Jv} Jv on R × M
    const Vec br = bracket(Jw, dJV, w, dV);
    Vec A(d + 1);
    A.head(d) = f.phi * br - nabla(f, w, w, dV) - nabla(f, Jw, Jw, dJV);
    A[d] = -f.alpha.dot(br);
    Vec A_exp = Vec::Zero(d + 1);
    A_exp[d] = -tp * f.inner(w, w);
    // B(v) = J[v, R] + ∇_{Jv} R + ∇_R Jv
    const Vec brR = bracket(w, dV, f.reeb, f.d_reeb);
    Vec B(d + 1);
    B.head(d) = f.phi * brR + nabla_reeb(f, Jw) + nabla(f, f.reeb, Jw, dJV);
    B[d] = -f.alpha.dot(brR);
    Vec B_exp = Vec::Zero(d + 1);
    B_exp.head(d) = -tp * w;
    auto nW = [&](const Vec& x) { return std::sqrt(f.inner(x.head(d), x.head(d)) + x[d] * x[d]); };
    worst = std::max(worst, rel(nW(A - A_exp), {nW(A), nW(A_exp)}));
    worst = std::max(worst, rel(nW(B - B_exp), {nW(B), nW(B_exp)}));
  }
  return {worst, kNaN};
}

Value torsion_3d(const PointCtx& c) {
  const ContactFrame& f = c.f;
  if (f.n != 1) return {};
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const Vec v = c.xi();
    const Vec same = phi_torsion(f, v, v);
    const Vec rot = phi_torsion(f, v, f.phi * v);
    const Vec expect = -f.theta_prime * f.inner(v, v) * f.reeb;
    worst = std::max(worst, rel(f.norm(same), {}));
    worst = std::max(worst, rel(f.norm(rot - expect), {f.norm(rot), f.norm(expect)}));
  }
  return {worst, kNaN};
}

Value torsion_relation(const PointCtx& c) {
  const ContactFrame& f = c.f;
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const Vec v = c.xi(), w = c.xi();
    const Vec Jv = f.phi * v, Jw = f.phi * w;
    const Mat dV = xi_section_partials(f, v), dW = xi_section_partials(f, w);
    const Mat dJV = phi_section_partials(f, v), dJW = phi_section_partials(f, w);
    // [J,J](v,w) = −[v,w] + [Jv,Jw] − J([Jv,w] + [v,Jw]) on ξ-sections
    const Vec JJ = -bracket(v, dV, w, dW) + bracket(Jv, dJV, Jw, dJW) -
                   f.phi * (bracket(Jv, dJV, w, dW) + bracket(v, dV, Jw, dJW));
    const Vec rhs = JJ - f.dalpha_of(v, w) * f.reeb;
    const Vec lhs = phi_torsion(f, v, w);
    worst = std::max(worst, rel(f.norm(lhs - rhs), {f.norm(lhs), f.norm(JJ)}));
  }
  return {worst, kNaN};
}

const std::vector<CheckDef>& check_defs() {
  static const std::vector<CheckDef> defs = {
      {"reeb-geodesic", false, reeb_geodesic},
      {"phi-square", false, phi_square},
      {"h-symmetric", false, h_symmetric},
      {"nabla-reeb", false, nabla_reeb_identity},
      {"anticommute", false, anticommute},
      {"ii-trace", false, ii_trace},
      {"reeb-J-commute", false, reeb_J_commute},
      {"nabla-phi", false, nabla_phi_formula},
      {"ricci-h", true, ricci_h},
      {"nabla-reeb-norm", true, nabla_reeb_norm},
      {"nabla-phi-norm", true, nabla_phi_norm},
      {"levi", false, levi},
      {"levi-AB", false, levi_AB},
      {"torsion-3d", false, torsion_3d},
      {"torsion-relation", false, torsion_relation},
  };
  return defs;
}

std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string("(") + buf + ")";
}

}  // namespace

const std::vector<std::string>& identity_check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& d : check_defs()) v.push_back(d.id);
    return v;
  }();
  return ids;
}

namespace {

Classification require_compatible(const ContactModel& model, std::uint64_t seed) {
  const Classification cls = compatibility_classify(model, 50, seed);
  if (cls.verdict != Verdict::Compatible) {
    std::string why = std::string("model classifies as ") + verdict_name(cls.verdict);
    for (const auto& t : cls.failed) why += "; fails " + t;
    fail("NotCompatible", why);
  }
  return cls;
}

}  // namespace

LeviSample levi_sample(const ContactFrame& f, const Expression& fn, const Vec& w_random) {
  const int d = f.dim();
  const Jet jf = fn.eval_jet(std::span<const double>(f.point().data(), d), 2);
  Vec df = Vec::Zero(d + 1);
  Mat d2f(d, d);
  for (int i = 0; i < d; ++i) {
    df[i] = jf.d(i);
    for (int j = 0; j < d; ++j) d2f(i, j) = jf.d2(i, j);
  }
  // J on R × M: J|ξ = φ, J R_α = −∂_t, J ∂_t = R_α.
  Mat JW = Mat::Zero(d + 1, d + 1);
  JW.topLeftCorner(d, d) = f.phi;
  JW.block(0, d, d, 1) = f.reeb;
  JW.block(d, 0, 1, d) = -f.alpha.transpose();
  // β = df∘J and its partials M(k, j) = ∂_k β_j (nothing depends on t).
  const Vec beta = JW.transpose() * df;
  Mat M = Mat::Zero(d + 1, d + 1);
  for (int k = 0; k < d; ++k) {
    Mat dJ = Mat::Zero(d + 1, d + 1);
    dJ.topLeftCorner(d, d) = f.d_phi[k];
    dJ.block(0, d, d, 1) = f.d_reeb.col(k);
    dJ.block(d, 0, 1, d) = -f.d_alpha.row(k);
    Vec row = dJ.transpose() * df;
    row += JW.topRows(d).transpose() * d2f.col(k);
    M.row(k) = row.transpose();
  }
  const Mat dbeta = M - M.transpose();

  // Project onto C_Σ = ker df ∩ ker(df∘J).
  Mat C(2, d + 1);
  C.row(0) = df.transpose();
  C.row(1) = beta.transpose();
  Vec v = w_random - C.transpose() * (C * C.transpose()).ldlt().solve(C * w_random);
  v /= std::sqrt(f.inner(v.head(d), v.head(d)) + v[d] * v[d]);
  const Vec Jv = JW * v;

  Mat H = d2f;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) H(i, j) -= f.geo.gamma(k, i, j) * df[k];
  LeviSample s;
  s.L = -v.dot(dbeta * Jv);
  s.hessian = v.head(d).dot(H * v.head(d)) + Jv.head(d).dot(H * Jv.head(d));
  s.df_v = std::fabs(df.dot(v));
  s.df_Jv = std::fabs(df.dot(Jv));
  return s;
}

std::vector<Expression> levi_test_functions(const ContactModel& model, std::uint64_t seed) {
  const Chart& chart = model.chart();
  const auto& names = chart.coords();
  const int d = chart.dim();
  std::vector<Expression> out;
  for (const auto& x : names) out.push_back(parse(x, names));

  Rng rng(seed ^ 0x1e71f0c5ULL);
  std::string q = "0";
  for (int i = 0; i < d; ++i) {
    q += " + " + num17(rng.uniform(-1, 1)) + "*" + names[i];
    for (int j = i; j < d; ++j)
      q += " + " + num17(rng.uniform(-1, 1)) + "*" + names[i] + "*" + names[j];
  }
  out.push_back(parse(q, names));

  Vec c(d);
  for (int i = 0; i < d; ++i) c[i] = 0.5 * (chart.sampling()[i].lo + chart.sampling()[i].hi);
  const Mat g = model.metric.value(c);
  std::string r = "0";
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      r += " + " + num17(0.5 * g(i, j)) + "*(" + names[i] + " - " + num17(c[i]) + ")*(" +
           names[j] + " - " + num17(c[j]) + ")";
  out.push_back(parse(r, names));
  return out;
}

std::vector<CheckResult> run_identity_suite(const ContactModel& model, const SuiteOptions& opts) {
  if (opts.points < 1) fail("InvalidInputs", "need at least one sample point");
  std::vector<const CheckDef*> selected;
  for (const auto& def : check_defs())
    if (opts.checks.empty() ||
        std::find(opts.checks.begin(), opts.checks.end(), def.id) != opts.checks.end())
      selected.push_back(&def);
  for (const auto& id : opts.checks)
    if (std::find(identity_check_ids().begin(), identity_check_ids().end(), id) ==
        identity_check_ids().end())
      fail("InvalidInputs", "unknown check id '" + id + "'");

  const Classification cls = require_compatible(model, opts.seed);

  const int N = opts.points;
  std::vector<Vec> points(N);
  {
    Rng rng(opts.seed);
    for (auto& p : points) p = sample_point(model.chart(), rng);
  }
  std::vector<std::optional<ContactFrame>> frames(N);
  std::vector<std::string> frame_error(N);
  parallel_for(N, [&](int i) {
    try {
      frames[i] = frame_at(model, points[i]);
    } catch (const Error& e) {
      frame_error[i] = e.kind() + ": " + e.what();
    }
  });
  double ric_min = std::numeric_limits<double>::infinity();
  for (const auto& f : frames)
    if (f) ric_min = std::min(ric_min, ricci_direction(f->geo, f->n_unit));
  const double tp = cls.theta_prime;
  const int n = model.n;
  const double B = 0.5 * tp + std::sqrt(std::max(0.0, n * tp * tp / 4.0 - 0.5 * ric_min));

  const std::vector<Expression> levi_fns = levi_test_functions(model, opts.seed);
  const std::size_t K = selected.size();
  std::vector<std::vector<Value>> values(N, std::vector<Value>(K));
  std::vector<std::vector<std::string>> errors(N, std::vector<std::string>(K));
  parallel_for(N, [&](int i) {
    if (!frames[i]) {
      for (std::size_t k = 0; k < K; ++k) errors[i][k] = frame_error[i];
      return;
    }
    const ContactFrame& f = *frames[i];
    const Mat O = adapted_basis(f);
    for (std::size_t k = 0; k < K; ++k) {
      // Each check draws from its own stream so selecting checks does not
      // change the samples of the others.
      const auto slot = static_cast<std::uint64_t>(selected[k] - check_defs().data());
      Rng rng(opts.seed * 0x9e3779b97f4a7c15ULL + 1000003ULL * (i + 1) + 7919ULL * slot);
      const PointCtx c{f, O, B, rng, levi_fns, i};
      try {
        values[i][k] = selected[k]->fn(c);
      } catch (const Error& e) {
        errors[i][k] = e.kind() + ": " + e.what();
      }
    }
  });

  std::vector<CheckResult> out;
  for (std::size_t k = 0; k < K; ++k) {
    CheckResult r;
    r.check_id = selected[k]->id;
    r.inequality = selected[k]->inequality;
    r.tolerance = opts.tolerance;
    r.margin = r.inequality ? std::numeric_limits<double>::infinity() : kNaN;
    double worst_key = -std::numeric_limits<double>::infinity();
    bool gated = true;
    for (int i = 0; i < N; ++i) {
      if (!errors[i][k].empty()) {
        if (r.reason.empty()) r.reason = errors[i][k];
        continue;
      }
      const Value& v = values[i][k];
      if (std::isnan(v.residual) && std::isnan(v.margin)) continue;
      gated = false;
      ++r.samples;
      if (!std::isnan(v.residual)) r.residual = std::max(r.residual, v.residual);
      if (!std::isnan(v.margin)) r.margin = std::min(r.margin, v.margin);
      const double key = r.inequality && !std::isnan(v.margin) ? -v.margin : v.residual;
      if (key > worst_key) {
        worst_key = key;
        r.worst_point = points[i];
      }
    }
    if (gated) {
      r.margin = kNaN;
      r.residual = kNaN;
      if (r.reason.empty()) r.reason = "not applicable for n = " + std::to_string(n);
      r.pass = r.reason.rfind("not applicable", 0) == 0;
    } else {
      r.pass = r.reason.empty() && (std::isnan(r.residual) || r.residual <= r.tolerance) &&
               (!r.inequality || r.margin >= -r.tolerance);
    }
    if (!r.inequality) r.margin = kNaN;
    out.push_back(std::move(r));
  }
  return out;
}

ProbeReport levi_probe(const ContactModel& model, const Vec& p, int draws, std::uint64_t seed,
                       double tolerance) {
  if (draws < 1) fail("InvalidInputs", "need at least one draw");
  model.chart().require_contains(p);
  require_compatible(model, seed);
  const ContactFrame f = frame_at(model, p);
  const auto fns = levi_test_functions(model, seed);
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 17);
  ProbeReport rep;
  rep.probe_id = "levi";
  rep.tolerance = tolerance;
  NamedMargin m{"levi-residual", std::numeric_limits<double>::infinity(), -1, 0.0, 0};
  double L_max = 0.0;
  for (std::size_t k = 0; k < fns.size(); ++k) {
    for (int t = 0; t < draws; ++t) {
      Vec w(f.dim() + 1);
      for (int i = 0; i < w.size(); ++i) w[i] = rng.normal();
      const LeviSample s = levi_sample(f, fns[k], w);
      const double res = std::max({rel(std::fabs(s.L - s.hessian), {s.L, s.hessian}), s.df_v,
                                   s.df_Jv});
      const int idx = static_cast<int>(k) * draws + t;
      rep.trace.push_back({idx, 0.0, -res});
      if (-res < m.min) {
        m.min = -res;
        m.worst_dir = idx;
      }
      ++m.samples;
      L_max = std::max(L_max, std::fabs(s.L));
    }
  }
  rep.samples = m.samples;
  rep.margin_min = m.min;
  rep.worst_dir = m.worst_dir;
  rep.worst_direction = Vec();
  rep.pass = rep.margin_min >= -tolerance;
  rep.margins.push_back(m);
  rep.extras = {{"test_functions", static_cast<double>(fns.size())}, {"L_abs_max", L_max}};
  rep.notes.push_back("evaluated at the given point; radius is not used");
  return rep;
}

}  // namespace contact
