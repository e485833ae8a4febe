#include "contact/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "contact/errors.hpp"

namespace contact {

namespace {

using Rows = std::vector<std::vector<std::string>>;

std::vector<Expression> parse_all(const std::vector<std::string>& src,
                                  const std::vector<std::string>& coords) {
  std::vector<Expression> out;
  for (const auto& s : src) out.push_back(parse(s, coords));
  return out;
}

ContactModel make_model(std::string name, Chart chart, const std::vector<std::string>& alpha,
                        const Rows& metric_upper, int n) {
  ContactModel m;
  m.name = std::move(name);
  m.alpha = parse_all(alpha, chart.coords());
  m.metric = MetricField::from_strings(std::move(chart), metric_upper);
  m.n = n;
  return m;
}

std::vector<Interval> box(int d, double lo, double hi) { return std::vector<Interval>(d, {lo, hi}); }

ContactModel heisenberg3_with(const std::string& xi_scale, const std::string& conformal) {
  Chart chart({"x", "y", "z"}, box(3, -5, 5));
  auto wrap = [&](const std::string& s) {
    return conformal.empty() ? s : "(" + s + ")*(" + conformal + ")";
  };
  const std::string q = xi_scale.empty() ? "1" : xi_scale;
  Rows g = {{wrap("(" + q + " + y^2)/4"), wrap("0"), wrap("-y/4")},
            {wrap(q + "/4"), wrap("0")},
            {wrap("1/4")}};
  ContactModel m = make_model("heisenberg3", std::move(chart), {"-y/2", "0", "1/2"}, g, 1);
  m.inj = 10.0;
  m.chart_truncated = true;
  return m;
}

ContactModel heisenberg5_with(bool twisted) {
  Chart chart({"x1", "y1", "x2", "y2", "z"}, box(5, -5, 5));
  const std::string ch = twisted ? "cosh(0.2*x1)" : "1";
  const std::string sh = twisted ? "sinh(0.2*x1)" : "0";
  Rows g = {
      {"(" + ch + " + y1^2)/4", "0", "(y1*y2 - " + sh + ")/4", "0", "-y1/4"},
      {ch + "/4", "0", sh + "/4", "0"},
      {"(" + ch + " + y2^2)/4", "0", "-y2/4"},
      {ch + "/4", "0"},
      {"1/4"},
  };
  ContactModel m =
      make_model("heisenberg5", std::move(chart), {"-y1/2", "0", "-y2/2", "0", "1/2"}, g, 2);
  m.inj = 10.0;
  m.chart_truncated = true;
  return m;
}

ModelSpec heisenberg3_spec() {
  ModelSpec s;
  s.name = "heisenberg3";
  s.model = heisenberg3_with("", "");
  s.expected = {2.0, -3.0, 1.0, 2.0, 10.0, std::nullopt, true, true};
  return s;
}

ModelSpec heisenberg5_spec() {
  ModelSpec s;
  s.name = "heisenberg5";
  s.model = heisenberg5_with(false);
  s.expected = {2.0, -3.0, 1.0, 4.0, 10.0, std::nullopt, true, true};
  return s;
}

// Stereographic chart of S³ ⊂ R⁴ = (X1,Y1,X2,Y2) from the pole Y2 = −1:
// (X1,Y1,X2) = 2u/(1+|u|²), Y2 = (1−|u|²)/(1+|u|²). α is the pullback of
// X1dY1 − Y1dX1 + X2dY2 − Y2dX2.
ModelSpec round_s3_spec() {
  Chart chart({"x", "y", "z"}, box(3, -10, 10), box(3, -2, 2));
  const std::string s = "(1 + x^2 + y^2 + z^2)";
  const std::string conf = "4/" + s + "^2";
  Rows g = {{conf, "0", "0"}, {conf, "0"}, {conf}};
  std::vector<std::string> alpha = {
      "(-4*y - 4*x*z)/" + s + "^2",
      "(4*x - 4*y*z)/" + s + "^2",
      "(2*x^2 + 2*y^2 - 2*z^2 - 2)/" + s + "^2",
  };
  ModelSpec spec;
  spec.name = "round-s3";
  spec.model = make_model("round-s3", std::move(chart), alpha, g, 1);
  spec.model.inj = std::numbers::pi;
  spec.model.conv = std::numbers::pi / 2;
  Vec seed(3);
  seed << 1.0, 0.0, 0.0;
  spec.model.orbits.push_back({seed, 2.0 * std::numbers::pi});
  spec.expected = {2.0, 1.0, 1.0, 2.0, std::numbers::pi, std::numbers::pi / 2, true, true};
  return spec;
}

const std::map<std::string, ModelSpec>& registry() {
  static const std::map<std::string, ModelSpec> reg = [] {
    std::map<std::string, ModelSpec> r;
    for (ModelSpec s : {heisenberg3_spec(), heisenberg5_spec(), round_s3_spec()}) {
      s.model.validate();
      // Cheap consistency check at one interior point; the full sampled
      // self-test lives in model_self_test.
      const Vec p = Vec::Constant(s.model.dim(), 0.1);
      const ContactFrame f = frame_at(s.model, p);
      if (std::fabs(f.theta_prime - s.expected.theta_prime) > 1e-7)
        fail("ModelSelfTest", s.name + ": rotation speed disagrees with metadata");
      r.emplace(s.name, std::move(s));
    }
    return r;
  }();
  return reg;
}

}  // namespace

std::vector<std::string> list_models() {
  std::vector<std::string> names;
  for (const auto& [name, spec] : registry()) names.push_back(name);
  return names;
}

const ModelSpec& get_model(const std::string& name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) fail("UnknownModel", "unknown model '" + name + "'");
  return it->second;
}

std::vector<std::string> model_self_test(const ModelSpec& spec, int points, std::uint64_t seed) {
  std::vector<std::string> issues;
  const ContactModel& m = spec.model;
  const ModelExpected& e = spec.expected;
  Rng rng(seed);
  auto report = [&](const std::string& what, double got, double want, const Vec& p) {
    std::ostringstream os;
    os.precision(12);
    os << spec.name << ": " << what << " = " << got << ", expected " << want << " at (";
    for (int i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << ")";
    issues.push_back(os.str());
  };
  for (int k = 0; k < points; ++k) {
    const Vec p = sample_point(m.chart(), rng);
    const ContactFrame f = frame_at(m, p);
    if (std::fabs(f.theta_prime - e.theta_prime) > 1e-7)
      report("theta_prime", f.theta_prime, e.theta_prime, p);
    const double ric = ricci_direction(f.geo, f.n_unit);
    if (std::fabs(ric - e.ric_reeb) > 1e-7) report("Ric(R)", ric, e.ric_reeb, p);
    if (e.h_is_zero && f.h.cwiseAbs().maxCoeff() > 1e-7)
      report("max|h|", f.h.cwiseAbs().maxCoeff(), 0.0, p);
    const Mat B = adapted_basis(f);
    for (int a = 0; a < B.cols(); ++a)
      for (int b = a + 1; b < B.cols(); ++b) {
        const double k = sectional(f.geo, B.col(a), B.col(b));
        if (k < e.sec_min - 1e-7 || k > e.sec_max + 1e-7) report("sectional", k, e.sec_min, p);
      }
  }
  const CrResult cr = is_CR(m, points, seed);
  if (cr.is_cr != e.is_cr) report("is_CR", cr.is_cr, e.is_cr, cr.worst_point);
  return issues;
}

ContactModel heisenberg3_conformal_control() {
  ContactModel m = heisenberg3_with("", "1 + x^2/10");
  m.name = "heisenberg3-conformal";
  return m;
}

ContactModel heisenberg3_xi_scaled_control(double factor) {
  std::ostringstream os;
  os.precision(17);
  os << factor;
  ContactModel m = heisenberg3_with(os.str(), "");
  m.name = "heisenberg3-xi-scaled";
  return m;
}

ContactModel heisenberg5_twisted_control() {
  ContactModel m = heisenberg5_with(true);
  m.name = "heisenberg5-twisted";
  return m;
}

MetricField flat_metric(int dim) {
  std::vector<std::string> coords;
  for (int i = 0; i < dim; ++i) coords.push_back("x" + std::to_string(i + 1));
  Rows g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) g[i].push_back(i == j ? "1" : "0");
  return MetricField::from_strings(Chart(coords, {}, box(dim, -1, 1)), g);
}

MetricField hyperbolic_ball_metric(int dim) {
  std::vector<std::string> coords;
  std::string s = "(1";
  for (int i = 0; i < dim; ++i) {
    coords.push_back("x" + std::to_string(i + 1));
    s += " - x" + std::to_string(i + 1) + "^2";
  }
  s += ")";
  Rows g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) g[i].push_back(i == j ? "4/" + s + "^2" : "0");
  return MetricField::from_strings(Chart(coords, box(dim, -0.99, 0.99), box(dim, -0.5, 0.5)), g);
}

SourcedInputs metadata_inputs(const ModelSpec& spec) {
  const ModelExpected& e = spec.expected;
  SourcedInputs out;
  out.source = "metadata";
  out.chart_truncated = spec.model.chart_truncated;
  BoundInputs& in = out.inputs;
  in.n = spec.model.n;
  in.inj = e.inj.value_or(std::numeric_limits<double>::infinity());
  in.kappa = e.sec_min;
  in.K_upper = e.sec_max;
  in.sec_abs = std::max(std::fabs(e.sec_min), std::fabs(e.sec_max));
  in.theta_prime = e.theta_prime;
  in.ric_min = e.ric_reeb;
  return out;
}

SourcedInputs estimated_inputs(const ContactModel& model, int points, std::uint64_t seed) {
  const Classification cls = compatibility_classify(model, points, seed);
  if (cls.verdict != Verdict::Compatible)
    fail("NotCompatible", "model " + model.name + " is not compatible; bounds need θ′");
  const SecRange sec = sec_range_estimate(model, SecSampler{points, 20, seed});
  double ric_min = std::numeric_limits<double>::infinity();
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < points; ++i) {
    const ContactFrame f = frame_at(model, sample_point(model.chart(), rng));
    ric_min = std::min(ric_min, ricci_direction(f.geo, f.n_unit));
  }
  SourcedInputs out;
  out.source = "estimate";
  out.chart_truncated = model.chart_truncated;
  BoundInputs& in = out.inputs;
  in.n = model.n;
  in.inj = model.inj.value_or(std::numeric_limits<double>::infinity());
  in.kappa = sec.kappa;
  in.K_upper = sec.K;
  in.sec_abs = std::max(std::fabs(sec.kappa), std::fabs(sec.K));
  in.theta_prime = cls.theta_prime;
  in.ric_min = ric_min;
  return out;
}

}  // namespace contact
