#include "contact/report.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "contact/manifest.hpp"
#include "json.hpp"

namespace contact {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void JsonOut::newline() {
  out_ += '\n';
  out_.append(2 * counts_.size(), ' ');
}

void JsonOut::before_value() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (counts_.empty()) return;
  if (counts_.back()++ > 0) out_ += ',';
  newline();
}

JsonOut& JsonOut::begin_object() {
  before_value();
  out_ += '{';
  counts_.push_back(0);
  return *this;
}

JsonOut& JsonOut::end_object() {
  const bool empty = counts_.back() == 0;
  counts_.pop_back();
  if (!empty) newline();
  out_ += '}';
  if (counts_.empty()) out_ += '\n';
  return *this;
}

JsonOut& JsonOut::begin_array() {
  before_value();
  out_ += '[';
  counts_.push_back(0);
  return *this;
}

JsonOut& JsonOut::end_array() {
  const bool empty = counts_.back() == 0;
  counts_.pop_back();
  if (!empty) newline();
  out_ += ']';
  return *this;
}

JsonOut& JsonOut::key(const std::string& k) {
  before_value();
  out_ += nlohmann::json(k).dump();
  out_ += ": ";
  after_key_ = true;
  return *this;
}

JsonOut& JsonOut::value(double x) {
  before_value();
  out_ += format_double(x);
  return *this;
}

JsonOut& JsonOut::value(int x) {
  before_value();
  out_ += std::to_string(x);
  return *this;
}

JsonOut& JsonOut::value(std::uint64_t x) {
  before_value();
  out_ += std::to_string(x);
  return *this;
}

JsonOut& JsonOut::value(bool x) {
  before_value();
  out_ += x ? "true" : "false";
  return *this;
}

JsonOut& JsonOut::value(const std::string& s) {
  before_value();
  out_ += nlohmann::json(s).dump();
  return *this;
}

// Vectors stay on one line.
JsonOut& JsonOut::value(const Vec& v) {
  before_value();
  out_ += '[';
  for (int i = 0; i < v.size(); ++i) {
    if (i) out_ += ", ";
    out_ += format_double(v[i]);
  }
  out_ += ']';
  return *this;
}

JsonOut& JsonOut::null() {
  before_value();
  out_ += "null";
  return *this;
}

namespace {

void optional_field(JsonOut& o, const std::string& k, const std::optional<double>& v) {
  o.key(k);
  if (v) o.value(*v);
  else o.null();
}

void string_or_null(JsonOut& o, const std::string& k, const std::string& v) {
  o.key(k);
  if (v.empty()) o.null();
  else o.value(v);
}

std::string render(const ReportHeader& h, const std::function<void(JsonOut&)>& results) {
  JsonOut o;
  o.begin_object();
  o.field("version", kToolVersion);
  o.field("command", h.command);
  o.field("seed", h.seed);
  o.key("model");
  if (h.model) {
    o.begin_object();
    o.field("name", h.model->name);
    o.field("source", h.model->source);
    string_or_null(o, "digest", h.model->digest);
    o.end_object();
  } else {
    o.null();
  }
  o.key("results").begin_array();
  results(o);
  o.end_array();
  optional_field(o, "elapsed_ms", h.elapsed_ms);
  o.end_object();
  return o.str();
}

}  // namespace

void write_json(JsonOut& o, const CheckResult& r) {
  o.begin_object();
  o.field("kind", "check");
  o.field("check_id", r.check_id);
  o.field("inequality", r.inequality);
  o.field("residual", r.residual);
  o.field("margin", r.margin);
  o.field("tolerance", r.tolerance);
  o.field("pass", r.pass);
  o.field("worst_point", r.worst_point);
  o.field("samples", r.samples);
  string_or_null(o, "reason", r.reason);
  o.end_object();
}

void write_json(JsonOut& o, const ProbeReport& r) {
  o.begin_object();
  o.field("kind", "probe");
  o.field("probe_id", r.probe_id);
  o.field("radius", r.radius);
  o.field("samples", r.samples);
  o.field("tolerance", r.tolerance);
  o.field("margin_min", r.margin_min);
  o.key("worst").begin_object();
  o.field("dir_index", r.worst_dir);
  o.field("s", r.worst_s);
  o.field("direction", r.worst_direction);
  o.end_object();
  o.field("pass", r.pass);
  o.key("margins").begin_array();
  for (const auto& m : r.margins) {
    o.begin_object();
    o.field("name", m.name);
    o.field("min", m.min);
    o.field("worst_dir", m.worst_dir);
    o.field("worst_s", m.worst_s);
    o.field("samples", m.samples);
    o.end_object();
  }
  o.end_array();
  o.key("extras").begin_object();
  for (const auto& [k, v] : r.extras) o.field(k, v);
  o.end_object();
  o.key("notes").begin_array();
  for (const auto& n : r.notes) o.value(n);
  o.end_array();
  o.end_object();
}

void write_json(JsonOut& o, const BoundReport& r, const SourcedInputs& in) {
  o.begin_object();
  o.field("kind", "bounds");
  o.key("inputs").begin_object();
  o.field("n", in.inputs.n);
  o.field("inj", in.inputs.inj);
  o.field("kappa", in.inputs.kappa);
  o.field("K_upper", in.inputs.K_upper);
  o.field("sec_abs", in.inputs.sec_abs);
  o.field("theta_prime", in.inputs.theta_prime);
  o.field("ric_min", in.inputs.ric_min);
  o.field("source", in.source);
  o.field("chart_truncated", in.chart_truncated);
  o.end_object();
  o.field("r_max", r.r_max);
  o.field("A", r.A);
  o.field("B", r.B);
  o.field("Hbar1", r.Hbar1);
  o.field("Hbar2", r.Hbar2);
  o.field("Hbar", r.Hbar);
  o.field("r_perp", r.r_perp);
  o.field("r_tau", r.r_tau);
  o.field("Q_at_r_tau", r.Q_at_r_tau);
  o.field("darboux_refined", r.darboux_refined);
  o.field("darboux_rough", r.darboux_rough);
  o.field("darboux_rough_chain", r.darboux_rough_chain);
  optional_field(o, "bound_3d", r.bound_3d);
  o.field("tightness_bound", r.tightness_bound);
  o.field("tube_embed_radius", r.tube_embed_radius);
  o.field("c_n", r.c_n);
  o.field("d_n", r.d_n);
  o.end_object();
}

std::string render_report(const ReportHeader& h, const std::vector<CheckResult>& results) {
  return render(h, [&](JsonOut& o) {
    for (const auto& r : results) write_json(o, r);
  });
}

std::string render_report(const ReportHeader& h, const std::vector<ProbeReport>& results) {
  return render(h, [&](JsonOut& o) {
    for (const auto& r : results) write_json(o, r);
  });
}

std::string render_report(const ReportHeader& h, const BoundReport& r, const SourcedInputs& in) {
  return render(h, [&](JsonOut& o) { write_json(o, r, in); });
}

namespace {

std::string num(double x, int prec = 6) {
  if (std::isnan(x)) return "-";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
}

}  // namespace

std::string render_table(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  os << pad("check", 18) << pad("kind", 8) << pad("residual", 14) << pad("margin", 14)
     << "status\n";
  for (const auto& r : results) {
    os << pad(r.check_id, 18) << pad(r.inequality ? "ineq" : "ident", 8)
       << pad(num(r.residual, 3), 14) << pad(num(r.margin, 3), 14) << (r.pass ? "pass" : "FAIL");
    if (!r.reason.empty()) os << "  (" << r.reason << ")";
    os << '\n';
  }
  int passed = 0;
  for (const auto& r : results) passed += r.pass;
  os << passed << "/" << results.size() << " checks pass\n";
  return os.str();
}

std::string render_table(const ProbeReport& r) {
  std::ostringstream os;
  os << "probe " << r.probe_id << "  radius " << num(r.radius, 10) << "  samples " << r.samples
     << '\n';
  os << pad("margin", 20) << pad("min", 14) << pad("dir", 6) << "s\n";
  for (const auto& m : r.margins)
    os << pad(m.name, 20) << pad(num(m.min, 6), 14) << pad(std::to_string(m.worst_dir), 6)
       << num(m.worst_s, 6) << '\n';
  for (const auto& [k, v] : r.extras) os << pad(k, 20) << num(v, 10) << '\n';
  for (const auto& n : r.notes) os << "note: " << n << '\n';
  os << "margin_min " << num(r.margin_min, 6) << "  " << (r.pass ? "pass" : "FAIL") << '\n';
  return os.str();
}

std::string render_table(const BoundReport& r, const SourcedInputs& in) {
  std::ostringstream os;
  os << "inputs (" << in.source << (in.chart_truncated ? ", chart-truncated inj" : "")
     << "): n=" << in.inputs.n << " inj=" << num(in.inputs.inj, 10)
     << " kappa=" << num(in.inputs.kappa) << " K=" << num(in.inputs.K_upper)
     << " sec_abs=" << num(in.inputs.sec_abs) << " theta'=" << num(in.inputs.theta_prime)
     << " ric_min=" << num(in.inputs.ric_min) << '\n';
  const std::pair<const char*, double> rows[] = {
      {"r_max", r.r_max},
      {"A", r.A},
      {"B", r.B},
      {"Hbar1", r.Hbar1},
      {"Hbar2", r.Hbar2},
      {"Hbar", r.Hbar},
      {"r_perp", r.r_perp},
      {"r_tau", r.r_tau},
      {"Q_at_r_tau", r.Q_at_r_tau},
      {"darboux_refined", r.darboux_refined},
      {"darboux_rough", r.darboux_rough},
      {"darboux_rough_chain", r.darboux_rough_chain},
      {"bound_3d", r.bound_3d.value_or(std::nan(""))},
      {"tightness_bound", r.tightness_bound},
      {"tube_embed_radius", r.tube_embed_radius},
      {"c_n", r.c_n},
      {"d_n", r.d_n},
  };
  for (const auto& [k, v] : rows) os << pad(k, 22) << num(v, 12) << '\n';
  return os.str();
}

std::string model_digest(const ContactModel& m) {
  std::ostringstream os;
  auto n = [&](double x) { os << format_double(x) << ';'; };
  os << m.name << ';' << m.n << ';';
  for (const auto& c : m.chart().coords()) os << c << ';';
  for (const auto& iv : m.chart().domain()) n(iv.lo), n(iv.hi);
  for (const auto& iv : m.chart().sampling()) n(iv.lo), n(iv.hi);
  for (const auto& a : m.alpha) os << print(a) << ';';
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i; j < m.dim(); ++j) os << print(m.metric.component(i, j)) << ';';
  if (m.j_field)
    for (const auto& row : *m.j_field)
      for (const auto& e : row) os << print(e) << ';';
  n(m.inj.value_or(-1.0));
  n(m.conv.value_or(-1.0));
  for (const auto& o : m.orbits) {
    for (int i = 0; i < o.point.size(); ++i) n(o.point[i]);
    n(o.period.value_or(-1.0));
  }
  return content_digest(os.str());
}

}  // namespace contact
