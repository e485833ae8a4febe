#include "contact/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "contact/errors.hpp"
#include "json.hpp"

namespace contact {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  fail("InvalidManifest", path + ": " + msg);
}

std::string idx(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& field(const json& obj, const char* key) {
  if (!obj.contains(key)) bad(key, "missing");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(path, "not finite");
  return x;
}

// number or the string "unknown"
std::optional<double> number_or_unknown(const json& v, const std::string& path) {
  if (v.is_string() && v.get<std::string>() == "unknown") return std::nullopt;
  if (!v.is_number()) bad(path, "expected a number or \"unknown\"");
  return number(v, path);
}

const json& array(const json& v, const std::string& path, std::size_t size) {
  if (!v.is_array()) bad(path, "expected an array");
  if (size != 0 && v.size() != size)
    bad(path, "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
  return v;
}

Expression expr(const json& v, const std::string& path, const std::vector<std::string>& coords) {
  if (!v.is_string()) bad(path, "expected an expression string");
  try {
    return parse(v.get<std::string>(), coords);
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

std::vector<Interval> intervals(const json& v, const std::string& path, std::size_t d) {
  array(v, path, d);
  std::vector<Interval> out;
  for (std::size_t i = 0; i < d; ++i) {
    const auto p = idx(path, i);
    array(v[i], p, 2);
    const auto lo = v[i][0].is_string() && v[i][0] == "-inf"
                        ? -std::numeric_limits<double>::infinity()
                        : number(v[i][0], idx(p, 0));
    const auto hi = v[i][1].is_string() && v[i][1] == "inf"
                        ? std::numeric_limits<double>::infinity()
                        : number(v[i][1], idx(p, 1));
    if (!(lo < hi)) bad(p, "empty interval");
    out.push_back({lo, hi});
  }
  return out;
}

// Symmetric partners written out separately must agree. Identical printed
// trees are accepted directly; otherwise the two are compared at seeded
// points of the sampling box.
void require_symmetric(const Expression& a, const Expression& b, const Chart& chart,
                       const std::string& path) {
  if (structurally_equal(a, b)) return;
  Rng rng(0x5eed);
  const int d = chart.dim();
  std::vector<double> p(d);
  for (int k = 0; k < 16; ++k) {
    for (int i = 0; i < d; ++i) p[i] = rng.uniform(chart.sampling()[i].lo, chart.sampling()[i].hi);
    double x = 0, y = 0;
    try {
      x = a.eval(p);
      y = b.eval(p);
    } catch (const Error&) {
      continue;
    }
    if (std::fabs(x - y) > 1e-12 * std::max(1.0, std::fabs(x)))
      bad(path, "metric is not symmetric");
  }
}

}  // namespace

std::string content_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

LoadedManifest parse_manifest(const std::string& text, const std::string& fallback_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("InvalidManifest", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("$", "expected an object");

  const auto& jdim = field(doc, "dim");
  if (!jdim.is_number_integer()) bad("dim", "expected an integer");
  const int d = jdim.get<int>();
  if (d < 3 || d % 2 == 0) bad("dim", "must be odd and at least 3");
  if (d > Jet::kMaxDim) bad("dim", "at most " + std::to_string(Jet::kMaxDim) + " is supported");

  const auto& jn = field(doc, "n");
  if (!jn.is_number_integer()) bad("n", "expected an integer");
  const int n = jn.get<int>();
  if (2 * n + 1 != d) bad("n", "dim must equal 2n+1");

  const auto& jcoords = array(field(doc, "coords"), "coords", d);
  std::vector<std::string> coords;
  for (std::size_t i = 0; i < jcoords.size(); ++i) {
    if (!jcoords[i].is_string()) bad(idx("coords", i), "expected a name");
    coords.push_back(jcoords[i].get<std::string>());
    for (std::size_t j = 0; j < i; ++j)
      if (coords[j] == coords[i]) bad(idx("coords", i), "duplicate coordinate name");
  }

  std::vector<Interval> domain, sampling;
  if (doc.contains("domain")) domain = intervals(doc["domain"], "domain", d);
  if (doc.contains("sampling")) sampling = intervals(doc["sampling"], "sampling", d);
  Chart chart(coords, domain, sampling);

  ContactModel m;
  m.name = fallback_name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) bad("name", "expected a string");
    m.name = doc["name"].get<std::string>();
  }
  m.n = n;

  const auto& jalpha = array(field(doc, "alpha"), "alpha", d);
  for (std::size_t i = 0; i < jalpha.size(); ++i)
    m.alpha.push_back(expr(jalpha[i], idx("alpha", i), coords));

  const auto& jg = array(field(doc, "metric"), "metric", d);
  bool upper = true, full = true;
  for (int i = 0; i < d; ++i) {
    array(jg[i], idx("metric", i), 0);
    upper = upper && static_cast<int>(jg[i].size()) == d - i;
    full = full && static_cast<int>(jg[i].size()) == d;
  }
  if (!upper && !full) bad("metric", "expected the full matrix or its upper triangle");
  std::vector<std::vector<Expression>> g(d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const int col = full ? j : j - i;
      g[i].push_back(expr(jg[i][col], idx(idx("metric", i), col), coords));
    }
  if (full && !upper) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < i; ++j) {
        const auto lower = expr(jg[i][j], idx(idx("metric", i), j), coords);
        require_symmetric(g[j][i - j], lower, chart, idx(idx("metric", j), i));
      }
  }
  m.metric = MetricField(chart, std::move(g));

  if (doc.contains("J") && !doc["J"].is_null()) {
    const auto& jJ = array(doc["J"], "J", d);
    std::vector<std::vector<Expression>> J(d);
    for (int i = 0; i < d; ++i) {
      array(jJ[i], idx("J", i), d);
      for (int j = 0; j < d; ++j) J[i].push_back(expr(jJ[i][j], idx(idx("J", i), j), coords));
    }
    m.j_field = std::move(J);
  }

  m.inj = number_or_unknown(field(doc, "inj"), "inj");
  m.conv = number_or_unknown(field(doc, "conv"), "conv");

  if (doc.contains("orbits")) {
    const auto& jo = array(doc["orbits"], "orbits", 0);
    for (std::size_t k = 0; k < jo.size(); ++k) {
      const auto p = idx("orbits", k);
      if (!jo[k].is_object()) bad(p, "expected an object");
      const auto& pt = array(field(jo[k], "point"), p + ".point", d);
      OrbitSeed s;
      s.point.resize(d);
      for (int i = 0; i < d; ++i) s.point[i] = number(pt[i], idx(p + ".point", i));
      if (!chart.contains(s.point)) bad(p + ".point", "outside the chart domain");
      s.period = jo[k].contains("period") ? number_or_unknown(jo[k]["period"], p + ".period")
                                           : std::nullopt;
      m.orbits.push_back(std::move(s));
    }
  }

  try {
    m.validate();
  } catch (const Error& e) {
    fail("InvalidManifest", e.what());
  }
  return {std::move(m), content_digest(text)};
}

LoadedManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("InvalidManifest", path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string stem = path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) stem.erase(0, slash + 1);
  if (const auto dot = stem.rfind('.'); dot != std::string::npos && dot > 0) stem.erase(dot);
  return parse_manifest(ss.str(), stem);
}

}  // namespace contact
