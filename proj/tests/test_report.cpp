#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "contact/models.hpp"
#include "contact/report.hpp"
#include "json.hpp"

using namespace contact;
using nlohmann::json;

namespace {

std::vector<std::string> keys_in_order(const std::string& text, int depth_wanted) {
  // keys at the given nesting depth, read off the text so the order is the
  // written one
  std::vector<std::string> out;
  int depth = 0;
  bool in_string = false;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        cur += c;
        cur += text[++i];
      } else if (c == '"') {
        in_string = false;
        std::size_t j = i + 1;
        if (depth == depth_wanted && j < text.size() && text[j] == ':') out.push_back(cur);
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_string = true;
      cur.clear();
    } else if (c == '{' || c == '[') {
      ++depth;
    } else if (c == '}' || c == ']') {
      --depth;
    }
  }
  return out;
}

ReportHeader header() {
  ReportHeader h;
  h.command = "verify --model round-s3";
  h.seed = 7;
  h.model = ReportModel{"round-s3", "builtin", "fnv1a64:0000000000000001"};
  return h;
}

}  // namespace

TEST_CASE("double formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-1e-300) == "-1e-300");
  CHECK(format_double(std::nan("")) == "null");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "null");
  for (double x : {M_PI, 1.0 / 3.0, 6.02214076e23, -7.5e-17})
    CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("writer layout") {
  JsonOut o;
  o.begin_object();
  o.field("a", 1);
  o.key("b").begin_array();
  o.value(true).null();
  o.end_array();
  o.key("c").begin_object().end_object();
  o.key("d").begin_array().end_array();
  o.field("e", "q\"x");
  o.end_object();
  CHECK(o.str() ==
        "{\n  \"a\": 1,\n  \"b\": [\n    true,\n    null\n  ],\n  \"c\": {},\n  \"d\": [],\n"
        "  \"e\": \"q\\\"x\"\n}\n");
}

TEST_CASE("check report schema") {
  CheckResult r;
  r.check_id = "nabla-reeb";
  r.residual = 1.5e-15;
  r.margin = std::nan("");
  r.pass = true;
  r.worst_point = Vec::Constant(3, 0.25);
  r.samples = 100;
  const auto text = render_report(header(), {r});
  CHECK(keys_in_order(text, 1) ==
        std::vector<std::string>{"version", "command", "seed", "model", "results", "elapsed_ms"});
  const auto j = json::parse(text);
  CHECK(j["version"] == kToolVersion);
  CHECK(j["seed"] == 7);
  CHECK(j["model"]["digest"] == "fnv1a64:0000000000000001");
  CHECK(j["elapsed_ms"].is_null());
  const auto& c = j["results"][0];
  CHECK(c["kind"] == "check");
  CHECK(c["margin"].is_null());
  CHECK(c["reason"].is_null());
  CHECK(c["residual"].get<double>() == 1.5e-15);
  CHECK(c["worst_point"].size() == 3);
  CHECK(render_report(header(), {r}) == text);
}

TEST_CASE("probe and bounds reports") {
  ProbeReport p;
  p.probe_id = "twisting";
  p.radius = 0.5;
  p.margins.push_back({"reeb-normal", 0.01, 3, 0.5, 512});
  p.extras = {{"B", 1.0}, {"A", 4.0 / 3.0}};
  p.notes = {"a note"};
  p.worst_direction = Vec::Zero(2);
  const auto jp = json::parse(render_report(header(), std::vector<ProbeReport>{p}));
  CHECK(jp["results"][0]["margins"][0]["name"] == "reeb-normal");
  CHECK(jp["results"][0]["extras"]["A"].get<double>() == 4.0 / 3.0);
  // extras keep insertion order
  const auto text = render_report(header(), std::vector<ProbeReport>{p});
  CHECK(text.find("\"B\"") < text.find("\"A\""));

  const auto in = metadata_inputs(get_model("round-s3"));
  const auto b = radius_bounds(in.inputs);
  const auto jb = json::parse(render_report(header(), b, in));
  const auto& r = jb["results"][0];
  CHECK(r["kind"] == "bounds");
  CHECK(r["inputs"]["source"] == "metadata");
  CHECK(r["r_perp"].get<double>() == b.r_perp);
  CHECK(r["bound_3d"].get<double>() == b.bound_3d.value());
  CHECK(render_table(b, in).find("darboux_refined") != std::string::npos);
}

TEST_CASE("model digest") {
  const auto a = model_digest(get_model("round-s3").model);
  CHECK(a == model_digest(get_model("round-s3").model));
  CHECK(a != model_digest(get_model("heisenberg3").model));
  CHECK(model_digest(heisenberg3_xi_scaled_control(1.21)) !=
        model_digest(heisenberg3_xi_scaled_control(1.2100001)));
}
