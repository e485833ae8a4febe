#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contact/bounds.hpp"
#include "contact/geodesic_lab.hpp"
#include "contact/identity_suite.hpp"
#include "contact/models.hpp"

namespace contact {

inline constexpr const char* kToolVersion = "0.1.0";

// Streaming JSON writer with a fixed layout: two-space indent, keys in the
// order written, doubles as %.17g and non-finite doubles as null.
class JsonOut {
 public:
  JsonOut& begin_object();
  JsonOut& end_object();
  JsonOut& begin_array();
  JsonOut& end_array();
  JsonOut& key(const std::string& k);
  JsonOut& value(double x);
  JsonOut& value(int x);
  JsonOut& value(std::uint64_t x);
  JsonOut& value(bool x);
  JsonOut& value(const std::string& s);
  JsonOut& value(const char* s) { return value(std::string(s)); }
  JsonOut& value(const Vec& v);
  JsonOut& null();
  template <class T>
  JsonOut& field(const std::string& k, const T& v) {
    key(k);
    return value(v);
  }
  const std::string& str() const { return out_; }

 private:
  void before_value();
  void newline();
  std::string out_;
  std::vector<int> counts_;  // entries written per open container
  bool after_key_ = false;
};

// %.17g, or "null" for NaN and infinities.
std::string format_double(double x);

struct ReportModel {
  std::string name;
  std::string source;  // "builtin", "manifest" or "scalar"
  std::string digest;  // empty: null
};

struct ReportHeader {
  std::string command;
  std::uint64_t seed = 0;
  std::optional<ReportModel> model;
  std::optional<double> elapsed_ms;
};

void write_json(JsonOut& out, const CheckResult& r);
void write_json(JsonOut& out, const ProbeReport& r);
void write_json(JsonOut& out, const BoundReport& r, const SourcedInputs& in);

// {"version", "command", "seed", "model", "results": [...], "elapsed_ms"}
std::string render_report(const ReportHeader& h, const std::vector<CheckResult>& results);
std::string render_report(const ReportHeader& h, const std::vector<ProbeReport>& results);
std::string render_report(const ReportHeader& h, const BoundReport& r, const SourcedInputs& in);

// Plain-text tables for terminal output.
std::string render_table(const std::vector<CheckResult>& results);
std::string render_table(const ProbeReport& r);
std::string render_table(const BoundReport& r, const SourcedInputs& in);

// Digest of a model's canonical text (expressions printed from the parse
// tree, numbers as %.17g); used for built-in models.
std::string model_digest(const ContactModel& m);

}  // namespace contact
