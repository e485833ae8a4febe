#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contact/contact_metric.hpp"
#include "contact/geodesic_lab.hpp"

namespace contact {

struct CheckResult {
  std::string check_id;
  bool inequality = false;
  double residual = 0.0;  // identities: max relative residual
  double margin = 0.0;    // inequalities: min relative margin
  double tolerance = 1e-6;
  bool pass = false;
  Vec worst_point;
  int samples = 0;
  std::string reason;  // set when the check could not be evaluated
};

// Check ids in report order.
const std::vector<std::string>& identity_check_ids();

struct SuiteOptions {
  int points = 100;
  std::uint64_t seed = 0;
  double tolerance = 1e-6;
  std::vector<std::string> checks;  // empty: all
};

// Throws NotCompatible unless the model classifies as Compatible, and
// InvalidInputs for an unknown check id.
std::vector<CheckResult> run_identity_suite(const ContactModel& model,
                                            const SuiteOptions& opts = {});

// The Levi-form identity on the product R × M, evaluated once; exposed for
// the probe command and tests.
struct LeviSample {
  double L = 0.0;        // −d(df∘J)(v, Jv)
  double hessian = 0.0;  // ∇²f(v,v) + ∇²f(Jv,Jv)
  double df_v = 0.0;     // |df(v)|, must vanish on C_Σ
  double df_Jv = 0.0;    // |df(Jv)|
};
LeviSample levi_sample(const ContactFrame& f, const Expression& fn, const Vec& w_random);

// Test functions used by the Levi check: coordinates, a seeded quadratic and
// the squared distance to the chart origin in the metric at the origin.
std::vector<Expression> levi_test_functions(const ContactModel& model, std::uint64_t seed);

// Levi identity at one point for every test function and `draws` random
// vectors each; margin is −(relative residual). dir_index in the trace is
// function_index * draws + draw.
ProbeReport levi_probe(const ContactModel& model, const Vec& p, int draws, std::uint64_t seed,
                       double tolerance = 1e-5);

}  // namespace contact
