#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contact/bounds.hpp"
#include "contact/contact_metric.hpp"

namespace contact {

struct ModelExpected {
  double theta_prime = 2.0;
  double sec_min = 0.0;
  double sec_max = 0.0;
  double ric_reeb = 0.0;
  std::optional<double> inj;
  std::optional<double> conv;
  bool is_cr = true;
  bool h_is_zero = true;
};

struct ModelSpec {
  std::string name;
  ContactModel model;
  ModelExpected expected;
};

std::vector<std::string> list_models();
// Throws UnknownModel.
const ModelSpec& get_model(const std::string& name);

// Discrepancies between `expected` and values computed at a few points;
// empty when the model is consistent.
std::vector<std::string> model_self_test(const ModelSpec& spec, int points = 5,
                                         std::uint64_t seed = 0);

struct SourcedInputs {
  BoundInputs inputs;
  std::string source;  // "metadata" or "estimate"
  bool chart_truncated = false;
};

// Bound inputs from the closed-form metadata of a registered model.
SourcedInputs metadata_inputs(const ModelSpec& spec);
// Bound inputs estimated by sampling: sectional range, min Ric(R_α) and θ′.
// An unknown inj becomes +∞.
SourcedInputs estimated_inputs(const ContactModel& model, int points = 50,
                               std::uint64_t seed = 0);

// Perturbed models used as negative controls.
// Whole metric multiplied by (1 + x²/10).
ContactModel heisenberg3_conformal_control();
// Metric on ξ multiplied by `factor`, α⊗α part unchanged.
ContactModel heisenberg3_xi_scaled_control(double factor = 1.21);
// Compatible metric whose J is conjugated by exp(0.1·x₁·S), S the symmetric
// symplectic involution x₁↔x₂, y₁↔−y₂ of ξ. J stays orthogonal and tamed
// but loses integrability.
ContactModel heisenberg5_twisted_control();

// Test metrics without contact data.
MetricField flat_metric(int dim);
// Poincaré ball 4|dx|²/(1−|x|²)², sectional curvature −1.
MetricField hyperbolic_ball_metric(int dim);

}  // namespace contact
