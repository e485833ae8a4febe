// contact-radius: identity suite, radius bounds and geodesic probes from the
// command line. Exit codes: 0 pass, 1 check or probe failure, 2 bad input.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "contact/errors.hpp"
#include "contact/identity_suite.hpp"
#include "contact/manifest.hpp"
#include "contact/models.hpp"
#include "contact/report.hpp"

using namespace contact;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInput = 2;

// Errors that describe a result rather than a bad request.
bool is_failure_kind(const std::string& kind) {
  return kind == "NotCompatible" || kind == "OrbitNotClosed" || kind == "StepFailure";
}

struct Resolved {
  ContactModel model;
  ReportModel header;
  SourcedInputs inputs;
};

Resolved resolve(const std::string& name, const std::string& manifest, std::uint64_t seed) {
  if (!name.empty() && !manifest.empty()) fail("InvalidInputs", "give --model or --manifest, not both");
  if (name.empty() && manifest.empty()) fail("InvalidInputs", "--model or --manifest is required");
  if (!name.empty()) {
    const ModelSpec& spec = get_model(name);
    return {spec.model, {spec.name, "builtin", model_digest(spec.model)}, metadata_inputs(spec)};
  }
  LoadedManifest lm = load_manifest(manifest);
  ReportModel h{lm.model.name, "manifest", lm.digest};
  // Bound inputs for user models come from sampling; computed lazily since
  // verify does not need them.
  return {std::move(lm.model), std::move(h), {}};
}

SourcedInputs inputs_for(Resolved& r, std::uint64_t seed) {
  if (r.header.source == "manifest" && r.inputs.source.empty())
    r.inputs = estimated_inputs(r.model, 50, seed);
  return r.inputs;
}

Vec parse_point(const std::string& text, int dim) {
  Vec p = Vec::Zero(dim);
  if (text.empty()) return p;
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail("InvalidInputs", "--point: cannot read '" + item + "'");
    }
  }
  if (static_cast<int>(xs.size()) != dim)
    fail("InvalidInputs", "--point needs " + std::to_string(dim) + " coordinates");
  for (int i = 0; i < dim; ++i) p[i] = xs[i];
  return p;
}

ProbeGrid parse_grid(const std::string& text, std::uint64_t seed) {
  ProbeGrid g;
  g.seed = seed;
  if (text.empty()) return g;
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t u1 = 0, u2 = 0;
    g.n_dirs = std::stoi(text.substr(0, x), &u1);
    g.n_radii = std::stoi(text.substr(x + 1), &u2);
    if (u1 != x || u2 != text.size() - x - 1) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    fail("InvalidInputs", "--grid expects DxS, e.g. 32x16");
  }
  if (g.n_dirs < 1 || g.n_radii < 1) fail("InvalidInputs", "--grid sizes must be positive");
  return g;
}

std::optional<double> elapsed_since(std::chrono::steady_clock::time_point t0) {
  const char* flag = std::getenv("CONTACT_RADIUS_TIMING");
  if (!flag || std::string(flag) != "1") return std::nullopt;
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("InvalidInputs", "cannot write " + path);
  out << text;
}

struct VerifyArgs {
  std::string model, manifest;
  int points = 100;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  bool json = false;
  std::vector<std::string> checks;
};

struct BoundsArgs {
  std::string model, manifest;
  std::optional<int> dim;
  std::optional<double> inj, sec_min, sec_max, sec_abs, theta_prime, ric_min;
  std::uint64_t seed = 0;
  bool json = false;
};

struct ProbeArgs {
  std::string probe, model, manifest, point, grid, csv;
  double radius = 0.0;
  std::uint64_t seed = 0;
  bool json = false;
};

struct TubeArgs {
  std::string model, manifest;
  int orbit = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;
  bool json = false;
};

int run_verify(const VerifyArgs& a, const std::string& command) {
  const auto t0 = std::chrono::steady_clock::now();
  Resolved r = resolve(a.model, a.manifest, a.seed);
  SuiteOptions o;
  o.points = a.points;
  o.seed = a.seed;
  o.tolerance = a.tol;
  o.checks = a.checks;
  const auto results = run_identity_suite(r.model, o);
  bool ok = true;
  for (const auto& c : results) ok = ok && c.pass;
  if (a.json)
    std::cout << render_report({command, a.seed, r.header, elapsed_since(t0)}, results);
  else
    std::cout << "model " << r.header.name << " (" << r.header.source << ")\n"
              << render_table(results);
  return ok ? kPass : kFail;
}

int run_bounds(const BoundsArgs& a, const std::string& command) {
  const auto t0 = std::chrono::steady_clock::now();
  const bool scalar = a.dim || a.inj || a.sec_min || a.sec_max || a.sec_abs || a.theta_prime ||
                      a.ric_min;
  SourcedInputs in;
  std::optional<ReportModel> header;
  if (scalar) {
    if (!a.model.empty() || !a.manifest.empty())
      fail("InvalidInputs", "scalar flags cannot be combined with --model or --manifest");
    if (!(a.dim && a.inj && a.sec_min && a.sec_max && a.sec_abs && a.theta_prime && a.ric_min))
      fail("InvalidInputs",
           "scalar mode needs --dim --inj --sec-min --sec-max --sec-abs --theta-prime --ric-min");
    if (*a.dim < 3 || *a.dim % 2 == 0) fail("InvalidInputs", "--dim must be odd and at least 3");
    in.inputs = {(*a.dim - 1) / 2, *a.inj, *a.sec_min, *a.sec_max, *a.sec_abs, *a.theta_prime,
                 *a.ric_min};
    in.source = "scalar";
  } else {
    Resolved r = resolve(a.model, a.manifest, a.seed);
    in = inputs_for(r, a.seed);
    header = r.header;
  }
  const BoundReport b = radius_bounds(in.inputs);
  if (a.json)
    std::cout << render_report({command, a.seed, header, elapsed_since(t0)}, b, in);
  else
    std::cout << render_table(b, in);
  return kPass;
}

int run_probe(const ProbeArgs& a, const std::string& command) {
  const auto t0 = std::chrono::steady_clock::now();
  Resolved r = resolve(a.model, a.manifest, a.seed);
  const Vec p = parse_point(a.point, r.model.dim());
  const ProbeGrid grid = parse_grid(a.grid, a.seed);
  ProbeReport rep;
  if (a.probe == "levi") {
    rep = levi_probe(r.model, p, grid.n_dirs, a.seed);
    rep.radius = a.radius;
  } else {
    if (!(a.radius > 0.0)) fail("InvalidInputs", "--radius must be positive");
    const ProbeContext ctx = make_probe_context(inputs_for(r, a.seed).inputs);
    if (a.probe == "twisting")
      rep = twisting_probe(r.model, p, a.radius, grid, ctx, ctx.constants.A, ctx.constants.B);
    else if (a.probe == "taming")
      rep = taming_probe(r.model, p, a.radius, grid, ctx);
    else if (a.probe == "jacobi")
      rep = jacobi_bound_probe(r.model, p, a.radius, grid, ctx);
    else
      rep = hessian_distance_probe(r.model, p, a.radius, grid, ctx);
  }
  if (!a.csv.empty()) write_file(a.csv, probe_trace_csv(rep));
  if (a.json)
    std::cout << render_report({command, a.seed, r.header, elapsed_since(t0)},
                               std::vector<ProbeReport>{rep});
  else
    std::cout << "model " << r.header.name << '\n' << render_table(rep);
  return rep.pass ? kPass : kFail;
}

int run_tube(const TubeArgs& a, const std::string& command) {
  const auto t0 = std::chrono::steady_clock::now();
  Resolved r = resolve(a.model, a.manifest, a.seed);
  if (r.model.orbits.empty()) fail("InvalidInputs", "model " + r.header.name + " has no orbit seeds");
  if (a.orbit < 0 || a.orbit >= static_cast<int>(r.model.orbits.size()))
    fail("InvalidInputs", "--orbit out of range (model has " +
                              std::to_string(r.model.orbits.size()) + ")");
  if (!(a.radius > 0.0)) fail("InvalidInputs", "--radius must be positive");
  const ProbeContext ctx = make_probe_context(inputs_for(r, a.seed).inputs);
  TubeGrid grid;
  grid.disk.seed = a.seed;
  const ProbeReport rep = reeb_tube_probe(r.model, r.model.orbits[a.orbit], a.radius, grid, ctx);
  if (a.json)
    std::cout << render_report({command, a.seed, r.header, elapsed_since(t0)},
                               std::vector<ProbeReport>{rep});
  else
    std::cout << "model " << r.header.name << " orbit " << a.orbit << '\n' << render_table(rep);
  return rep.pass ? kPass : kFail;
}

void model_flags(CLI::App* c, std::string& model, std::string& manifest) {
  auto* m = c->add_option("--model", model, "built-in model name");
  c->add_option("--manifest", manifest, "model manifest (JSON)")->excludes(m);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact-metric identity checks, Darboux radius bounds and geodesic probes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the identity suite");
  model_flags(verify, va.model, va.manifest);
  verify->add_option("--points", va.points, "random sample points")->check(CLI::PositiveNumber);
  verify->add_option("--tol", va.tol, "tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--seed", va.seed, "random seed");
  verify->add_option("--check", va.checks, "check ids (default: all)");
  verify->add_flag("--json", va.json, "JSON report");

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "radius bounds from a model or scalar inputs");
  model_flags(bounds, ba.model, ba.manifest);
  bounds->add_option("--dim", ba.dim, "manifold dimension 2n+1");
  bounds->add_option("--inj", ba.inj, "injectivity radius");
  bounds->add_option("--sec-min", ba.sec_min, "lower sectional curvature bound");
  bounds->add_option("--sec-max", ba.sec_max, "upper sectional curvature bound");
  bounds->add_option("--sec-abs", ba.sec_abs, "bound on |sec|");
  bounds->add_option("--theta-prime", ba.theta_prime, "rotation speed theta'");
  bounds->add_option("--ric-min", ba.ric_min, "minimum Ric of the Reeb field");
  bounds->add_option("--seed", ba.seed, "seed for sampled inputs (manifests)");
  bounds->add_flag("--json", ba.json, "JSON report");

  ProbeArgs pa;
  auto* probe = app.add_subcommand("probe", "geodesic probes on a disk around a point");
  probe->add_option("probe", pa.probe, "twisting, taming, jacobi, hessian or levi")
      ->required()
      ->check(CLI::IsMember({"twisting", "taming", "jacobi", "hessian", "levi"}));
  model_flags(probe, pa.model, pa.manifest);
  probe->add_option("--point", pa.point, "centre, comma separated (default: chart origin)");
  probe->add_option("--radius", pa.radius, "disk radius");
  probe->add_option("--grid", pa.grid, "directions x radii, e.g. 32x16");
  probe->add_option("--csv", pa.csv, "write the margin trace as CSV");
  probe->add_option("--seed", pa.seed, "random seed");
  probe->add_flag("--json", pa.json, "JSON report");

  TubeArgs ta;
  auto* tube = app.add_subcommand("tube", "transversality along a closed Reeb orbit");
  model_flags(tube, ta.model, ta.manifest);
  tube->add_option("--orbit", ta.orbit, "orbit seed index");
  tube->add_option("--radius", ta.radius, "tube radius")->required();
  tube->add_option("--seed", ta.seed, "random seed");
  tube->add_flag("--json", ta.json, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  std::string command;
  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);

  try {
    if (*verify) return run_verify(va, command);
    if (*bounds) return run_bounds(ba, command);
    if (*probe) return run_probe(pa, command);
    return run_tube(ta, command);
  } catch (const Error& e) {
    std::cerr << "contact-radius: " << e.what() << '\n';
    return is_failure_kind(e.kind()) ? kFail : kInput;
  } catch (const std::exception& e) {
    std::cerr << "contact-radius: " << e.what() << '\n';
    return kInput;
  }
}
