#include "contact/contact_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "contact/errors.hpp"
#include "contact/parallel.hpp"

namespace contact {

namespace {

std::string fmt_point(const Vec& p) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Kernel of dα, normalized so that α(R) = 1.
Vec reeb_solve(const Vec& alpha, const Mat& omega, const Vec& p, int n) {
  const int d = static_cast<int>(alpha.size());
  Eigen::JacobiSVD<Mat> svd(omega, Eigen::ComputeFullV);
  const Vec s = svd.singularValues();
  if (!(s[0] > 0.0) || s[2 * n - 1] < 1e-10 * s[0])
    fail("NotContact", "dα has rank below " + std::to_string(2 * n) + " at " + fmt_point(p));

  Vec k;
  Eigen::FullPivLU<Mat> lu(omega);
  lu.setThreshold(1e-10);
  const Mat U = lu.matrixLU().triangularView<Eigen::Upper>();
  const double pivot_ratio = std::fabs(U(2 * n - 1, 2 * n - 1)) / std::fabs(U(0, 0));
  if (lu.rank() == 2 * n && pivot_ratio >= 1e-8) {
    k = lu.kernel().col(0);
  } else {
    k = svd.matrixV().col(d - 1);
  }
  const double a = alpha.dot(k);
  if (std::fabs(a) < 1e-12 * alpha.norm() * k.norm())
    fail("NotContact", "α vanishes on the kernel of dα at " + fmt_point(p));
  return k / a;
}

// Euclidean-orthonormal basis of ker α (d × (d−1)).
Mat xi_basis(const Vec& alpha) {
  const int d = static_cast<int>(alpha.size());
  Eigen::HouseholderQR<Mat> qr{Mat(alpha)};
  const Mat Q = qr.householderQ() * Mat::Identity(d, d);
  return Q.rightCols(d - 1);
}

Mat slice(const Tensor3& t, int k) {
  const int d = t.dim();
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = t(k, i, j);
  return m;
}

}  // namespace

void ContactModel::validate() const {
  const int d = dim();
  if (d % 2 == 0) fail("InvalidInputs", "dimension must be odd");
  if (d != 2 * n + 1) fail("InvalidInputs", "dim must equal 2n+1");
  if (static_cast<int>(alpha.size()) != d) fail("InvalidInputs", "alpha has wrong length");
  for (const auto& a : alpha)
    if (a.coords() != chart().coords()) fail("InvalidInputs", "alpha coordinate mismatch");
  if (j_field) {
    if (static_cast<int>(j_field->size()) != d) fail("InvalidInputs", "J has wrong row count");
    for (const auto& row : *j_field)
      if (static_cast<int>(row.size()) != d) fail("InvalidInputs", "J has wrong column count");
  }
  if (inj && !(*inj > 0.0)) fail("InvalidInputs", "inj must be positive");
  if (conv && !(*conv > 0.0)) fail("InvalidInputs", "conv must be positive");
  for (const auto& o : orbits) {
    if (o.point.size() != d) fail("InvalidInputs", "orbit seed has wrong dimension");
    if (o.period && !(*o.period > 0.0)) fail("InvalidInputs", "orbit period must be positive");
  }
}

Vec ContactFrame::xi_part(const Vec& v) const { return v - inner(v, n_unit) * n_unit; }

AlphaJet alpha_jet(const ContactModel& model, const Vec& p, int order) {
  model.chart().require_contains(p);
  const int d = model.dim();
  std::span<const double> pt(p.data(), d);
  AlphaJet aj;
  aj.alpha.resize(d);
  aj.d.resize(d, d);
  if (order >= 2) aj.dd = Tensor3(d);
  for (int j = 0; j < d; ++j) {
    const Jet jt = model.alpha[j].eval_jet(pt, order);
    aj.alpha[j] = jt.value();
    for (int k = 0; k < d; ++k) {
      aj.d(k, j) = order >= 1 ? jt.d(k) : 0.0;
      if (order >= 2)
        for (int m = 0; m < d; ++m) aj.dd(m, k, j) = jt.d2(m, k);
    }
  }
  if (!(aj.alpha.norm() > 0.0)) fail("NotContact", "α vanishes at " + fmt_point(p));
  aj.omega = aj.d - aj.d.transpose();
  return aj;
}

Vec reeb_at(const ContactModel& model, const Vec& p) {
  const AlphaJet aj = alpha_jet(model, p, 1);
  return reeb_solve(aj.alpha, aj.omega, p, model.n);
}

ContactFrame frame_at(const ContactModel& model, const Vec& p) {
  const int d = model.dim();
  const int n = model.n;
  ContactFrame f;
  f.geo = point_geometry(model.metric, p);
  f.n = n;
  const AlphaJet aj = alpha_jet(model, p, 2);
  f.alpha = aj.alpha;
  f.dalpha = aj.omega;
  f.d_alpha = aj.d;
  const Mat& G = f.geo.g;
  const Mat& Gi = f.geo.g_inv;
  const Mat& W = aj.omega;

  f.reeb = reeb_solve(aj.alpha, W, p, n);
  const Vec& R = f.reeb;

  std::vector<Mat> dW(d), dG(d);
  for (int k = 0; k < d; ++k) {
    dW[k].resize(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) dW[k](i, j) = aj.dd(k, i, j) - aj.dd(k, j, i);
    dG[k] = slice(f.geo.dg, k);
  }

  // Differentiating ΩR = 0, α·R = 1 gives an overdetermined consistent system
  // M ∂R = rhs with M = [Ω; αᵀ]; solved through the normal equations.
  const Mat N = W.transpose() * W + aj.alpha * aj.alpha.transpose();
  const Eigen::LDLT<Mat> Nf(N);
  f.d_reeb.resize(d, d);
  for (int k = 0; k < d; ++k) {
    const Vec rhs = -W.transpose() * (dW[k] * R) - aj.alpha * aj.d.row(k).dot(R);
    f.d_reeb.col(k) = Nf.solve(rhs);
  }

  f.rho = std::sqrt(R.dot(G * R));
  f.n_unit = R / f.rho;
  f.d_n.resize(d, d);
  for (int k = 0; k < d; ++k) {
    const Vec dR = f.d_reeb.col(k);
    const double drho = (2.0 * R.dot(G * dR) + R.dot(dG[k] * R)) / (2.0 * f.rho);
    f.d_n.col(k) = dR / f.rho - R * drho / (f.rho * f.rho);
  }

  // A = −G⁻¹Ω satisfies g(Au, w) = dα(u, w).
  const Mat A = -Gi * W;
  const double c2 = -(A * A).trace() / (2.0 * n);
  if (!(c2 > 0.0)) fail("NotCompatible", "A² has no negative definite part at " + fmt_point(p));
  f.c = std::sqrt(c2);
  f.theta_prime = f.rho * f.c;

  f.d_phi.resize(d);
  for (int k = 0; k < d; ++k) {
    const Mat dA = -Gi * (dG[k] * A + dW[k]);
    const double dc = -(A * dA).trace() / n / (2.0 * f.c);
    f.d_phi[k] = dA / f.c - A * dc / c2;
  }
  f.phi = A / f.c;
  f.J = f.phi;

  if (model.j_field) {
    std::span<const double> pt(p.data(), d);
    Mat Ju(d, d);
    std::vector<Mat> dJ(d, Mat(d, d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Jet jt = (*model.j_field)[i][j].eval_jet(pt, 1);
        Ju(i, j) = jt.value();
        for (int k = 0; k < d; ++k) dJ[k](i, j) = jt.d(k);
      }
    // φ = J ∘ (v ↦ v − g(v,n)n)
    const Mat P = Mat::Identity(d, d) - f.n_unit * f.n_unit.transpose() * G;
    const Mat phi_user = Ju * P;
    const double scale = std::max(1.0, max_abs(f.phi));
    if (max_abs(phi_user - f.phi) > 1e-6 * scale) {
      std::ostringstream os;
      os << "supplied J disagrees with the J determined by g and dα at " << fmt_point(p)
         << " (max deviation " << max_abs(phi_user - f.phi) << ")";
      fail("JFieldMismatch", os.str());
    }
    for (int k = 0; k < d; ++k) {
      const Vec dn = f.d_n.col(k);
      const Mat dP = -(dn * f.n_unit.transpose() * G + f.n_unit * dn.transpose() * G +
                       f.n_unit * f.n_unit.transpose() * dG[k]);
      f.d_phi[k] = dJ[k] * P + Ju * dP;
    }
    f.phi = phi_user;
    f.J = Ju;
  }

  // h = ½ L_R φ
  Mat lie = -f.d_reeb * f.phi + f.phi * f.d_reeb;
  for (int k = 0; k < d; ++k) lie += R[k] * f.d_phi[k];
  f.h = 0.5 * lie;

  const Mat GDn = G * nabla_vector(f.geo, f.n_unit, f.d_n);
  f.II = -0.5 * (GDn + GDn.transpose());
  return f;
}

Mat nabla_vector(const PointGeometry& pg, const Vec& V, const Mat& dV) {
  const int d = pg.dim();
  Mat out = dV;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) out(i, k) += pg.gamma(i, k, j) * V[j];
  return out;
}

Mat nabla_phi(const ContactFrame& f, const Vec& u) {
  const int d = f.dim();
  Mat out = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) out += u[k] * f.d_phi[k];
  const Mat Gu = f.geo.gamma_along(u);
  return out + Gu * f.phi - f.phi * Gu;
}

Vec nabla_reeb(const ContactFrame& f, const Vec& u) {
  return f.d_reeb * u + f.geo.gamma_along(u) * f.reeb;
}

Vec phi_torsion(const ContactFrame& f, const Vec& v, const Vec& w) {
  const int d = f.dim();
  // D(X) = Σ_a X^a ∂_a φ
  auto D = [&](const Vec& x) {
    Mat m = Mat::Zero(d, d);
    for (int a = 0; a < d; ++a) m += x[a] * f.d_phi[a];
    return m;
  };
  return D(f.phi * v) * w - D(f.phi * w) * v - f.phi * (D(v) * w - D(w) * v);
}

Vec nijenhuis_at(const ContactFrame& f, const Vec& v, const Vec& w) {
  const double tol = 1e-9 * std::max(1.0, f.alpha.norm());
  if (std::fabs(f.alpha.dot(v)) > tol * std::max(1.0, v.norm()) ||
      std::fabs(f.alpha.dot(w)) > tol * std::max(1.0, w.norm()))
    fail("NotInXi", "nijenhuis_at needs vectors in ξ");
  return phi_torsion(f, v, w);
}

Mat adapted_basis(const ContactFrame& f) {
  const int d = f.dim();
  std::vector<Vec> out;
  auto orth = [&](Vec w) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : out) w -= f.inner(b, w) * b;
    return w;
  };
  for (int c = 0; c < d && static_cast<int>(out.size()) < 2 * f.n; ++c) {
    Vec e = Vec::Unit(d, c);
    e -= f.alpha.dot(e) * f.reeb;
    const double scale = f.norm(e);
    if (scale == 0.0) continue;
    Vec x = orth(e);
    if (f.norm(x) <= 1e-8 * scale) continue;
    x /= f.norm(x);
    Vec y = orth(f.phi * x);
    y /= f.norm(y);
    out.push_back(x);
    out.push_back(y);
  }
  Mat B(d, d);
  for (int i = 0; i < 2 * f.n; ++i) B.col(i) = out[i];
  B.col(d - 1) = f.n_unit;
  return B;
}

Vec random_xi_vector(const ContactFrame& f, Rng& rng) {
  const int d = f.dim();
  for (;;) {
    Vec u(d);
    for (int i = 0; i < d; ++i) u[i] = rng.normal();
    u -= f.alpha.dot(u) * f.reeb;
    const double nu = f.norm(u);
    if (nu > 1e-6) return u / nu;
  }
}

Vec random_unit_vector(const ContactFrame& f, Rng& rng) {
  const int d = f.dim();
  for (;;) {
    Vec u(d);
    for (int i = 0; i < d; ++i) u[i] = rng.normal();
    const double nu = f.norm(u);
    if (nu > 1e-6) return u / nu;
  }
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Incompatible: return "Incompatible";
    case Verdict::WeaklyCompatible: return "WeaklyCompatible";
    case Verdict::Compatible: return "Compatible";
  }
  return "?";
}

Classification compatibility_classify(const ContactModel& model, int points, std::uint64_t seed) {
  if (points < 1) fail("InvalidInputs", "classification needs at least one point");
  const int d = model.dim();
  const int n = model.n;
  Rng rng(seed);
  std::vector<Vec> pts(points);
  for (auto& p : pts) p = sample_point(model.chart(), rng);

  struct Sample {
    double a2 = 0.0, orth = 0.0, unit = 0.0, c = 0.0, theta = 0.0;
    bool weak = true;
  };
  std::vector<Sample> out(points);
  parallel_for(points, [&](int idx) {
    const Vec& p = pts[idx];
    const AlphaJet aj = alpha_jet(model, p, 1);
    const Vec R = reeb_solve(aj.alpha, aj.omega, p, n);
    const Mat G = model.metric.value(p);
    Eigen::LLT<Mat> llt(G);
    if (llt.info() != Eigen::Success)
      fail("NotPositiveDefinite", "metric not positive definite at " + fmt_point(p));
    const Mat B = xi_basis(aj.alpha);
    const Mat Gx = B.transpose() * G * B;
    const Mat Wx = B.transpose() * aj.omega * B;
    const Mat Ax = -Gx.llt().solve(Wx);
    const double c2 = -(Ax * Ax).trace() / (2.0 * n);
    Sample s;
    if (!(c2 > 0.0)) {
      s.weak = false;
      s.a2 = std::numeric_limits<double>::infinity();
    } else {
      s.a2 = max_abs(Ax * Ax + c2 * Mat::Identity(2 * n, 2 * n)) / c2;
      s.c = std::sqrt(c2);
    }
    const double rho = std::sqrt(R.dot(G * R));
    for (int i = 0; i < 2 * n; ++i) {
      const Vec b = B.col(i);
      s.orth = std::max(s.orth, std::fabs(R.dot(G * b)) / (rho * std::sqrt(b.dot(G * b))));
    }
    s.unit = std::fabs(rho - 1.0);
    s.theta = rho * s.c;
    out[idx] = s;
  });
  (void)d;

  Classification cl;
  auto make = [&](const char* name, auto get) {
    ClassifyTest t;
    t.name = name;
    t.tolerance = 1e-6;
    t.worst_point = pts[0];
    for (int i = 0; i < points; ++i) {
      const double v = get(out[i]);
      if (v > t.worst || !std::isfinite(v)) {
        t.worst = v;
        t.worst_point = pts[i];
      }
    }
    t.pass = t.worst <= t.tolerance;
    return t;
  };
  cl.tests.push_back(make("weak-A-square", [](const Sample& s) { return s.a2; }));
  cl.tests.push_back(make("reeb-orthogonal", [](const Sample& s) { return s.orth; }));
  cl.tests.push_back(make("reeb-unit", [](const Sample& s) { return s.unit; }));

  ClassifyTest spread;
  spread.name = "theta-constant";
  spread.tolerance = 1e-6;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  int lo_i = 0, hi_i = 0;
  for (int i = 0; i < points; ++i) {
    cl.c_samples.push_back(out[i].c);
    sum += out[i].theta;
    if (out[i].theta < lo) lo = out[i].theta, lo_i = i;
    if (out[i].theta > hi) hi = out[i].theta, hi_i = i;
  }
  cl.theta_prime = sum / points;
  spread.worst = cl.theta_prime > 0.0 ? (hi - lo) / cl.theta_prime
                                      : std::numeric_limits<double>::infinity();
  spread.worst_point = pts[std::fabs(out[hi_i].theta - cl.theta_prime) >
                               std::fabs(out[lo_i].theta - cl.theta_prime)
                           ? hi_i
                           : lo_i];
  spread.pass = spread.worst <= spread.tolerance;
  cl.tests.push_back(spread);

  for (const auto& t : cl.tests)
    if (!t.pass) cl.failed.push_back(t.name);
  if (!cl.tests[0].pass)
    cl.verdict = Verdict::Incompatible;
  else if (cl.failed.empty())
    cl.verdict = Verdict::Compatible;
  else
    cl.verdict = Verdict::WeaklyCompatible;
  return cl;
}

CrResult is_CR(const ContactModel& model, int points, std::uint64_t seed) {
  constexpr int kPairs = 4;
  Rng rng(seed);
  std::vector<Vec> pts(points);
  std::vector<std::uint64_t> seeds(points);
  for (int i = 0; i < points; ++i) {
    pts[i] = sample_point(model.chart(), rng);
    seeds[i] = rng.next();
  }
  std::vector<double> worst(points, 0.0);
  parallel_for(points, [&](int idx) {
    const ContactFrame f = frame_at(model, pts[idx]);
    Rng local(seeds[idx]);
    for (int k = 0; k < kPairs; ++k) {
      const Vec v = random_xi_vector(f, local);
      const Vec w = random_xi_vector(f, local);
      const Vec N = nijenhuis_at(f, v, w);
      const double r = f.norm(f.xi_part(N)) / std::max(1.0, f.norm(N));
      worst[idx] = std::max(worst[idx], r);
    }
  });
  CrResult res;
  res.worst_point = pts.empty() ? Vec() : pts[0];
  for (int i = 0; i < points; ++i)
    if (worst[i] > res.worst) {
      res.worst = worst[i];
      res.worst_point = pts[i];
    }
  res.is_cr = res.worst < 1e-7;
  return res;
}

SecRange sec_range_estimate(const ContactModel& model, const SecSampler& sampler) {
  return sec_range_estimate(model.metric, sampler,
                            [&](const Vec& p) { return adapted_basis(frame_at(model, p)); });
}

}  // namespace contact
