#include "contact/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "contact/errors.hpp"
#include "contact/parallel.hpp"

namespace contact {

namespace {

std::string format_point(const Vec& p) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

}  // namespace

Chart::Chart(std::vector<std::string> coords, std::vector<Interval> domain,
             std::vector<Interval> sampling)
    : coords_(std::move(coords)), domain_(std::move(domain)), sampling_(std::move(sampling)) {
  if (coords_.size() < 2) fail("InvalidInputs", "chart dimension must be at least 2");
  if (domain_.empty())
    domain_.assign(coords_.size(), {-std::numeric_limits<double>::infinity(),
                                    std::numeric_limits<double>::infinity()});
  if (domain_.size() != coords_.size()) fail("InvalidInputs", "chart domain size mismatch");
  for (const auto& iv : domain_)
    if (!(iv.lo < iv.hi)) fail("InvalidInputs", "empty chart interval");
  if (sampling_.empty()) {
    for (const auto& iv : domain_)
      sampling_.push_back({std::isfinite(iv.lo) ? iv.lo : -1.0, std::isfinite(iv.hi) ? iv.hi : 1.0});
  }
  if (sampling_.size() != coords_.size()) fail("InvalidInputs", "sampling box size mismatch");
}

bool Chart::contains(const Vec& p) const {
  if (p.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (!(p[i] > domain_[i].lo && p[i] < domain_[i].hi)) return false;
  return true;
}

void Chart::require_contains(const Vec& p) const {
  if (!contains(p)) fail("OutOfDomain", "point " + format_point(p) + " outside chart domain");
}

MetricField::MetricField(Chart chart, std::vector<std::vector<Expression>> upper)
    : chart_(std::move(chart)) {
  const int d = chart_.dim();
  if (static_cast<int>(upper.size()) != d) fail("InvalidInputs", "metric row count mismatch");
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(upper[i].size()) != d - i)
      fail("InvalidInputs", "metric upper-triangle row " + std::to_string(i) + " has wrong length");
    for (auto& e : upper[i]) {
      if (e.coords() != chart_.coords()) fail("InvalidInputs", "metric expression coordinates");
      upper_.push_back(std::move(e));
    }
  }
}

MetricField MetricField::from_strings(Chart chart,
                                      const std::vector<std::vector<std::string>>& upper) {
  std::vector<std::vector<Expression>> rows;
  for (const auto& r : upper) {
    std::vector<Expression> row;
    for (const auto& s : r) row.push_back(parse(s, chart.coords()));
    rows.push_back(std::move(row));
  }
  return MetricField(std::move(chart), std::move(rows));
}

int MetricField::packed(int i, int j, int d) {
  if (i > j) std::swap(i, j);
  return i * d - i * (i - 1) / 2 + (j - i);
}

const Expression& MetricField::component(int i, int j) const { return upper_[packed(i, j, dim())]; }

Mat MetricField::value(const Vec& p) const {
  chart_.require_contains(p);
  const int d = dim();
  Mat g(d, d);
  std::span<const double> pt(p.data(), d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) g(i, j) = g(j, i) = upper_[packed(i, j, d)].eval(pt);
  return g;
}

std::vector<Jet> MetricField::jets(const Vec& p, int order) const {
  chart_.require_contains(p);
  std::span<const double> pt(p.data(), dim());
  std::vector<Jet> out;
  out.reserve(upper_.size());
  for (const auto& e : upper_) out.push_back(e.eval_jet(pt, order));
  return out;
}

double PointGeometry::norm(const Vec& u) const { return std::sqrt(std::max(0.0, inner(u, u))); }

Vec PointGeometry::gamma_contract(const Vec& u, const Vec& v) const {
  const int d = dim();
  Vec out = Vec::Zero(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out[k] += gamma(k, i, j) * u[i] * v[j];
  return out;
}

Mat PointGeometry::gamma_along(const Vec& u) const {
  const int d = dim();
  Mat m = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) m(k, j) += gamma(k, i, j) * u[i];
  return m;
}

Vec PointGeometry::curvature(const Vec& x, const Vec& y, const Vec& z) const {
  const int d = dim();
  Vec out = Vec::Zero(d);
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i) {
      if (z[i] == 0.0) continue;
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) out[l] += riemann(l, i, j, k) * z[i] * x[j] * y[k];
    }
  return out;
}

double PointGeometry::riemann_lowered(int l, int i, int j, int k) const {
  double s = 0.0;
  for (int m = 0; m < dim(); ++m) s += g(l, m) * riemann(m, i, j, k);
  return s;
}

namespace {

Mat checked_inverse(const Mat& g, const Vec& p) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success || !g.allFinite())
    fail("NotPositiveDefinite", "metric not positive definite at " + format_point(p));
  return llt.solve(Mat::Identity(g.rows(), g.cols()));
}

// Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij), then raised.
Tensor3 christoffels(const Tensor3& dg, const Mat& g_inv, Tensor3* lowered_out) {
  const int d = dg.dim();
  Tensor3 low(d), gamma(d);
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) low(l, i, j) = 0.5 * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += g_inv(k, l) * low(l, i, j);
        gamma(k, i, j) = s;
      }
  if (lowered_out) *lowered_out = low;
  return gamma;
}

}  // namespace

Connection connection_at(const MetricField& metric, const Vec& p) {
  const int d = metric.dim();
  const auto jets = metric.jets(p, 1);
  Connection c;
  c.point = p;
  c.g.resize(d, d);
  Tensor3 dg(d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const Jet& jt = jets[MetricField::packed(i, j, d)];
      c.g(i, j) = c.g(j, i) = jt.value();
      for (int k = 0; k < d; ++k) dg(k, i, j) = dg(k, j, i) = jt.d(k);
    }
  c.gamma = christoffels(dg, checked_inverse(c.g, p), nullptr);
  return c;
}

PointGeometry point_geometry(const MetricField& metric, const Vec& p) {
  const int d = metric.dim();
  const auto jets = metric.jets(p, 2);
  PointGeometry pg;
  pg.point = p;
  pg.g.resize(d, d);
  pg.dg = Tensor3(d);
  Tensor4 ddg(d);  // ddg(m,k,i,j) = ∂_m∂_k g_ij
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const Jet& jt = jets[MetricField::packed(i, j, d)];
      pg.g(i, j) = pg.g(j, i) = jt.value();
      for (int k = 0; k < d; ++k) {
        pg.dg(k, i, j) = pg.dg(k, j, i) = jt.d(k);
        for (int m = 0; m < d; ++m) ddg(m, k, i, j) = ddg(m, k, j, i) = jt.d2(m, k);
      }
    }
  pg.g_inv = checked_inverse(pg.g, p);
  Tensor3 low;
  pg.gamma = christoffels(pg.dg, pg.g_inv, &low);

  // ∂_m Γ^k_ij = ∂_m g^{kl} Γ_{l,ij} + g^{kl} ∂_m Γ_{l,ij}
  Tensor4 dgamma(d);  // dgamma(m,k,i,j)
  for (int m = 0; m < d; ++m) {
    Mat dginv = Mat::Zero(d, d);
    Mat dgm(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) dgm(a, b) = pg.dg(m, a, b);
    dginv = -pg.g_inv * dgm * pg.g_inv;
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) {
            const double dlow = 0.5 * (ddg(m, i, j, l) + ddg(m, j, i, l) - ddg(m, l, i, j));
            s += dginv(k, l) * low(l, i, j) + pg.g_inv(k, l) * dlow;
          }
          dgamma(m, k, i, j) = s;
        }
  }

  // (R(∂_a,∂_b)∂_c)^l = ∂_aΓ^l_bc − ∂_bΓ^l_ac + Γ^l_am Γ^m_bc − Γ^l_bm Γ^m_ac
  pg.riemann = Tensor4(d);
  for (int l = 0; l < d; ++l)
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double s = dgamma(a, l, b, c) - dgamma(b, l, a, c);
          for (int m = 0; m < d; ++m)
            s += pg.gamma(l, a, m) * pg.gamma(m, b, c) - pg.gamma(l, b, m) * pg.gamma(m, a, c);
          pg.riemann(l, c, a, b) = s;
        }
  return pg;
}

double sectional(const PointGeometry& pg, const Vec& u, const Vec& v) {
  const double uu = pg.inner(u, u), vv = pg.inner(v, v), uv = pg.inner(u, v);
  const double gram = uu * vv - uv * uv;
  if (!(gram >= 1e-12 * uu * vv) || uu <= 0.0 || vv <= 0.0)
    fail("DegeneratePlane", "vectors span a degenerate plane");
  return pg.inner(pg.curvature(u, v, v), u) / gram;
}

double ricci_direction(const PointGeometry& pg, const Vec& v) {
  if (std::fabs(pg.norm(v) - 1.0) > 1e-9) fail("NotUnit", "ricci_direction needs a unit vector");
  const Mat e = orthonormal_completion(pg.g, v);
  double s = 0.0;
  for (int i = 1; i < e.cols(); ++i) s += sectional(pg, v, e.col(i));
  return s;
}

Mat gram_schmidt(const Mat& g, const Mat& vectors) {
  const int d = static_cast<int>(g.rows());
  std::vector<Vec> basis;
  for (int c = 0; c < vectors.cols(); ++c) {
    Vec w = vectors.col(c);
    const double scale = std::sqrt(std::max(0.0, w.dot(g * w)));
    if (scale == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b.dot(g * w) * b;
    const double nw = std::sqrt(std::max(0.0, w.dot(g * w)));
    if (nw <= 1e-10 * scale) continue;
    basis.push_back(w / nw);
    if (static_cast<int>(basis.size()) == d) break;
  }
  Mat out(d, basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) out.col(i) = basis[i];
  return out;
}

Mat orthonormal_completion(const Mat& g, const Vec& v) {
  const int d = static_cast<int>(g.rows());
  Mat cand(d, d + 1);
  cand.col(0) = v;
  cand.block(0, 1, d, d) = Mat::Identity(d, d);
  return gram_schmidt(g, cand);
}

Vec sample_point(const Chart& chart, Rng& rng) {
  Vec p(chart.dim());
  for (int i = 0; i < chart.dim(); ++i) {
    const auto& iv = chart.sampling()[i];
    double u = rng.uniform();
    while (u == 0.0) u = rng.uniform();
    p[i] = iv.lo + (iv.hi - iv.lo) * u;
  }
  return p;
}

SecRange sec_range_estimate(const MetricField& metric, const SecSampler& sampler,
                            const std::function<Mat(const Vec&)>& adapted_frame) {
  if (sampler.points < 1 || sampler.planes < 1)
    fail("InvalidInputs", "sec_range_estimate needs at least one point and one plane");
  const int d = metric.dim();
  Rng rng(sampler.seed);
  struct Draw {
    Vec p;
    std::vector<std::pair<Vec, Vec>> planes;
  };
  std::vector<Draw> draws(sampler.points);
  for (auto& dr : draws) {
    dr.p = sample_point(metric.chart(), rng);
    for (int k = 0; k < sampler.planes; ++k) {
      Vec u(d), v(d);
      for (int i = 0; i < d; ++i) u[i] = rng.normal();
      for (int i = 0; i < d; ++i) v[i] = rng.normal();
      dr.planes.emplace_back(u, v);
    }
  }
  std::vector<double> lo(sampler.points), hi(sampler.points);
  std::vector<int> count(sampler.points, 0);
  parallel_for(sampler.points, [&](int idx) {
    const auto& dr = draws[idx];
    const PointGeometry pg = point_geometry(metric, dr.p);
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    int c = 0;
    auto take = [&](const Vec& u, const Vec& v) {
      const double k = sectional(pg, u, v);
      mn = std::min(mn, k);
      mx = std::max(mx, k);
      ++c;
    };
    for (const auto& [u, v] : dr.planes) take(u, v);
    if (adapted_frame) {
      const Mat e = adapted_frame(dr.p);
      for (int a = 0; a < e.cols(); ++a)
        for (int b = a + 1; b < e.cols(); ++b) take(e.col(a), e.col(b));
    }
    lo[idx] = mn;
    hi[idx] = mx;
    count[idx] = c;
  });
  SecRange r;
  r.kappa = *std::min_element(lo.begin(), lo.end());
  r.K = *std::max_element(hi.begin(), hi.end());
  for (int c : count) r.evaluations += c;
  return r;
}

}  // namespace contact
