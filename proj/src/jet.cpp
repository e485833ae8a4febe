#include "contact/jet.hpp"

#include <algorithm>
#include <utility>

#include "contact/errors.hpp"

namespace contact {

namespace {

inline int h_idx(int i, int j) {
  if (i > j) std::swap(i, j);
  return j * (j + 1) / 2 + i;
}

}  // namespace

int Jet::hess_index(int i, int j) { return h_idx(i, j); }

int Jet::third_index(int i, int j, int k) {
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
  return k * (k + 1) * (k + 2) / 6 + j * (j + 1) / 2 + i;
}

Jet::Jet(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 0 || dim > kMaxDim) fail("InvalidInputs", "jet dimension out of range");
  if (order < 0 || order > 3) fail("InvalidInputs", "jet order must be 0..3");
  clear();
}

void Jet::clear() {
  v_ = 0.0;
  if (order_ >= 1) std::fill_n(g_.begin(), dim_, 0.0);
  std::fill_n(h_.begin(), hess_size(), 0.0);
  std::fill_n(t_.begin(), third_size(), 0.0);
}

Jet Jet::constant(double value, int dim, int order) {
  Jet j(dim, order);
  j.v_ = value;
  return j;
}

Jet Jet::variable(double value, int index, int dim, int order) {
  Jet j(dim, order);
  j.v_ = value;
  if (order >= 1) j.g_[index] = 1.0;
  return j;
}

double Jet::d2(int i, int j) const { return h_[h_idx(i, j)]; }

double Jet::d3(int i, int j, int k) const { return t_[third_index(i, j, k)]; }

bool Jet::is_constant() const {
  if (order_ >= 1)
    for (int i = 0; i < dim_; ++i)
      if (g_[i] != 0.0) return false;
  for (int i = 0, m = hess_size(); i < m; ++i)
    if (h_[i] != 0.0) return false;
  for (int i = 0, m = third_size(); i < m; ++i)
    if (t_[i] != 0.0) return false;
  return true;
}

Jet Jet::operator-() const { return scaled(-1.0); }

Jet Jet::scaled(double s) const {
  Jet r = *this;
  r.v_ *= s;
  if (order_ >= 1)
    for (int i = 0; i < dim_; ++i) r.g_[i] *= s;
  for (int i = 0, m = hess_size(); i < m; ++i) r.h_[i] *= s;
  for (int i = 0, m = third_size(); i < m; ++i) r.t_[i] *= s;
  return r;
}

static void check_compatible(const Jet& a, const Jet& b) {
  if (a.dim() != b.dim() || a.order() != b.order())
    fail("InvalidInputs", "jet arithmetic on mismatched dimension/order");
}

Jet operator+(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  Jet r = a;
  r.v_ += b.v_;
  if (a.order_ >= 1)
    for (int i = 0; i < a.dim_; ++i) r.g_[i] += b.g_[i];
  for (int i = 0, m = a.hess_size(); i < m; ++i) r.h_[i] += b.h_[i];
  for (int i = 0, m = a.third_size(); i < m; ++i) r.t_[i] += b.t_[i];
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  Jet r = a;
  r.v_ -= b.v_;
  if (a.order_ >= 1)
    for (int i = 0; i < a.dim_; ++i) r.g_[i] -= b.g_[i];
  for (int i = 0, m = a.hess_size(); i < m; ++i) r.h_[i] -= b.h_[i];
  for (int i = 0, m = a.third_size(); i < m; ++i) r.t_[i] -= b.t_[i];
  return r;
}

// Leibniz rule through third order.
Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  const int d = a.dim_;
  Jet r(d, a.order_);
  r.v_ = a.v_ * b.v_;
  if (a.order_ >= 1)
    for (int i = 0; i < d; ++i) r.g_[i] = a.g_[i] * b.v_ + a.v_ * b.g_[i];
  if (a.order_ >= 2) {
    int idx = 0;
    for (int j = 0; j < d; ++j)
      for (int i = 0; i <= j; ++i, ++idx)
        r.h_[idx] = a.h_[idx] * b.v_ + a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i] + a.v_ * b.h_[idx];
  }
  if (a.order_ >= 3) {
    int idx = 0;
    for (int k = 0; k < d; ++k)
      for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= j; ++i, ++idx) {
          const int ij = h_idx(i, j), ik = h_idx(i, k), jk = h_idx(j, k);
          r.t_[idx] = a.t_[idx] * b.v_ + a.h_[ij] * b.g_[k] + a.h_[ik] * b.g_[j] +
                      a.h_[jk] * b.g_[i] + a.g_[i] * b.h_[jk] + a.g_[j] * b.h_[ik] +
                      a.g_[k] * b.h_[ij] + a.v_ * b.t_[idx];
        }
  }
  return r;
}

// Faa di Bruno for a univariate outer function.
Jet Jet::compose(double f0, double f1, double f2, double f3) const {
  const int d = dim_;
  Jet r(d, order_);
  r.v_ = f0;
  if (order_ >= 1)
    for (int i = 0; i < d; ++i) r.g_[i] = f1 * g_[i];
  if (order_ >= 2) {
    int idx = 0;
    for (int j = 0; j < d; ++j)
      for (int i = 0; i <= j; ++i, ++idx) r.h_[idx] = f2 * g_[i] * g_[j] + f1 * h_[idx];
  }
  if (order_ >= 3) {
    int idx = 0;
    for (int k = 0; k < d; ++k)
      for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= j; ++i, ++idx) {
          const int ij = h_idx(i, j), ik = h_idx(i, k), jk = h_idx(j, k);
          r.t_[idx] = f3 * g_[i] * g_[j] * g_[k] +
                      f2 * (h_[ij] * g_[k] + h_[ik] * g_[j] + h_[jk] * g_[i]) + f1 * t_[idx];
        }
  }
  return r;
}

}  // namespace contact
