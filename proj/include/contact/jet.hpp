#pragma once

#include <array>

namespace contact {

// Truncated multivariate Taylor jet: value and all partials up to `order` (<= 3)
// in `dim` variables. Symmetric derivative tensors are stored packed, once per
// index multiset, so hessian(i,j) == hessian(j,i) holds by construction.
class Jet {
 public:
  static constexpr int kMaxDim = 7;
  static constexpr int kHessSize = kMaxDim * (kMaxDim + 1) / 2;
  static constexpr int kThirdSize = kMaxDim * (kMaxDim + 1) * (kMaxDim + 2) / 6;

  Jet() = default;
  static Jet constant(double value, int dim, int order);
  static Jet variable(double value, int index, int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  double value() const { return v_; }
  double d(int i) const { return g_[i]; }
  double d2(int i, int j) const;
  double d3(int i, int j, int k) const;
  // True when every stored partial is zero.
  bool is_constant() const;

  // Univariate chain rule: f0..f3 are f and its first three derivatives
  // evaluated at value().
  Jet compose(double f0, double f1, double f2, double f3) const;

  Jet operator-() const;
  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  Jet scaled(double s) const;

  static int hess_index(int i, int j);
  static int third_index(int i, int j, int k);
  int hess_size() const { return order_ >= 2 ? dim_ * (dim_ + 1) / 2 : 0; }
  int third_size() const { return order_ >= 3 ? dim_ * (dim_ + 1) * (dim_ + 2) / 6 : 0; }

 private:
  Jet(int dim, int order);
  void clear();

  int dim_ = 0;
  int order_ = 0;
  double v_ = 0.0;
  std::array<double, kMaxDim> g_{};
  std::array<double, kHessSize> h_{};
  std::array<double, kThirdSize> t_{};
};

}  // namespace contact
