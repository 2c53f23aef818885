#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "confgeo/scalar.hpp"

namespace confgeo {

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetVars = 6;

using MultiIndex = std::array<std::uint8_t, kMaxJetVars>;

// Graded ordering of the multi-indices |alpha| <= order in nvars variables.
// Layouts of the same nvars nest: the order-k layout is a prefix of order k+1.
class JetLayout {
 public:
  static std::shared_ptr<const JetLayout> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return alphas_.size(); }
  const MultiIndex& alpha(std::size_t i) const { return alphas_[i]; }
  // Index of alpha, or -1 when |alpha| exceeds the order.
  int index_of(const MultiIndex& alpha) const;
  // alpha! for the coefficient at i.
  double factorial_weight(std::size_t i) const { return weights_[i]; }

  struct Product {
    std::uint16_t a, b, out;
  };
  const std::vector<Product>& products() const { return products_; }

  // For d/dx_v: entry i of the (order-1) layout reads coefficient src[i] of
  // this layout scaled by factor[i].
  struct Shift {
    std::vector<std::uint16_t> src;
    std::vector<double> factor;
  };
  const Shift& derivative_shift(int v) const { return shifts_[v]; }

  JetLayout(int nvars, int order);

 private:
  int nvars_;
  int order_;
  std::vector<MultiIndex> alphas_;
  std::vector<double> weights_;
  std::vector<Product> products_;
  std::vector<Shift> shifts_;
};

// Truncated multivariate Taylor expansion. Coefficients are stored as
// Taylor coefficients c_alpha = d^alpha f / alpha!, so products are plain
// Cauchy products over the layout's multiplication table.
class Jet {
 public:
  Jet() = default;
  Jet(std::shared_ptr<const JetLayout> layout, Scalar value);

  static Jet constant(int nvars, int order, Scalar value);
  static Jet variable(int nvars, int order, int var, Scalar value);

  int nvars() const { return layout_->nvars(); }
  int order() const { return layout_->order(); }
  const JetLayout& layout() const { return *layout_; }
  const std::shared_ptr<const JetLayout>& layout_ptr() const { return layout_; }

  Scalar value() const { return coeffs_[0]; }
  std::span<const Scalar> coeffs() const { return coeffs_; }
  std::span<Scalar> coeffs() { return coeffs_; }
  Scalar coeff(std::size_t i) const { return coeffs_[i]; }

  // Exact partial derivative d^alpha f at the base point (0 beyond the order).
  Scalar partial(const MultiIndex& alpha) const;
  Scalar partial(std::initializer_list<int> vars) const;
  // First derivative along var as a jet one order lower.
  Jet derivative(int var) const;
  Jet truncated(int order) const;
  bool is_constant() const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(Scalar s);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(const Jet& a, Scalar s);
  friend Jet operator*(const Jet& a, Scalar s);
  friend Jet operator*(Scalar s, const Jet& a) { return a * s; }

  // f(u) = sum_m a[m] (u - u0)^m, given f's univariate Taylor coefficients a
  // at u0 = value(). a must hold at least order()+1 entries.
  Jet compose(std::span<const Scalar> a) const;

 private:
  std::shared_ptr<const JetLayout> layout_;
  std::vector<Scalar> coeffs_;
};

// Fused a += b * c without temporaries.
void multiply_add(Jet& acc, const Jet& b, const Jet& c);

Jet reciprocal(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet sinh(const Jet& u);
Jet cosh(const Jet& u);
Jet tan(const Jet& u);
Jet tanh(const Jet& u);
Jet atan(const Jet& u);
// u^p for a constant exponent via the binomial series.
Jet power_series(const Jet& u, Scalar p);
Jet integer_power(const Jet& u, long long k);

}  // namespace confgeo
