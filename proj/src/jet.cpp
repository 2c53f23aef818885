#include "confgeo/jet.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

#include "confgeo/error.hpp"

namespace confgeo {

const char* to_string(Mode m) { return m == Mode::Real ? "real" : "complex"; }

namespace {

std::uint32_t pack(const MultiIndex& a) {
  std::uint32_t key = 0;
  for (int v = 0; v < kMaxJetVars; ++v) key = key * 8u + a[v];
  return key;
}

int degree(const MultiIndex& a) {
  int d = 0;
  for (auto x : a) d += x;
  return d;
}

// Enumerate multi-indices of exact degree d in nvars variables,
// lexicographically descending in (a0, a1, ...).
void enumerate(int nvars, int d, int var, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (var == nvars - 1) {
    cur[var] = static_cast<std::uint8_t>(d);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur[var] = static_cast<std::uint8_t>(k);
    enumerate(nvars, d - k, var + 1, cur, out);
  }
  cur[var] = 0;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

JetLayout::JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1 || nvars > kMaxJetVars || order < 0 || order > kMaxJetOrder)
    fail(ErrorCode::InvalidArgument, "jet layout out of range: nvars=" + std::to_string(nvars) +
                                         " order=" + std::to_string(order));
  MultiIndex cur{};
  for (int d = 0; d <= order; ++d) enumerate(nvars, d, 0, cur, alphas_);

  std::unordered_map<std::uint32_t, int> index;
  for (std::size_t i = 0; i < alphas_.size(); ++i) index[pack(alphas_[i])] = static_cast<int>(i);

  weights_.resize(alphas_.size());
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    double w = 1.0;
    for (int v = 0; v < nvars; ++v) w *= factorial(alphas_[i][v]);
    weights_[i] = w;
  }

  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    for (std::size_t j = 0; j < alphas_.size(); ++j) {
      if (degree(alphas_[i]) + degree(alphas_[j]) > order) continue;
      MultiIndex s{};
      for (int v = 0; v < kMaxJetVars; ++v) s[v] = alphas_[i][v] + alphas_[j][v];
      products_.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                           static_cast<std::uint16_t>(index.at(pack(s)))});
    }
  }

  if (order > 0) {
    // The order-1 layout is the prefix of ours with |beta| <= order-1.
    std::size_t lower = 0;
    while (lower < alphas_.size() && degree(alphas_[lower]) <= order - 1) ++lower;
    shifts_.resize(nvars);
    for (int v = 0; v < nvars; ++v) {
      auto& sh = shifts_[v];
      for (std::size_t i = 0; i < lower; ++i) {
        MultiIndex s = alphas_[i];
        s[v] += 1;
        sh.src.push_back(static_cast<std::uint16_t>(index.at(pack(s))));
        sh.factor.push_back(static_cast<double>(alphas_[i][v]) + 1.0);
      }
    }
  }
}

std::shared_ptr<const JetLayout> JetLayout::get(int nvars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = std::make_shared<const JetLayout>(nvars, order);
  return slot;
}

int JetLayout::index_of(const MultiIndex& alpha) const {
  if (degree(alpha) > order_) return -1;
  for (std::size_t i = 0; i < alphas_.size(); ++i)
    if (alphas_[i] == alpha) return static_cast<int>(i);
  return -1;
}

Jet::Jet(std::shared_ptr<const JetLayout> layout, Scalar value)
    : layout_(std::move(layout)), coeffs_(layout_->size(), Scalar(0.0)) {
  coeffs_[0] = value;
}

Jet Jet::constant(int nvars, int order, Scalar value) {
  return Jet(JetLayout::get(nvars, order), value);
}

Jet Jet::variable(int nvars, int order, int var, Scalar value) {
  Jet j = constant(nvars, order, value);
  if (order > 0) j.coeffs_[1 + var] = 1.0;
  return j;
}

Scalar Jet::partial(const MultiIndex& alpha) const {
  int i = layout_->index_of(alpha);
  if (i < 0) return 0.0;
  return coeffs_[i] * layout_->factorial_weight(i);
}

Scalar Jet::partial(std::initializer_list<int> vars) const {
  MultiIndex a{};
  for (int v : vars) a[v] += 1;
  return partial(a);
}

Jet Jet::derivative(int var) const {
  if (order() == 0) fail(ErrorCode::InvalidArgument, "derivative of an order-0 jet");
  Jet out = constant(nvars(), order() - 1, 0.0);
  const auto& sh = layout_->derivative_shift(var);
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[sh.src[i]] * sh.factor[i];
  return out;
}

Jet Jet::truncated(int order) const {
  if (order >= this->order()) return *this;
  Jet out = constant(nvars(), order, 0.0);
  std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
  return out;
}

bool Jet::is_constant() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != Scalar(0.0)) return false;
  return true;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

namespace {

void check_compatible(const Jet& a, const Jet& b) {
  if (a.nvars() != b.nvars())
    fail(ErrorCode::InvalidArgument, "jets over different variable counts combined");
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  check_compatible(*this, o);
  if (o.order() < order()) *this = truncated(o.order());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_compatible(*this, o);
  if (o.order() < order()) *this = truncated(o.order());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(Scalar s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet out = a;
  out += b;
  return out;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet out = a;
  out -= b;
  return out;
}

Jet operator+(const Jet& a, Scalar s) {
  Jet out = a;
  out.coeffs_[0] += s;
  return out;
}

Jet operator*(const Jet& a, Scalar s) {
  Jet out = a;
  out *= s;
  return out;
}

void multiply_add(Jet& acc, const Jet& b, const Jet& c) {
  check_compatible(b, c);
  check_compatible(acc, b);
  const int order = std::min({acc.order(), b.order(), c.order()});
  if (acc.order() > order) acc = acc.truncated(order);
  const JetLayout& L = acc.layout();
  auto bc = b.coeffs();
  auto cc = c.coeffs();
  auto out = acc.coeffs();
  for (const auto& p : L.products()) out[p.out] += bc[p.a] * cc[p.b];
}

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  Jet out = Jet::constant(a.nvars(), std::min(a.order(), b.order()), 0.0);
  multiply_add(out, a, b);
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet Jet::compose(std::span<const Scalar> a) const {
  const int k = order();
  Jet delta = *this;
  delta.coeffs_[0] = 0.0;
  Jet result = constant(nvars(), k, a[k]);
  for (int m = k - 1; m >= 0; --m) {
    result = result * delta;
    result.coeffs_[0] += a[m];
  }
  return result;
}

Jet reciprocal(const Jet& u) {
  const Scalar u0 = u.value();
  if (u0 == Scalar(0.0)) fail(ErrorCode::DomainError, "division by zero");
  std::vector<Scalar> a(u.order() + 1);
  Scalar inv = 1.0 / u0;
  Scalar p = inv;
  for (int m = 0; m <= u.order(); ++m) {
    a[m] = (m % 2 ? -1.0 : 1.0) * p;
    p *= inv;
  }
  return u.compose(a);
}

Jet exp(const Jet& u) {
  std::vector<Scalar> a(u.order() + 1);
  Scalar e = std::exp(u.value());
  double f = 1.0;
  for (int m = 0; m <= u.order(); ++m) {
    if (m > 0) f *= m;
    a[m] = e / f;
  }
  return u.compose(a);
}

Jet log(const Jet& u) {
  const Scalar u0 = u.value();
  if (u0 == Scalar(0.0)) fail(ErrorCode::DomainError, "log of zero");
  std::vector<Scalar> a(u.order() + 1);
  a[0] = std::log(u0);
  Scalar p = 1.0;
  for (int m = 1; m <= u.order(); ++m) {
    p *= u0;
    a[m] = (m % 2 ? 1.0 : -1.0) / (static_cast<double>(m) * p);
  }
  return u.compose(a);
}

namespace {

// Taylor coefficients of a function whose derivatives cycle with period 4
// (sin, cos) or 2 (sinh, cosh) starting from the listed values.
Jet cyclic(const Jet& u, const Scalar* cycle, int period) {
  std::vector<Scalar> a(u.order() + 1);
  double f = 1.0;
  for (int m = 0; m <= u.order(); ++m) {
    if (m > 0) f *= m;
    a[m] = cycle[m % period] / f;
  }
  return u.compose(a);
}

}  // namespace

Jet sin(const Jet& u) {
  const Scalar s = std::sin(u.value()), c = std::cos(u.value());
  const Scalar cycle[4] = {s, c, -s, -c};
  return cyclic(u, cycle, 4);
}

Jet cos(const Jet& u) {
  const Scalar s = std::sin(u.value()), c = std::cos(u.value());
  const Scalar cycle[4] = {c, -s, -c, s};
  return cyclic(u, cycle, 4);
}

Jet sinh(const Jet& u) {
  const Scalar cycle[2] = {std::sinh(u.value()), std::cosh(u.value())};
  return cyclic(u, cycle, 2);
}

Jet cosh(const Jet& u) {
  const Scalar cycle[2] = {std::cosh(u.value()), std::sinh(u.value())};
  return cyclic(u, cycle, 2);
}

Jet tan(const Jet& u) { return sin(u) * reciprocal(cos(u)); }

Jet tanh(const Jet& u) { return sinh(u) * reciprocal(cosh(u)); }

Jet atan(const Jet& u) {
  const Scalar u0 = u.value();
  const int k = u.order();
  // d/dt atan(u0 + t) = 1 / q(t), q(t) = (1 + u0^2) + 2 u0 t + t^2.
  const Scalar q0 = 1.0 + u0 * u0, q1 = 2.0 * u0, q2 = 1.0;
  if (q0 == Scalar(0.0)) fail(ErrorCode::DomainError, "atan at a branch point");
  std::vector<Scalar> r(k + 1);
  for (int m = 0; m <= k; ++m) {
    Scalar acc = m == 0 ? Scalar(1.0) : Scalar(0.0);
    if (m >= 1) acc -= q1 * r[m - 1];
    if (m >= 2) acc -= q2 * r[m - 2];
    r[m] = acc / q0;
  }
  std::vector<Scalar> a(k + 1);
  a[0] = std::atan(u0);
  for (int m = 1; m <= k; ++m) a[m] = r[m - 1] / static_cast<double>(m);
  return u.compose(a);
}

Jet power_series(const Jet& u, Scalar p) {
  const Scalar u0 = u.value();
  if (u0 == Scalar(0.0)) {
    if (u.order() == 0) return Jet::constant(u.nvars(), 0, std::pow(u0, p));
    fail(ErrorCode::DomainError, "non-integer power at zero is not differentiable");
  }
  std::vector<Scalar> a(u.order() + 1);
  Scalar binom = 1.0;
  for (int m = 0; m <= u.order(); ++m) {
    if (m > 0) binom *= (p - static_cast<double>(m - 1)) / static_cast<double>(m);
    a[m] = binom * std::pow(u0, p - static_cast<double>(m));
  }
  return u.compose(a);
}

Jet integer_power(const Jet& u, long long k) {
  if (k < 0) return reciprocal(integer_power(u, -k));
  Jet result = Jet::constant(u.nvars(), u.order(), 1.0);
  Jet base = u;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

}  // namespace confgeo
