#include "confgeo/random_metric.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "confgeo/error.hpp"

namespace confgeo {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  while (u <= 0.0) u = uniform();
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(2.0 * std::numbers::pi * v);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * v);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view a, std::string_view b) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : a) mix(static_cast<unsigned char>(c));
  mix(0);
  for (char c : b) mix(static_cast<unsigned char>(c));
  std::uint64_t z = h + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<std::string> default_coordinates(int n) {
  static const char* names[] = {"x", "y", "z", "w", "u", "v"};
  if (n < 1 || n > 6) fail(ErrorCode::InvalidArgument, "dimension must be in 1..6");
  return {names, names + n};
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return std::string("(") + buf + ")";
}

std::string coefficient(Rng& rng, double scale, Mode mode) {
  const double re = scale * rng.normal();
  if (mode == Mode::Real) return num(re);
  return "(" + num(re) + "+" + num(0.5 * scale * rng.normal()) + "*i)";
}

// Random smooth function of the coordinates; `even_last` keeps it even in
// the last coordinate.
std::string smooth_term(Rng& rng, const std::vector<std::string>& c, double amp, Mode mode, bool even_last) {
  const int n = static_cast<int>(c.size());
  auto var = [&](int k) {
    if (even_last && k == n - 1) return "(" + c[k] + "*" + c[k] + ")";
    return c[k];
  };
  std::string s;
  for (int k = 0; k < n; ++k) s += "+" + coefficient(rng, amp, mode) + "*" + var(k);
  const int a = rng.below(n), b = rng.below(n);
  s += "+" + coefficient(rng, amp, mode) + "*" + var(a) + "*" + var(b);
  const int p = rng.below(n), q = rng.below(n);
  const std::string arg = num(rng.uniform(0.5, 1.5)) + "*" + var(p) + "+" + num(rng.uniform(-1, 1)) + "*" + var(q) +
                          "+" + num(rng.uniform(-1, 1));
  switch (rng.below(3)) {
    case 0: s += "+" + coefficient(rng, amp, mode) + "*sin(" + arg + ")"; break;
    case 1: s += "+" + coefficient(rng, amp, mode) + "*cos(" + arg + ")"; break;
    default: s += "+" + coefficient(rng, amp, mode) + "*(exp(" + num(0.5) + "*" + var(p) + ")-1)"; break;
  }
  return s;
}

}  // namespace

Point random_point(Rng& rng, int n, double box, Mode mode) {
  Point x(n);
  for (int k = 0; k < n; ++k) {
    const double re = rng.uniform(-box, box);
    x[k] = mode == Mode::Real ? Scalar(re) : Scalar(re, rng.uniform(-0.1, 0.1));
  }
  return x;
}

MetricChart random_metric(Rng& rng, const RandomMetricOptions& opt, std::string name) {
  const int n = opt.dim;
  if (n < 2 || n > kMaxJetVars) fail(ErrorCode::InvalidArgument, "random metric dimension must be in 2..6");
  if (opt.mode == Mode::Real && opt.signature.first + opt.signature.second != n)
    fail(ErrorCode::InvalidArgument, "signature does not match the dimension");
  const auto coords = default_coordinates(n);
  for (int attempt = 0; attempt < 50; ++attempt) {
    MetricChart chart = make_chart(name, coords, opt.mode);
    if (opt.mode == Mode::Real) chart.signature = opt.signature;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        std::string s;
        if (i == j) s = (opt.mode == Mode::Complex || i < opt.signature.first) ? "1" : "-1";
        else s = "0";
        const bool odd = opt.reflection_symmetric && (i == n - 1) != (j == n - 1);
        const std::string term = smooth_term(rng, coords, opt.amplitude, opt.mode, opt.reflection_symmetric);
        s += odd ? "+" + coords[n - 1] + "*(" + term + ")" : term;
        chart.set_metric(i, j, Expr::parse(s));
      }
    }
    chart.domain.assign(n, Interval{-1.0, 1.0});
    for (int k = 0; k < opt.points; ++k) chart.sample_points.push_back(random_point(rng, n, opt.box, opt.mode));
    try {
      MetricField field(chart);
      for (const auto& p : chart.sample_points) field.checked_value(p);
      // Check a few more points so the whole sampling box is usable.
      Rng probe(rng.next());
      for (int k = 0; k < 8; ++k) field.checked_value(random_point(probe, n, opt.box + 0.1, opt.mode));
      return chart;
    } catch (const Error&) {
    }
  }
  fail(ErrorCode::DegenerateMetric, "could not generate a nondegenerate random metric");
}

Expr random_potential(Rng& rng, const std::vector<std::string>& coordinates, double amplitude) {
  return Expr::parse("0" + smooth_term(rng, coordinates, amplitude, Mode::Real, false));
}

}  // namespace confgeo
