#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "confgeo/chart.hpp"
#include "confgeo/expr.hpp"
#include "confgeo/tensor.hpp"

namespace testing {

using namespace confgeo;

// Chart from a row-major list of component strings (upper triangle mirrored).
inline MetricChart chart_of(const std::vector<std::string>& coords, const std::vector<std::string>& metric,
                            Mode mode = Mode::Real, Parameters params = {}) {
  MetricChart c = make_chart("test", coords, mode);
  c.parameters = std::move(params);
  const int n = c.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) c.set_metric(i, j, Expr::parse(metric[i * n + j]));
  return c;
}

inline MetricChart diagonal_chart(const std::vector<std::string>& coords, const std::vector<std::string>& diag,
                                  Mode mode = Mode::Real, Parameters params = {}) {
  const int n = static_cast<int>(coords.size());
  std::vector<std::string> m(n * n, "0");
  for (int i = 0; i < n; ++i) m[i * n + i] = diag[i];
  return chart_of(coords, m, mode, std::move(params));
}

inline Point point_of(std::initializer_list<double> xs) {
  Point p;
  for (double x : xs) p.emplace_back(x, 0.0);
  return p;
}

// Christoffel symbols from central differences of metric values only.
inline Tensor christoffel_by_differences(const MetricField& f, const Point& x, double h = 1e-4) {
  const int n = f.dim();
  std::vector<Matrix> dg(n);
  for (int m = 0; m < n; ++m) {
    Point a = x, b = x, c = x, d = x;
    a[m] += 2 * h;
    b[m] += h;
    c[m] -= h;
    d[m] -= 2 * h;
    dg[m] = (-f.value(a) + 8.0 * f.value(b) - 8.0 * f.value(c) + f.value(d)) / (12.0 * h);
  }
  const Matrix ginv = f.value(x).inverse();
  Tensor gamma(n, "udd");
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Scalar s = 0.0;
        for (int l = 0; l < n; ++l) s += 0.5 * ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        gamma(k, i, j) = s;
      }
  return gamma;
}

// <R(d_i,d_j)d_k, d_l> for constant sectional curvature k.
inline Tensor constant_curvature(const Matrix& g, double k) {
  const int n = static_cast<int>(g.rows());
  Tensor r(n, "dddd");
  for_each_index(n, 4, [&](std::span<const int> i) {
    r.at(i) = k * (g(i[1], i[2]) * g(i[0], i[3]) - g(i[0], i[2]) * g(i[1], i[3]));
  });
  return r;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) { return (a - b).max_abs(); }

}  // namespace testing
