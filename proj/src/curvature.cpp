#include "confgeo/curvature.hpp"

#include <cmath>

#include "confgeo/error.hpp"

namespace confgeo {

namespace {

using JetArray = std::vector<Jet>;

JetArray zeros(std::size_t count, int nvars, int order) {
  return JetArray(count, Jet::constant(nvars, order, 0.0));
}

// Neumann series for the inverse metric: sum_m (-g0^{-1} d)^m g0^{-1}
// with d = g - g0, exact up to the jet order.
JetArray inverse_jets(const JetArray& g, const Matrix& ginv0, int n, int order) {
  JetArray a = zeros(n * n, n, order);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Jet d = g[k * n + j].truncated(order);
        d.coeffs()[0] = 0.0;
        a[i * n + j] += d * (-ginv0(i, k));
      }
    }
  }
  JetArray term = zeros(n * n, n, order);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) term[i * n + j].coeffs()[0] = ginv0(i, j);
  JetArray sum = term;
  for (int m = 1; m <= order; ++m) {
    JetArray next = zeros(n * n, n, order);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) multiply_add(next[i * n + j], a[i * n + k], term[k * n + j]);
    term = std::move(next);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
  }
  return sum;
}

Tensor values(const JetArray& jets, int n, const std::string& variance) {
  Tensor t(n, variance);
  for (std::size_t i = 0; i < jets.size(); ++i) t.data()[i] = jets[i].value();
  return t;
}

// d_a T for every component, with the derivative slot in front.
Tensor gradient(const JetArray& jets, int n, const std::string& variance) {
  Tensor t(n, "d" + variance);
  const std::size_t m = jets.size();
  MultiIndex alpha{};
  for (int a = 0; a < n; ++a) {
    alpha.fill(0);
    alpha[a] = 1;
    for (std::size_t i = 0; i < m; ++i) t.data()[a * m + i] = jets[i].partial(alpha);
  }
  return t;
}

// Adds the connection terms to a coordinate gradient to form the covariant
// derivative; slot 0 of `grad` is the derivative direction.
Tensor connect(Tensor grad, const Tensor& t, const Tensor& gamma) {
  const int n = t.dim();
  const int r = t.rank();
  std::vector<int> full(r + 1), src(r);
  for_each_index(n, r + 1, [&](std::span<const int> idx) {
    const int a = idx[0];
    Scalar acc = 0.0;
    for (int s = 0; s < r; ++s) {
      for (int q = 0; q < r; ++q) src[q] = idx[q + 1];
      const int target = idx[s + 1];
      for (int m = 0; m < n; ++m) {
        src[s] = m;
        if (t.variance()[s] == 'd')
          acc -= gamma(m, a, target) * t.at(src);
        else
          acc += gamma(target, a, m) * t.at(src);
      }
    }
    grad.at(idx) += acc;
  });
  return grad;
}

JetArray wedge_jets(const JetArray& h, const JetArray& g, int n, int order) {
  JetArray out = zeros(n * n * n * n, n, order);
  auto H = [&](int i, int j) -> const Jet& { return h[i * n + j]; };
  auto G = [&](int i, int j) -> const Jet& { return g[i * n + j]; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Jet& o = out[((a * n + b) * n + c) * n + d];
          multiply_add(o, H(b, c), G(a, d));
          multiply_add(o, G(b, c), H(a, d));
          Jet neg = zeros(1, n, order)[0];
          multiply_add(neg, H(a, c), G(b, d));
          multiply_add(neg, G(a, c), H(b, d));
          o -= neg;
        }
  return out;
}

}  // namespace

Tensor wedge_with_identity(const Tensor& h, const Matrix& g) {
  const int n = h.dim();
  Tensor out(n, "dddd");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          out(a, b, c, d) = h(b, c) * g(a, d) - h(a, c) * g(b, d) + g(b, c) * h(a, d) - g(a, c) * h(b, d);
  return out;
}

Tensor weyl_divergence(const Tensor& nabla_w, const Matrix& ginv) {
  const int n = nabla_w.dim();
  Tensor out(n, "ddd");
  if (n <= 3) return out;
  const double scale = 1.0 / (n - 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Scalar acc = 0.0;
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e) acc += ginv(d, e) * nabla_w(e, a, b, c, d);
        out(a, b, c) = acc * scale;
      }
  return out;
}

Scalar trace(const Tensor& t, const Matrix& ginv) {
  Scalar s = 0.0;
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) s += ginv(i, j) * t(i, j);
  return s;
}

CurvaturePack curvature_from_jets(const std::vector<Jet>& gj, const Point& point) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(gj.size()))));
  if (n * n != static_cast<int>(gj.size()) || n < 2) fail(ErrorCode::InvalidArgument, "metric jets must form an n*n array");
  const int K = gj[0].order();
  if (K < 2) fail(ErrorCode::InvalidArgument, "curvature needs metric jets of order at least 2");

  CurvaturePack p;
  p.n = n;
  p.point = point;
  p.g.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.g(i, j) = gj[i * n + j].value();
  check_nondegenerate(p.g);
  p.ginv = p.g.inverse();

  const JetArray ginv = inverse_jets(gj, p.ginv, n, K - 1);
  auto I2 = [n](int i, int j) { return i * n + j; };
  auto I3 = [n](int i, int j, int k) { return (i * n + j) * n + k; };
  auto I4 = [n](int i, int j, int k, int l) { return ((i * n + j) * n + k) * n + l; };

  std::vector<JetArray> dg(n);
  for (int c = 0; c < n; ++c) {
    dg[c].reserve(n * n);
    for (int ij = 0; ij < n * n; ++ij) dg[c].push_back(gj[ij].derivative(c));
  }

  // Gamma^l_ij = g^{lk} Gamma_kij, Gamma_kij = (d_i g_jk + d_j g_ik - d_k g_ij) / 2.
  JetArray gamma_low = zeros(n * n * n, n, K - 1);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        gamma_low[I3(k, i, j)] = (dg[i][I2(j, k)] + dg[j][I2(i, k)] - dg[k][I2(i, j)]) * 0.5;
  JetArray gamma = zeros(n * n * n, n, K - 1);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet& o = gamma[I3(l, i, j)];
        for (int k = 0; k < n; ++k) multiply_add(o, ginv[I2(l, k)], gamma_low[I3(k, i, j)]);
        gamma[I3(l, j, i)] = o;
      }

  std::vector<JetArray> dgamma(n);
  for (int a = 0; a < n; ++a) {
    dgamma[a].reserve(gamma.size());
    for (const auto& j : gamma) dgamma[a].push_back(j.derivative(a));
  }

  const int KR = K - 2;
  JetArray riem = zeros(n * n * n * n, n, KR);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (j < i) {
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) riem[I4(i, j, k, l)] = -riem[I4(j, i, k, l)];
        continue;
      }
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Jet o = dgamma[i][I3(l, j, k)] - dgamma[j][I3(l, i, k)];
          Jet neg = Jet::constant(n, KR, 0.0);
          for (int m = 0; m < n; ++m) {
            multiply_add(o, gamma[I3(l, i, m)], gamma[I3(m, j, k)]);
            multiply_add(neg, gamma[I3(l, j, m)], gamma[I3(m, i, k)]);
          }
          o -= neg;
          riem[I4(i, j, k, l)] = std::move(o);
        }
    }

  JetArray riem_low = zeros(riem.size(), n, KR);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int d = 0; d < n; ++d) {
          Jet& o = riem_low[I4(i, j, k, d)];
          for (int l = 0; l < n; ++l) multiply_add(o, gj[I2(d, l)], riem[I4(i, j, k, l)]);
        }

  JetArray ric = zeros(n * n, n, KR);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) ric[I2(j, k)] += riem[I4(i, j, k, i)];
  Jet scal = Jet::constant(n, KR, 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) multiply_add(scal, ginv[I2(j, k)], ric[I2(j, k)]);
  JetArray ric0(n * n);
  for (int jk = 0; jk < n * n; ++jk) ric0[jk] = ric[jk] - scal * gj[jk] * (1.0 / n);

  p.gamma = values(gamma, n, "udd");
  p.riemann = values(riem, n, "dddu");
  p.riemann_low = values(riem_low, n, "dddd");
  p.ricci = values(ric, n, "dd");
  p.ricci0 = values(ric0, n, "dd");
  p.scal = scal.value();
  if (K >= 3) {
    p.nabla_riemann = connect(gradient(riem_low, n, "dddd"), p.riemann_low, p.gamma);
  }

  if (n < 3) return p;
  p.has_conformal = true;
  JetArray h(n * n);
  const double cs = 1.0 / (2.0 * n * (n - 1));
  const double cr = 1.0 / (n - 2);
  for (int jk = 0; jk < n * n; ++jk) h[jk] = scal * gj[jk] * cs + ric0[jk] * cr;
  const JetArray hw = wedge_jets(h, gj, n, KR);
  JetArray w(riem_low.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = riem_low[i] - hw[i];

  p.h = values(h, n, "dd");
  p.h_wedge = values(hw, n, "dddd");
  p.weyl = values(w, n, "dddd");
  p.weyl_up = raise_index(p.weyl, 3, p.ginv);

  if (K < 3) return p;
  p.has_derivatives = true;
  p.nabla_h = connect(gradient(h, n, "dd"), p.h, p.gamma);
  p.cotton = Tensor(n, "ddd");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) p.cotton(a, b, c) = p.nabla_h(a, b, c) - p.nabla_h(b, a, c);
  p.nabla_weyl = connect(gradient(w, n, "dddd"), p.weyl, p.gamma);
  p.div_weyl = weyl_divergence(p.nabla_weyl, p.ginv);
  return p;
}

CurvaturePack curvature(const MetricField& field, const Point& point, int jet_order) {
  if (jet_order < 2 || jet_order > kMaxJetOrder)
    fail(ErrorCode::InvalidArgument, "jet order for curvature must be in 2.." + std::to_string(kMaxJetOrder));
  if (static_cast<int>(point.size()) != field.dim()) fail(ErrorCode::InvalidArgument, "point has the wrong dimension");
  field.checked_value(point);
  return curvature_from_jets(field.jets(point, jet_order), point);
}

Tensor christoffel(const MetricField& field, const Point& point) {
  const int n = field.dim();
  const auto gj = field.jets(point, 1);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gj[i * n + j].value();
  check_nondegenerate(g);
  const Matrix ginv = g.inverse();
  MultiIndex alpha{};
  auto d = [&](int c, int i, int j) {
    alpha.fill(0);
    alpha[c] = 1;
    return gj[i * n + j].partial(alpha);
  };
  Tensor gamma(n, "udd");
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Scalar acc = 0.0;
        for (int k = 0; k < n; ++k) acc += ginv(l, k) * (d(i, j, k) + d(j, i, k) - d(k, i, j));
        gamma(l, i, j) = 0.5 * acc;
      }
  return gamma;
}

ConnectionJet christoffel_with_derivative(const MetricField& field, const Point& point) {
  const int n = field.dim();
  const auto gj = field.jets(point, 2);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gj[i * n + j].value();
  check_nondegenerate(g);
  const JetArray ginv = inverse_jets(gj, g.inverse(), n, 1);
  std::vector<JetArray> dg(n);
  for (int c = 0; c < n; ++c)
    for (int ij = 0; ij < n * n; ++ij) dg[c].push_back(gj[ij].derivative(c));
  JetArray gamma = zeros(n * n * n, n, 1);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet& o = gamma[(l * n + i) * n + j];
        for (int k = 0; k < n; ++k)
          multiply_add(o, ginv[l * n + k], (dg[i][j * n + k] + dg[j][i * n + k] - dg[k][i * n + j]) * 0.5);
      }
  return {values(gamma, n, "udd"), gradient(gamma, n, "udd")};
}

Tensor covariant_derivative(const MetricField& field, const std::vector<Expr>& components,
                            const std::string& variance, const Point& point) {
  const int n = field.dim();
  std::size_t count = 1;
  for (std::size_t i = 0; i < variance.size(); ++i) count *= static_cast<std::size_t>(n);
  if (components.size() != count)
    fail(ErrorCode::VarianceMismatch, "field has " + std::to_string(components.size()) +
                                          " components, variance '" + variance + "' needs " +
                                          std::to_string(count));
  const auto& chart = field.chart();
  JetArray jets;
  jets.reserve(count);
  for (const auto& e : components)
    jets.push_back(CompiledExpr(e, chart.coordinates, chart.parameters, chart.mode).jet(point, 1));
  const Tensor gamma = christoffel(field, point);
  return connect(gradient(jets, n, variance), values(jets, n, variance), gamma);
}

}  // namespace confgeo
