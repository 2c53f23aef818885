#include "confgeo/fourdim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "confgeo/error.hpp"

namespace confgeo {

const std::vector<std::pair<int, int>>& pair_basis(int n) {
  static const auto table = [] {
    std::array<std::vector<std::pair<int, int>>, kMaxJetVars + 1> t;
    for (int m = 0; m <= kMaxJetVars; ++m)
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) t[m].push_back({a, b});
    return t;
  }();
  return table.at(n);
}

namespace {

// Sign of the permutation idx of 0..n-1, or 0 if an index repeats.
int permutation_sign(std::span<const int> idx) {
  const int n = static_cast<int>(idx.size());
  int sign = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  return sign;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Scalar volume_coefficient(const Matrix& g, int orientation, Mode mode) {
  const Scalar det = g.determinant();
  const Scalar root = mode == Mode::Real ? Scalar(std::sqrt(std::abs(det.real()))) : std::sqrt(det);
  return double(orientation) * root;
}

Tensor hodge_star(const Tensor& form, const Matrix& g, int orientation, Mode mode) {
  const int n = form.dim();
  const int k = form.rank();
  for (char c : form.variance())
    if (c != 'd') fail(ErrorCode::VarianceMismatch, "Hodge star expects a covariant form");
  const Matrix ginv = g.inverse();
  Tensor raised = form;
  for (int s = 0; s < k; ++s) raised = raise_index(raised, s, ginv);
  const Scalar vol = volume_coefficient(g, orientation, mode);
  Tensor out(n, std::string(n - k, 'd'));
  const double inv_fact = 1.0 / factorial(k);
  std::vector<int> full(n);
  for_each_index(n, n, [&](std::span<const int> idx) {
    const int s = permutation_sign(idx);
    if (s == 0) return;
    const Scalar v = raised.at(idx.subspan(0, k)) * (vol * double(s) * inv_fact);
    out.at(idx.subspan(k)) += v;
  });
  return out;
}

Lambda2 lambda2(const Matrix& g, int orientation, Mode mode) {
  if (g.rows() != 4) fail(ErrorCode::DimensionTooLow, "the Lambda+- splitting needs dimension 4");
  Lambda2 l;
  l.g = g;
  l.ginv = g.inverse();
  l.orientation = orientation;
  const auto& pairs = pair_basis(4);
  l.star = Matrix::Zero(6, 6);
  for (int B = 0; B < 6; ++B) {
    Tensor basis(4, "dd");
    basis(pairs[B].first, pairs[B].second) = 1.0;
    basis(pairs[B].second, pairs[B].first) = -1.0;
    const Tensor s = hodge_star(basis, g, orientation, mode);
    for (int A = 0; A < 6; ++A) l.star(A, B) = s(pairs[A].first, pairs[A].second);
  }
  const Matrix sq = l.star * l.star;
  if ((sq - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() > 1e-8)
    fail(ErrorCode::LorentzianUnsupported, "Hodge star does not square to +1 on 2-forms for this signature");
  l.plus = 0.5 * (Matrix::Identity(6, 6) + l.star);
  l.minus = 0.5 * (Matrix::Identity(6, 6) - l.star);
  return l;
}

Matrix curvature_operator(const Tensor& t, const Matrix& ginv) {
  const int n = t.dim();
  const auto& pairs = pair_basis(n);
  const int m = static_cast<int>(pairs.size());
  // op_{ab}^{cd} = g^{ce} g^{df} T_abfe.
  Tensor raised = raise_index(raise_index(t, 2, ginv), 3, ginv);
  Matrix op(m, m);
  for (int A = 0; A < m; ++A)
    for (int B = 0; B < m; ++B)
      op(A, B) = raised(pairs[A].first, pairs[A].second, pairs[B].second, pairs[B].first);
  return op;
}

Tensor curvature_tensor(const Matrix& op, const Matrix& g) {
  const int n = static_cast<int>(g.rows());
  const auto& pairs = pair_basis(n);
  Tensor up(n, "dduu");  // op_ab^cd
  for (std::size_t A = 0; A < pairs.size(); ++A)
    for (std::size_t B = 0; B < pairs.size(); ++B) {
      const auto [a, b] = pairs[A];
      const auto [c, d] = pairs[B];
      const Scalar v = op(A, B);
      up(a, b, c, d) = v;
      up(b, a, c, d) = -v;
      up(a, b, d, c) = -v;
      up(b, a, d, c) = v;
    }
  const Tensor low = lower_index(lower_index(up, 2, g), 3, g);
  Tensor out(n, "dddd");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) out(a, b, c, d) = low(a, b, d, c);
  return out;
}

WeylSplit weyl_pm(const CurvaturePack& pack, const Lambda2& l2) {
  if (pack.n != 4 || !pack.has_conformal) fail(ErrorCode::DimensionTooLow, "W+- needs dimension 4");
  const Matrix r = curvature_operator(pack.riemann_low, pack.ginv);
  WeylSplit s;
  const Matrix rp = l2.plus * r * l2.plus;
  const Matrix rm = l2.minus * r * l2.minus;
  s.trace_plus = rp.trace();
  s.plus_op = rp - (rp.trace() / 3.0) * l2.plus;
  s.minus_op = rm - (rm.trace() / 3.0) * l2.minus;
  s.plus = curvature_tensor(s.plus_op, pack.g);
  s.minus = curvature_tensor(s.minus_op, pack.g);
  const Matrix w = curvature_operator(pack.weyl, pack.ginv);
  const double d = (l2.plus * w * l2.plus - s.plus_op).norm() + (l2.minus * w * l2.minus - s.minus_op).norm();
  s.projector_check = d / (w.norm() + r.norm() + 1e-12);
  return s;
}

Tensor project_pair(const Tensor& t, int slot, const Matrix& projector) {
  const int n = t.dim();
  const auto& pairs = pair_basis(n);
  const int m = static_cast<int>(pairs.size());
  const int r = t.rank();
  if (slot + 1 >= r) fail(ErrorCode::VarianceMismatch, "pair slot out of range");
  Tensor out(n, t.variance());
  // Iterate over the remaining slots.
  std::vector<int> idx(r);
  Vector form(m);
  for_each_index(n, r - 2, [&](std::span<const int> rest) {
    auto fill = [&](int a, int b) {
      int q = 0;
      for (int s = 0; s < r; ++s) {
        if (s == slot) idx[s] = a;
        else if (s == slot + 1) idx[s] = b;
        else idx[s] = rest[q++];
      }
    };
    for (int A = 0; A < m; ++A) {
      fill(pairs[A].first, pairs[A].second);
      form[A] = t.at(idx);
    }
    const Vector p = projector * form;
    for (int A = 0; A < m; ++A) {
      fill(pairs[A].first, pairs[A].second);
      out.at(idx) = p[A];
      fill(pairs[A].second, pairs[A].first);
      out.at(idx) = -p[A];
    }
  });
  return out;
}

CottonSplit cy_pm(const Tensor& cotton, const Lambda2& l2) {
  if (cotton.dim() != 4) fail(ErrorCode::DimensionTooLow, "C+- needs dimension 4");
  return {project_pair(cotton, 0, l2.plus), project_pair(cotton, 0, l2.minus)};
}

DivWeylSplit div_weyl_pm(const CurvaturePack& pack, const Lambda2& l2) {
  if (pack.n != 4 || !pack.has_derivatives) fail(ErrorCode::DimensionTooLow, "delta W+- needs dimension 4 and third-order jets");
  const int n = 4;
  DivWeylSplit out;
  out.nabla_plus = Tensor(n, "ddddd");
  out.nabla_minus = Tensor(n, "ddddd");
  for (int e = 0; e < n; ++e) {
    Tensor slice(n, "dddd");
    const std::size_t m = slice.size();
    std::copy_n(pack.nabla_weyl.data().begin() + e * m, m, slice.data().begin());
    const Matrix op = curvature_operator(slice, pack.ginv);
    const Tensor p = curvature_tensor(l2.plus * op * l2.plus, pack.g);
    const Tensor q = curvature_tensor(l2.minus * op * l2.minus, pack.g);
    std::copy_n(p.data().begin(), m, out.nabla_plus.data().begin() + e * m);
    std::copy_n(q.data().begin(), m, out.nabla_minus.data().begin() + e * m);
  }
  out.plus = weyl_divergence(out.nabla_plus, pack.ginv);
  out.minus = weyl_divergence(out.nabla_minus, pack.ginv);
  return out;
}

ArwCheck check_arw(const CurvaturePack& pack, const WeylSplit& split, const PointFrame& frame,
                   int orientation) {
  check_orthonormal(frame);
  const Tensor r = in_basis(pack.riemann_low, frame.basis);
  const Tensor wp = in_basis(split.plus, frame.basis);
  const Tensor wm = in_basis(split.minus, frame.basis);
  const int base = frame_orientation(frame, pack.g) * orientation;
  ArwCheck out;
  out.scale = r.max_abs();
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    // (X,Y,Z,nu) must be positively oriented; flip nu otherwise.
    const double s = double(base * permutation_sign(perm));
    const int X = perm[0], Y = perm[1], Z = perm[2], N = perm[3];
    const Scalar even = r(X, Y, Z, X) + r(Z, N, Y, N);
    const Scalar odd = s * (r(X, Y, Y, N) + r(Z, N, Z, X));
    out.max_plus = std::max(out.max_plus, std::abs(wp(X, Y, Z, X) - 0.25 * (even + odd)));
    out.max_minus = std::max(out.max_minus, std::abs(wm(X, Y, Z, X) - 0.25 * (even - odd)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

StarRicci star_ricci_3d(const CurvaturePack& pack, int orientation, Mode mode) {
  if (pack.n != 3) fail(ErrorCode::InvalidArgument, "the star-Ricci identity is stated in dimension 3");
  const int n = 3;
  const Matrix op = curvature_operator(pack.riemann_low, pack.ginv);
  const auto& pairs = pair_basis(n);
  StarRicci out;
  out.lhs = Matrix::Zero(n, n);
  for (int b = 0; b < n; ++b) {
    Tensor beta(n, "d");
    beta(b) = 1.0;
    const Tensor s = hodge_star(beta, pack.g, orientation, mode);
    Vector form(3);
    for (int A = 0; A < 3; ++A) form[A] = s(pairs[A].first, pairs[A].second);
    const Vector image = op * form;
    Tensor alpha(n, "dd");
    for (int A = 0; A < 3; ++A) {
      alpha(pairs[A].first, pairs[A].second) = image[A];
      alpha(pairs[A].second, pairs[A].first) = -image[A];
    }
    const Tensor back = hodge_star(alpha, pack.g, orientation, mode);
    for (int a = 0; a < n; ++a) out.lhs(a, b) = back(a);
  }
  Matrix h(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) h(a, b) = pack.h(a, b);
  const Matrix endo = h * pack.ginv;  // (h beta)_a = h_ac g^{cb} beta_b
  out.rhs = -endo + endo.trace() * Matrix::Identity(n, n);
  out.residual = (out.lhs - out.rhs).norm() / (out.lhs.norm() + out.rhs.norm() + 1e-12);
  return out;
}

const char* to_string(PlaneKind k) {
  switch (k) {
    case PlaneKind::Alpha: return "alpha";
    case PlaneKind::Beta: return "beta";
    case PlaneKind::NotIsotropic: return "not_isotropic";
  }
  return "?";
}

Vector bivector_form(const Vector& x, const Vector& y, const Matrix& g) {
  const Vector xl = g * x, yl = g * y;
  const auto& pairs = pair_basis(static_cast<int>(g.rows()));
  Vector form(pairs.size());
  for (std::size_t A = 0; A < pairs.size(); ++A) {
    const auto [a, b] = pairs[A];
    form[A] = xl[a] * yl[b] - xl[b] * yl[a];
  }
  return form;
}

PlaneClass classify_isotropic_plane(const Vector& x, const Vector& y, const Lambda2& l2) {
  // Dependence is judged on the bivector's coordinate components.
  const auto& pairs = pair_basis(4);
  double wedge = 0.0;
  for (const auto& [a, b] : pairs) wedge = std::max(wedge, std::abs(x[a] * y[b] - x[b] * y[a]));
  if (wedge <= 1e-12 * x.norm() * y.norm()) fail(ErrorCode::NotAPlane, "spanning vectors are linearly dependent");
  PlaneClass out;
  const double scale = std::max(x.squaredNorm(), y.squaredNorm()) * std::max(l2.g.cwiseAbs().maxCoeff(), 1e-300);
  out.gram = std::max({std::abs(inner(l2.g, x, x)), std::abs(inner(l2.g, y, y)), std::abs(inner(l2.g, x, y))});
  if (out.gram >= 1e-10 * scale) return out;
  const Vector form = bivector_form(x, y, l2.g);
  const double norm = form.norm();
  if ((l2.minus * form).norm() < 1e-8 * norm) {
    out.kind = PlaneKind::Alpha;
    out.star_eigenvalue = 1;
  } else if ((l2.plus * form).norm() < 1e-8 * norm) {
    out.kind = PlaneKind::Beta;
    out.star_eigenvalue = -1;
  }
  return out;
}

}  // namespace confgeo
