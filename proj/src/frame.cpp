#include "confgeo/frame.hpp"

#include <cmath>

#include "confgeo/chart.hpp"
#include "confgeo/error.hpp"

namespace confgeo {

Scalar inner(const Matrix& g, const Vector& u, const Vector& v) {
  return u.transpose() * g * v;
}

PointFrame coordinate_frame(const Matrix& g, const Point& point) {
  PointFrame f;
  f.point = point;
  f.basis = Matrix::Identity(g.rows(), g.cols());
  f.gram = g;
  f.eps.assign(g.rows(), 0);
  return f;
}

namespace {

constexpr double kNullTol = 1e-10;

struct Builder {
  const Matrix& g;
  Mode mode;
  double scale;  // typical size of |g|
  std::vector<Vector> frame;
  std::vector<Scalar> norms;  // g(e_i, e_i)

  Vector project(const Vector& v) const {
    Vector w = v;
    for (std::size_t j = 0; j < frame.size(); ++j) w -= (inner(g, frame[j], v) / norms[j]) * frame[j];
    return w;
  }

  // |g(v,v)| relative to the coordinate size of the vector it came from.
  double quality(const Vector& v, const Vector& origin) const {
    const double e = origin.squaredNorm();
    if (e == 0.0) return 0.0;
    return std::abs(inner(g, v, v)) / (e * scale);
  }

  void push(const Vector& v) {
    Scalar q = inner(g, v, v);
    Vector e;
    Scalar norm;
    if (mode == Mode::Real) {
      const double s = std::sqrt(std::abs(q.real()));
      e = v / s;
      norm = q.real() > 0 ? 1.0 : -1.0;
    } else {
      e = v / std::sqrt(q);
      norm = 1.0;
    }
    frame.push_back(e);
    norms.push_back(norm);
  }
};

}  // namespace

PointFrame orthonormal_frame(const Matrix& g, Mode mode, const Point& point,
                             const std::vector<Vector>& seeds) {
  const int n = static_cast<int>(g.rows());
  check_nondegenerate(g);
  Builder b{g, mode, std::max(g.cwiseAbs().maxCoeff(), 1e-300), {}, {}};

  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const Vector& seed = seeds[s];
    if (seed.size() != n) fail(ErrorCode::InvalidArgument, "seed vector has the wrong dimension");
    if (b.quality(seed, seed) < kNullTol)
      fail(ErrorCode::NullSeed, "seed vector " + std::to_string(s) + " is isotropic");
    Vector w = b.project(seed);
    if (w.norm() < 1e-10 * seed.norm())
      fail(ErrorCode::DegenerateFlag, "seed vectors are linearly dependent");
    if (b.quality(w, seed) < kNullTol)
      fail(ErrorCode::DegenerateFlag, "seed flag is degenerate at seed " + std::to_string(s));
    b.push(w);
  }

  while (static_cast<int>(b.frame.size()) < n) {
    // Coordinate vectors first; pairwise sums only when every remaining
    // coordinate direction is isotropic.
    double best = 0.0;
    Vector pick;
    auto consider = [&](const Vector& c) {
      Vector w = b.project(c);
      const double q = b.quality(w, c);
      if (q > best * (1.0 + 1e-12) + 1e-300) {
        best = q;
        pick = w;
      }
    };
    for (int i = 0; i < n; ++i) consider(Vector::Unit(n, i));
    if (best < kNullTol) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          consider(Vector::Unit(n, i) + Vector::Unit(n, j));
          consider(Vector::Unit(n, i) - Vector::Unit(n, j));
        }
    }
    if (best < kNullTol) fail(ErrorCode::DegenerateMetric, "no non-isotropic direction left for the frame");
    b.push(pick);
  }

  PointFrame f;
  f.point = point;
  f.basis.resize(n, n);
  for (int i = 0; i < n; ++i) f.basis.col(i) = b.frame[i];
  f.gram = f.basis.transpose() * g * f.basis;
  f.eps.resize(n);
  for (int i = 0; i < n; ++i) f.eps[i] = b.norms[i].real() > 0 ? 1 : -1;
  f.orthonormal = true;
  return f;
}

void check_orthonormal(const PointFrame& frame, double tol) {
  const int n = frame.dim();
  if (static_cast<int>(frame.eps.size()) != n) fail(ErrorCode::FrameNotOrthonormal, "frame signs missing");
  double cols = 1.0;
  for (int i = 0; i < n; ++i) cols *= frame.basis.col(i).norm();
  if (std::abs(frame.basis.determinant()) <= 1e-10 * cols)
    fail(ErrorCode::FrameNotOrthonormal, "frame vectors are linearly dependent");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Scalar target = i == j ? Scalar(frame.eps[i]) : Scalar(0.0);
      if (std::abs(frame.gram(i, j) - target) >= tol)
        fail(ErrorCode::FrameNotOrthonormal, "g(e_" + std::to_string(i) + ", e_" + std::to_string(j) +
                                                 ") is off by " +
                                                 std::to_string(std::abs(frame.gram(i, j) - target)));
    }
}

int frame_orientation(const PointFrame& frame, const Matrix& g) {
  const Scalar det = frame.basis.determinant();
  Scalar ref = 1.0;
  if (frame.orthonormal) {
    const Scalar dg = g.determinant();
    ref = 1.0 / std::sqrt(dg);
    if (std::abs(dg.imag()) == 0.0 && dg.real() < 0) ref = 1.0;
  }
  return (det / ref).real() >= 0 ? 1 : -1;
}

}  // namespace confgeo
