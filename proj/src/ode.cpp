#include "confgeo/ode.hpp"

#include <algorithm>
#include <cmath>

namespace confgeo {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdeResult integrate_ode(const OdeRhs& f, double s0, const Vector& y0, const std::vector<double>& outputs,
                        const OdeOptions& opt, const OdeValid& valid) {
  OdeResult res;
  double s = s0;
  Vector y = y0;
  double h = opt.initial_step;
  auto stop = [&](ErrorCode code, std::string msg) {
    res.ok = false;
    res.status = code;
    res.message = std::move(msg);
    res.s.push_back(s);
    res.y.push_back(y);
    return res;
  };
  try {
    Vector k1 = f(s, y);
    for (double target : outputs) {
      if (target < s) return stop(ErrorCode::InvalidArgument, "output parameters must be increasing");
      while (s < target) {
        if (res.steps + res.rejected >= opt.max_steps) return stop(ErrorCode::StepFailure, "step budget exhausted");
        bool last = false;
        if (s + h >= target) {
          h = target - s;
          last = true;
        }
        const Vector k2 = f(s + c2 * h, y + h * (a21 * k1));
        const Vector k3 = f(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const Vector k4 = f(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vector k5 = f(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vector k6 = f(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vector ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector k7 = f(s + h, ynew);
        const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double norm = 0.0;
        for (int i = 0; i < y.size(); ++i) {
          const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
          norm += std::norm(err[i]) / (sc * sc);
        }
        norm = std::sqrt(norm / std::max<Eigen::Index>(y.size(), 1));
        if (!std::isfinite(norm)) norm = 1e10;
        const double factor = std::clamp(0.9 * std::pow(std::max(norm, 1e-10), -0.2), 0.2, 5.0);
        if (norm <= 1.0) {
          if (valid && !valid(ynew)) return stop(ErrorCode::LeftDomain, "trajectory left the chart domain");
          s = last ? target : s + h;
          y = ynew;
          k1 = k7;
          ++res.steps;
          if (!last) h *= factor;
          else h = std::max(h, opt.initial_step);
        } else {
          ++res.rejected;
          h *= factor;
          if (h < opt.min_step) return stop(ErrorCode::StepFailure, "step size underflow");
        }
      }
      res.s.push_back(s);
      res.y.push_back(y);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::LeftDomain) return stop(ErrorCode::LeftDomain, e.what());
    return stop(ErrorCode::StepFailure, e.what());
  }
  return res;
}

}  // namespace confgeo
