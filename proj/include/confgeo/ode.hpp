#pragma once

#include <functional>
#include <string>
#include <vector>

#include "confgeo/error.hpp"
#include "confgeo/tensor.hpp"

namespace confgeo {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  int max_steps = 200000;
};

using OdeRhs = std::function<Vector(double s, const Vector& y)>;
// Returns false when a state has left the region where the right-hand side is defined.
using OdeValid = std::function<bool(const Vector& y)>;

struct OdeResult {
  std::vector<double> s;  // requested output parameters actually reached
  std::vector<Vector> y;
  bool ok = true;
  ErrorCode status = ErrorCode::StepFailure;  // meaningful when !ok
  std::string message;
  int steps = 0;
  int rejected = 0;
};

// Dormand-Prince 5(4) with adaptive steps over a real parameter; the state
// may be complex. Steps are clipped to land exactly on each output point,
// which must be increasing and >= s0. On failure the result holds the
// outputs reached so far plus the last accepted state.
OdeResult integrate_ode(const OdeRhs& f, double s0, const Vector& y0, const std::vector<double>& outputs,
                        const OdeOptions& options = {}, const OdeValid& valid = nullptr);

}  // namespace confgeo
