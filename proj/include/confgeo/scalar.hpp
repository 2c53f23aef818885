#pragma once

#include <complex>
#include <vector>

namespace confgeo {

// All numerics run over complex doubles; real-mode charts keep the imaginary
// parts at zero and add real-only domain checks.
using Scalar = std::complex<double>;
using Point = std::vector<Scalar>;

enum class Mode { Real, Complex };

const char* to_string(Mode m);

}  // namespace confgeo
