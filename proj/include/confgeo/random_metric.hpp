#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confgeo/chart.hpp"

namespace confgeo {

// mt19937_64 with distributions written out here so that sequences do not
// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// FNV-1a over the seed and labels, finished with a splitmix64 round.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view a, std::string_view b = {});

std::vector<std::string> default_coordinates(int n);

struct RandomMetricOptions {
  int dim = 4;
  Mode mode = Mode::Real;
  std::pair<int, int> signature{4, 0};  // ignored in complex mode
  double amplitude = 0.15;
  double box = 0.5;  // sample points come from [-box, box]^n
  int points = 5;
  // Even under reflection of the last coordinate, so {last = 0} is totally geodesic.
  bool reflection_symmetric = false;
};

// Constant diagonal metric of the requested signature plus small analytic
// perturbations (polynomial, trigonometric, exponential terms). Retries
// until every sample point is nondegenerate with the declared signature.
MetricChart random_metric(Rng& rng, const RandomMetricOptions& options, std::string name);

// Smooth conformal potential over the given coordinates.
Expr random_potential(Rng& rng, const std::vector<std::string>& coordinates, double amplitude = 0.2);

// Uniform point in [-box, box]^n; complex mode adds small imaginary parts.
Point random_point(Rng& rng, int n, double box, Mode mode);

}  // namespace confgeo
