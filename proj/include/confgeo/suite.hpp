#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "confgeo/manifest.hpp"
#include "confgeo/report.hpp"

namespace confgeo {

struct SuiteOptions {
  std::vector<std::string> only;  // check names; empty runs every listed check
  std::optional<std::uint64_t> seed;
  std::optional<bool> fd;
  std::optional<int> order;
  int jobs = 1;
};

// Runs the manifest's checks. A structural error inside one check marks
// that record errored; the rest of the suite still runs. Throws
// InvalidArgument for unknown names in `only` or a bad jet order.
Report run_suite(const Manifest& manifest, const SuiteOptions& options = {});

// Writes one JSON record per line: s, x, v, g(v,v), then a terminal status
// record. Returns true when the run reached its end.
bool trace_geodesic(const Manifest& manifest, const std::string& run, std::ostream& out);

// Curvature quantities at a point as a JSON object.
std::string curvature_json(const Manifest& manifest, const std::string& chart, const Point& point);

std::string version_string();

}  // namespace confgeo
