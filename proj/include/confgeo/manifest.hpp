#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confgeo/chart.hpp"
#include "confgeo/error.hpp"
#include "confgeo/hypersurface.hpp"

namespace confgeo {

inline constexpr int kManifestSchemaVersion = 1;

struct ManifestIssue {
  ErrorCode code;     // ParseError, SchemaError or UnresolvedReference
  std::string where;  // JSON pointer, "" for the document
  std::string message;
};

// Every problem found while loading, not just the first. code() is the
// code of the first issue.
class ManifestError : public Error {
 public:
  explicit ManifestError(std::vector<ManifestIssue> issues);
  const std::vector<ManifestIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ManifestIssue> issues_;
};

struct Settings {
  int jet_order = 3;
  std::optional<std::uint64_t> seed;
  double fd_step = 5e-3;
  bool fd = false;              // add jet-versus-difference cross-checks
  double fd_tolerance = 1e-6;
  std::optional<int> orientation;  // overrides every chart's orientation
  double self_dual_tol = 1e-6;
};

struct GeodesicRun {
  std::string name;
  std::string chart;
  Point x0;
  Point v0;
  double s_end = 1.0;
  int samples = 20;
};

// Explicit isotropic plane supplied for a scan, with an optional expected
// isotropic sectional value.
struct PlaneSpec {
  Point x, y;
  std::optional<Scalar> expect_value;
};

struct CheckSpec {
  std::string name;
  std::vector<std::string> targets;  // empty means every applicable target
  std::optional<double> tolerance;
  std::optional<double> abs_tolerance;
  std::optional<std::string> phi;    // conformal potential; random when absent
  std::optional<int> samples;
  std::optional<double> s_end;
  std::optional<std::string> expect;  // isotropic_scan: "flat" or "nonflat"
  std::vector<PlaneSpec> planes;
  std::optional<std::string> intrinsic_chart;  // thm1: independent chart for C^M
};

struct Manifest {
  int schema_version = kManifestSchemaVersion;
  Settings settings;
  std::vector<MetricChart> charts;
  std::vector<HypersurfaceSpec> hypersurfaces;
  std::vector<GeodesicRun> geodesics;
  std::vector<CheckSpec> checks;
  std::uint64_t digest = 0;  // of the manifest text

  const MetricChart* find_chart(std::string_view name) const;
  const HypersurfaceSpec* find_hypersurface(std::string_view name) const;
  const GeodesicRun* find_geodesic(std::string_view name) const;
};

// The check names run_suite understands, in report order.
const std::vector<std::string>& check_names();

// Throws ManifestError (ParseError, SchemaError, UnresolvedReference) or IoError.
Manifest load_manifest(const std::string& path);
Manifest parse_manifest(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 14695981039346656037ull);

}  // namespace confgeo
