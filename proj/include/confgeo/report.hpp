#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "confgeo/scalar.hpp"

namespace confgeo {

enum class Verdict { Pass, Fail, Errored, Skipped };
const char* to_string(Verdict v);

// Statistics of one residual family over the samples of a check. A sample
// passes when relative < tolerance or absolute < abs_tolerance.
struct Residual {
  std::string key;
  double tolerance = 0.0;
  double abs_tolerance = 0.0;
  double max = 0.0;  // relative
  double sum = 0.0;
  double abs_max = 0.0;
  int count = 0;
  int failures = 0;
  // Largest per-sample min(relative/tolerance, absolute/abs_tolerance); >= 1 fails.
  double load = 0.0;

  void add(double relative, double absolute);
  double mean() const { return count ? sum / count : 0.0; }
  bool pass() const { return failures == 0; }
};

// A qualitative condition (e.g. "both sides nonzero") with its evidence.
struct Requirement {
  std::string key;
  bool holds = true;
  double value = 0.0;
  double bound = 0.0;
};

struct CheckRecord {
  std::string check;
  std::string target;
  Verdict verdict = Verdict::Pass;
  std::string message;
  std::uint64_t seed = 0;
  std::uint64_t inputs_digest = 0;
  std::vector<Point> samples;
  std::deque<Residual> residuals;  // deque: residual() hands out stable references
  std::vector<Requirement> requirements;
  std::map<std::string, double> values;  // recorded quantities, not judged
  double wall_ms = 0.0;

  Residual& residual(const std::string& key, double tolerance, double abs_tolerance);
  void require(const std::string& key, bool holds, double value, double bound);
  // Pass unless a residual or requirement fails; errored/skipped are kept.
  void settle();
};

struct Report {
  std::string version;
  std::uint64_t conventions_digest = 0;
  std::uint64_t manifest_digest = 0;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> records;

  int count(Verdict v) const;
  // 0 all pass (skipped allowed), 1 a failure, 2 an error.
  int exit_code() const;
  // Canonical JSON: sorted keys, %.17g floats; includes the digest.
  std::string json(bool include_wall_time = true) const;
  // FNV-1a 64 of the canonical JSON without wall times, as 16 hex digits.
  std::string digest() const;
  std::string text() const;
};

// Text that pins the conventions every result depends on; its digest is
// stored in each report.
const std::string& conventions_text();

std::string hex64(std::uint64_t v);

}  // namespace confgeo
