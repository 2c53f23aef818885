#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "confgeo.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitManifest = 3;

bool manifest_status(int status) { return status == CG_E_PARSE || status == CG_E_SCHEMA || status == CG_E_UNRESOLVED_REFERENCE; }

int report_failure(int status) {
  std::cerr << "error: " << cg_last_error() << '\n';
  return manifest_status(status) ? kExitManifest : kExitUsage;
}

struct Loaded {
  cg_manifest* manifest = nullptr;
  ~Loaded() { cg_manifest_free(manifest); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  cg_string_free(s);
  return out;
}

// Parses "re" or "re:im".
bool parse_coordinate(const std::string& text, double& re, double& im) {
  const auto colon = text.find(':');
  try {
    std::size_t used = 0;
    re = std::stod(text.substr(0, colon), &used);
    if (used != (colon == std::string::npos ? text.size() : colon)) return false;
    im = 0.0;
    if (colon != std::string::npos) {
      const std::string tail = text.substr(colon + 1);
      im = std::stod(tail, &used);
      if (used != tail.size()) return false;
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal geometry verification toolkit"};
  app.set_version_flag("--version", std::string(cg_version()));
  app.require_subcommand(1);

  std::string manifest_path;

  auto* check = app.add_subcommand("check", "Run the checks of a manifest and print a report");
  std::vector<std::string> only;
  std::string report_path;
  std::uint64_t seed = 0;
  bool fd = false;
  int order = 0;
  int jobs = 1;
  check->add_option("manifest", manifest_path, "Manifest file")->required();
  check->add_option("--only", only, "Run only these checks")->delimiter(',');
  check->add_option("--report", report_path, "Write the JSON report to this file");
  auto* seed_opt = check->add_option("--seed", seed, "Override the manifest seed");
  check->add_flag("--fd", fd, "Cross-check jets against finite differences");
  check->add_option("--order", order, "Jet order")->check(CLI::Range(2, 4));
  check->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* geodesic = app.add_subcommand("geodesic", "Integrate a geodesic run and write its trajectory");
  std::string run_name, out_path;
  geodesic->add_option("manifest", manifest_path, "Manifest file")->required();
  geodesic->add_option("--run", run_name, "Geodesic run name")->required();
  geodesic->add_option("--out", out_path, "Output file (JSON lines)")->required();

  auto* curv = app.add_subcommand("curvature", "Print curvature quantities of a chart at a point");
  std::string chart_name;
  std::vector<std::string> at;
  curv->add_option("manifest", manifest_path, "Manifest file")->required();
  curv->add_option("--chart", chart_name, "Chart name")->required();
  curv->add_option("--at", at, "Coordinates, each re or re:im")->delimiter(',')->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  Loaded loaded;
  if (const int st = cg_manifest_load(manifest_path.c_str(), &loaded.manifest); st != CG_OK) return report_failure(st);

  if (*check) {
    std::string joined;
    for (const auto& name : only) joined += (joined.empty() ? "" : ",") + name;
    cg_run_options opts;
    cg_run_options_init(&opts);
    opts.only = only.empty() ? nullptr : joined.c_str();
    opts.has_seed = seed_opt->count() > 0;
    opts.seed = seed;
    opts.fd = fd ? 1 : -1;
    opts.order = order;
    opts.jobs = jobs;
    cg_report* report = nullptr;
    if (const int st = cg_run_suite(loaded.manifest, &opts, &report); st != CG_OK) return report_failure(st);
    std::cout << take(cg_report_text(report));
    if (!report_path.empty()) {
      std::ofstream out(report_path);
      out << take(cg_report_json(report)) << '\n';
      if (!out) {
        std::cerr << "error: cannot write " << report_path << '\n';
        cg_report_free(report);
        return kExitUsage;
      }
    }
    const int rc = cg_report_exit_code(report);
    cg_report_free(report);
    return rc;
  }

  if (*geodesic) {
    const int st = cg_trace_geodesic(loaded.manifest, run_name.c_str(), out_path.c_str());
    if (st == CG_OK) return 0;
    if (st == CG_E_STEP_FAILURE) {
      std::cerr << "warning: " << cg_last_error() << '\n';
      return 1;
    }
    return report_failure(st);
  }

  std::vector<double> re(at.size()), im(at.size());
  bool complex_point = false;
  for (std::size_t i = 0; i < at.size(); ++i) {
    if (!parse_coordinate(at[i], re[i], im[i])) {
      std::cerr << "error: bad coordinate '" << at[i] << "'\n";
      return kExitUsage;
    }
    complex_point = complex_point || im[i] != 0.0;
  }
  char* text = nullptr;
  const int st = cg_curvature_json(loaded.manifest, chart_name.c_str(), re.data(), complex_point ? im.data() : nullptr,
                                   re.size(), &text);
  if (st != CG_OK) return report_failure(st);
  std::cout << take(text) << '\n';
  return 0;
}
