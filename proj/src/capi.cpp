#include "confgeo.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "confgeo/manifest.hpp"
#include "confgeo/suite.hpp"

struct cg_manifest {
  confgeo::Manifest value;
};

struct cg_report {
  confgeo::Report value;
};

namespace {

thread_local std::string last_error;

int record(int code, const std::string& message) {
  last_error = message;
  return code;
}

template <class F>
int guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return CG_OK;
  } catch (const confgeo::ManifestError& e) {
    std::string msg;
    for (const auto& issue : e.issues()) {
      if (!msg.empty()) msg += '\n';
      msg += std::string(confgeo::to_string(issue.code)) + " at '" + issue.where + "': " + issue.message;
    }
    return record(static_cast<int>(e.code()), msg);
  } catch (const confgeo::Error& e) {
    return record(static_cast<int>(e.code()), e.what());
  } catch (const std::exception& e) {
    return record(CG_E_INTERNAL, e.what());
  } catch (...) {
    return record(CG_E_INTERNAL, "unknown failure");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* cg_version(void) {
  static const std::string v = confgeo::version_string();
  return v.c_str();
}

const char* cg_error_name(int status) {
  if (status == CG_OK) return "Ok";
  if (status == CG_E_INTERNAL) return "Internal";
  if (status < CG_E_SYNTAX || status > CG_E_IO) return "Unknown";
  return confgeo::to_string(static_cast<confgeo::ErrorCode>(status));
}

const char* cg_last_error(void) { return last_error.c_str(); }

int cg_manifest_load(const char* path, cg_manifest** out) {
  if (!path || !out) return record(CG_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new cg_manifest{confgeo::load_manifest(path)}; });
}

int cg_manifest_load_string(const char* text, cg_manifest** out) {
  if (!text || !out) return record(CG_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new cg_manifest{confgeo::parse_manifest(text)}; });
}

void cg_manifest_free(cg_manifest* manifest) { delete manifest; }

void cg_run_options_init(cg_run_options* options) {
  if (!options) return;
  *options = cg_run_options{nullptr, 0, 0, -1, 0, 1};
}

int cg_run_suite(const cg_manifest* manifest, const cg_run_options* options, cg_report** out) {
  if (!manifest || !out) return record(CG_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    confgeo::SuiteOptions so;
    if (options) {
      if (options->only) {
        std::stringstream ss(options->only);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) so.only.push_back(item);
      }
      if (options->has_seed) so.seed = options->seed;
      if (options->fd >= 0) so.fd = options->fd != 0;
      if (options->order > 0) so.order = options->order;
      so.jobs = options->jobs > 0 ? options->jobs : 1;
    }
    *out = new cg_report{confgeo::run_suite(manifest->value, so)};
  });
}

int cg_report_exit_code(const cg_report* report) { return report ? report->value.exit_code() : 2; }

char* cg_report_json(const cg_report* report) { return report ? duplicate(report->value.json()) : nullptr; }

char* cg_report_text(const cg_report* report) { return report ? duplicate(report->value.text()) : nullptr; }

char* cg_report_digest(const cg_report* report) { return report ? duplicate(report->value.digest()) : nullptr; }

void cg_report_free(cg_report* report) { delete report; }

int cg_trace_geodesic(const cg_manifest* manifest, const char* run, const char* out_path) {
  if (!manifest || !run || !out_path) return record(CG_E_INVALID_ARGUMENT, "null argument");
  int status = CG_OK;
  const int rc = guarded([&] {
    std::ofstream out(out_path);
    if (!out) confgeo::fail(confgeo::ErrorCode::IoError, std::string("cannot write '") + out_path + "'");
    if (!confgeo::trace_geodesic(manifest->value, run, out)) {
      status = CG_E_STEP_FAILURE;
      last_error = "integration stopped early; see the status line in the output";
    }
  });
  return rc != CG_OK ? rc : status;
}

int cg_curvature_json(const cg_manifest* manifest, const char* chart, const double* re, const double* im, size_t n,
                      char** out) {
  if (!manifest || !chart || (!re && n) || !out) return record(CG_E_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    confgeo::Point p(n);
    for (size_t i = 0; i < n; ++i) p[i] = confgeo::Scalar(re[i], im ? im[i] : 0.0);
    *out = duplicate(confgeo::curvature_json(manifest->value, chart, p));
  });
}

void cg_string_free(char* s) { std::free(s); }

}  // extern "C"
