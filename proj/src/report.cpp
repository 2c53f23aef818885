#include "confgeo/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "confgeo/manifest.hpp"

namespace confgeo {

using json = nlohmann::json;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Errored: return "errored";
    case Verdict::Skipped: return "skipped";
  }
  return "?";
}

void Residual::add(double relative, double absolute) {
  if (!std::isfinite(relative)) relative = std::numeric_limits<double>::infinity();
  max = std::max(max, relative);
  sum += relative;
  abs_max = std::max(abs_max, absolute);
  ++count;
  const bool ok = relative < tolerance || absolute < abs_tolerance;
  if (!ok) ++failures;
  auto ratio = [](double v, double t) { return t > 0 ? v / t : (v > 0 ? std::numeric_limits<double>::infinity() : 0.0); };
  double l = std::min(ratio(relative, tolerance), ratio(absolute, abs_tolerance));
  if (ok) l = std::min(l, std::nextafter(1.0, 0.0));
  load = std::max(load, l);
}

Residual& CheckRecord::residual(const std::string& key, double tolerance, double abs_tolerance) {
  for (auto& r : residuals)
    if (r.key == key) return r;
  Residual r;
  r.key = key;
  r.tolerance = tolerance;
  r.abs_tolerance = abs_tolerance;
  residuals.push_back(r);
  return residuals.back();
}

void CheckRecord::require(const std::string& key, bool holds, double value, double bound) {
  requirements.push_back({key, holds, value, bound});
}

void CheckRecord::settle() {
  if (verdict == Verdict::Errored || verdict == Verdict::Skipped) return;
  verdict = Verdict::Pass;
  for (const auto& r : residuals)
    if (!r.pass()) verdict = Verdict::Fail;
  for (const auto& q : requirements)
    if (!q.holds) verdict = Verdict::Fail;
}

int Report::count(Verdict v) const {
  int c = 0;
  for (const auto& r : records) c += r.verdict == v;
  return c;
}

int Report::exit_code() const {
  if (count(Verdict::Errored) > 0) return 2;
  if (count(Verdict::Fail) > 0) return 1;
  return 0;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const std::string& conventions_text() {
  static const std::string text =
      "curvature: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z; R_ijkl = <R(d_i,d_j)d_k,d_l>\n"
      "ricci: Ric(Y,Z) = tr(X -> R(X,Y)Z)\n"
      "normalized ricci: h = Scal/(2n(n-1)) g + Ric0/(n-2)\n"
      "wedge: (h^I)_abcd = h_bc g_ad - h_ac g_bd + g_bc h_ad - g_ac h_bd\n"
      "cotton: C_abc = (nabla_a h)_bc - (nabla_b h)_ac\n"
      "weyl divergence: (dW)_abc = g^de (nabla_e W)_abcd / (n-3)\n"
      "cotton transform: C' = C + dphi(W)\n"
      "lambda2: <a,b> = sum_{i<j} a^ij b_ij, P+- = (1 +- *)/2, W+- = P+- W P+-\n"
      "hypersurface: (X,Y,Z,nu) positively oriented; <nabla_nu W+(A),B> = C^M(A)(*B)\n"
      "isotropic sectional: <R(X,Y)X,Y>\n"
      "quotient modulo the curve direction: Euclidean orthogonal complement in coordinates\n";
  return text;
}

namespace {

// Deterministic serializer: object keys sorted (json's default map) and
// floating-point values printed with %.17g.
void write(std::ostringstream& os, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        os << json(it.key()).dump() << ':';
        write(os, it.value());
      }
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        write(os, j[i]);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isnan(v)) os << "\"nan\"";
      else if (std::isinf(v)) os << (v > 0 ? "\"inf\"" : "\"-inf\"");
      else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
      }
      break;
    }
    default: os << j.dump(); break;
  }
}

json scalar_json(Scalar s) {
  if (s.imag() == 0.0) return s.real();
  return json::array({s.real(), s.imag()});
}

json record_json(const CheckRecord& r, bool wall) {
  json j;
  j["check"] = r.check;
  j["target"] = r.target;
  j["verdict"] = to_string(r.verdict);
  j["message"] = r.message;
  j["seed"] = r.seed;
  j["inputs_digest"] = hex64(r.inputs_digest);
  json samples = json::array();
  for (const auto& p : r.samples) {
    json pt = json::array();
    for (const auto& s : p) pt.push_back(scalar_json(s));
    samples.push_back(pt);
  }
  j["samples"] = samples;
  json res = json::object();
  for (const auto& x : r.residuals)
    res[x.key] = {{"max", x.max},          {"mean", x.mean()},        {"abs_max", x.abs_max},
                  {"count", x.count},      {"failures", x.failures},  {"load", x.load},  {"tolerance", x.tolerance},
                  {"abs_tolerance", x.abs_tolerance}, {"pass", x.pass()}};
  j["residuals"] = res;
  json req = json::object();
  for (const auto& q : r.requirements) req[q.key] = {{"holds", q.holds}, {"value", q.value}, {"bound", q.bound}};
  j["requirements"] = req;
  json vals = json::object();
  for (const auto& [k, v] : r.values) vals[k] = v;
  j["values"] = vals;
  if (wall) j["wall_time_ms"] = r.wall_ms;
  return j;
}

std::string canonical(const Report& rep, bool wall, bool with_digest) {
  json j;
  j["toolkit"] = "confgeo";
  j["version"] = rep.version;
  j["conventions_digest"] = hex64(rep.conventions_digest);
  j["manifest_digest"] = hex64(rep.manifest_digest);
  j["seed"] = rep.seed;
  json checks = json::array();
  for (const auto& r : rep.records) checks.push_back(record_json(r, wall));
  j["checks"] = checks;
  j["summary"] = {{"pass", rep.count(Verdict::Pass)},
                  {"fail", rep.count(Verdict::Fail)},
                  {"errored", rep.count(Verdict::Errored)},
                  {"skipped", rep.count(Verdict::Skipped)},
                  {"total", static_cast<int>(rep.records.size())},
                  {"exit_code", rep.exit_code()}};
  if (with_digest) j["digest"] = rep.digest();
  std::ostringstream os;
  write(os, j);
  return os.str();
}

}  // namespace

std::string Report::json(bool include_wall_time) const { return canonical(*this, include_wall_time, true); }

std::string Report::digest() const { return hex64(fnv1a64(canonical(*this, false, false))); }

std::string Report::text() const {
  std::ostringstream os;
  char buf[512];
  for (const auto& r : records) {
    // Show the residual closest to failing.
    const Residual* worst = nullptr;
    for (const auto& x : r.residuals)
      if (!worst || x.load > worst->load) worst = &x;
    const bool quiet = r.verdict == Verdict::Pass || r.verdict == Verdict::Skipped;
    const std::string message = quiet && worst ? "" : r.message;
    std::string verdict = to_string(r.verdict);
    for (auto& c : verdict) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (!worst || r.verdict == Verdict::Skipped || r.verdict == Verdict::Errored)
      std::snprintf(buf, sizeof buf, "%-8s %-18s %-28s %s\n", verdict.c_str(), r.check.c_str(), r.target.c_str(),
                    r.message.c_str());
    else
      std::snprintf(buf, sizeof buf, "%-8s %-18s %-28s %s rel %.2e abs %.2e (tol %.0e/%.0e)%s%s\n", verdict.c_str(),
                    r.check.c_str(), r.target.c_str(), worst->key.c_str(), worst->max, worst->abs_max,
                    worst->tolerance, worst->abs_tolerance, message.empty() ? "" : "  ", message.c_str());
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%d checks: %d pass, %d fail, %d errored, %d skipped\ndigest %s\n",
                static_cast<int>(records.size()), count(Verdict::Pass), count(Verdict::Fail),
                count(Verdict::Errored), count(Verdict::Skipped), digest().c_str());
  os << buf;
  return os.str();
}

}  // namespace confgeo
