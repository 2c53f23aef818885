#include "confgeo/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "confgeo/random_metric.hpp"

namespace confgeo {

using json = nlohmann::json;

namespace {

std::string join_messages(const std::vector<ManifestIssue>& issues) {
  std::string s;
  for (const auto& i : issues) {
    if (!s.empty()) s += "\n";
    s += std::string(to_string(i.code)) + " at " + (i.where.empty() ? "/" : i.where) + ": " + i.message;
  }
  return s;
}

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string at(const std::string& base, const std::string& key) { return base + "/" + escape_pointer(key); }
std::string at(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

class Loader {
 public:
  std::vector<ManifestIssue> issues;

  void issue(ErrorCode code, const std::string& where, const std::string& message) {
    issues.push_back({code, where, message});
  }
  void schema(const std::string& where, const std::string& message) { issue(ErrorCode::SchemaError, where, message); }

  // Reports keys outside `allowed` and missing `required` keys. False when `j` is not an object.
  bool object(const json& j, const std::string& where, std::initializer_list<const char*> allowed,
              std::initializer_list<const char*> required = {}) {
    if (!j.is_object()) {
      schema(where, "expected an object");
      return false;
    }
    for (const auto& [k, v] : j.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
        schema(at(where, k), "unknown key '" + k + "'");
    }
    for (const char* r : required)
      if (!j.contains(r)) schema(where, std::string("missing required key '") + r + "'");
    return true;
  }

  std::optional<std::string> string(const json& j, const std::string& where) {
    if (!j.is_string()) {
      schema(where, "expected a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  std::optional<double> number(const json& j, const std::string& where, bool positive = false) {
    if (!j.is_number()) {
      schema(where, "expected a number");
      return std::nullopt;
    }
    const double v = j.get<double>();
    if (!std::isfinite(v) || (positive && v <= 0.0)) {
      schema(where, positive ? "expected a positive number" : "expected a finite number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<long long> integer(const json& j, const std::string& where, long long lo, long long hi) {
    if (!j.is_number_integer()) {
      schema(where, "expected an integer");
      return std::nullopt;
    }
    const long long v = j.get<long long>();
    if (v < lo || v > hi) {
      schema(where, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return std::nullopt;
    }
    return v;
  }

  std::optional<bool> boolean(const json& j, const std::string& where) {
    if (!j.is_boolean()) {
      schema(where, "expected a boolean");
      return std::nullopt;
    }
    return j.get<bool>();
  }

  std::optional<Expr> expression(const json& j, const std::string& where) {
    std::string src;
    if (j.is_number()) {
      std::ostringstream os;
      os.precision(17);
      os << j.get<double>();
      src = os.str();
    } else if (j.is_string()) {
      src = j.get<std::string>();
    } else {
      schema(where, "expected an expression string or a number");
      return std::nullopt;
    }
    try {
      return Expr::parse(src);
    } catch (const SyntaxError& e) {
      issue(ErrorCode::ParseError, where,
            "line " + std::to_string(e.line()) + ", column " + std::to_string(e.column()) + ": " + e.what());
    }
    return std::nullopt;
  }

  // A scalar given as a number or as a constant expression.
  std::optional<Scalar> scalar(const json& j, const std::string& where, Mode mode) {
    if (j.is_number()) {
      if (auto v = number(j, where)) return Scalar(*v);
      return std::nullopt;
    }
    if (!j.is_string()) {
      schema(where, "expected a number or a constant expression");
      return std::nullopt;
    }
    try {
      return evaluate_constant(j.get<std::string>(), mode);
    } catch (const SyntaxError& e) {
      issue(ErrorCode::ParseError, where, "column " + std::to_string(e.column()) + ": " + e.what());
    } catch (const Error& e) {
      schema(where, e.what());
    }
    return std::nullopt;
  }

  std::optional<Point> point(const json& j, const std::string& where, std::size_t n, Mode mode) {
    if (!j.is_array() || j.size() != n) {
      schema(where, "expected an array of " + std::to_string(n) + " values");
      return std::nullopt;
    }
    Point p;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      auto s = scalar(j[i], at(where, i), mode);
      if (s) p.push_back(*s);
      else ok = false;
    }
    if (!ok) return std::nullopt;
    return p;
  }

  std::vector<Interval> domain(const json& j, const std::string& where, std::size_t n) {
    std::vector<Interval> d;
    if (!j.is_array() || j.size() != n) {
      schema(where, "expected " + std::to_string(n) + " intervals");
      return d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::string w = at(where, i);
      if (!j[i].is_array() || j[i].size() != 2 || !j[i][0].is_number() || !j[i][1].is_number()) {
        schema(w, "expected [lo, hi]");
        continue;
      }
      const double lo = j[i][0].get<double>(), hi = j[i][1].get<double>();
      if (!(lo < hi)) schema(w, "interval must satisfy lo < hi");
      d.push_back({lo, hi});
    }
    if (d.size() != n) d.clear();
    return d;
  }

  // Expression must compile against the given names.
  void resolve(const Expr& e, const std::vector<std::string>& coords, const Parameters& params, Mode mode,
               const std::string& where) {
    try {
      CompiledExpr(e, coords, params, mode);
    } catch (const Error& err) {
      schema(where, err.what());
    }
  }

  std::vector<Point> points(const json& j, const std::string& where, std::size_t n, Mode mode,
                            const std::vector<Interval>& dom, const std::vector<std::string>& coords) {
    std::vector<Point> out;
    if (!j.is_array()) {
      schema(where, "expected an array of points");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto p = point(j[i], at(where, i), n, mode);
      if (!p) continue;
      for (std::size_t k = 0; k < dom.size() && k < n; ++k) {
        const double v = (*p)[k].real();
        if (v < dom[k].lo || v > dom[k].hi)
          schema(at(at(where, i), k), "coordinate '" + coords[k] + "' lies outside the domain");
      }
      out.push_back(*p);
    }
    return out;
  }

  std::optional<MetricChart> chart(const json& j, const std::string& where) {
    if (!object(j, where,
                {"name", "coordinates", "mode", "signature", "metric", "parameters", "domain", "orientation",
                 "sample_points"},
                {"name", "coordinates", "metric"}))
      return std::nullopt;
    const std::size_t before = issues.size();
    std::string name;
    if (j.contains("name")) name = string(j["name"], at(where, "name")).value_or("");
    std::vector<std::string> coords;
    if (j.contains("coordinates")) {
      const auto& c = j["coordinates"];
      if (!c.is_array() || c.size() < 2 || c.size() > static_cast<std::size_t>(kMaxJetVars)) {
        schema(at(where, "coordinates"), "expected 2 to 6 coordinate names");
      } else {
        for (std::size_t i = 0; i < c.size(); ++i) {
          auto s = string(c[i], at(at(where, "coordinates"), i));
          if (s && !is_identifier(*s)) schema(at(at(where, "coordinates"), i), "'" + *s + "' is not an identifier");
          if (s) coords.push_back(*s);
        }
        if (std::set<std::string>(coords.begin(), coords.end()).size() != coords.size())
          schema(at(where, "coordinates"), "coordinate names must be distinct");
      }
    }
    Mode mode = Mode::Real;
    if (j.contains("mode")) {
      auto m = string(j["mode"], at(where, "mode"));
      if (m == "complex") mode = Mode::Complex;
      else if (m && *m != "real") schema(at(where, "mode"), "expected \"real\" or \"complex\"");
    }
    if (issues.size() != before || coords.empty()) return std::nullopt;
    const std::size_t n = coords.size();
    MetricChart chart = make_chart(name, coords, mode);

    if (j.contains("parameters")) {
      const auto& p = j["parameters"];
      if (!p.is_object()) schema(at(where, "parameters"), "expected an object");
      else
        for (const auto& [k, v] : p.items()) {
          const std::string w = at(at(where, "parameters"), k);
          if (!is_identifier(k)) schema(w, "'" + k + "' is not an identifier");
          else if (std::find(coords.begin(), coords.end(), k) != coords.end())
            schema(w, "parameter '" + k + "' shadows a coordinate");
          else if (auto s = scalar(v, w, mode)) chart.parameters[k] = *s;
        }
    }
    if (j.contains("signature")) {
      const auto& s = j["signature"];
      const std::string w = at(where, "signature");
      if (mode == Mode::Complex) schema(w, "signature applies to real charts only");
      else if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
        schema(w, "expected [p, q]");
      else {
        const int p = s[0].get<int>(), q = s[1].get<int>();
        if (p < 0 || q < 0 || static_cast<std::size_t>(p + q) != n) schema(w, "p + q must equal the dimension");
        else chart.signature = std::make_pair(p, q);
      }
    }
    if (j.contains("orientation")) {
      auto o = integer(j["orientation"], at(where, "orientation"), -1, 1);
      if (o && *o == 0) schema(at(where, "orientation"), "orientation must be +1 or -1");
      else if (o) chart.orientation = static_cast<int>(*o);
    }
    if (j.contains("domain")) chart.domain = domain(j["domain"], at(where, "domain"), n);
    if (j.contains("metric")) {
      const auto& m = j["metric"];
      const std::string w = at(where, "metric");
      if (!m.is_array() || m.size() != n) {
        schema(w, "expected an " + std::to_string(n) + "x" + std::to_string(n) + " array");
      } else {
        std::vector<std::optional<Expr>> e(n * n);
        for (std::size_t r = 0; r < n; ++r) {
          if (!m[r].is_array() || m[r].size() != n) {
            schema(at(w, r), "expected a row of " + std::to_string(n) + " expressions");
            continue;
          }
          for (std::size_t c = 0; c < n; ++c) e[r * n + c] = expression(m[r][c], at(at(w, r), c));
        }
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = r; c < n; ++c) {
            if (!e[r * n + c]) continue;
            if (c > r && e[c * n + r] && e[c * n + r]->to_string() != e[r * n + c]->to_string())
              schema(at(at(w, c), r), "metric is not symmetric: entry differs from " + at(at(w, r), c));
            resolve(*e[r * n + c], coords, chart.parameters, mode, at(at(w, r), c));
            chart.set_metric(static_cast<int>(r), static_cast<int>(c), *e[r * n + c]);
          }
      }
    }
    if (j.contains("sample_points"))
      chart.sample_points = points(j["sample_points"], at(where, "sample_points"), n, mode, chart.domain, coords);
    if (issues.size() != before) return std::nullopt;
    return chart;
  }

  Settings settings(const json& j, const std::string& where) {
    Settings s;
    if (!object(j, where, {"jet_order", "seed", "fd_step", "fd", "fd_tolerance", "orientation", "self_dual_tol"}))
      return s;
    if (j.contains("jet_order"))
      if (auto v = integer(j["jet_order"], at(where, "jet_order"), 2, kMaxJetOrder)) s.jet_order = static_cast<int>(*v);
    if (j.contains("seed")) {
      const auto& v = j["seed"];
      if (v.is_number_unsigned()) s.seed = v.get<std::uint64_t>();
      else schema(at(where, "seed"), "expected a non-negative integer");
    }
    if (j.contains("fd_step"))
      if (auto v = number(j["fd_step"], at(where, "fd_step"), true)) s.fd_step = *v;
    if (j.contains("fd"))
      if (auto v = boolean(j["fd"], at(where, "fd"))) s.fd = *v;
    if (j.contains("fd_tolerance"))
      if (auto v = number(j["fd_tolerance"], at(where, "fd_tolerance"), true)) s.fd_tolerance = *v;
    if (j.contains("orientation")) {
      auto o = integer(j["orientation"], at(where, "orientation"), -1, 1);
      if (o && *o == 0) schema(at(where, "orientation"), "orientation must be +1 or -1");
      else if (o) s.orientation = static_cast<int>(*o);
    }
    if (j.contains("self_dual_tol"))
      if (auto v = number(j["self_dual_tol"], at(where, "self_dual_tol"), true)) s.self_dual_tol = *v;
    return s;
  }

  void generator(const json& j, const std::string& where, const Settings& settings, std::vector<MetricChart>& charts) {
    if (!object(j, where,
                {"kind", "prefix", "count", "dim", "mode", "signature", "amplitude", "box", "points",
                 "reflection_symmetric"},
                {"kind", "prefix", "count", "dim"}))
      return;
    const std::size_t before = issues.size();
    if (j.contains("kind") && string(j["kind"], at(where, "kind")) != "random_metric")
      schema(at(where, "kind"), "expected \"random_metric\"");
    std::string prefix;
    if (j.contains("prefix")) prefix = string(j["prefix"], at(where, "prefix")).value_or("");
    long long count = 0;
    if (j.contains("count")) count = integer(j["count"], at(where, "count"), 1, 1000).value_or(0);
    RandomMetricOptions o;
    if (j.contains("dim")) o.dim = static_cast<int>(integer(j["dim"], at(where, "dim"), 2, kMaxJetVars).value_or(4));
    o.signature = {o.dim, 0};
    if (j.contains("mode")) {
      auto m = string(j["mode"], at(where, "mode"));
      if (m == "complex") o.mode = Mode::Complex;
      else if (m && *m != "real") schema(at(where, "mode"), "expected \"real\" or \"complex\"");
    }
    if (j.contains("signature")) {
      const auto& s = j["signature"];
      if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer() ||
          s[0].get<int>() < 0 || s[1].get<int>() < 0 || s[0].get<int>() + s[1].get<int>() != o.dim)
        schema(at(where, "signature"), "expected [p, q] with p + q = dim");
      else
        o.signature = {s[0].get<int>(), s[1].get<int>()};
    }
    if (j.contains("amplitude"))
      if (auto v = number(j["amplitude"], at(where, "amplitude"), true)) o.amplitude = *v;
    if (j.contains("box"))
      if (auto v = number(j["box"], at(where, "box"), true)) o.box = std::min(*v, 0.9);
    if (j.contains("points"))
      if (auto v = integer(j["points"], at(where, "points"), 1, 100)) o.points = static_cast<int>(*v);
    if (j.contains("reflection_symmetric"))
      if (auto v = boolean(j["reflection_symmetric"], at(where, "reflection_symmetric"))) o.reflection_symmetric = *v;
    if (!settings.seed) schema(where, "random generators need /settings/seed");
    if (issues.size() != before) return;
    for (long long i = 0; i < count; ++i) {
      const std::string name = prefix + std::to_string(i);
      Rng rng(derive_seed(*settings.seed, "random_metric", name));
      try {
        charts.push_back(random_metric(rng, o, name));
      } catch (const Error& e) {
        schema(where, e.what());
        return;
      }
    }
  }
};

}  // namespace

ManifestError::ManifestError(std::vector<ManifestIssue> issues)
    : Error(issues.empty() ? ErrorCode::SchemaError : issues.front().code, join_messages(issues)),
      issues_(std::move(issues)) {}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "weyl3_vanish", "cy_transform", "bianchi",       "div_weyl",     "div_weyl_pm",    "star_ricci_3d",
      "lemma_cminus", "thm1",         "eq_rq",         "eq_tgeod",     "p_invariance",   "lemma3",
      "lemma4_lines", "isotropic_scan", "null_conservation", "jacobi_variation"};
  return names;
}

const MetricChart* Manifest::find_chart(std::string_view name) const {
  for (const auto& c : charts)
    if (c.name == name) return &c;
  return nullptr;
}

const HypersurfaceSpec* Manifest::find_hypersurface(std::string_view name) const {
  for (const auto& h : hypersurfaces)
    if (h.name == name) return &h;
  return nullptr;
}

const GeodesicRun* Manifest::find_geodesic(std::string_view name) const {
  for (const auto& g : geodesics)
    if (g.name == name) return &g;
  return nullptr;
}

Manifest parse_manifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const std::size_t line = 1 + std::count(text.begin(), text.begin() + byte, '\n');
    const std::size_t nl = text.rfind('\n', byte > 0 ? byte - 1 : 0);
    const std::size_t col = (nl == std::string_view::npos || byte == 0) ? byte + 1 : byte - nl;
    throw ManifestError({{ErrorCode::ParseError, "",
                          "invalid JSON at line " + std::to_string(line) + ", column " + std::to_string(col)}});
  }

  Loader L;
  Manifest m;
  m.digest = fnv1a64(text);
  if (!L.object(doc, "",
                {"schema_version", "settings", "charts", "generators", "rescalings", "hypersurfaces", "geodesics",
                 "checks"},
                {"schema_version"}))
    throw ManifestError(L.issues);
  if (doc.contains("schema_version"))
    if (auto v = L.integer(doc["schema_version"], "/schema_version", 1, 1000); v && *v != kManifestSchemaVersion)
      L.schema("/schema_version", "unsupported schema version " + std::to_string(*v));
  if (doc.contains("settings")) m.settings = L.settings(doc["settings"], "/settings");

  std::set<std::string> names;
  auto claim = [&](const std::string& name, const std::string& where) {
    if (name.empty()) return;
    if (!names.insert(name).second) L.schema(where, "duplicate name '" + name + "'");
  };

  auto each = [&](const char* key, auto&& f) {
    if (!doc.contains(key)) return;
    const auto& a = doc[key];
    const std::string base = std::string("/") + key;
    if (!a.is_array()) {
      L.schema(base, "expected an array");
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) f(a[i], at(base, i));
  };

  each("charts", [&](const json& j, const std::string& w) {
    if (auto c = L.chart(j, w)) {
      claim(c->name, at(w, "name"));
      m.charts.push_back(std::move(*c));
    }
  });
  each("generators", [&](const json& j, const std::string& w) {
    const std::size_t first = m.charts.size();
    L.generator(j, w, m.settings, m.charts);
    for (std::size_t i = first; i < m.charts.size(); ++i) claim(m.charts[i].name, at(w, "prefix"));
  });
  each("rescalings", [&](const json& j, const std::string& w) {
    if (!L.object(j, w, {"name", "chart", "phi"}, {"name", "chart", "phi"})) return;
    auto name = j.contains("name") ? L.string(j["name"], at(w, "name")) : std::nullopt;
    auto ref = j.contains("chart") ? L.string(j["chart"], at(w, "chart")) : std::nullopt;
    auto phi = j.contains("phi") ? L.expression(j["phi"], at(w, "phi")) : std::nullopt;
    if (!name || !ref || !phi) return;
    const MetricChart* base = m.find_chart(*ref);
    if (!base) {
      L.issue(ErrorCode::UnresolvedReference, at(w, "chart"), "no chart named '" + *ref + "'");
      return;
    }
    L.resolve(*phi, base->coordinates, base->parameters, base->mode, at(w, "phi"));
    MetricChart c = rescale(*base, *phi, *name);
    claim(*name, at(w, "name"));
    m.charts.push_back(std::move(c));
  });
  each("hypersurfaces", [&](const json& j, const std::string& w) {
    if (!L.object(j, w,
                  {"name", "chart", "parameters", "embedding", "domain", "normal_sign", "normal_coordinate",
                   "gauge_scale", "sample_points"},
                  {"name", "chart", "parameters", "embedding"}))
      return;
    const std::size_t before = L.issues.size();
    HypersurfaceSpec h;
    if (j.contains("name")) h.name = L.string(j["name"], at(w, "name")).value_or("");
    const MetricChart* amb = nullptr;
    if (j.contains("chart")) {
      if (auto ref = L.string(j["chart"], at(w, "chart"))) {
        amb = m.find_chart(*ref);
        if (!amb) L.issue(ErrorCode::UnresolvedReference, at(w, "chart"), "no chart named '" + *ref + "'");
      }
    }
    if (j.contains("parameters")) {
      const auto& p = j["parameters"];
      if (!p.is_array() || p.empty()) L.schema(at(w, "parameters"), "expected an array of parameter names");
      else
        for (std::size_t i = 0; i < p.size(); ++i)
          if (auto s = L.string(p[i], at(at(w, "parameters"), i))) h.parameters.push_back(*s);
    }
    if (!amb || L.issues.size() != before) return;
    h.ambient = *amb;
    const std::size_t n = amb->coordinates.size();
    if (h.parameters.size() + 1 != n) {
      L.schema(at(w, "parameters"), "a hypersurface needs " + std::to_string(n - 1) + " parameters");
      return;
    }
    if (j.contains("embedding")) {
      const auto& e = j["embedding"];
      if (!e.is_array() || e.size() != n) {
        L.schema(at(w, "embedding"), "expected " + std::to_string(n) + " expressions");
      } else {
        for (std::size_t i = 0; i < n; ++i)
          if (auto x = L.expression(e[i], at(at(w, "embedding"), i))) {
            L.resolve(*x, h.parameters, amb->parameters, amb->mode, at(at(w, "embedding"), i));
            h.embedding.push_back(*x);
          }
      }
    }
    if (j.contains("domain")) h.domain = L.domain(j["domain"], at(w, "domain"), n - 1);
    if (j.contains("normal_sign")) {
      auto s = L.integer(j["normal_sign"], at(w, "normal_sign"), -1, 1);
      if (s && *s == 0) L.schema(at(w, "normal_sign"), "normal_sign must be +1 or -1");
      else if (s) h.normal_sign = static_cast<int>(*s);
    }
    for (const char* key : {"normal_coordinate", "gauge_scale"}) {
      if (!j.contains(key)) continue;
      if (auto x = L.expression(j[key], at(w, key))) {
        L.resolve(*x, amb->coordinates, amb->parameters, amb->mode, at(w, key));
        (std::string(key) == "normal_coordinate" ? h.normal_coordinate : h.gauge_scale) = *x;
      }
    }
    if (j.contains("sample_points"))
      h.sample_points = L.points(j["sample_points"], at(w, "sample_points"), n - 1, amb->mode, h.domain, h.parameters);
    if (L.issues.size() != before) return;
    claim(h.name, at(w, "name"));
    m.hypersurfaces.push_back(std::move(h));
  });
  each("geodesics", [&](const json& j, const std::string& w) {
    if (!L.object(j, w, {"name", "chart", "x0", "v0", "s_end", "samples"}, {"name", "chart", "x0", "v0"})) return;
    const std::size_t before = L.issues.size();
    GeodesicRun g;
    if (j.contains("name")) g.name = L.string(j["name"], at(w, "name")).value_or("");
    const MetricChart* c = nullptr;
    if (j.contains("chart"))
      if (auto ref = L.string(j["chart"], at(w, "chart"))) {
        g.chart = *ref;
        c = m.find_chart(*ref);
        if (!c) L.issue(ErrorCode::UnresolvedReference, at(w, "chart"), "no chart named '" + *ref + "'");
      }
    if (j.contains("s_end"))
      if (auto v = L.number(j["s_end"], at(w, "s_end"), true)) g.s_end = *v;
    if (j.contains("samples"))
      if (auto v = L.integer(j["samples"], at(w, "samples"), 1, 100000)) g.samples = static_cast<int>(*v);
    if (!c) return;
    if (j.contains("x0")) g.x0 = L.point(j["x0"], at(w, "x0"), c->coordinates.size(), c->mode).value_or(Point{});
    if (j.contains("v0")) g.v0 = L.point(j["v0"], at(w, "v0"), c->coordinates.size(), c->mode).value_or(Point{});
    if (L.issues.size() != before) return;
    claim(g.name, at(w, "name"));
    m.geodesics.push_back(std::move(g));
  });
  each("checks", [&](const json& j, const std::string& w) {
    if (!L.object(j, w,
                  {"name", "targets", "tolerance", "abs_tolerance", "phi", "samples", "s_end", "expect", "planes",
                   "intrinsic_chart"},
                  {"name"}))
      return;
    CheckSpec c;
    if (j.contains("name")) {
      c.name = L.string(j["name"], at(w, "name")).value_or("");
      const auto& known = check_names();
      if (!c.name.empty() && std::find(known.begin(), known.end(), c.name) == known.end())
        L.schema(at(w, "name"), "unknown check '" + c.name + "'");
    }
    if (j.contains("targets")) {
      const auto& t = j["targets"];
      if (!t.is_array()) L.schema(at(w, "targets"), "expected an array of names");
      else
        for (std::size_t i = 0; i < t.size(); ++i) {
          const std::string tw = at(at(w, "targets"), i);
          auto s = L.string(t[i], tw);
          if (!s) continue;
          bool found = false;
          if (!s->empty() && s->back() == '*') {
            const std::string prefix = s->substr(0, s->size() - 1);
            for (const auto& n : names) found = found || n.rfind(prefix, 0) == 0;
          } else {
            found = names.count(*s) > 0;
          }
          if (!found) L.issue(ErrorCode::UnresolvedReference, tw, "no chart, hypersurface or geodesic run '" + *s + "'");
          c.targets.push_back(*s);
        }
    }
    if (j.contains("tolerance")) c.tolerance = L.number(j["tolerance"], at(w, "tolerance"), true);
    if (j.contains("abs_tolerance")) c.abs_tolerance = L.number(j["abs_tolerance"], at(w, "abs_tolerance"), true);
    if (j.contains("phi")) {
      if (auto e = L.expression(j["phi"], at(w, "phi"))) c.phi = e->to_string();
    }
    if (j.contains("samples"))
      if (auto v = L.integer(j["samples"], at(w, "samples"), 1, 100000)) c.samples = static_cast<int>(*v);
    if (j.contains("s_end")) c.s_end = L.number(j["s_end"], at(w, "s_end"), true);
    if (j.contains("expect")) {
      c.expect = L.string(j["expect"], at(w, "expect"));
      if (c.expect && *c.expect != "flat" && *c.expect != "nonflat")
        L.schema(at(w, "expect"), "expected \"flat\" or \"nonflat\"");
    }
    if (j.contains("intrinsic_chart"))
      if (auto s = L.string(j["intrinsic_chart"], at(w, "intrinsic_chart"))) {
        if (!m.find_chart(*s))
          L.issue(ErrorCode::UnresolvedReference, at(w, "intrinsic_chart"), "no chart named '" + *s + "'");
        c.intrinsic_chart = *s;
      }
    if (j.contains("planes")) {
      const auto& p = j["planes"];
      const std::string pw = at(w, "planes");
      if (!p.is_array()) L.schema(pw, "expected an array of planes");
      else
        for (std::size_t i = 0; i < p.size(); ++i) {
          const std::string iw = at(pw, i);
          if (!L.object(p[i], iw, {"x", "y", "expect_value"}, {"x", "y"})) continue;
          PlaneSpec ps;
          auto vec = [&](const char* key) {
            Point out;
            if (!p[i].contains(key) || !p[i][key].is_array()) return out;
            for (std::size_t k = 0; k < p[i][key].size(); ++k)
              if (auto s = L.scalar(p[i][key][k], at(at(iw, key), k), Mode::Complex)) out.push_back(*s);
            return out;
          };
          ps.x = vec("x");
          ps.y = vec("y");
          if (ps.x.size() != ps.y.size() || ps.x.empty()) L.schema(iw, "x and y must be vectors of equal length");
          if (p[i].contains("expect_value")) ps.expect_value = L.scalar(p[i]["expect_value"], at(iw, "expect_value"), Mode::Complex);
          c.planes.push_back(std::move(ps));
        }
    }
    m.checks.push_back(std::move(c));
  });

  // Random sampling inside checks needs a seed.
  const bool random_checks = std::any_of(m.checks.begin(), m.checks.end(), [](const CheckSpec& c) {
    static const std::set<std::string> randomized = {"cy_transform", "p_invariance", "lemma3", "lemma4_lines",
                                                     "isotropic_scan", "null_conservation", "jacobi_variation"};
    return randomized.count(c.name) > 0;
  });
  if (random_checks && !m.settings.seed) L.schema("/settings", "checks that sample randomly need a seed");

  if (!L.issues.empty()) throw ManifestError(L.issues);
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot read manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

}  // namespace confgeo
