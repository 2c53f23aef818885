#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "confgeo/manifest.hpp"
#include "confgeo/suite.hpp"

using namespace confgeo;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "charts": [{"name": "e2", "coordinates": ["x", "y"], "metric": [["1", "0"], ["0", "1"]]}]
})";

// A 4-dimensional flat chart, a hyperplane on a misspelled chart and a check.
std::string broken_reference() {
  return R"({
  "schema_version": 1,
  "charts": [{"name": "r4", "coordinates": ["x", "y", "z", "w"],
              "metric": [["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}],
  "hypersurfaces": [{"name": "plane", "chart": "N4", "parameters": ["a", "b", "c"],
                     "embedding": ["a", "b", "c", "0"], "sample_points": [[0, 0, 0]]}]
})";
}

std::vector<ManifestIssue> issues_of(const std::string& text) {
  try {
    parse_manifest(text);
  } catch (const ManifestError& e) {
    return e.issues();
  }
  return {};
}

Manifest fixture(const std::string& name) { return load_manifest(std::string(CONFGEO_FIXTURES_DIR) + "/" + name); }

}  // namespace

TEST_SUITE("suite") {
  TEST_CASE("minimal manifest runs nothing and passes") {
    const Manifest m = parse_manifest(kMinimal);
    CHECK(m.charts.size() == 1);
    CHECK(m.charts[0].dim() == 2);
    const Report r = run_suite(m);
    CHECK(r.records.empty());
    CHECK(r.exit_code() == 0);
  }

  TEST_CASE("unresolved chart reference names its location") {
    const auto issues = issues_of(broken_reference());
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == ErrorCode::UnresolvedReference);
    CHECK(issues[0].where == "/hypersurfaces/0/chart");
    CHECK(issues[0].message.find("N4") != std::string::npos);
  }

  TEST_CASE("expression errors carry the column") {
    std::string text = kMinimal;
    text.replace(text.find("\"1\", \"0\"]"), 3, "\"x +* y\"");
    const auto issues = issues_of(text);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == ErrorCode::ParseError);
    CHECK(issues[0].where == "/charts/0/metric/0/0");
    CHECK(issues[0].message.find("column 4") != std::string::npos);
  }

  TEST_CASE("unknown keys are rejected and every issue is listed") {
    std::string text = kMinimal;
    text.replace(text.find("\"charts\""), 8, "\"colour\": 1, \"charts\"");
    text.replace(text.find("\"name\""), 6, "\"nmae\": 2, \"name\"");
    const auto issues = issues_of(text);
    REQUIRE(issues.size() == 2);
    for (const auto& i : issues) CHECK(i.code == ErrorCode::SchemaError);
    CHECK(issues_of("{\"schema_version\": 2, \"charts\": []}").at(0).code == ErrorCode::SchemaError);
    CHECK(issues_of("{\"schema_version\": 1,").at(0).code == ErrorCode::ParseError);
  }

  TEST_CASE("missing files are IoError") {
    try {
      load_manifest("/nonexistent/manifest.json");
      FAIL("expected IoError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IoError);
    }
  }

  TEST_CASE("reports are deterministic across runs and job counts") {
    const Manifest m = fixture("random_seeded_3d.json");
    SuiteOptions a;
    a.only = {"weyl3_vanish", "cy_transform"};
    SuiteOptions b = a;
    b.jobs = 3;
    const Report ra = run_suite(m, a), rb = run_suite(m, a), rc = run_suite(m, b);
    CHECK(ra.digest() == rb.digest());
    CHECK(ra.digest() == rc.digest());
    CHECK(ra.json(false) == rc.json(false));
    SuiteOptions d = a;
    d.seed = 12345;
    CHECK(run_suite(m, d).digest() != ra.digest());
    CHECK(ra.digest().size() == 16);
  }

  TEST_CASE("canonical JSON carries verdicts and digests") {
    const Report r = run_suite(fixture("s3_round.json"));
    const auto j = nlohmann::json::parse(r.json());
    CHECK(j.at("digest").get<std::string>() == r.digest());
    CHECK(j.at("checks").size() == r.records.size());
    for (const auto& rec : j.at("checks")) CHECK(rec.at("verdict") == "pass");
    CHECK(r.text().find("PASS") != std::string::npos);
  }

  TEST_CASE("exit code precedence") {
    Report r;
    r.records.resize(3);
    CHECK(r.exit_code() == 0);
    r.records[0].verdict = Verdict::Skipped;
    CHECK(r.exit_code() == 0);
    r.records[1].verdict = Verdict::Fail;
    CHECK(r.exit_code() == 1);
    r.records[2].verdict = Verdict::Errored;
    CHECK(r.exit_code() == 2);
  }

  TEST_CASE("residuals pass below either tolerance") {
    CheckRecord rec;
    Residual& r = rec.residual("k", 1e-6, 1e-9);
    r.add(1e-3, 1e-12);
    r.add(1e-8, 1.0);
    rec.settle();
    CHECK(rec.verdict == Verdict::Pass);
    CHECK(r.load < 1.0);
    rec.residual("k", 1e-6, 1e-9).add(1e-3, 1e-3);
    rec.settle();
    CHECK(rec.verdict == Verdict::Fail);
    CHECK(r.failures == 1);
    CHECK(r.load >= 1.0);
  }

  TEST_CASE("unknown check names and jet orders are rejected") {
    const Manifest m = parse_manifest(kMinimal);
    SuiteOptions o;
    o.only = {"no_such_check"};
    CHECK_THROWS_AS(run_suite(m, o), Error);
    SuiteOptions p;
    p.order = 7;
    CHECK_THROWS_AS(run_suite(m, p), Error);
  }

  TEST_CASE("inapplicable checks are skipped") {
    const Manifest m = fixture("s3_round.json");
    SuiteOptions o;
    o.only = {"star_ricci_3d"};
    const Report r = run_suite(m, o);
    REQUIRE(!r.records.empty());
    CHECK(r.count(Verdict::Pass) == static_cast<int>(r.records.size()));
  }

  TEST_CASE("geodesic traces") {
    const Manifest m = fixture("flat_split.json");
    std::ostringstream out;
    CHECK(trace_geodesic(m, "null_line", out));
    std::istringstream lines(out.str());
    std::string line;
    int samples = 0;
    nlohmann::json last;
    while (std::getline(lines, line)) {
      last = nlohmann::json::parse(line);
      if (last.contains("status")) break;
      ++samples;
      CHECK(std::abs(last.at("g_vv").get<double>()) < 1e-12);
    }
    CHECK(samples == 17);
    CHECK(last.at("status") == "ok");

    std::ostringstream esc;
    CHECK_FALSE(trace_geodesic(m, "escape", esc));
    CHECK(esc.str().find("LeftDomain") != std::string::npos);
    std::ostringstream none;
    CHECK_THROWS_AS(trace_geodesic(m, "missing", none), Error);
  }

  TEST_CASE("curvature JSON for the round sphere") {
    const Manifest m = fixture("s3_round.json");
    const auto j = nlohmann::json::parse(curvature_json(m, "s3", m.charts[0].sample_points[0]));
    CHECK(j.at("scalar_curvature").get<double>() == doctest::Approx(6.0).epsilon(1e-10));
    CHECK(j.contains("cotton"));
  }
}
