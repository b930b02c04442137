#include <doctest.h>

#include <json.hpp>

#include "sobtrace/cli.hpp"

using namespace sobtrace::cli;

namespace {
RunConfig cmd(const std::string& c) {
  RunConfig r;
  r.command = c;
  return r;
}
}  // namespace

TEST_CASE("usage errors") {
  CHECK_THROWS_AS(resolve(cmd("nope")), UsageError);
  RunConfig r = cmd("verify-extremal");
  r.dim = 2;
  CHECK_THROWS_AS(resolve(r), UsageError);
  r = cmd("verify-extremal");
  r.z0 = {0.3, 0, 0};
  CHECK_THROWS_AS(resolve(r), UsageError);
  r = cmd("verify-extremal");
  r.z0 = {1.2, 0, 0, 0};
  CHECK_THROWS_AS(resolve(r), UsageError);
  r = cmd("residual-halfspace");
  r.lambda = -1;
  CHECK_THROWS_AS(resolve(r), UsageError);
  r = cmd("energy-identity");
  r.dim = 3;
  CHECK_THROWS_AS(resolve(r), UsageError);
  r = cmd("pizzetti");
  r.format = "xml";
  CHECK_THROWS_AS(resolve(r), UsageError);
}

TEST_CASE("defaults are filled in") {
  const RunConfig r = resolve(cmd("verify-extremal"));
  CHECK(r.z0.size() == 4);
  CHECK(r.z0[0] == 0.3);
  CHECK(r.res_sphere == 48);
  CHECK(r.res_radial == 64);
  CHECK(r.res_inner == 1);
  RunConfig off = cmd("verify-extremal");
  off.z0 = {0.1, 0.2, 0, 0};
  CHECK(resolve(off).res_inner == 48);
}

TEST_CASE("check relations") {
  CHECK(make_check("a", 1e-9, 1e-8).pass);
  CHECK_FALSE(make_check("a", 1e-7, 1e-8).pass);
  CHECK(make_check("b", 0.5, -1e-8, Relation::AtLeast).pass);
  CHECK(make_check("c", 1.0, 1.0, Relation::Equals).pass);
  CHECK_FALSE(make_check("d", std::nan(""), 1.0).pass);
}

TEST_CASE("report schema, overall pass and determinism") {
  RunConfig r = cmd("pizzetti");
  r.samples = 3;
  const RunConfig c = resolve(r);
  const Report a = run(c);
  const Report b = run(c);
  const std::string ja = to_json(a);
  CHECK(ja == to_json(b));
  const auto j = nlohmann::json::parse(ja);
  CHECK(j.contains("config"));
  CHECK(j["config"]["command"] == "pizzetti");
  CHECK(j["elapsed_ms"] == 0.0);
  bool all = true;
  for (const auto& x : j["checks"]) {
    CHECK(x.contains("name"));
    CHECK(x.contains("value"));
    CHECK(x.contains("tolerance"));
    all = all && x["pass"].get<bool>();
  }
  CHECK(j["pass"].get<bool>() == all);
  const std::string csv = to_csv(a);
  CHECK(csv.rfind("name,value,tolerance,pass\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(a.checks.size()) + 1);
}

TEST_CASE("tolerance overrides reach the checks") {
  RunConfig r = cmd("pizzetti");
  r.samples = 2;
  r.tol["pizzetti"] = 0.0;
  const Report rep = run(resolve(r));
  CHECK(rep.checks.front().tolerance == 0.0);
}
