#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "betadual/cli.hpp"

using namespace betadual;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("cli dual-check w3 passes with one record per order") {
  Run r = run({"dual-check", "--identity", "w3", "--order", "8"});
  REQUIRE(r.code == kExitPass);
  json j = json::parse(r.out);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["command"] == "dual-check");
  CHECK(j["pass"] == true);
  CHECK(j["checks"].size() == 9);
  for (const auto& c : j["checks"]) {
    CHECK(c["pass"] == true);
    CHECK(c.contains("lhs"));
    CHECK(c.contains("rhs"));
  }
}

TEST_CASE("cli report is deterministic") {
  auto a = run({"dual-check", "--identity", "w3L", "--order", "4"});
  auto b = run({"dual-check", "--identity", "w3L", "--order", "4"});
  CHECK(a.out == b.out);
  auto s1 = run({"sample", "--family", "l", "--n", "3", "--kappa", "2", "--a", "1", "--samples", "5", "--seed", "7"});
  auto s2 = run({"--seed", "7", "sample", "--family", "l", "--n", "3", "--kappa", "2", "--a", "1", "--samples", "5"});
  CHECK(s1.code == 0);
  CHECK(s1.out == s2.out);
}

TEST_CASE("cli laguerre variant map exits with check failure") {
  Run r = run({"dual-check", "--identity", "laguerre-finite-variant", "--order", "2"});
  CHECK(r.code == kExitCheckFailed);
  CHECK(json::parse(r.out)["pass"] == false);
}

TEST_CASE("cli zeros of H_3") {
  Run r = run({"zeros", "--family", "hermite", "--n", "3"});
  REQUIRE(r.code == kExitPass);
  json z = json::parse(r.out)["result"]["zeros"];
  REQUIRE(z.size() == 3);
  CHECK(z[0].get<double>() == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-14));
  CHECK(std::abs(z[1].get<double>()) < 1e-15);
  CHECK(z[2].get<double>() == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
}

TEST_CASE("cli csv output for zeros") {
  Run r = run({"zeros", "--family", "hermite", "--n", "2", "--format", "csv"});
  REQUIRE(r.code == kExitPass);
  CHECK(r.out.rfind("index,zero\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}

TEST_CASE("cli usage errors exit 2") {
  CHECK(run({"zeros", "--family", "hermite", "--n", "3", "--bogus"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"moments", "--family", "q", "--order", "2"}).code == kExitUsage);
  CHECK(run({"density", "--alpha", "1", "--grid", "0:1"}).code == kExitUsage);
  CHECK(run({"density", "--alpha", "-1", "--grid", "0:1:3"}).code == kExitUsage);
}

TEST_CASE("cli help exits 0") {
  Run r = run({"--help"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("dual-check") != std::string::npos);
}

TEST_CASE("cli pole gives a failing record") {
  Run r = run({"resolvent-star", "--alpha", "-3", "--x", "0"});
  CHECK(r.code == kExitCheckFailed);
  json j = json::parse(r.out);
  CHECK(j["checks"][0]["kind"] == "pole");
}

TEST_CASE("cli resolvent-star at alpha = -3") {
  Run r = run({"resolvent-star", "--alpha", "-3", "--x", "2"});
  REQUIRE(r.code == kExitPass);
  CHECK(json::parse(r.out)["result"]["value"].get<double>() == doctest::Approx(5.0 / 14).epsilon(1e-13));
}

TEST_CASE("cli closed-form jacobi recurrence fails the riccati check") {
  CHECK(run({"moments", "--family", "j", "--order", "4"}).code == kExitPass);
  CHECK(run({"moments", "--family", "j", "--order", "4", "--source", "paper"}).code == kExitCheckFailed);
}

TEST_CASE("cli writes --out atomically") {
  const auto path = std::filesystem::temp_directory_path() / "betadual_cli_test.json";
  std::filesystem::remove(path);
  Run r = run({"catalan-check", "--order", "4", "--out", path.string()});
  REQUIRE(r.code == kExitPass);
  CHECK(r.out.empty());
  std::ifstream f(path);
  json j = json::parse(f);
  CHECK(j["pass"] == true);
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove(path);
}

TEST_CASE("cli crystallize and oracle-moments") {
  CHECK(run({"crystallize", "--family", "j", "--n", "5", "--a", "2", "--b", "3"}).code == kExitPass);
  Run r = run({"oracle-moments", "--family", "g", "--p", "2", "--symbolic"});
  REQUIRE(r.code == kExitPass);
  CHECK(json::parse(r.out)["result"]["holdout_ok"] == true);
  Run d = run({"dual-check-finite", "--family", "l", "--p", "3"});
  CHECK(d.code == kExitPass);
  CHECK(run({"hypergeom-check", "--n", "5"}).code == kExitPass);
}
