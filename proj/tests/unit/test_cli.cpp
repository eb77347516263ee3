#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gnpwe/cli.hpp"
#include "gnpwe/expr_io.hpp"
#include "json.hpp"

using namespace gnpwe;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("derive-adjoint prints the characteristic equation") {
  const auto r = run_cli({"derive-adjoint", "--n", "1"});
  CHECK(r.code == cli::kExitOk);
  CHECK(parse(r.out.substr(0, r.out.find(" = 0")), 1) == parse("chi_tx + f1*chi_tt - a*chi_ttt + b*chi_y1y1", 1));
  const auto j = nlohmann::json::parse(run_cli({"derive-adjoint", "--n", "2", "--format", "json"}).out);
  CHECK(j["matches_direct"] == true);
  CHECK(from_json(j["residual"]) ==
        parse("chi_tx + f1*chi_tt - a*chi_ttt + b*chi_y1y1 + b*chi_y2y2", 2));
}

TEST_CASE("classify reports dimension 8 for the standard n = 1 run") {
  const auto r = run_cli({"classify", "--n", "1", "--deg-t", "1", "--deg-x", "1", "--deg-y", "3", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["dimension"] == 8);
  CHECK(j["all_verified"] == true);
  CHECK(j["family_dimension"] == 8);
  CHECK(j["u_dependent"] == 0);
  // Every basis element passes an independent verify call.
  for (const auto& e : j["basis"]) {
    const auto chi = to_plain(from_json(e["chi"]));
    const auto v = run_cli({"verify", "--n", "1", "--a", "1", "--b", "1", "--chi", chi});
    CHECK(v.code == 0);
    CHECK(contains(v.out, "verified = true"));
  }
}

TEST_CASE("classify plain output and the jet ansatz note") {
  const auto r = run_cli({"classify", "--n", "1", "--deg-t", "1", "--deg-x", "0", "--deg-y", "1", "--jet-deg", "1"});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "u-dependent multipliers: 0"));
  CHECK(contains(r.out, "all verified: yes"));
  CHECK(contains(r.out, "note: "));
}

TEST_CASE("verify rejects chi = x t") {
  const auto r = run_cli({"verify", "--n", "1", "--chi", "t*x"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "residual = 1\n"));
  CHECK(contains(r.out, "divergence residual = -u\n"));
  CHECK(contains(r.out, "verified = false"));
}

TEST_CASE("verify with symbolic b") {
  const auto ok = run_cli({"verify", "--n", "1", "--chi", "t*x - 1/2*b^-1*y1^2"});
  CHECK(contains(ok.out, "verified = true"));
  const auto concrete = run_cli({"verify", "--n", "1", "--b", "2", "--chi", "t*x - 1/4*y1^2"});
  CHECK(contains(concrete.out, "verified = true"));
}

TEST_CASE("fluxes in LaTeX") {
  const auto r = run_cli({"fluxes", "--n", "1", "--chi", "t", "--format", "latex"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\\rho"));
  CHECK(contains(r.out, "\\sigma"));
  CHECK(contains(r.out, "\\mathrm{residual} = 0"));
  const auto j = nlohmann::json::parse(run_cli({"fluxes", "--n", "2", "--chi", "1", "--format", "json"}).out);
  CHECK(j["residual"]["terms"].empty());
}

TEST_CASE("n1-family builds a verified characteristic") {
  const auto r = run_cli({"n1-family", "--n", "1", "--xi0", "x", "--eta1", "1", "--b", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto chi = to_plain(from_json(j["chi"]));
  CHECK(from_json(j["chi"]) == parse("t*x + y1 - 1/4*y1^2", 1));
  CHECK(contains(run_cli({"verify", "--b", "2", "--chi", chi}).out, "verified = true"));
  CHECK(run_cli({"n1-family", "--n", "2", "--eta0", "1"}).code == cli::kExitUsage);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run_cli({"classify", "--deg-x", "seven"}).code == cli::kExitUsage);
  CHECK(run_cli({"classify", "--b", "0"}).code == cli::kExitUsage);
  CHECK(run_cli({"classify", "--a", "1/0"}).code == cli::kExitUsage);
  CHECK(run_cli({"classify", "--a", "0.5"}).code == cli::kExitUsage);
  CHECK(run_cli({"verify", "--chi", "t +"}).code == cli::kExitUsage);
  CHECK(run_cli({"verify", "--chi", "t", "--format", "yaml"}).code == cli::kExitUsage);
  CHECK(run_cli({"classify", "--n", "0"}).code == cli::kExitUsage);
  CHECK(run_cli({"verify", "--chi", "u"}).code == cli::kExitDomain);
  CHECK(run_cli({"solve", "--a", "1", "--b", "1", "--nt", "64", "--nx", "401", "--lx", "20"}).code ==
        cli::kExitDomain);
  const auto help = run_cli({"--help"});
  CHECK(help.code == cli::kExitOk);
  CHECK(contains(help.out, "classify"));
  CHECK_FALSE(run_cli({"classify", "--b", "0"}).err.empty());
}

TEST_CASE("fd-check and solve print norms") {
  const auto fd = run_cli({"fd-check", "--chi", "t", "--format", "json"});
  REQUIRE(fd.code == 0);
  const auto j = nlohmann::json::parse(fd.out);
  CHECK(j["max_norm"].get<double>() < 1.0);
  CHECK(j["max_norm"].get<double>() > 0.0);

  const auto csv = run_cli({"fd-check", "--chi", "1", "--format", "csv"});
  CHECK(csv.out.rfind("max_norm,l2_norm\n", 0) == 0);

  const auto s = run_cli({"solve", "--a", "-1", "--nt", "16", "--nx", "33", "--amplitude", "0.1", "--profile",
                          "parabolic", "--manufactured"});
  REQUIRE(s.code == 0);
  CHECK(contains(s.out, "error_max = "));
}

TEST_CASE("convergence prints a table") {
  const auto r = run_cli({"convergence", "--target", "fd-check", "--chi", "t", "--nt", "16", "--ny", "17", "--nx",
                          "9", "--lx", "2", "--levels", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("level,h,max_norm,l2_norm,observed_order\n", 0) == 0);
  CHECK(run_cli({"convergence", "--levels", "2"}).code != cli::kExitOk);
}

TEST_CASE("output is deterministic and --out writes a file") {
  const std::vector<std::string> args = {"classify", "--n", "2", "--deg-t", "1", "--deg-x", "1", "--deg-y", "2",
                                         "--format", "json"};
  const auto first = run_cli(args);
  CHECK(first.out == run_cli(args).out);

  const auto path = (std::filesystem::temp_directory_path() / "gnpwe_cli_out.txt").string();
  auto with_out = args;
  with_out.push_back("--out");
  with_out.push_back(path);
  const auto r = run_cli(with_out);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == first.out);
  std::filesystem::remove(path);
}

TEST_CASE("field round trip through solve and fd-check") {
  const auto path = (std::filesystem::temp_directory_path() / "gnpwe_cli_field.csv").string();
  const auto s = run_cli({"solve", "--a", "-1", "--nt", "16", "--nx", "33", "--amplitude", "0.1", "--field-out", path});
  REQUIRE(s.code == 0);
  const auto fd = run_cli({"fd-check", "--a", "-1", "--chi", "t", "--field", path});
  CHECK(fd.code == 0);
  CHECK(contains(fd.out, "max_norm"));
  std::filesystem::remove(path);
}

TEST_CASE("installed binary smoke test") {
  const char* exe = std::getenv("GNPWE_CLI");
  if (!exe) return;
  const std::string cmd = std::string(exe) + " verify --chi t > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string bad = std::string(exe) + " verify --b 0 --chi t 2> /dev/null";
  CHECK(WEXITSTATUS(std::system(bad.c_str())) == 2);
}
