// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "hillgap/cli.hpp"
#include "hillgap/eigensolver.hpp"

using namespace hillgap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hillgap_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

// First data row after the header that starts with `prefix`.
std::vector<std::string> row_after(const std::string& text, const std::string& header, const std::string& prefix) {
  bool past = false;
  for (const std::string& l : lines(text)) {
    if (l == header) {
      past = true;
    } else if (past && l.rfind(prefix, 0) == 0) {
      return cells(l);
    }
  }
  return {};
}

}  // namespace

TEST_CASE("spectrum of the zero potential") {
  const Outcome r = run({"spectrum", "--K", "32", "--n-max", "4"});
  REQUIRE(r.code == 0);
  const std::string header = "n,re_lo,im_lo,re_hi,im_hi,re_tau,im_tau,re_gamma,im_gamma,converged";
  const std::vector<std::string> row = row_after(r.out, header, "1,");
  REQUIRE(row.size() == 10);
  // pi^2 correctly rounded to binary64.
  const double pi2 = 9.8696044010893586188344909998762;
  CHECK(std::strtod(row[1].c_str(), nullptr) == pi2);
  CHECK(std::strtod(row[3].c_str(), nullptr) == pi2);
  CHECK(row[1] == cli::format_double(pi2));
  for (const std::string& l : lines(r.out)) {
    if (l.empty() || l[0] != '#') {
      CHECK(l == header);
      break;
    }
  }
  CHECK(r.out.rfind("# hillgap ", 0) == 0);
  CHECK(r.out.find("# regime ") != std::string::npos);
  CHECK(r.out.find("INCOMPLETE") == std::string::npos);
}

TEST_CASE("17-digit output round-trips") {
  for (const double x : {std::numbers::pi, 1.0 / 3.0, 1e-300, -2.5e17, 0.1}) {
    CHECK(std::strtod(cli::format_double(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("reruns are byte-identical") {
  const fs::path a = scratch("a.csv"), b = scratch("b.csv");
  const std::vector<std::string> base{"spectrum", "--random", "rough", "--seed", "7", "--K", "64", "--n-max", "12"};
  for (const fs::path& p : {a, b}) {
    std::vector<std::string> args = base;
    args.insert(args.end(), {"--out", p.string()});
    REQUIRE(run(args).code == 0);
  }
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());

  const fs::path j1 = scratch("a.json"), j2 = scratch("b.json");
  for (const fs::path& p : {j1, j2}) {
    REQUIRE(run({"asymptotics", "--random", "smooth", "--seed", "3", "--K", "64", "--format", "json", "--out",
                 p.string()})
                .code == 0);
  }
  CHECK(slurp(j1) == slurp(j2));
  const auto doc = nlohmann::json::parse(slurp(j1));
  CHECK(doc.contains("rows"));
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run({"spectrum", "--alpha", "1.5"}).code == 2);
  CHECK(run({"asymptotics", "--alpha", "-0.1"}).code == 2);
  CHECK(run({"spectrum", "--m", "0"}).code == 2);
  CHECK(run({"spectrum", "--quad-nodes", "48"}).code == 2);
  CHECK(run({"spectrum", "--format", "xml"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  const Outcome big = run({"spectrum", "--random", "rough", "--R", "0.5", "--K", "32"});
  CHECK(big.code == 2);
}

TEST_CASE("flags override the config file") {
  const fs::path cfg = scratch("run.toml");
  spit(cfg, "m = 2\nalpha = 0.25\nseed = 9\n");
  const Outcome r = run({"spectrum", "--config", cfg.string(), "--seed", "4", "--print-config"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("m=2") != std::string::npos);
  CHECK(r.out.find("alpha=0.25") != std::string::npos);
  CHECK(r.out.find("seed=4") != std::string::npos);
}

TEST_CASE("input errors exit with 3 and name the entry") {
  const fs::path bad = scratch("bad.json");
  spit(bad, R"({"parity":"even","coeffs":[[2,1,0],[3,1,0]]})");
  const Outcome r = run({"spectrum", "--potential", bad.string(), "--K", "16"});
  CHECK(r.code == 3);
  CHECK(r.err.find("coeffs[1]") != std::string::npos);
  spit(bad, "{\"parity\":\"even\",\"coeffs\":[[2,1]");
  CHECK(run({"spectrum", "--potential", bad.string(), "--K", "16"}).code == 3);
  CHECK(run({"spectrum", "--potential", scratch("missing.json").string()}).code == 3);
  CHECK(run({"spectrum", "--K", "16", "--n-max", "4", "--out", "/nonexistent-dir/x.csv"}).code == 3);
}

TEST_CASE("a deliberate contour collision exits with 6") {
  // Tune v(+-2) = a so that the lowest eigenvalue sits on the unit circle around pi^2.
  const int K = 4;
  const double target = std::numbers::pi * std::numbers::pi - 1.0;
  auto lowest = [&](double a) {
    const FourierSequence v = FourierSequence::from_pairs(Parity::Even, {{2, a}, {-2, a}});
    return eigenvalues(build_T(v, 1, K)).values.front().real();
  };
  double lo = 0.5, hi = 1.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (lowest(mid) > target ? lo : hi) = mid;
  }
  const fs::path p = scratch("collide.json");
  spit(p, "{\"parity\":\"even\",\"coeffs\":[[2," + cli::format_double(lo) + ",0],[-2," + cli::format_double(lo) +
              ",0]]}");
  const Outcome r = run({"riesz-check", "--potential", p.string(), "--K", "4", "--n-min", "1", "--n-max", "1",
                         "--R", "4"});
  CHECK(r.code == 6);
  CHECK(r.err.find("contour") != std::string::npos);
}

TEST_CASE("lemmas: skipped rows and fault injection") {
  const Outcome skip = run({"lemmas", "--m", "3", "--alpha", "0.5"});
  CHECK(skip.out.find("elementary,3,0.5,1,0,0,skip,n < m") != std::string::npos);
  CHECK(skip.out.find("elementary,3,0.5,2,0,0,skip,n < m") != std::string::npos);
  CHECK(skip.code == 0);
  const Outcome corrupt = run({"lemmas", "--m", "2", "--alpha", "0.5", "--bound-scale", "1e-3"});
  CHECK(corrupt.code == 5);
  CHECK(corrupt.out.find("FAIL") != std::string::npos);
}

TEST_CASE("riesz-check on a trig potential") {
  const fs::path p = scratch("trig.json");
  spit(p, R"({"parity":"even","coeffs":[[2,1,0],[-2,1,0],[6,0.5,0.5],[-6,0.5,-0.5]]})");
  const Outcome r = run({"riesz-check", "--potential", p.string(), "--K", "32", "--n-max", "6", "--R", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("# result all_ok=1") != std::string::npos);
}
