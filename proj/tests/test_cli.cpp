#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace hyperrelax;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "hyperrelax");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("hyperrelax_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"run", "--model", "nope", "--T", "0.1"}).code == 2);
  CHECK(call({"run", "--model", "kdv_limit", "--n", "2"}).code == 2);
  CHECK(call({"converge-tau", "--config", "/nonexistent.toml"}).code == 2);
  CHECK(call({"check-operators", "--order", "9"}).code == 2);
}

TEST_CASE("run writes the final state and reports the exact-solution error") {
  const auto dir = scratch("run");
  const Result r = call({"run", "--model", "biharmonic_limit", "--T", "0.2", "--n", "32", "--order", "3", "--dt", "0.01",
                         "--left", "0", "--right", "6.283185307179586", "--initial", "sine(1)", "--svg", "--out",
                         dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("L2 error") != std::string::npos);
  CHECK(slurp(dir / "final_state.csv").rfind("x,q0\n", 0) == 0);
  CHECK(std::filesystem::exists(dir / "timeseries.csv"));
  CHECK(std::filesystem::exists(dir / "final_q0.svg"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("blow-up exits with code 1") {
  const Result r = call({"run", "--model", "kdv_limit", "--T", "50", "--n", "64", "--dt", "1", "--mode", "explicit",
                         "--left", "-10", "--right", "10", "--initial", "gaussian(1000,1)", "--out",
                         scratch("blowup").string()});
  CHECK(r.code == 1);
  std::filesystem::remove_all(scratch("blowup"));
}

TEST_CASE("converge-tau from a study file") {
  const auto dir = scratch("conv");
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "study.toml");
    f << "[model]\nfamily = \"biharmonic\"\n[time]\nT = 0.2\n[study]\ntau_list = [1e-2, 1e-3, 1e-4]\n"
      << "[output]\ndir = \"" << (dir / "out").string() << "\"\n";
  }
  const Result r = call({"converge-tau", "--config", (dir / "study.toml").string()});
  CHECK(r.code == 0);
  const std::string csv = slurp(dir / "out" / "convergence.csv");
  CHECK(csv.rfind("tau,err_q0", 0) == 0);
  CHECK(csv.find("# slope_q0=") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify-residuals and check-operators succeed") {
  const auto dir = scratch("res");
  const Result r = call({"verify-residuals", "--kinds", "odd_m:3", "ks", "--profiles", "3", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(slurp(dir / "residual_report.csv").rfind("kind,tau,equation,max_residual", 0) == 0);
  CHECK(std::filesystem::exists(dir / "residual_scaling.csv"));
  std::filesystem::remove_all(dir);
  CHECK(call({"check-operators", "--order", "3", "--n", "64"}).code == 0);
}
