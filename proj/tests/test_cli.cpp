#include <filesystem>
#include <fstream>
#include <sstream>

#include "bubbles/families.hpp"
#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bubbles;
using namespace bubbles::cli;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::filesystem::path scratch_dir() {
  const auto d = std::filesystem::temp_directory_path() / "bubbles_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("complex grammar") {
  CHECK(parse_complex("1.5") == cplx(1.5, 0.0));
  CHECK(parse_complex("-2") == cplx(-2.0, 0.0));
  CHECK(parse_complex("0.06+1.31i") == cplx(0.06, 1.31));
  CHECK(parse_complex("1e-3-2.5E+1i") == cplx(1e-3, -25.0));
  CHECK(parse_complex("-.5-i") == cplx(-0.5, -1.0));
  CHECK(parse_complex("2i") == cplx(0.0, 2.0));
  CHECK(parse_complex("-i") == cplx(0.0, -1.0));
  CHECK(parse_complex("+3.") == cplx(3.0, 0.0));
  for (const char* bad : {"", "i2", "1+2", "1 + 2i", "1+2j", "abc", "1e", "--1", "1+-2i"}) {
    CHECK_THROWS_AS(parse_complex(bad), std::invalid_argument);
  }
}

TEST_CASE("families listing") {
  const auto r = call({"families"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["families"].size() == list_families().size());
  CHECK(j["families"][0]["name"] == "power");
  CHECK(j["aliases"]["g"] == "g_cubic");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"paint"}).code == 2);
  CHECK(call({"render"}).code == 2);
  CHECK(call({"render", "--family", "power", "--res", "8"}).code == 2);
  CHECK(call({"render", "--family", "power", "--budget", "0"}).code == 2);
  CHECK(call({"reproduce-figure", "7"}).code == 2);

  auto r = call({"render", "--family", "g", "--a", "1+x"});
  CHECK(r.code == 2);
  CHECK(r.err.find("stage 'family', key 'a'") != std::string::npos);
  r = call({"render", "--family", "g", "--a", "0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("key 'a'") != std::string::npos);
  r = call({"render", "--family", "nope"});
  CHECK(r.code == 2);
  CHECK(r.err.find("key 'family'") != std::string::npos);
  r = call({"render", "--family", "power", "--lambda", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("key 'lambda'") != std::string::npos);
  r = call({"render", "--family", "power", "--center", "1+2", "--width", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("key 'center'") != std::string::npos);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("runtime errors exit with 1") {
  auto r = call({"solve", "--p", "3", "--v0", "40+40i", "--max-iters", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("stage 'solve', key 'v0'") != std::string::npos);
  r = call({"render", "--family", "power", "--res", "16", "--out", "/nonexistent-dir/x.ppm"});
  CHECK(r.code == 1);
  CHECK(r.err.find("stage 'output', key 'out'") != std::string::npos);
  r = call({"families", "--report", "/nonexistent-dir/r.json"});
  CHECK(r.code == 1);
  CHECK(r.err.find("key 'report'") != std::string::npos);
}

TEST_CASE("criterion report") {
  const auto r = call({"criterion", "--family", "cubic_bubble", "--a", "0.06+1.31i", "--res", "512"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["verdict"]["topology_class"] == "CantorBubbles");
  CHECK(j["verdict"]["all_hypotheses_hold"] == true);
  CHECK(j["config"]["family"] == "cubic_bubble");
  CHECK(j["config"]["params"]["a"]["re"] == 0.06);
  CHECK(j["config"]["window"]["resolution"] == 512);
  CHECK_FALSE(j["config"].contains("workers"));
}

TEST_CASE("solve report") {
  const auto r = call({"solve", "--p", "2", "--v0", "2.5"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(std::abs(j["parameter"]["re"].get<double>() - 2.6180339887) < 1e-9);
  CHECK(j["parameter"]["im"] == 0.0);
  CHECK(j["cycle"].size() == 2);
  CHECK(j["other_critical_fate"]["kind"] == "Escape");
  CHECK(r.out.find("2.618033988749895") != std::string::npos);
}

TEST_CASE("reports and images do not depend on the worker count") {
  const auto dir = scratch_dir();
  std::vector<std::string> outputs;
  for (const char* workers : {"1", "8"}) {
    const auto img = (dir / "det.ppm").string();
    const auto rep = (dir / "det.json").string();
    const auto r = call({"criterion", "--family", "devaney_marotta", "--center", "0", "--width", "3", "--res", "200",
                         "--workers", workers, "--out", img, "--report", rep});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    outputs.push_back(slurp(img) + slurp(rep));
  }
  CHECK(outputs[0] == outputs[1]);
  CHECK(outputs[0].size() > 200 * 200 * 3);
}

TEST_CASE("config file with flag overrides") {
  const auto dir = scratch_dir();
  const auto cfg = (dir / "job.toml").string();
  {
    std::ofstream f(cfg);
    f << "[render]\nfamily = \"quadratic\"\nc = \"-1\"\nres = 32\nwidth = 4\ncenter = \"0\"\n";
  }
  auto r = call({"--config", cfg, "render"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["config"]["window"]["resolution"] == 32);
  CHECK(j["config"]["params"]["c"]["re"] == -1.0);
  r = call({"render", "--config", cfg, "--res", "48"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["config"]["window"]["resolution"] == 48);
  CHECK(call({"--config", (dir / "missing.toml").string(), "render"}).code == 2);
}

TEST_CASE("fitted window when none is given") {
  const auto r = call({"render", "--family", "power", "--res", "64"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["config"]["window"]["width"].get<double>() < 4.0);
  CHECK(j["config"]["window"]["width"].get<double>() > 2.0);
}

TEST_CASE("dimension and separation commands") {
  auto r = call({"dimension", "--family", "power", "--center", "0", "--width", "3", "--res", "1024"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["slope"].get<double>() > 0.9);
  CHECK(j["slope"].get<double>() < 1.1);
  CHECK(j["config"]["k_max"] == 7);
  // 64 pixels leave a single scale with 8-pixel boxes.
  r = call({"dimension", "--family", "power", "--res", "64"});
  CHECK(r.code == 1);
  CHECK(r.err.find("stage 'dimension', key 'k-max'") != std::string::npos);

  r = call({"separation", "--family", "cubic_bubble", "--res", "512"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["curve_count"].get<int>() >= 5);
  CHECK(j["min_delta_largest"].get<double>() > 0.0);
  CHECK(j["critical_accumulation_distance"].get<double>() > 0.0);
  CHECK(j["geometry"][0]["bounded_turning"].get<double>() >= 1.0);
}

TEST_CASE("figure presets") {
  const auto dir = scratch_dir();
  const auto r = call({"reproduce-figure", "5", "--res", "128", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  REQUIRE(j["panels"].size() == 2);
  CHECK(j["panels"][0]["family"] == "g_cubic");
  CHECK(std::filesystem::file_size(dir / "figure5_a.ppm") == std::string("P6\n128 128\n255\n").size() + 128 * 128 * 3);
  CHECK(std::filesystem::exists(dir / "figure5_b.ppm"));
}
