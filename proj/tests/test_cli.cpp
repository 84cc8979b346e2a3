#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oped/grid.hpp"
#include "oped/radon.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Workdir {
 public:
  Workdir() : dir_(fs::temp_directory_path() / ("oped_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workdir() { fs::remove_all(dir_); }

  [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Result run(const std::string& args) const {
    const std::string out = path("stdout.txt"), err = path("stderr.txt");
    const std::string cmd = std::string("'") + OPED_CLI_PATH + "' " + args + " >'" + out + "' 2>'" + err + "'";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("simulate writes the documented shapes and is deterministic") {
  Workdir w;
  auto r = w.run("simulate -p preset:unit_disk --type II --order 4 -o " + w.path("a.sino"));
  REQUIRE(r.code == 0);
  auto s = oped::read_sinogram(w.path("a.sino"));
  CHECK(s.geometry.views() == 9);
  CHECK(s.geometry.offsets() == 8);
  CHECK(fs::exists(w.path("a.sino.manifest.json")));

  r = w.run("simulate -p preset:unit_disk --type II --order 4 --noise 0 -o " + w.path("b.sino"));
  REQUIRE(r.code == 0);
  CHECK(slurp(w.path("a.sino")) == slurp(w.path("b.sino")));

  r = w.run("simulate -p preset:unit_ball --d 3 --order 2 -o " + w.path("c.sino"));
  REQUIRE(r.code == 0);
  s = oped::read_sinogram(w.path("c.sino"));
  CHECK(s.geometry.views() == 9);
  CHECK(s.geometry.offsets() == 3);

  r = w.run("simulate -p preset:unit_disk --order 4 --noise 0.01 --seed 5 -o " + w.path("n1.sino"));
  REQUIRE(r.code == 0);
  r = w.run("simulate -p preset:unit_disk --order 4 --noise 0.01 --seed 5 -o " + w.path("n2.sino"));
  REQUIRE(r.code == 0);
  CHECK(slurp(w.path("n1.sino")) == slurp(w.path("n2.sino")));
  CHECK(slurp(w.path("n1.sino")) != slurp(w.path("a.sino")));
}

TEST_CASE("manifest records hashes, geometry, timing and metrics") {
  Workdir w;
  REQUIRE(w.run("simulate -p preset:poly_2 --type II --order 2 -o " + w.path("p.sino")).code == 0);
  auto r = w.run("reconstruct -i " + w.path("p.sino") + " -o " + w.path("p.grid") +
                 " --order 2 --type II --resolution 64 --reference preset:poly_2 --diagnostics --pgm " + w.path("p.pgm"));
  REQUIRE(r.code == 0);
  const json summary = json::parse(r.out);
  CHECK(summary.at("metrics").at("linf").get<double>() < 1e-8);
  CHECK(summary.at("diagnostics").at("max_lambda").get<double>() >= 1.0);
  CHECK(summary.at("diagnostics").contains("runtime_seconds"));

  const json m = json::parse(slurp(w.path("p.grid.manifest.json")));
  CHECK(m.at("tool") == "oped");
  CHECK(m.at("command") == "reconstruct");
  CHECK(m.at("command_line").size() > 3);
  CHECK(m.at("geometry").at("views") == 5);
  CHECK(m.contains("timing"));
  CHECK(m.at("metrics").at("error").at("linf").get<double>() < 1e-8);
  const json input = m.at("inputs").at(0);
  const std::string sha = input.at("sha256");
  CHECK(sha.size() == 64);
  const json sim = json::parse(slurp(w.path("p.sino.manifest.json")));
  CHECK(sim.at("outputs").at(0).at("sha256") == sha);
  CHECK(fs::exists(w.path("p.pgm")));
  const auto grid = oped::read_grid(w.path("p.grid"));
  CHECK(grid.resolution == 64);
}

TEST_CASE("svd algorithm agrees with oped at matched orders") {
  Workdir w;
  REQUIRE(w.run("simulate -p preset:shepp_logan --type gauss --order 12 -o " + w.path("s.sino")).code == 0);
  auto r = w.run("reconstruct -i " + w.path("s.sino") + " -o " + w.path("o.grid") + " --resolution 48");
  REQUIRE(r.code == 0);
  r = w.run("reconstruct --algorithm svd --truncation 12 --compare -i " + w.path("s.sino") + " -o " + w.path("v.grid") +
            " --resolution 48");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("comparison").at("max_delta").get<double>() < 1e-6);
  r = w.run("svd-reconstruct --truncation 12 -i " + w.path("s.sino") + " -o " + w.path("v2.grid") + " --resolution 48");
  REQUIRE(r.code == 0);
  r = w.run("report -g " + w.path("v2.grid") + " --reference-grid " + w.path("o.grid"));
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("linf").get<double>() < 1e-6);
}

TEST_CASE("report metrics") {
  Workdir w;
  REQUIRE(w.run("simulate -p preset:shepp_logan --order 16 -o " + w.path("a.sino")).code == 0);
  REQUIRE(w.run("simulate -p preset:shepp_logan --order 64 -o " + w.path("b.sino")).code == 0);
  REQUIRE(w.run("reconstruct -i " + w.path("a.sino") + " -o " + w.path("a.grid") + " --resolution 96").code == 0);
  REQUIRE(w.run("reconstruct -i " + w.path("b.sino") + " -o " + w.path("b.grid") + " --resolution 96").code == 0);
  auto r = w.run("report -g " + w.path("a.grid") + " --reference-grid " + w.path("a.grid"));
  REQUIRE(r.code == 0);
  json m = json::parse(r.out);
  CHECK(m.at("l2") == 0.0);
  CHECK(m.at("linf") == 0.0);
  const double l2_16 = json::parse(w.run("report -g " + w.path("a.grid") + " --reference preset:shepp_logan").out).at("l2");
  r = w.run("report -g " + w.path("b.grid") + " --reference preset:shepp_logan -o " + w.path("b.json"));
  REQUIRE(r.code == 0);
  m = json::parse(r.out);
  CHECK(m.at("l2").get<double>() < l2_16);
  CHECK(m.at("component_mean_error").size() == 10);
  CHECK(r.out == w.run("report -g " + w.path("b.grid") + " --reference preset:shepp_logan").out);

  oped::ImageGrid zero = oped::ImageGrid::make(2, 32);
  oped::write_grid(zero, w.path("zero.grid"));
  r = w.run("report -g " + w.path("zero.grid") + " --reference preset:unit_disk");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("linf") == 1.0);
  r = w.run("report -g " + w.path("zero.grid") + " --reference-grid " + w.path("a.grid"));
  CHECK(r.code == 2);
}

TEST_CASE("svd-verify and diagnose emit JSON") {
  Workdir w;
  auto r = w.run("svd-verify --d 2 --n-max 3 --lattice 8");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("max_pair_residual").get<double>() < 1e-7);
  CHECK(j.at("gamma_table").size() == 4);
  CHECK(j.at("gram_residuals").contains("ball"));

  r = w.run("diagnose --type II --order 4 --resolution 32");
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j.at("max_lambda").get<double>() > 1.0);
  CHECK(j.at("order") == 8);
}

TEST_CASE("exit codes") {
  Workdir w;
  auto r = w.run("reconstruct -i " + w.path("missing.sino") + " -o " + w.path("x.grid"));
  CHECK(r.code == 1);
  CHECK(r.err.find("missing.sino") != std::string::npos);

  REQUIRE(w.run("simulate -p preset:unit_disk --type II --order 4 -o " + w.path("a.sino")).code == 0);
  r = w.run("reconstruct -i " + w.path("a.sino") + " -o " + w.path("x.grid") + " --order 5");
  CHECK(r.code == 2);
  r = w.run("reconstruct -i " + w.path("a.sino") + " -o " + w.path("x.grid") + " --type I");
  CHECK(r.code == 2);
  r = w.run("reconstruct -i " + w.path("a.sino") + " -o " + w.path("x.grid") + " --type 3d");
  CHECK(r.code == 2);
  r = w.run("reconstruct -i " + w.path("a.sino") + " -o " + w.path("x.grid") + " --algorithm svd --truncation 8");
  CHECK(r.code == 2);
  CHECK(!fs::exists(w.path("x.grid")));

  std::string bytes = slurp(w.path("a.sino"));
  bytes[3] = '!';
  std::ofstream(w.path("bad.sino"), std::ios::binary) << bytes;
  r = w.run("reconstruct -i " + w.path("bad.sino") + " -o " + w.path("x.grid"));
  CHECK(r.code == 2);

  std::ofstream(w.path("bad.json")) << "{\"d\": 2, \"components\": [{\"center\": [0.9, 0], \"axes\": [0.5, 0.5]}]}";
  r = w.run("simulate -p " + w.path("bad.json") + " --order 2 -o " + w.path("y.sino"));
  CHECK(r.code == 2);
  r = w.run("simulate -p preset:unit_disk --order 2 --noise 0.1 -o " + w.path("y.sino"));
  CHECK(r.code == 2);
  r = w.run("simulate -p preset:unit_disk --d 3 --order 2 -o " + w.path("y.sino"));
  CHECK(r.code == 2);
  r = w.run("frobnicate");
  CHECK(r.code == 2);
  r = w.run("simulate -p preset:unit_disk --order 2 -o /nonexistent_dir/y.sino");
  CHECK(r.code == 1);
  r = w.run("--help");
  CHECK(r.code == 0);
}

TEST_CASE("OPED_THREADS is honoured as a fallback") {
  Workdir w;
  REQUIRE(w.run("simulate -p preset:shepp_logan --order 8 -o " + w.path("a.sino")).code == 0);
  ::setenv("OPED_THREADS", "3", 1);
  auto r = w.run("reconstruct -i " + w.path("a.sino") + " -o " + w.path("t3.grid") + " --resolution 48");
  ::unsetenv("OPED_THREADS");
  REQUIRE(r.code == 0);
  r = w.run("reconstruct --threads 1 -i " + w.path("a.sino") + " -o " + w.path("t1.grid") + " --resolution 48");
  REQUIRE(r.code == 0);
  CHECK(json::parse(slurp(w.path("t3.grid.manifest.json"))).at("parameters").at("threads") == 3);
  CHECK(slurp(w.path("t3.grid")) == slurp(w.path("t1.grid")));
}
