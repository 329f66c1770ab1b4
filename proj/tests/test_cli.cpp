#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pairlat/io.hpp"

namespace fs = std::filesystem;

namespace {

// Scratch directory removed on scope exit.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name)
      : dir(fs::temp_directory_path() / ("pairlat_cli_" + std::to_string(::getpid()) + "_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

int tool(const std::string& args) {
  const std::string cmd = std::string(PAIRLAT_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t file_count(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator()));
}

}  // namespace

TEST_CASE("spectrum of two sites") {
  Scratch s("n2");
  REQUIRE(tool("spectrum --n 2 --out " + s.dir.string()) == 0);
  const auto csv = pairlat::io::read_csv(s.dir / "spectrum.csv");
  REQUIRE(csv.column("energy").size() == 1);
  CHECK(csv.column("energy")[0] == 0.0);
  CHECK(csv.column("ipr")[0] == 1.0);
  const auto meta = nlohmann::json::parse(slurp(s.dir / "spectrum.json"));
  CHECK(meta["basis_size"] == 1);
  CHECK(meta["params"]["interaction"] == "hard_core");
}

TEST_CASE("spectrum row count follows the basis") {
  Scratch s("n30");
  REQUIRE(tool("spectrum --n 30 --t2 0.4 --out " + s.dir.string()) == 0);
  const auto csv = pairlat::io::read_csv(s.dir / "spectrum.csv");
  CHECK(csv.column("energy").size() == 435);
  const auto meta = nlohmann::json::parse(slurp(s.dir / "spectrum.json"));
  CHECK(meta["symmetry_defect"].get<double>() < 1e-9);
  CHECK(meta["residual"].get<double>() < 1e-9);
}

TEST_CASE("state dump of a selected eigenstate") {
  Scratch s("dump");
  REQUIRE(tool("spectrum --n 12 --t2 0.8 --select-energy -0.3 --select-window 0.5 --dump-state --out " +
               s.dir.string()) == 0);
  const auto state = pairlat::io::read_csv(s.dir / "state.csv");
  CHECK(state.column("n").size() == 66);
  double norm = 0.0;
  for (double a : state.column("psi")) norm += a * a;
  CHECK(norm == doctest::Approx(1.0));
  const auto meta = nlohmann::json::parse(slurp(s.dir / "spectrum.json"));
  CHECK(meta.contains("selected"));
}

TEST_CASE("configuration errors exit 2 without output") {
  Scratch s("bad");
  const auto out = (s.dir / "out").string();
  CHECK(tool("spectrum --n 1 --out " + out) == 2);
  CHECK(tool("spectrum --sigma -1 --out " + out) == 2);
  CHECK(tool("spectrum --no-such-flag --out " + out) == 2);
  CHECK(tool("--n 4") == 2);
  CHECK(tool("spectrum --t2 0.1,0.2 --out " + out) == 2);
  CHECK(tool("parabolas --t2 0.1 --out " + out) == 2);
  CHECK(tool("fig6 --u 5 --n 30 --out " + out) == 2);
  CHECK(tool("spectrum --n 60 --u 3 --out " + out) == 2);
  CHECK(file_count(out) == 0);
  CHECK(tool("--help") == 0);
}

TEST_CASE("toml config with command-line precedence") {
  Scratch s("toml");
  const auto cfg = s.dir / "run.toml";
  std::ofstream(cfg) << "n = 5\nt2 = [0.3]\n";
  const auto a = s.dir / "a";
  const auto b = s.dir / "b";
  REQUIRE(tool("spectrum --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(tool("spectrum --config " + cfg.string() + " --n 6 --out " + b.string()) == 0);
  CHECK(pairlat::io::read_csv(a / "spectrum.csv").column("energy").size() == 10);
  CHECK(pairlat::io::read_csv(b / "spectrum.csv").column("energy").size() == 15);
  const auto meta = nlohmann::json::parse(slurp(b / "spectrum.json"));
  CHECK(meta["params"]["t2"].get<double>() == 0.3);
}

TEST_CASE("finite-U spectrum") {
  Scratch s("u");
  REQUIRE(tool("spectrum --n 4 --u 1000000 --out " + s.dir.string()) == 0);
  const auto meta = nlohmann::json::parse(slurp(s.dir / "spectrum.json"));
  CHECK(meta["params"]["interaction"] == "finite_u");
}

TEST_CASE("fig2c at z = 1 is a single zero entry") {
  Scratch s("fig2c");
  REQUIRE(tool("fig2c --z 1 --t2 0.4 --out " + s.dir.string()) == 0);
  const auto csv = pairlat::io::read_csv(s.dir / "fig2c.csv");
  REQUIRE(csv.header.size() == 2);
  REQUIRE(csv.columns[1].size() == 1);
  CHECK(csv.columns[1][0] == 0.0);
}

TEST_CASE("outputs are byte-identical across runs") {
  Scratch s("det");
  const auto a = s.dir / "a";
  const auto b = s.dir / "b";
  const std::string args = "fig5 --n 20 --t2 0.4,0.8 --svg --out ";
  REQUIRE(tool(args + a.string()) == 0);
  REQUIRE(tool(args + b.string()) == 0);
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
  CHECK(names.size() == file_count(b));
  CHECK(names.size() >= 5);
  for (const auto& n : names) {
    INFO(n);
    CHECK(slurp(a / n) == slurp(b / n));
  }
  CHECK(fs::exists(a / "fig5_t2_0.4_scatter.svg"));
}

TEST_CASE("remaining subcommands write their datasets") {
  Scratch s("all");
  const auto d = s.dir.string();
  CHECK(tool("dos-map --n 12 --t2-steps 3 --out " + d) == 0);
  CHECK(fs::exists(s.dir / "dos_map.csv"));
  CHECK(tool("fig4 --n 10 --t2-steps 3 --svg --out " + d) == 0);
  CHECK(fs::exists(s.dir / "fig4.svg"));
  CHECK(tool("winding --z 0.5 --t2 0.8 --out " + d) == 0);
  const auto w = nlohmann::json::parse(slurp(s.dir / "winding.json"));
  CHECK(w[0]["winding"] == 1);
  CHECK(tool("stark --n0 20,30 --out " + d) == 0);
  CHECK(pairlat::io::read_csv(s.dir / "stark.csv").column("n0").size() == 2);
  CHECK(tool("parabolas --n 31 --out " + d) == 0);
  CHECK(pairlat::io::read_csv(s.dir / "parabolas.csv").column("k").size() == 6);
}
