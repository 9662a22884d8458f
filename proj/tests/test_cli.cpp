// End-to-end checks of the command-line tool: exit codes, artifact layout,
// and byte-level determinism of outputs under a fixed seed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#ifndef BRLGAN_CLI_PATH
#error "BRLGAN_CLI_PATH must point at the brlgan binary"
#endif

namespace {

namespace fs = std::filesystem;

const fs::path kWork = "cli_test_work";

int run_cli(const std::string& args, std::string* stdout_text = nullptr) {
  const fs::path out = kWork / "stdout.txt";
  const std::string cmd =
      std::string(BRLGAN_CLI_PATH) + " " + args + " > " + out.string() + " 2> /dev/null";
  const int rc = std::system(cmd.c_str());
  if (stdout_text) {
    std::ifstream is(out);
    std::stringstream ss;
    ss << is.rdbuf();
    *stdout_text = ss.str();
  }
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// metrics.csv with the wall-clock column removed; timing is the one
/// telemetry field exempt from byte-identity.
std::string strip_seconds_column(const std::string& csv) {
  std::stringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    const auto last_comma = line.rfind(',');
    out += line.substr(0, last_comma) + "\n";
  }
  return out;
}

std::vector<std::string> checkpoint_files(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

struct WorkDir {
  WorkDir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
  ~WorkDir() { fs::remove_all(kWork); }
};

const std::string kTinyTrainFlags =
    " --epochs 2 --batch 4 --per-class 3 --colors 2 --shapes square --size 16"
    " --rank 2 --depth 1 --embed-dim 4 --quiet";

}  // namespace

TEST_CASE("version and usage errors") {
  WorkDir wd;
  std::string out;
  CHECK(run_cli("--version", &out) == 0);
  CHECK(out.find("brlgan") != std::string::npos);
  CHECK(run_cli("verify --no-such-flag") == 2);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("train") == 2);  // missing required --out
}

TEST_CASE("verify subcommand reports and exits by pass/fail") {
  WorkDir wd;
  std::string out;
  const int rc = run_cli("verify --dims 8x4x6 --trials 100 --seed 7 --out " +
                             (kWork / "v").string(),
                         &out);
  CHECK(rc == 0);
  CHECK(out.find("\"pass\":true") != std::string::npos);
  CHECK(out.find("\"feature_ranks\":[2,2,2,2,2,2]") != std::string::npos);
  CHECK(fs::exists(kWork / "v" / "report.json"));

  // An impossible tolerance must flip the exit code to 1.
  CHECK(run_cli("verify --dims 4x3x2 --trials 5 --seed 7 --tol 1e-30") == 1);
}

TEST_CASE("verify output is byte-identical across reruns") {
  WorkDir wd;
  REQUIRE(run_cli("verify --trials 20 --seed 11 --out " + (kWork / "a").string()) == 0);
  REQUIRE(run_cli("verify --trials 20 --seed 11 --out " + (kWork / "b").string()) == 0);
  CHECK(slurp(kWork / "a" / "report.json") == slurp(kWork / "b" / "report.json"));
  REQUIRE(run_cli("verify --trials 20 --seed 12 --out " + (kWork / "c").string()) == 0);
  CHECK(slurp(kWork / "a" / "report.json") != slurp(kWork / "c" / "report.json"));
}

TEST_CASE("gradcheck subcommand emits per-layer csv") {
  WorkDir wd;
  std::string out;
  const int rc =
      run_cli("gradcheck --layer brl --draws 3 --seed 3 --out " + (kWork / "g").string(), &out);
  CHECK(rc == 0);
  CHECK(out.rfind("layer,max_rel_err\nbrl,", 0) == 0);
  CHECK(slurp(kWork / "g" / "gradcheck.csv") == out);

  std::string out2;
  REQUIRE(run_cli("gradcheck --layer brl --draws 3 --seed 3", &out2) == 0);
  CHECK(out == out2);

  CHECK(run_cli("gradcheck --layer bogus") == 2);
}

TEST_CASE("train with zero epochs writes an init checkpoint and empty metrics") {
  WorkDir wd;
  const std::string out_dir = (kWork / "t0").string();
  REQUIRE(run_cli("train --out " + out_dir + " --epochs 0 --colors 2 --quiet --seed 5") == 0);
  CHECK(slurp(kWork / "t0" / "metrics.csv") == "epoch,loss_d,loss_g,seconds\n");
  CHECK(fs::exists(kWork / "t0" / "checkpoint" / "manifest.json"));
}

TEST_CASE("train then sample and eval are deterministic end to end") {
  WorkDir wd;
  const std::string run_a = (kWork / "ra").string();
  const std::string run_b = (kWork / "rb").string();
  REQUIRE(run_cli("train --out " + run_a + kTinyTrainFlags + " --seed 9") == 0);
  REQUIRE(run_cli("train --out " + run_b + kTinyTrainFlags + " --seed 9") == 0);

  // Checkpoints byte-identical.
  const auto files = checkpoint_files(run_a + "/checkpoint");
  CHECK(files == checkpoint_files(run_b + "/checkpoint"));
  for (const auto& name : files) {
    CHECK(slurp(fs::path(run_a) / "checkpoint" / name) ==
          slurp(fs::path(run_b) / "checkpoint" / name));
  }

  // Metrics identical apart from wall-clock telemetry.
  CHECK(strip_seconds_column(slurp(fs::path(run_a) / "metrics.csv")) ==
        strip_seconds_column(slurp(fs::path(run_b) / "metrics.csv")));

  // sample: same seed, same bytes.
  REQUIRE(run_cli("sample --checkpoint " + run_a + "/checkpoint --out " +
                  (kWork / "sa").string() + " --seed 4") == 0);
  REQUIRE(run_cli("sample --checkpoint " + run_a + "/checkpoint --out " +
                  (kWork / "sb").string() + " --seed 4") == 0);
  CHECK(slurp(kWork / "sa" / "grid.ppm") == slurp(kWork / "sb" / "grid.ppm"));

  // eval: same seed, same csv and grids.
  REQUIRE(run_cli("eval --checkpoint " + run_a + "/checkpoint --out " +
                  (kWork / "ea").string() + " --seed 4") == 0);
  REQUIRE(run_cli("eval --checkpoint " + run_a + "/checkpoint --out " +
                  (kWork / "eb").string() + " --seed 4") == 0);
  CHECK(slurp(kWork / "ea" / "is_score.csv") == slurp(kWork / "eb" / "is_score.csv"));
  CHECK(slurp(kWork / "ea" / "grid_0_d2.ppm") == slurp(kWork / "eb" / "grid_0_d2.ppm"));

  const std::string csv = slurp(kWork / "ea" / "is_score.csv");
  CHECK(csv.rfind("method,d,mean,std\nbrl,2,", 0) == 0);
}

TEST_CASE("config file keys are overridden by flags") {
  WorkDir wd;
  {
    std::ofstream cfg(kWork / "train.cfg");
    cfg << "epochs=1\ncolors=2\nshapes=square\nper-class=2\nbatch=2\nquiet=true\n"
        << "rank=2\ndepth=1\nembed-dim=4\n";
  }
  const std::string out_dir = (kWork / "cfgrun").string();
  REQUIRE(run_cli("train --out " + out_dir + " --config " + (kWork / "train.cfg").string() +
                  " --epochs 0 --seed 2") == 0);
  // --epochs 0 wins over epochs=1 from the file: metrics body is empty.
  CHECK(slurp(fs::path(out_dir) / "metrics.csv") == "epoch,loss_d,loss_g,seconds\n");
}
