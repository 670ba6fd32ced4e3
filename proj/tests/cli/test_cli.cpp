#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

#ifndef GAZEKIT_CLI_PATH
#define GAZEKIT_CLI_PATH "gazekit"
#endif

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "gazekit_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GAZEKIT_CLI_PATH) + " " + args + " >> " +
                          (work_dir() / "cli.log").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) fields.push_back(tok);
  return fields;
}

// A separable stream: full head coupling, no per-subject offsets, low noise.
const fs::path& separable_frames() {
  static const fs::path path = [] {
    const fs::path p = work_dir() / "separable.frames";
    REQUIRE(run_cli("gen --subjects 2 --frames-per-glance 20 "
                    "--glances-per-region 2 --kappa 1 "
                    "--subject-offset-sigma 0 --noise-sigma 0.3 --seed 21 "
                    "--out " +
                    p.string()) == 0);
    return p;
  }();
  return path;
}

const fs::path& separable_model() {
  static const fs::path model = [] {
    const fs::path m = work_dir() / "separable.gzkm";
    REQUIRE(run_cli("train --frames " + separable_frames().string() +
                    " --out " + m.string() +
                    " --seed 5 --trees 60 --depth 20 --rfe-trees 8 "
                    "--rfe-cap 40") == 0);
    return m;
  }();
  return model;
}

}  // namespace

TEST_CASE("gen with the same seed writes byte-identical files") {
  const fs::path a = work_dir() / "det_a.frames";
  const fs::path b = work_dir() / "det_b.frames";
  REQUIRE(run_cli("gen --subjects 2 --frames-per-glance 5 "
                  "--glances-per-region 1 --seed 7 --out " +
                  a.string()) == 0);
  REQUIRE(run_cli("gen --subjects 2 --frames-per-glance 5 "
                  "--glances-per-region 1 --seed 7 --out " +
                  b.string()) == 0);
  const std::string bytes = file_bytes(a);
  CHECK_FALSE(bytes.empty());
  CHECK(bytes == file_bytes(b));

  const fs::path c = work_dir() / "det_c.frames";
  REQUIRE(run_cli("gen --subjects 2 --frames-per-glance 5 "
                  "--glances-per-region 1 --seed 8 --out " +
                  c.string()) == 0);
  CHECK(bytes != file_bytes(c));
}

TEST_CASE("eval and train without --seed exit nonzero") {
  CHECK(run_cli("eval --frames " + separable_frames().string() +
                " --protocol global --out-dir " +
                (work_dir() / "noseed").string()) != 0);
  CHECK(run_cli("train --frames " + separable_frames().string() + " --out " +
                (work_dir() / "noseed.gzkm").string()) != 0);
}

TEST_CASE("unknown flags, bad files and bad values exit nonzero") {
  CHECK(run_cli("gen --frobnicate 3 --out x.frames") != 0);
  CHECK(run_cli("train --frames /nonexistent.frames --out " +
                (work_dir() / "x.gzkm").string() + " --seed 1") != 0);
  CHECK(run_cli("predict --model /nonexistent.gzkm --frames " +
                separable_frames().string() + " --out " +
                (work_dir() / "x.csv").string()) != 0);
  CHECK(run_cli("eval --frames " + separable_frames().string() +
                " --protocol sideways --seed 1 --out-dir " +
                work_dir().string()) != 0);
  CHECK(run_cli("bench --model /nonexistent.gzkm --frames " +
                separable_frames().string()) != 0);
}

TEST_CASE("train then predict at threshold 1 on separable training frames") {
  const fs::path log = work_dir() / "predict.csv";
  REQUIRE(run_cli("predict --model " + separable_model().string() +
                  " --frames " + separable_frames().string() +
                  " --threshold 1 --out " + log.string()) == 0);

  const auto lines = read_lines(log);
  REQUIRE_FALSE(lines.empty());
  CHECK(lines[0] == "subject,frame,true,predicted,confidence,decided");
  // One log line per input frame: 2 subjects x 6 regions x 2 x 20 frames.
  CHECK(lines.size() == 1 + 2 * 6 * 2 * 20);

  std::size_t correct = 0, total = 0, decided = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv(lines[i]);
    REQUIRE(f.size() == 6);
    total += 1;
    decided += f[5] == "1" ? 1 : 0;
    correct += f[2] == f[3] ? 1 : 0;
  }
  CHECK(decided == total);  // threshold 1 never abstains
  CHECK(correct == total);  // separable training frames classify perfectly
}

TEST_CASE("predict rejects thresholds below 1") {
  CHECK(run_cli("predict --model " + separable_model().string() +
                " --frames " + separable_frames().string() +
                " --threshold 0.5 --out " +
                (work_dir() / "bad.csv").string()) != 0);
}

TEST_CASE("eval writes report, confusion and optional artifacts") {
  const fs::path out = work_dir() / "evalout";
  REQUIRE(run_cli("eval --frames " + separable_frames().string() +
                  " --protocol global --scheme six --reps 2 --seed 13 "
                  "--trees 20 --rfe-trees 6 --rfe-cap 30 --train-cap 30 "
                  "--log --out-dir " +
                  out.string()) == 0);
  CHECK(fs::exists(out / "global_six.report"));
  CHECK(fs::exists(out / "global_six_confusion.csv"));
  CHECK(fs::exists(out / "global_six_decisions.csv"));
  CHECK(fs::exists(out / "global_six_subjects.svg"));

  const auto lines = read_lines(out / "global_six.report");
  REQUIRE_FALSE(lines.empty());
  CHECK(lines[0] == "gazekit-report v1");
  bool has_accuracy = false;
  for (const auto& line : lines) {
    if (line.rfind("mean_accuracy ", 0) == 0) has_accuracy = true;
  }
  CHECK(has_accuracy);

  const auto confusion = read_lines(out / "global_six_confusion.csv");
  REQUIRE(confusion.size() == 7);  // header + six class rows

  // The reported mean accuracy is recomputable from the decision log.
  double reported = -1.0;
  for (const auto& line : lines) {
    if (line.rfind("mean_accuracy ", 0) == 0) {
      reported = std::stod(line.substr(14));
    }
  }
  std::map<int, std::pair<std::size_t, std::size_t>> per_rep;  // decided, ok
  const auto log_lines = read_lines(out / "global_six_decisions.csv");
  for (std::size_t i = 1; i < log_lines.size(); ++i) {
    const auto f = split_csv(log_lines[i]);
    REQUIRE(f.size() == 7);
    if (f[6] != "1") continue;
    auto& [decided, ok] = per_rep[std::stoi(f[0])];
    decided += 1;
    ok += f[3] == f[4] ? 1 : 0;
  }
  REQUIRE(per_rep.size() == 2);
  double mean = 0.0;
  for (const auto& [rep, stats] : per_rep) {
    mean += double(stats.second) / double(stats.first);
  }
  mean /= double(per_rep.size());
  CHECK(mean == doctest::Approx(reported).epsilon(1e-12));
}

TEST_CASE("sweep emits a CSV curve over a user-eligible stream") {
  const fs::path frames = work_dir() / "user.frames";
  REQUIRE(run_cli("gen --subjects 2 --frames-per-glance 90 "
                  "--glances-per-region 4 --seed 23 --out " +
                  frames.string()) == 0);
  const fs::path out = work_dir() / "sweepout";
  REQUIRE(run_cli("sweep --frames " + frames.string() +
                  " --scheme six --thresholds 1,1.5,2,4 --reps 1 --seed 3 "
                  "--trees 20 --rfe-trees 6 --rfe-cap 40 --out-dir " +
                  out.string()) == 0);
  const auto lines = read_lines(out / "sweep.csv");
  REQUIRE(lines.size() == 5);  // header + 4 thresholds
  CHECK(lines[0] ==
        "threshold,mean_accuracy,std_accuracy,accuracy_defined,"
        "mean_decision_period_s,decision_fraction");
  double prev = 2.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv(lines[i]);
    REQUIRE(f.size() == 6);
    const double frac = std::stod(f[5]);
    CHECK(frac <= prev);
    prev = frac;
  }
  CHECK(fs::exists(out / "sweep.svg"));

  CHECK(run_cli("sweep --frames " + frames.string() +
                " --thresholds 2,1 --reps 1 --seed 3 --out-dir " +
                out.string()) != 0);
}

TEST_CASE("bench prints the stage table and respects iteration bounds") {
  CHECK(run_cli("bench --model " + separable_model().string() + " --frames " +
                separable_frames().string() + " --iterations 150") == 0);
  CHECK(run_cli("bench --model " + separable_model().string() + " --frames " +
                separable_frames().string() + " --iterations 0") != 0);
}
