#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "gaze/error.hpp"
#include "gaze/model_io.hpp"
#include "gaze/pipeline.hpp"
#include "gaze/rng.hpp"
#include "gaze/synthgen.hpp"

using namespace gaze;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "gazekit_tests";
  fs::create_directories(dir);
  return dir / name;
}

Model small_model(int n_trees) {
  GenConfig c;
  c.n_subjects = 2;
  c.frames_per_glance = 12;
  c.glances_per_region = 1;
  c.seed = 404;
  const Dataset d = generate(c);
  EvalParams params;
  params.forest.n_trees = n_trees;
  params.forest.max_depth = 10;
  params.rfe_forest_size = 8;
  params.rfe_max_depth = 5;
  params.rfe_sample_cap_per_class = 24;
  return train_model(d, RegionScheme::six(), params, 9);
}

bool identical_predictions(const Model& a, const Model& b, int n_inputs) {
  Rng rng(77);
  for (int i = 0; i < n_inputs; ++i) {
    std::vector<double> x(a.plan.feature_len());
    for (double& v : x) v = rng.uniform(-2, 2);
    const ProbVector pa = a.forest.predict_proba(x);
    const ProbVector pb = b.forest.predict_proba(x);
    if (pa != pb) return false;  // bit-identical, element-wise
  }
  return true;
}

}  // namespace

TEST_CASE("model round-trip: bit-identical probability vectors") {
  const Model model = small_model(10);
  const auto path = temp_file("model.gzkm");
  save_model(model, path);
  const Model loaded = load_model(path);

  CHECK(loaded.scheme.mode == model.scheme.mode);
  CHECK(loaded.context_window == model.context_window);
  CHECK(loaded.plan == model.plan);
  REQUIRE(loaded.contexts.size() == model.contexts.size());
  for (std::size_t i = 0; i < loaded.contexts.size(); ++i) {
    CHECK(loaded.contexts[i].subject_id == model.contexts[i].subject_id);
    CHECK(loaded.contexts[i].center_x == model.contexts[i].center_x);
    CHECK(loaded.contexts[i].width == model.contexts[i].width);
    CHECK(loaded.contexts[i].window_frames == model.contexts[i].window_frames);
  }
  CHECK(loaded.forest.importances == model.forest.importances);
  CHECK(identical_predictions(model, loaded, 100));

  // Save-load-save produces identical bytes.
  const auto path2 = temp_file("model2.gzkm");
  save_model(loaded, path2);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  const std::string b1((std::istreambuf_iterator<char>(f1)),
                       std::istreambuf_iterator<char>());
  const std::string b2((std::istreambuf_iterator<char>(f2)),
                       std::istreambuf_iterator<char>());
  CHECK(b1 == b2);
}

TEST_CASE("full-size ensemble round-trips with identical predictions") {
  const Model model = small_model(1000);
  const auto path = temp_file("big.gzkm");
  save_model(model, path);
  const Model loaded = load_model(path);
  CHECK(loaded.forest.trees.size() == 1000);
  CHECK(identical_predictions(model, loaded, 100));
}

TEST_CASE("truncated and corrupted files fail to load") {
  const Model model = small_model(4);
  const auto path = temp_file("damage.gzkm");
  save_model(model, path);

  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  in.close();

  SUBCASE("truncation") {
    const auto cut = temp_file("cut.gzkm");
    std::ofstream out(cut, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    out.close();
    CHECK_THROWS_AS(load_model(cut), Error);
  }
  SUBCASE("bit flip") {
    bytes[bytes.size() / 3] ^= 0x40;
    const auto flip = temp_file("flip.gzkm");
    std::ofstream out(flip, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    CHECK_THROWS_AS(load_model(flip), Error);
  }
  SUBCASE("wrong magic") {
    bytes[0] = 'X';
    const auto bad = temp_file("magic.gzkm");
    std::ofstream out(bad, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    CHECK_THROWS_AS(load_model(bad), Error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_model(temp_file("nonexistent.gzkm")), Error);
  }
}
