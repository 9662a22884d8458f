#include <cmath>
#include <cstdio>
#include <set>

#include "brl/classifier.hpp"
#include "brl/dataset.hpp"
#include "brl/error.hpp"
#include "brl/image_io.hpp"
#include "brl/metrics.hpp"
#include "brl/nn_kernels.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace brl;
using namespace brl::data;

namespace {

ShapeWorldSpec two_class_spec(double noise = 0.0) {
  ShapeWorldSpec spec = ShapeWorldSpec::defaults();
  spec.palette = {{1.0, -0.8, -0.8}, {-0.7, -0.7, 1.0}};
  spec.shapes = {Shape::kSquare};
  spec.per_class = 20;
  spec.noise_std = noise;
  return spec;
}

}  // namespace

TEST_CASE("dataset sample counting") {
  ShapeWorldSpec spec = ShapeWorldSpec::defaults();  // 4 colors x 2 shapes
  spec.per_class = 10;
  Rng rng(1);
  const gan::Dataset data = generate_dataset(spec, rng);
  CHECK(data.num_classes == 8);
  CHECK(data.samples.size() == 80);
}

TEST_CASE("noiseless images sit exactly at palette and background levels") {
  ShapeWorldSpec spec = ShapeWorldSpec::defaults();
  spec.noise_std = 0.0;
  spec.per_class = 1;
  Rng rng(2);
  const gan::Dataset data = generate_dataset(spec, rng);
  std::set<double> allowed = {-0.9};
  for (const auto& c : spec.palette) {
    for (double v : c) allowed.insert(v);
  }
  for (const auto& s : data.samples) {
    for (std::size_t i = 0; i < s.image.size(); ++i) {
      CHECK(allowed.count(s.image[i]) == 1);
    }
  }
}

TEST_CASE("dataset generation is byte-deterministic in the seed") {
  const ShapeWorldSpec spec = ShapeWorldSpec::defaults();
  Rng r1(42), r2(42);
  const gan::Dataset a = generate_dataset(spec, r1);
  const gan::Dataset b = generate_dataset(spec, r2);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(bits_equal(a.samples[i].image, b.samples[i].image));
    CHECK(a.samples[i].match_id == b.samples[i].match_id);
    CHECK(a.samples[i].edit_id == b.samples[i].edit_id);
    CHECK(a.samples[i].mismatch_id == b.samples[i].mismatch_id);
  }
}

TEST_CASE("editing targets keep the shape and change the color") {
  const ShapeWorldSpec spec = ShapeWorldSpec::defaults();
  Rng rng(3);
  const gan::Dataset data = generate_dataset(spec, rng);
  for (const auto& s : data.samples) {
    CHECK(shape_of(spec, s.edit_id) == shape_of(spec, s.match_id));
    CHECK(color_of(spec, s.edit_id) != color_of(spec, s.match_id));
    CHECK(s.mismatch_id != s.match_id);
  }
}

TEST_CASE("single-color palettes are rejected") {
  ShapeWorldSpec spec = ShapeWorldSpec::defaults();
  spec.palette = {{1.0, -0.8, -0.8}};
  Rng rng(4);
  CHECK_THROWS_AS(generate_dataset(spec, rng), ConfigError);
}

TEST_CASE("the three shapes have distinct silhouettes") {
  ShapeWorldSpec spec = ShapeWorldSpec::defaults();
  spec.shapes = {Shape::kSquare, Shape::kCircle, Shape::kTriangle};
  std::set<int> areas;
  for (std::size_t sh = 0; sh < 3; ++sh) {
    const Tensor img = render_class(spec, class_id(spec, 0, sh));
    int area = 0;
    for (std::size_t y = 0; y < spec.image_size; ++y) {
      for (std::size_t x = 0; x < spec.image_size; ++x) {
        if (img(y, x, 0) != -0.9) ++area;
      }
    }
    CHECK(area > 8);
    areas.insert(area);
  }
  CHECK(areas.size() == 3);  // no two shapes cover the same pixel count
}

// ---- classifier ----------------------------------------------------------------

TEST_CASE("classifier reaches the accuracy contract on a separable task") {
  Rng rng(5);
  const gan::Dataset data = generate_dataset(two_class_spec(0.02), rng);

  // Independent oracle: logistic regression on raw pixels separates the two
  // classes, so the task itself is easy.
  {
    const std::size_t dim = data.samples.front().image.size();
    Tensor w({dim});
    double b = 0.0;
    const double lr = 0.5;
    for (int it = 0; it < 300; ++it) {
      Tensor gw({dim});
      double gb = 0.0;
      for (const auto& s : data.samples) {
        double z = b;
        for (std::size_t i = 0; i < dim; ++i) z += w[i] * s.image[i];
        const double p = 1.0 / (1.0 + std::exp(-z));
        const double y = s.match_id == 1 ? 1.0 : 0.0;
        for (std::size_t i = 0; i < dim; ++i) gw[i] += (p - y) * s.image[i];
        gb += p - y;
      }
      for (std::size_t i = 0; i < dim; ++i) w[i] -= lr * gw[i] / data.samples.size();
      b -= lr * gb / data.samples.size();
    }
    int hits = 0;
    for (const auto& s : data.samples) {
      double z = b;
      for (std::size_t i = 0; i < dim; ++i) z += w[i] * s.image[i];
      if ((z > 0.0 ? 1u : 0u) == s.match_id) ++hits;
    }
    CHECK(static_cast<double>(hits) / data.samples.size() >= 0.99);
  }

  ClassifierOptions opts;
  opts.seed = 7;
  const ClassifierModel clf = train_classifier(data, opts);
  int hits = 0;
  for (const auto& s : data.samples) {
    if (clf.predict(s.image) == s.match_id) ++hits;
  }
  CHECK(static_cast<double>(hits) / data.samples.size() >= 0.99);
}

TEST_CASE("classifier rejects single-class datasets") {
  gan::Dataset data;
  data.num_classes = 1;
  data.samples.push_back({Tensor({16, 16, 3}), 0, 0, 0});
  CHECK_THROWS_AS(train_classifier(data), ConfigError);
}

TEST_CASE("posteriors are a proper distribution") {
  Rng rng(6);
  const gan::Dataset data = generate_dataset(two_class_spec(0.05), rng);
  ClassifierOptions opts;
  opts.seed = 8;
  const ClassifierModel clf = train_classifier(data, opts);
  const Tensor images = gan::stack_images(data.samples, {0, 1, 2, 3});
  const Tensor p = clf.posteriors(images);
  for (std::size_t i = 0; i < p.dim(0); ++i) {
    double mass = 0.0;
    for (std::size_t j = 0; j < p.dim(1); ++j) {
      mass += p(i, j);
      CHECK(p(i, j) >= 0.0);
    }
    CHECK(std::fabs(mass - 1.0) <= 1e-9);
  }
}

TEST_CASE("shuffled labels generalize at chance level") {
  Rng rng(9);
  // Distinguishable inputs (heavy noise) so the model can memorize the
  // nonsense labels; held-out accuracy must then sit near 1/C.
  ShapeWorldSpec spec = two_class_spec(0.45);
  spec.per_class = 30;  // enough that shuffled labels decorrelate from truth
  gan::Dataset train_data = generate_dataset(spec, rng);
  Rng shuffle(10);
  for (auto& s : train_data.samples) s.match_id = shuffle.uniform_u64(2);

  ClassifierOptions opts;
  opts.seed = 11;
  opts.max_epochs = 300;
  opts.target_accuracy = 0.0;  // memorization quality is not the point here
  const ClassifierModel clf = train_classifier(train_data, opts);

  Rng heldout_rng(12);
  const gan::Dataset heldout = generate_dataset(spec, heldout_rng);
  int hits = 0;
  for (const auto& s : heldout.samples) {
    if (clf.predict(s.image) == s.match_id) ++hits;
  }
  const double acc = static_cast<double>(hits) / heldout.samples.size();
  CHECK(acc > 0.15);
  CHECK(acc < 0.85);
}

// ---- inception score -------------------------------------------------------------

TEST_CASE("identical posteriors score exactly one") {
  Tensor p({20, 4});
  for (std::size_t i = 0; i < 20; ++i) {
    p(i, 0) = 0.4;
    p(i, 1) = 0.3;
    p(i, 2) = 0.2;
    p(i, 3) = 0.1;
  }
  const IsScore score = inception_score_from_posteriors(p, 10);
  CHECK(std::fabs(score.mean - 1.0) <= 1e-9);
  CHECK(score.stddev <= 1e-12);
}

TEST_CASE("one-hot uniform coverage scores the class count") {
  const std::size_t c = 5, copies = 20;  // 100 images, cyclic class order
  Tensor p({c * copies, c});
  for (std::size_t i = 0; i < c * copies; ++i) p(i, i % c) = 1.0;
  const IsScore score = inception_score_from_posteriors(p, 10);
  CHECK(std::fabs(score.mean - static_cast<double>(c)) <= 1e-6);
}

TEST_CASE("two-point posterior matches the hand-computed KL") {
  Tensor p({2, 2});
  p(0, 0) = 0.9;
  p(0, 1) = 0.1;
  p(1, 0) = 0.1;
  p(1, 1) = 0.9;
  const IsScore score = inception_score_from_posteriors(p, 1);
  const double kl = 0.9 * std::log(0.9 / 0.5) + 0.1 * std::log(0.1 / 0.5);
  CHECK(score.mean == doctest::Approx(std::exp(kl)).epsilon(1e-12));
  CHECK(score.mean == doctest::Approx(1.445).epsilon(1e-3));
  CHECK(score.stddev == 0.0);
}

TEST_CASE("scores stay within the analytic bounds on random posteriors") {
  Rng rng(13);
  const std::size_t n = 64, c = 6;
  Tensor logits({n, c});
  for (std::size_t i = 0; i < logits.size(); ++i) logits[i] = rng.normal() * 3.0;
  const Tensor p = nn::softmax_rows(logits);
  const IsScore score = inception_score_from_posteriors(p, 10);
  CHECK(score.mean >= 1.0 - 1e-9);
  CHECK(score.mean <= static_cast<double>(c) + 1e-6);
}

TEST_CASE("inception score preconditions") {
  CHECK_THROWS_AS(inception_score_from_posteriors(Tensor({1, 3}), 10), ValueError);
  CHECK_THROWS_AS(inception_score_from_posteriors(Tensor({4, 3}), 0), ValueError);
}

// ---- ppm io -----------------------------------------------------------------------

TEST_CASE("ppm range endpoints map to byte extremes") {
  const std::string path = "ppm_test_endpoints.ppm";
  SUBCASE("all minus one becomes all zero bytes") {
    img::write_image_ppm(Tensor::full({4, 4, 3}, -1.0), path);
    FILE* f = std::fopen(path.c_str(), "rb");
    REQUIRE(f);
    std::fseek(f, 0, SEEK_END);
    const long len = std::ftell(f);
    std::fseek(f, static_cast<long>(len - 48), SEEK_SET);
    unsigned char buf[48];
    REQUIRE(std::fread(buf, 1, 48, f) == 48);
    std::fclose(f);
    for (unsigned char b : buf) CHECK(b == 0);
  }
  SUBCASE("all plus one becomes all 255 bytes") {
    img::write_image_ppm(Tensor::full({4, 4, 3}, 1.0), path);
    FILE* f = std::fopen(path.c_str(), "rb");
    REQUIRE(f);
    std::fseek(f, 0, SEEK_END);
    const long len = std::ftell(f);
    std::fseek(f, static_cast<long>(len - 48), SEEK_SET);
    unsigned char buf[48];
    REQUIRE(std::fread(buf, 1, 48, f) == 48);
    std::fclose(f);
    for (unsigned char b : buf) CHECK(b == 255);
  }
  std::remove(path.c_str());
}

TEST_CASE("ppm writer refuses out-of-range values") {
  CHECK_THROWS_AS(img::write_image_ppm(Tensor::full({2, 2, 3}, 1.01), "nope.ppm"),
                  ValueError);
}

TEST_CASE("ppm read-write round trip is byte-identical") {
  Rng rng(14);
  Tensor img({8, 8, 3});
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = rng.uniform(-1.0, 1.0);
  const std::string p1 = "ppm_round_a.ppm", p2 = "ppm_round_b.ppm";
  img::write_image_ppm(img, p1);
  const Tensor back = img::read_image_ppm(p1);
  img::write_image_ppm(back, p2);

  FILE* fa = std::fopen(p1.c_str(), "rb");
  FILE* fb = std::fopen(p2.c_str(), "rb");
  REQUIRE(fa);
  REQUIRE(fb);
  int ca, cb;
  do {
    ca = std::fgetc(fa);
    cb = std::fgetc(fb);
    CHECK(ca == cb);
  } while (ca != EOF && cb != EOF);
  std::fclose(fa);
  std::fclose(fb);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("montage tiles images with a border") {
  const Tensor a = Tensor::full({4, 4, 3}, 0.5);
  const Tensor b = Tensor::full({4, 4, 3}, -0.5);
  const Tensor grid = img::montage({{a, b}});
  CHECK(grid.shape() == std::vector<std::size_t>{6, 11, 3});
  CHECK(grid(0, 0, 0) == -1.0);   // border
  CHECK(grid(1, 1, 0) == 0.5);    // first cell
  CHECK(grid(1, 6, 0) == -0.5);   // second cell
}
