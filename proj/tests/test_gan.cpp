#include <cmath>

#include "brl/error.hpp"
#include "brl/gan.hpp"
#include "brl/threading.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace brl;
using namespace brl::gan;
using brl::testing::random_tensor;

namespace {

Dataset tiny_dataset(std::size_t classes, std::size_t per_class, std::size_t image_size,
                     std::uint64_t seed) {
  Rng rng(seed);
  Dataset data;
  data.num_classes = classes;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t k = 0; k < per_class; ++k) {
      SamplePair s;
      s.image = Tensor({image_size, image_size, 3});
      for (std::size_t i = 0; i < s.image.size(); ++i) s.image[i] = rng.uniform(-0.9, 0.9);
      s.match_id = c;
      s.edit_id = rng.uniform_u64(classes);
      s.mismatch_id = sample_mismatch(data, c, rng);
      data.samples.push_back(std::move(s));
    }
  }
  return data;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.rank = 2;
  cfg.depth = 2;
  cfg.embed_dim = 8;
  cfg.channels = {6, 8, 10};
  cfg.batch_size = 8;
  return cfg;
}

}  // namespace

TEST_CASE("sample_mismatch with two classes forces the complement") {
  Dataset data;
  data.num_classes = 2;
  Rng rng(1);
  for (int i = 0; i < 20; ++i) CHECK(sample_mismatch(data, 0, rng) == 1);
  for (int i = 0; i < 20; ++i) CHECK(sample_mismatch(data, 1, rng) == 0);
}

TEST_CASE("sample_mismatch is uniform over the other classes") {
  Dataset data;
  data.num_classes = 8;
  Rng rng(2);
  int counts[8] = {0};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) counts[sample_mismatch(data, 3, rng)]++;
  CHECK(counts[3] == 0);
  // Each wrong class should appear with frequency 1/7; 3 sigma band.
  const double expect = draws / 7.0;
  const double sigma = std::sqrt(draws * (1.0 / 7.0) * (6.0 / 7.0));
  for (int c = 0; c < 8; ++c) {
    if (c == 3) continue;
    CHECK(std::fabs(counts[c] - expect) <= 3.0 * sigma);
  }
}

TEST_CASE("sample_mismatch determinism and error path") {
  Dataset data;
  data.num_classes = 5;
  Rng r1(9), r2(9);
  for (int i = 0; i < 50; ++i) CHECK(sample_mismatch(data, 2, r1) == sample_mismatch(data, 2, r2));
  data.num_classes = 1;
  Rng rng(3);
  CHECK_THROWS_AS(sample_mismatch(data, 0, rng), ConfigError);
}

TEST_CASE("lsgan loss arithmetic") {
  SUBCASE("constant half scores give 0.75") {
    const Tensor half = Tensor::full({4}, 0.5);
    CHECK(lsgan_discriminator_loss(half, half, half) == 0.75);
  }
  SUBCASE("perfect discriminator gives zero") {
    const Tensor zeros = Tensor::zeros({4});
    const Tensor ones = Tensor::full({4}, 1.0);
    CHECK(lsgan_discriminator_loss(zeros, ones, zeros) == 0.0);
  }
  SUBCASE("generator loss constants") {
    CHECK(lsgan_generator_loss(Tensor::full({3}, 1.0)) == 0.0);
    CHECK(lsgan_generator_loss(Tensor::zeros({3})) == 1.0);
    CHECK(lsgan_generator_loss(Tensor::full({3}, 0.25)) == 0.5625);
  }
  SUBCASE("single-sample batch equals the unaveraged term sum") {
    const Tensor a = Tensor::vector({0.3});
    const Tensor b = Tensor::vector({0.8});
    const Tensor c = Tensor::vector({0.1});
    CHECK(lsgan_discriminator_loss(a, b, c) ==
          0.3 * 0.3 + (0.8 - 1.0) * (0.8 - 1.0) + 0.1 * 0.1);
  }
  SUBCASE("empty batch rejected") {
    CHECK_THROWS_AS(lsgan_generator_loss(Tensor({0})), brl::Error);
  }
}

TEST_CASE("zero-weight discriminator scores exactly one half") {
  Rng rng(4);
  const TrainConfig cfg = small_config();
  Generator g = Generator::create(16, 3, cfg, rng);
  Discriminator d = Discriminator::create(16, 3, cfg, rng);
  for (auto& [name, t] : d.parameters()) *t = Tensor::zeros(t->shape());

  const Dataset data = tiny_dataset(3, 2, 16, 5);
  const std::vector<SamplePair> batch(data.samples.begin(), data.samples.begin() + 4);
  CHECK(discriminator_loss(d, g, batch) == 0.75);
  CHECK(generator_loss(d, g, batch) == 0.25);
}

TEST_CASE("adam hand-unrolled first step") {
  Tensor p = Tensor::vector({1.0});
  const Tensor grad = Tensor::vector({1.0});
  AdamState state;
  adam_step(p, grad, state, 0.1, 0.5, 0.999);
  // m-hat = v-hat = 1 after bias correction; update = 0.1 / (1 + 1e-8).
  CHECK(std::fabs(p[0] - 0.9) <= 1e-8);
}

TEST_CASE("adam zero gradient leaves parameters untouched") {
  Tensor p = Tensor::vector({2.0, -3.0});
  AdamState state;
  adam_step(p, Tensor::zeros({2}), state, 0.1, 0.5, 0.999);
  CHECK(bits_equal(p, Tensor::vector({2.0, -3.0})));
}

TEST_CASE("adam rejects shape mismatches") {
  Tensor p = Tensor::vector({1.0});
  AdamState state;
  CHECK_THROWS_AS(adam_step(p, Tensor::zeros({2}), state, 0.1, 0.5, 0.999), ShapeError);
}

TEST_CASE("adam is deterministic across runs") {
  Rng r1(6), r2(6);
  Tensor p1 = random_tensor(r1, {8});
  Tensor p2 = random_tensor(r2, {8});
  AdamState s1, s2;
  Rng g1(7), g2(7);
  for (int step = 0; step < 10; ++step) {
    adam_step(p1, random_tensor(g1, {8}), s1, 0.01, 0.5, 0.999);
    adam_step(p2, random_tensor(g2, {8}), s2, 0.01, 0.5, 0.999);
  }
  CHECK(bits_equal(p1, p2));
}

TEST_CASE("generator forward honors the shape contract") {
  Rng rng(8);
  const TrainConfig cfg = small_config();
  const Generator g = Generator::create(16, 4, cfg, rng);
  Tensor image({16, 16, 3});
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = 0.1;
  const Tensor out = g.forward_one(image, 2);
  CHECK(out.shape() == image.shape());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i] > -1.0);
    CHECK(out[i] < 1.0);
  }
  CHECK_THROWS_AS(g.forward_one(image, 99), ValueError);  // unknown attribute id
}

TEST_CASE("generator input outside [-1,1] is rejected") {
  Rng rng(8);
  const Generator g = Generator::create(16, 2, small_config(), rng);
  Tensor image = Tensor::full({16, 16, 3}, 1.5);
  CHECK_THROWS_AS(g.forward_one(image, 0), ValueError);
}

TEST_CASE("zero fusing factors make the generator ignore the attribute") {
  Rng rng(10);
  Generator g = Generator::create(16, 5, small_config(), rng);
  for (auto& f : g.fusing) {
    f.u = Tensor::zeros(f.u.shape());
    f.v = Tensor::zeros(f.v.shape());
  }
  Tensor image({16, 16, 3});
  Rng img_rng(11);
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = img_rng.uniform(-1.0, 1.0);
  const Tensor out0 = g.forward_one(image, 0);
  for (std::size_t id = 1; id < 5; ++id) {
    CHECK(bits_equal(g.forward_one(image, id), out0));
  }
}

TEST_CASE("plain and tape network forwards are bit-identical") {
  Rng rng(12);
  const TrainConfig cfg = small_config();
  const Generator g = Generator::create(16, 3, cfg, rng);
  const Discriminator d = Discriminator::create(16, 3, cfg, rng);
  const Dataset data = tiny_dataset(3, 2, 16, 13);
  const std::vector<std::size_t> idx = {0, 3, 5};
  const Tensor images = stack_images(data.samples, idx);
  const std::vector<std::size_t> ids = {2, 0, 1};

  const Tensor plain_g = g.forward(images, ids);
  const Tensor plain_d = d.forward(images, ids);

  ad::Tape tape;
  const Binding gbind = bind_generator(tape, g, false);
  const Binding dbind = bind_discriminator(tape, d, false);
  const auto x = tape.constant(images);
  const auto fake = generator_graph(tape, g, gbind, x, ids);
  const auto score = discriminator_graph(tape, d, dbind, x, ids);
  CHECK(bits_equal(tape.value(fake), plain_g));
  CHECK(bits_equal(tape.value(score), plain_d));
}

TEST_CASE("train with zero epochs returns the untouched initialization") {
  const Dataset data = tiny_dataset(3, 3, 16, 14);
  TrainConfig cfg = small_config();
  cfg.epochs = 0;
  cfg.seed = 21;
  const TrainResult result = train(cfg, data);
  CHECK(result.history.empty());

  Rng g_rng(Rng::derive_seed(cfg.seed, 1));
  const Generator fresh = Generator::create(16, 3, cfg, g_rng);
  const auto trained = result.generator.parameters();
  const auto expect = fresh.parameters();
  REQUIRE(trained.size() == expect.size());
  for (std::size_t i = 0; i < trained.size(); ++i) {
    CHECK(bits_equal(*trained[i].second, *expect[i].second));
  }
}

TEST_CASE("training is deterministic for a fixed seed") {
  const Dataset data = tiny_dataset(3, 4, 16, 15);
  TrainConfig cfg = small_config();
  cfg.epochs = 2;
  cfg.seed = 99;
  const TrainResult a = train(cfg, data);
  const TrainResult b = train(cfg, data);
  REQUIRE(a.history.size() == 2);
  for (std::size_t e = 0; e < a.history.size(); ++e) {
    CHECK(a.history[e].loss_d == b.history[e].loss_d);
    CHECK(a.history[e].loss_g == b.history[e].loss_g);
    CHECK(a.history[e].loss_d >= 0.0);
    CHECK(a.history[e].loss_g >= 0.0);
  }
  const auto pa = a.generator.parameters();
  const auto pb = b.generator.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(bits_equal(*pa[i].second, *pb[i].second));
  }
  const auto da = a.discriminator.parameters();
  const auto db = b.discriminator.parameters();
  for (std::size_t i = 0; i < da.size(); ++i) {
    CHECK(bits_equal(*da[i].second, *db[i].second));
  }
}

TEST_CASE("training losses move from the untrained baseline") {
  const Dataset data = tiny_dataset(2, 6, 16, 16);
  TrainConfig cfg = small_config();
  cfg.epochs = 3;
  cfg.seed = 5;
  const TrainResult result = train(cfg, data);
  // The discriminator should beat the 0.75 constant-output plateau quickly.
  CHECK(result.history.back().loss_d < 0.75);
}

TEST_CASE("train validates its configuration") {
  const Dataset data = tiny_dataset(2, 2, 16, 17);
  TrainConfig cfg = small_config();
  cfg.beta1 = 1.5;
  CHECK_THROWS_AS(train(cfg, data), ConfigError);
  cfg = small_config();
  CHECK_THROWS_AS(train(cfg, Dataset{}), brl::Error);
}

TEST_CASE("threaded training reproduces single-thread results bit for bit") {
  const Dataset data = tiny_dataset(2, 4, 16, 18);
  TrainConfig cfg = small_config();
  cfg.epochs = 1;
  cfg.seed = 31;
  const TrainResult single = train(cfg, data);
  brl::set_max_threads(4);
  const TrainResult threaded = train(cfg, data);
  brl::set_max_threads(1);
  const auto ps = single.generator.parameters();
  const auto pt = threaded.generator.parameters();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CHECK(bits_equal(*ps[i].second, *pt[i].second));
  }
}
