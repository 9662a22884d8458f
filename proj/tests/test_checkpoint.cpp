#include <filesystem>

#include "brl/checkpoint.hpp"
#include "brl/error.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace brl;
using namespace brl::gan;

TEST_CASE("checkpoint round trip restores every parameter bit for bit") {
  const std::string dir = "ckpt_test_dir";
  std::filesystem::remove_all(dir);

  Rng rng(50);
  TrainConfig cfg;
  cfg.rank = 4;
  cfg.depth = 2;
  cfg.embed_dim = 8;
  cfg.channels = {6, 8, 10};
  Checkpoint ckpt{Generator::create(16, 8, cfg, rng), Discriminator::create(16, 8, cfg, rng),
                  cfg, data::ShapeWorldSpec::defaults(), 1234};
  save_checkpoint(dir, ckpt);
  const Checkpoint back = load_checkpoint(dir);

  const auto pa = ckpt.generator.parameters();
  const auto pb = back.generator.parameters();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].first == pb[i].first);
    CHECK(bits_equal(*pa[i].second, *pb[i].second));
  }
  const auto da = ckpt.discriminator.parameters();
  const auto db = back.discriminator.parameters();
  for (std::size_t i = 0; i < da.size(); ++i) {
    CHECK(bits_equal(*da[i].second, *db[i].second));
  }
  CHECK(back.config.rank == 4);
  CHECK(back.config.depth == 2);
  CHECK(back.dataset_seed == 1234);
  CHECK(back.data_spec.num_classes() == 8);

  std::filesystem::remove_all(dir);
}

TEST_CASE("loading a missing checkpoint fails cleanly") {
  CHECK_THROWS_AS(load_checkpoint("no_such_dir_here"), IoError);
}
