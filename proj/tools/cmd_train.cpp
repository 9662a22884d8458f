#include <cstdio>
#include <iostream>
#include <sstream>

#include "brl/checkpoint.hpp"
#include "brl/dataset.hpp"
#include "brl/error.hpp"
#include "brl/gan.hpp"
#include "commands.hpp"
#include "common.hpp"

namespace brlgan {

int cmd_train(const TrainOpts& opts) {
  if (opts.out.empty()) throw brl::ValueError("train requires --out DIR");

  brl::gan::TrainConfig cfg;
  cfg.learning_rate = opts.lr;
  cfg.beta1 = opts.beta1;
  cfg.beta2 = opts.beta2;
  cfg.batch_size = opts.batch;
  cfg.epochs = opts.epochs;
  cfg.rank = opts.rank;
  cfg.depth = opts.depth;
  cfg.embed_dim = opts.embed_dim;
  if (!opts.d_channels.empty()) {
    cfg.d_channels.clear();
    std::stringstream ss(opts.d_channels);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (!token.empty()) cfg.d_channels.push_back(std::stoul(token));
    }
  }
  cfg.seed = opts.seed;
  cfg.checkpoint_every = opts.checkpoint_every;
  cfg.squash_output = !opts.no_squash;
  cfg.validate();

  const brl::data::ShapeWorldSpec spec =
      make_spec(opts.size, opts.colors, opts.shapes, opts.per_class, opts.noise);
  const std::uint64_t dataset_seed = brl::Rng::derive_seed(opts.seed, kStreamData);
  brl::Rng data_rng(dataset_seed);
  const brl::gan::Dataset data = brl::data::generate_dataset(spec, data_rng);

  std::string metrics = "epoch,loss_d,loss_g,seconds\n";
  brl::gan::TrainHooks hooks;
  hooks.on_epoch = [&](const brl::gan::EpochStats& s) {
    char row[160];
    std::snprintf(row, sizeof(row), "%d,%.12g,%.12g,%.3f\n", s.epoch, s.loss_d, s.loss_g,
                  s.seconds);
    metrics += row;
    if (!opts.quiet) {
      std::fprintf(stderr, "epoch %d  loss_d %.6f  loss_g %.6f  (%.2fs)\n", s.epoch, s.loss_d,
                   s.loss_g, s.seconds);
    }
  };
  hooks.on_checkpoint = [&](int epoch, const brl::gan::Generator& g,
                            const brl::gan::Discriminator& d) {
    brl::gan::Checkpoint ckpt{g, d, cfg, spec, dataset_seed};
    const bool final_epoch = epoch == cfg.epochs;
    const std::string dir =
        final_epoch ? opts.out + "/checkpoint" : opts.out + "/checkpoint_ep" + std::to_string(epoch);
    brl::gan::save_checkpoint(dir, ckpt);
  };

  brl::gan::train(cfg, data, hooks);
  write_text_file(opts.out + "/metrics.csv", metrics);
  return kExitOk;
}

}  // namespace brlgan
