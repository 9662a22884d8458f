#ifndef BRL_CHECKPOINT_HPP_
#define BRL_CHECKPOINT_HPP_

#include <cstdint>
#include <string>

#include "brl/dataset.hpp"
#include "brl/gan.hpp"

// Checkpoint directory layout: one .ten file per named parameter plus a
// manifest.json describing the architecture (layer kinds and dims, fusing
// rank), the training configuration, and the dataset recipe so evaluation
// can regenerate the exact data.

namespace brl::gan {

struct Checkpoint {
  Generator generator;
  Discriminator discriminator;
  TrainConfig config;
  data::ShapeWorldSpec data_spec;
  std::uint64_t dataset_seed = 0;
};

void save_checkpoint(const std::string& dir, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& dir);

}  // namespace brl::gan

#endif  // BRL_CHECKPOINT_HPP_
