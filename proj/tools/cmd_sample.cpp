#include <vector>

#include "brl/checkpoint.hpp"
#include "brl/dataset.hpp"
#include "brl/error.hpp"
#include "brl/image_io.hpp"
#include "commands.hpp"
#include "common.hpp"

namespace brlgan {

namespace {

/// One seeded representative image index per class.
std::vector<std::size_t> pick_per_class(const brl::gan::Dataset& data, brl::Rng& rng) {
  std::vector<std::vector<std::size_t>> by_class(data.num_classes);
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    by_class[data.samples[i].match_id].push_back(i);
  }
  std::vector<std::size_t> picks;
  for (std::size_t c = 0; c < data.num_classes; ++c) {
    if (by_class[c].empty()) {
      throw brl::ValueError("dataset has no samples for class " + std::to_string(c));
    }
    picks.push_back(by_class[c][rng.uniform_u64(by_class[c].size())]);
  }
  return picks;
}

}  // namespace

int cmd_sample(const SampleOpts& opts) {
  if (opts.checkpoint.empty() || opts.out.empty()) {
    throw brl::ValueError("sample requires --checkpoint DIR and --out DIR");
  }
  const brl::gan::Checkpoint ckpt = brl::gan::load_checkpoint(opts.checkpoint);
  brl::Rng data_rng(ckpt.dataset_seed);
  const brl::gan::Dataset data = brl::data::generate_dataset(ckpt.data_spec, data_rng);

  brl::Rng pick_rng(brl::Rng::derive_seed(opts.seed, kStreamEvalPick));
  const std::vector<std::size_t> picks = pick_per_class(data, pick_rng);

  // Row per source class: the original image, then its edit toward every
  // attribute id.
  std::vector<std::vector<brl::Tensor>> grid;
  for (std::size_t c = 0; c < data.num_classes; ++c) {
    std::vector<brl::Tensor> row;
    const brl::Tensor& source = data.samples[picks[c]].image;
    row.push_back(source);
    for (std::size_t target = 0; target < data.num_classes; ++target) {
      row.push_back(ckpt.generator.forward_one(source, target));
    }
    grid.push_back(std::move(row));
  }
  ensure_dir(opts.out);
  brl::img::write_image_ppm(brl::img::montage(grid), opts.out + "/grid.ppm");
  return kExitOk;
}

}  // namespace brlgan
