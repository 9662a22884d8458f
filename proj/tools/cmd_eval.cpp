#include <cstdio>
#include <iostream>
#include <vector>

#include "brl/checkpoint.hpp"
#include "brl/classifier.hpp"
#include "brl/dataset.hpp"
#include "brl/error.hpp"
#include "brl/image_io.hpp"
#include "brl/metrics.hpp"
#include "commands.hpp"
#include "common.hpp"

namespace brlgan {

namespace {

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

int cmd_eval(const EvalOpts& opts) {
  if (opts.checkpoints.empty() || opts.out.empty()) {
    throw brl::ValueError("eval requires at least one --checkpoint DIR and --out DIR");
  }
  ensure_dir(opts.out);

  std::string csv = "method,d,mean,std\n";
  for (std::size_t ci = 0; ci < opts.checkpoints.size(); ++ci) {
    const brl::gan::Checkpoint ckpt = brl::gan::load_checkpoint(opts.checkpoints[ci]);
    brl::Rng data_rng(ckpt.dataset_seed);
    const brl::gan::Dataset data = brl::data::generate_dataset(ckpt.data_spec, data_rng);

    brl::data::ClassifierOptions copts;
    copts.seed = brl::Rng::derive_seed(opts.seed, kStreamClassifier);
    const brl::data::ClassifierModel clf = brl::data::train_classifier(data, copts);

    brl::Rng pick_rng(brl::Rng::derive_seed(opts.seed, kStreamEvalPick));
    const std::vector<std::size_t> picks = pick_per_class(data, pick_rng);

    // All-pairs editing grid: every class representative toward every
    // attribute id; the same images feed the score and the contact sheet.
    std::vector<brl::Tensor> edited;
    std::vector<std::vector<brl::Tensor>> grid;
    for (std::size_t c = 0; c < data.num_classes; ++c) {
      const brl::Tensor& source = data.samples[picks[c]].image;
      std::vector<brl::Tensor> row;
      row.push_back(source);
      for (std::size_t target = 0; target < data.num_classes; ++target) {
        brl::Tensor out = ckpt.generator.forward_one(source, target);
        row.push_back(out);
        edited.push_back(std::move(out));
      }
      grid.push_back(std::move(row));
    }

    const brl::data::IsScore score =
        brl::data::inception_score(clf, edited, opts.splits);
    const double accuracy =
        brl::data::conditioning_accuracy(ckpt.generator, clf, data);

    char row[160];
    std::snprintf(row, sizeof(row), "brl,%d,%.6f,%.6f\n", ckpt.config.rank, score.mean,
                  score.stddev);
    csv += row;
    std::fprintf(stderr, "checkpoint %s: d=%d is=%.4f±%.4f conditioning_accuracy=%.4f\n",
                 opts.checkpoints[ci].c_str(), ckpt.config.rank, score.mean, score.stddev,
                 accuracy);

    brl::img::write_image_ppm(
        brl::img::montage(grid),
        opts.out + "/grid_" + std::to_string(ci) + "_d" + std::to_string(ckpt.config.rank) +
            ".ppm");
  }

  write_text_file(opts.out + "/is_score.csv", csv);
  std::cout << csv;
  return kExitOk;
}

}  // namespace brlgan
