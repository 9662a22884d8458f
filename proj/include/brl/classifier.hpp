#ifndef BRL_CLASSIFIER_HPP_
#define BRL_CLASSIFIER_HPP_

#include <cstdint>
#include <cstddef>

#include "brl/gan.hpp"
#include "brl/tensor.hpp"

// Small convolutional attribute classifier used as the measurement model:
// conditioning accuracy of edited images and the class posteriors feeding
// the inception-style score.

namespace brl::data {

struct ClassifierModel {
  std::size_t image_size = 16;
  std::size_t num_classes = 0;
  gan::ConvLayer conv1;  // stride 2
  gan::ConvLayer conv2;  // stride 2
  Tensor dense_w;        // [flattened, C]
  Tensor dense_b;        // [C]

  /// Softmax posteriors for an image batch [N,H,W,3] -> [N,C]; rows sum to 1.
  Tensor posteriors(const Tensor& images) const;
  std::size_t predict(const Tensor& image) const;
};

struct ClassifierOptions {
  int max_epochs = 200;
  int batch_size = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
  double target_accuracy = 0.99;
  /// Training stops early once accuracy reaches this level.
  double stop_accuracy = 0.999;
};

/// Trains on the dataset's (image, match_id) pairs with Adam + softmax
/// cross-entropy. Throws TrainingError naming the final accuracy if the
/// target is not reached within max_epochs.
ClassifierModel train_classifier(const gan::Dataset& data,
                                 const ClassifierOptions& opts = {});

/// Fraction of dataset samples whose edited image G(x, edit_id) is
/// classified as exactly edit_id.
double conditioning_accuracy(const gan::Generator& g, const ClassifierModel& clf,
                             const gan::Dataset& data);

}  // namespace brl::data

#endif  // BRL_CLASSIFIER_HPP_
