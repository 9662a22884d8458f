#ifndef BRL_GAN_HPP_
#define BRL_GAN_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "brl/autodiff.hpp"
#include "brl/rng.hpp"
#include "brl/tensor.hpp"

// Conditional least-squares GAN for attribute-driven image editing.
//
// The generator is encoder -> bilinear-residual fusing stack -> decoder: the
// image passes through stride-2 conv blocks, the attribute embedding is
// fused into the bottleneck by N low-rank bilinear residual layers, and
// nearest-neighbor upsampling blocks decode back to image resolution with a
// tanh output. The discriminator scores (image, attribute) pairs in (0,1),
// conditioned by plain concatenation of a tiled embedding, which keeps it
// deliberately weak.
//
// Losses (batch means, squared targets):
//   L_D = E[D(x,t̄)²] + E[(D(x,t)−1)²] + E[D(G(x,t̂),t̂)²]
//   L_G = E[(D(G(x,t̂),t̂)−1)²]

namespace brl::gan {

struct TrainConfig {
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  int batch_size = 64;
  int epochs = 0;
  int rank = 8;   // rank bound d of each fusing layer
  int depth = 4;  // number of fusing layers N
  std::uint64_t seed = 0;

  // Architecture knobs (desk scale).
  std::size_t embed_dim = 16;
  std::vector<std::size_t> channels = {16, 24, 32};
  // Discriminator conv widths; empty means reuse the first two generator
  // widths. The discriminator is deliberately kept weak.
  std::vector<std::size_t> d_channels = {};

  int checkpoint_every = 0;    // additionally checkpoint every k epochs; 0 = end only
  bool squash_output = true;   // logistic squashing of the discriminator score

  void validate() const;
};

/// One training example: an image with its matching attribute id, the
/// editing target id, and a mismatching id from a different class.
struct SamplePair {
  Tensor image;  // [H,W,3] in [-1,1]
  std::size_t match_id = 0;
  std::size_t edit_id = 0;
  std::size_t mismatch_id = 0;
};

struct Dataset {
  std::vector<SamplePair> samples;
  std::size_t num_classes = 0;
};

/// Uniform draw over attribute ids other than `match_id`. Requires at least
/// two classes.
std::size_t sample_mismatch(const Dataset& data, std::size_t match_id, Rng& rng);

struct ConvLayer {
  Tensor w;  // [KH,KW,Cin,Cout]
  Tensor b;  // [Cout]
  int stride = 1;
  int pad = 0;
};

struct FusingLayer {
  Tensor u;  // [D x d]
  Tensor v;  // [D' x d]
  Tensor p;  // [D x d] (projection back to the channel count)
};

using NamedParams = std::vector<std::pair<std::string, Tensor*>>;
using NamedParamsConst = std::vector<std::pair<std::string, const Tensor*>>;

struct Generator {
  std::size_t image_size = 16;
  std::size_t num_classes = 0;
  std::size_t embed_dim = 16;

  std::vector<ConvLayer> encoder;  // stride-2 blocks with leaky activations
  Tensor embed;                    // [num_classes x embed_dim]
  std::vector<FusingLayer> fusing;
  std::vector<ConvLayer> decoder;  // upsample2x + conv blocks; final tanh

  static Generator create(std::size_t image_size, std::size_t num_classes,
                          const TrainConfig& cfg, Rng& rng);

  /// Edits a batch: images [N,H,W,3] in [-1,1] plus one target attribute id
  /// per image. Output has the input shape with tanh range.
  Tensor forward(const Tensor& images, const std::vector<std::size_t>& edit_ids) const;

  /// Single-image convenience wrapper.
  Tensor forward_one(const Tensor& image, std::size_t edit_id) const;

  NamedParams parameters();
  NamedParamsConst parameters() const;
  std::size_t bottleneck_channels() const { return encoder.back().w.dim(3); }
};

struct Discriminator {
  std::size_t image_size = 16;
  std::size_t num_classes = 0;
  std::size_t embed_dim = 16;
  bool squash = true;

  std::vector<ConvLayer> encoder;  // image-only stride-2 blocks
  Tensor embed;                    // [num_classes x embed_dim]
  std::vector<ConvLayer> head;     // post-concat blocks down to one channel

  static Discriminator create(std::size_t image_size, std::size_t num_classes,
                              const TrainConfig& cfg, Rng& rng);

  /// Match scores for (image, attribute) pairs; [N] in (0,1) when squashed.
  Tensor forward(const Tensor& images, const std::vector<std::size_t>& attr_ids) const;

  NamedParams parameters();
  NamedParamsConst parameters() const;
};

// ---- losses ----------------------------------------------------------------

/// Probability-level cores; all three inputs are [N] score vectors.
double lsgan_discriminator_loss(const Tensor& p_mismatch, const Tensor& p_match,
                                const Tensor& p_fake);
double lsgan_generator_loss(const Tensor& p_fake);

/// Network-level losses over a batch; the same images feed all three terms.
double discriminator_loss(const Discriminator& d, const Generator& g,
                          const std::vector<SamplePair>& batch);
double generator_loss(const Discriminator& d, const Generator& g,
                      const std::vector<SamplePair>& batch);

// ---- tape variants (training path) -----------------------------------------

struct Binding {
  std::vector<ad::NodeId> ids;  // parameters() order
};

Binding bind_generator(ad::Tape& tape, const Generator& g, bool trainable);
Binding bind_discriminator(ad::Tape& tape, const Discriminator& d, bool trainable);

ad::NodeId generator_graph(ad::Tape& tape, const Generator& g, const Binding& bind,
                           ad::NodeId images, const std::vector<std::size_t>& edit_ids);
ad::NodeId discriminator_graph(ad::Tape& tape, const Discriminator& d, const Binding& bind,
                               ad::NodeId images, const std::vector<std::size_t>& attr_ids);

// ---- optimizer --------------------------------------------------------------

struct AdamState {
  Tensor m;
  Tensor v;
  long step = 0;
};

/// Standard bias-corrected update; state tensors are created lazily on the
/// first call and must keep the parameter's shape afterwards.
void adam_step(Tensor& param, const Tensor& grad, AdamState& state, double learning_rate,
               double beta1, double beta2, double epsilon = 1e-8);

// ---- training ----------------------------------------------------------------

struct EpochStats {
  int epoch = 0;
  double loss_d = 0.0;
  double loss_g = 0.0;
  double seconds = 0.0;
};

struct TrainHooks {
  std::function<void(const EpochStats&)> on_epoch;
  std::function<void(int epoch, const Generator&, const Discriminator&)> on_checkpoint;
};

struct TrainResult {
  Generator generator;
  Discriminator discriminator;
  std::vector<EpochStats> history;
};

/// Alternating one-D-step / one-G-step loop over shuffled minibatches.
/// Aborts with NumericError naming the first non-finite tensor if a loss
/// goes non-finite. Fully deterministic given config.seed (except the
/// wall-clock seconds in EpochStats).
TrainResult train(const TrainConfig& cfg, const Dataset& data, const TrainHooks& hooks = {});

/// Helper shared by training and evaluation: stacks dataset images into a
/// [N,H,W,3] batch for the given indices.
Tensor stack_images(const std::vector<SamplePair>& samples,
                    const std::vector<std::size_t>& indices);

}  // namespace brl::gan

#endif  // BRL_GAN_HPP_
