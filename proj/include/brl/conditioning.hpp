#ifndef BRL_CONDITIONING_HPP_
#define BRL_CONDITIONING_HPP_

#include <cstddef>

#include "brl/autodiff.hpp"
#include "brl/tensor.hpp"

// Conditioning layers fusing a feature vector (dim D) with a conditioning
// vector (dim D'). Four variants of increasing interaction order:
//
//   concat:   out = feat·Wf + cond·Wc            (condition adds a bias)
//   film:     out = (feat·Wf) ⊙ (cond·Wg) + cond·Wc
//   bilinear: out_i = feat · W_i · condᵀ          (full second-order form)
//   low-rank: out = (feat·U ⊙ cond·V) · Pᵀ       (each implicit W_i has
//                                                  rank ≤ d)
//
// The residual layer tiles the condition over every spatial position of a
// [H,W,D] feature map, applies the low-rank form per position, and adds the
// input back, so zero factors give the identity map.

namespace brl {

struct ConcatParams {
  Tensor w_feat;  // [D x O]
  Tensor w_cond;  // [D' x O]

  ConcatParams(Tensor w_feat, Tensor w_cond);
  std::size_t feat_dim() const { return w_feat.dim(0); }
  std::size_t cond_dim() const { return w_cond.dim(0); }
  std::size_t out_dim() const { return w_feat.dim(1); }
};

struct FilmParams {
  Tensor w_feat;  // [D x O]
  Tensor w_gain;  // [D' x O] multiplicative path
  Tensor w_bias;  // [D' x O] additive path

  FilmParams(Tensor w_feat, Tensor w_gain, Tensor w_bias);
  std::size_t feat_dim() const { return w_feat.dim(0); }
  std::size_t cond_dim() const { return w_gain.dim(0); }
  std::size_t out_dim() const { return w_feat.dim(1); }
};

struct BilinearParams {
  Tensor w;  // [O x D x D'], one interaction matrix per output feature

  explicit BilinearParams(Tensor w);
  std::size_t feat_dim() const { return w.dim(1); }
  std::size_t cond_dim() const { return w.dim(2); }
  std::size_t out_dim() const { return w.dim(0); }

  /// Full bilinear weights grow as D·D'·O; construction refuses more than
  /// this many parameters (the factored form below is the practical layer).
  static constexpr std::size_t kMaxElements = 10'000'000;
};

struct LowRankBilinearParams {
  Tensor u;  // [D x d]
  Tensor v;  // [D' x d]
  Tensor p;  // [O x d]

  /// Requires d <= min(D, D'); residual use additionally requires O == D,
  /// checked by the residual constructor below.
  LowRankBilinearParams(Tensor u, Tensor v, Tensor p);
  std::size_t feat_dim() const { return u.dim(0); }
  std::size_t cond_dim() const { return v.dim(0); }
  std::size_t out_dim() const { return p.dim(0); }
  std::size_t rank() const { return u.dim(1); }
};

/// Low-rank bilinear fusion with an identity shortcut. O == D is enforced
/// here so the residual add type-checks at construction, not at forward.
struct BilinearResidualParams {
  LowRankBilinearParams core;

  explicit BilinearResidualParams(LowRankBilinearParams core);
  std::size_t feat_dim() const { return core.feat_dim(); }
  std::size_t cond_dim() const { return core.cond_dim(); }
  std::size_t rank() const { return core.rank(); }
};

enum class Activation { kIdentity, kLeakyRelu };

/// Slope used by every leaky rectifier in the fusing stack.
inline constexpr double kLeakySlope = 0.2;

Tensor concat_condition(const ConcatParams& p, const Tensor& feat, const Tensor& cond);
Tensor film_condition(const FilmParams& p, const Tensor& feat, const Tensor& cond);
Tensor bilinear_condition(const BilinearParams& p, const Tensor& feat, const Tensor& cond);
Tensor low_rank_bilinear(const LowRankBilinearParams& p, const Tensor& feat, const Tensor& cond);

/// feat is a [H,W,D] map; cond is tiled to every spatial position. Output
/// is feat[h,w] + fusion(feat[h,w], cond), then the activation.
Tensor bilinear_residual_forward(const BilinearResidualParams& p, const Tensor& feat,
                                 const Tensor& cond, Activation act = Activation::kLeakyRelu);

// Tape builders mirroring the plain ops, for gradient computation. Node
// arguments hold the corresponding parameter/input tensors.
namespace graph {

ad::NodeId concat_condition(ad::Tape& tape, ad::NodeId w_feat, ad::NodeId w_cond,
                            ad::NodeId feat, ad::NodeId cond);
ad::NodeId film_condition(ad::Tape& tape, ad::NodeId w_feat, ad::NodeId w_gain,
                          ad::NodeId w_bias, ad::NodeId feat, ad::NodeId cond);
ad::NodeId bilinear_condition(ad::Tape& tape, ad::NodeId w, ad::NodeId feat, ad::NodeId cond);
ad::NodeId low_rank_bilinear(ad::Tape& tape, ad::NodeId u, ad::NodeId v, ad::NodeId p,
                             ad::NodeId feat, ad::NodeId cond);

/// feat node holds [H,W,D]; cond node holds [D'].
ad::NodeId bilinear_residual_forward(ad::Tape& tape, ad::NodeId u, ad::NodeId v, ad::NodeId p,
                                     ad::NodeId feat, ad::NodeId cond,
                                     Activation act = Activation::kLeakyRelu);

}  // namespace graph

}  // namespace brl

#endif  // BRL_CONDITIONING_HPP_
