#include "brl/conditioning.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "brl/error.hpp"
#include "brl/nn_kernels.hpp"

namespace brl {

namespace {

void require_2d(const Tensor& t, const char* name) {
  if (t.rank() != 2) {
    throw ConfigError(std::string(name) + " must be a matrix, got " + t.shape_str());
  }
}

void require_vec(const Tensor& t, std::size_t dim, const char* name) {
  if (t.rank() != 1 || t.dim(0) != dim) {
    throw ShapeError(std::string(name) + " must be a vector of length " + std::to_string(dim) +
                     ", got " + t.shape_str());
  }
}

Tensor as_row(const Tensor& v) { return v.reshaped({1, v.size()}); }

}  // namespace

ConcatParams::ConcatParams(Tensor w_feat_in, Tensor w_cond_in)
    : w_feat(std::move(w_feat_in)), w_cond(std::move(w_cond_in)) {
  require_2d(w_feat, "w_feat");
  require_2d(w_cond, "w_cond");
  if (w_feat.dim(1) != w_cond.dim(1)) {
    throw ConfigError("concat weights disagree on output dim: " + w_feat.shape_str() + " vs " +
                      w_cond.shape_str());
  }
}

FilmParams::FilmParams(Tensor w_feat_in, Tensor w_gain_in, Tensor w_bias_in)
    : w_feat(std::move(w_feat_in)), w_gain(std::move(w_gain_in)), w_bias(std::move(w_bias_in)) {
  require_2d(w_feat, "w_feat");
  require_2d(w_gain, "w_gain");
  require_2d(w_bias, "w_bias");
  if (w_feat.dim(1) != w_gain.dim(1) || w_feat.dim(1) != w_bias.dim(1) ||
      w_gain.dim(0) != w_bias.dim(0)) {
    throw ConfigError("film weights have inconsistent shapes: " + w_feat.shape_str() + ", " +
                      w_gain.shape_str() + ", " + w_bias.shape_str());
  }
}

BilinearParams::BilinearParams(Tensor w_in) : w(std::move(w_in)) {
  if (w.rank() != 3) {
    throw ConfigError("bilinear weights must be [O x D x D'], got " + w.shape_str());
  }
  if (w.size() > kMaxElements) {
    throw ConfigError("full bilinear weights of " + w.shape_str() + " exceed " +
                      std::to_string(kMaxElements) + " elements; use the low-rank form");
  }
}

LowRankBilinearParams::LowRankBilinearParams(Tensor u_in, Tensor v_in, Tensor p_in)
    : u(std::move(u_in)), v(std::move(v_in)), p(std::move(p_in)) {
  require_2d(u, "u");
  require_2d(v, "v");
  require_2d(p, "p");
  const std::size_t d = u.dim(1);
  if (v.dim(1) != d || p.dim(1) != d) {
    throw ConfigError("low-rank factors disagree on rank: " + u.shape_str() + ", " +
                      v.shape_str() + ", " + p.shape_str());
  }
  if (d > std::min(u.dim(0), v.dim(0))) {
    throw ConfigError("rank " + std::to_string(d) + " exceeds min(D, D') = " +
                      std::to_string(std::min(u.dim(0), v.dim(0))));
  }
}

BilinearResidualParams::BilinearResidualParams(LowRankBilinearParams core_in)
    : core(std::move(core_in)) {
  if (core.out_dim() != core.feat_dim()) {
    throw ConfigError("residual shortcut requires O == D, got O=" +
                      std::to_string(core.out_dim()) + " D=" + std::to_string(core.feat_dim()));
  }
}

Tensor concat_condition(const ConcatParams& p, const Tensor& feat, const Tensor& cond) {
  require_vec(feat, p.feat_dim(), "feat");
  require_vec(cond, p.cond_dim(), "cond");
  const Tensor a = matmul(as_row(feat), p.w_feat);
  const Tensor b = matmul(as_row(cond), p.w_cond);
  return add(a, b).reshaped({p.out_dim()});
}

Tensor film_condition(const FilmParams& p, const Tensor& feat, const Tensor& cond) {
  require_vec(feat, p.feat_dim(), "feat");
  require_vec(cond, p.cond_dim(), "cond");
  const Tensor base = matmul(as_row(feat), p.w_feat);
  const Tensor gain = matmul(as_row(cond), p.w_gain);
  const Tensor bias = matmul(as_row(cond), p.w_bias);
  return add(hadamard(base, gain), bias).reshaped({p.out_dim()});
}

Tensor bilinear_condition(const BilinearParams& p, const Tensor& feat, const Tensor& cond) {
  require_vec(feat, p.feat_dim(), "feat");
  require_vec(cond, p.cond_dim(), "cond");
  const std::size_t o = p.out_dim(), d = p.feat_dim(), dc = p.cond_dim();
  Tensor out({o});
  for (std::size_t oi = 0; oi < o; ++oi) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double* wrow = p.w.data() + (oi * d + i) * dc;
      double inner = 0.0;
      for (std::size_t j = 0; j < dc; ++j) inner += wrow[j] * cond[j];
      acc += feat[i] * inner;
    }
    out[oi] = acc;
  }
  return out;
}

Tensor low_rank_bilinear(const LowRankBilinearParams& p, const Tensor& feat,
                         const Tensor& cond) {
  require_vec(feat, p.feat_dim(), "feat");
  require_vec(cond, p.cond_dim(), "cond");
  const Tensor fu = matmul(as_row(feat), p.u);
  const Tensor cv = matmul(as_row(cond), p.v);
  const Tensor h = hadamard(fu, cv);
  return matmul(h, transpose(p.p)).reshaped({p.out_dim()});
}

Tensor bilinear_residual_forward(const BilinearResidualParams& p, const Tensor& feat,
                                 const Tensor& cond, Activation act) {
  if (feat.rank() != 3 || feat.dim(2) != p.feat_dim()) {
    throw ShapeError("residual input must be [H,W," + std::to_string(p.feat_dim()) +
                     "], got " + feat.shape_str());
  }
  require_vec(cond, p.cond_dim(), "cond");
  const std::size_t positions = feat.dim(0) * feat.dim(1);
  const std::size_t d = p.feat_dim();
  const Tensor flat = feat.reshaped({positions, d});
  const Tensor fu = matmul(flat, p.core.u);
  const Tensor cv = matmul(tile(cond, positions), p.core.v);
  const Tensor fused = matmul(hadamard(fu, cv), transpose(p.core.p));
  Tensor out = add(flat, fused);
  if (act == Activation::kLeakyRelu) out = nn::leaky_relu(out, kLeakySlope);
  return out.reshaped(feat.shape());
}

namespace graph {

ad::NodeId concat_condition(ad::Tape& tape, ad::NodeId w_feat, ad::NodeId w_cond,
                            ad::NodeId feat, ad::NodeId cond) {
  const std::size_t d = tape.value(feat).size();
  const std::size_t dc = tape.value(cond).size();
  const std::size_t o = tape.value(w_feat).dim(1);
  const auto frow = tape.reshape(feat, {1, d});
  const auto crow = tape.reshape(cond, {1, dc});
  const auto out = tape.add(tape.matmul(frow, w_feat), tape.matmul(crow, w_cond));
  return tape.reshape(out, {o});
}

ad::NodeId film_condition(ad::Tape& tape, ad::NodeId w_feat, ad::NodeId w_gain,
                          ad::NodeId w_bias, ad::NodeId feat, ad::NodeId cond) {
  const std::size_t d = tape.value(feat).size();
  const std::size_t dc = tape.value(cond).size();
  const std::size_t o = tape.value(w_feat).dim(1);
  const auto frow = tape.reshape(feat, {1, d});
  const auto crow = tape.reshape(cond, {1, dc});
  const auto base = tape.matmul(frow, w_feat);
  const auto gain = tape.matmul(crow, w_gain);
  const auto bias = tape.matmul(crow, w_bias);
  return tape.reshape(tape.add(tape.mul(base, gain), bias), {o});
}

ad::NodeId bilinear_condition(ad::Tape& tape, ad::NodeId w, ad::NodeId feat, ad::NodeId cond) {
  return tape.bilinear_form(w, feat, cond);
}

ad::NodeId low_rank_bilinear(ad::Tape& tape, ad::NodeId u, ad::NodeId v, ad::NodeId p,
                             ad::NodeId feat, ad::NodeId cond) {
  const std::size_t d = tape.value(feat).size();
  const std::size_t dc = tape.value(cond).size();
  const std::size_t o = tape.value(p).dim(0);
  const auto frow = tape.reshape(feat, {1, d});
  const auto crow = tape.reshape(cond, {1, dc});
  const auto h = tape.mul(tape.matmul(frow, u), tape.matmul(crow, v));
  return tape.reshape(tape.matmul(h, tape.transpose(p)), {o});
}

ad::NodeId bilinear_residual_forward(ad::Tape& tape, ad::NodeId u, ad::NodeId v, ad::NodeId p,
                                     ad::NodeId feat, ad::NodeId cond, Activation act) {
  const std::vector<std::size_t> fshape = tape.value(feat).shape();
  const std::size_t positions = fshape[0] * fshape[1];
  const std::size_t d = fshape[2];
  const std::size_t dc = tape.value(cond).size();
  const auto flat = tape.reshape(feat, {positions, d});
  const auto fu = tape.matmul(flat, u);
  const auto ctiled = tape.repeat_rows(tape.reshape(cond, {1, dc}), positions);
  const auto cv = tape.matmul(ctiled, v);
  const auto fused = tape.matmul(tape.mul(fu, cv), tape.transpose(p));
  auto out = tape.add(flat, fused);
  if (act == Activation::kLeakyRelu) out = tape.leaky_relu(out, kLeakySlope);
  return tape.reshape(out, fshape);
}

}  // namespace graph

}  // namespace brl
