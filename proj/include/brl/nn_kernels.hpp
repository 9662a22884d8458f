#ifndef BRL_NN_KERNELS_HPP_
#define BRL_NN_KERNELS_HPP_

#include <cstddef>
#include <vector>

#include "brl/tensor.hpp"

// Shared numeric kernels. Both the autodiff tape and the plain inference
// paths call these, so the two routes produce bit-identical values.
//
// Activation layout is [N, H, W, C] row-major (channels fastest); kernels
// are [KH, KW, Cin, Cout]. Per output element all accumulations run in a
// fixed ascending order, which keeps results reproducible for any thread
// count (threads partition output elements, never reductions).

namespace brl::nn {

Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& bias, int stride, int pad);
Tensor conv2d_grad_input(const Tensor& gy, const Tensor& w, std::size_t in_h, std::size_t in_w,
                         int stride, int pad);
Tensor conv2d_grad_weights(const Tensor& gy, const Tensor& x, std::size_t kh, std::size_t kw,
                           int stride, int pad);
Tensor conv2d_grad_bias(const Tensor& gy);

/// Nearest-neighbor 2x upsampling of [N,H,W,C].
Tensor upsample2x(const Tensor& x);
Tensor upsample2x_grad(const Tensor& gy);

Tensor sigmoid(const Tensor& x);
Tensor tanh_map(const Tensor& x);
Tensor leaky_relu(const Tensor& x, double slope);

/// Repeats each row of a [R,C] matrix `times` times consecutively.
Tensor repeat_rows(const Tensor& x, std::size_t times);
Tensor repeat_rows_grad(const Tensor& gy, std::size_t times);

/// Concatenates along the last axis; leading dims must match.
Tensor concat_last(const Tensor& a, const Tensor& b);

/// Gathers rows of `table` ([V,E]) by index; throws ValueError on ids >= V.
Tensor gather_rows(const Tensor& table, const std::vector<std::size_t>& ids);

/// Row-wise softmax of [N,C] logits (max-shifted for stability).
Tensor softmax_rows(const Tensor& logits);

}  // namespace brl::nn

#endif  // BRL_NN_KERNELS_HPP_
