#include "brl/nn_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "brl/error.hpp"
#include "brl/threading.hpp"

namespace brl::nn {

namespace {

void require_rank(const Tensor& t, std::size_t rank, const char* what) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(what) + ": expected rank " + std::to_string(rank) +
                     " tensor, got " + t.shape_str());
  }
}

std::size_t out_extent(std::size_t in, std::size_t k, int stride, int pad) {
  const std::ptrdiff_t numer =
      static_cast<std::ptrdiff_t>(in) + 2 * pad - static_cast<std::ptrdiff_t>(k);
  if (numer < 0) throw ShapeError("conv2d: kernel larger than padded input");
  return static_cast<std::size_t>(numer) / static_cast<std::size_t>(stride) + 1;
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& bias, int stride, int pad) {
  require_rank(x, 4, "conv2d input");
  require_rank(w, 4, "conv2d weights");
  if (x.dim(3) != w.dim(2)) {
    throw ShapeError("conv2d: input channels " + x.shape_str() + " vs weights " + w.shape_str());
  }
  if (bias.rank() != 1 || bias.dim(0) != w.dim(3)) {
    throw ShapeError("conv2d: bias " + bias.shape_str() + " vs weights " + w.shape_str());
  }
  const std::size_t n = x.dim(0), h = x.dim(1), iw = x.dim(2), ci = x.dim(3);
  const std::size_t kh = w.dim(0), kw = w.dim(1), co = w.dim(3);
  const std::size_t oh = out_extent(h, kh, stride, pad);
  const std::size_t ow = out_extent(iw, kw, stride, pad);
  Tensor y({n, oh, ow, co});

  parallel_for(0, n * oh, [&](std::size_t slab) {
    const std::size_t ni = slab / oh;
    const std::size_t oy = slab % oh;
    for (std::size_t ox = 0; ox < ow; ++ox) {
      double* out = y.data() + ((ni * oh + oy) * ow + ox) * co;
      for (std::size_t c = 0; c < co; ++c) out[c] = bias[c];
      for (std::size_t ky = 0; ky < kh; ++ky) {
        const std::ptrdiff_t in_y = static_cast<std::ptrdiff_t>(oy) * stride + ky - pad;
        if (in_y < 0 || in_y >= static_cast<std::ptrdiff_t>(h)) continue;
        for (std::size_t kx = 0; kx < kw; ++kx) {
          const std::ptrdiff_t in_x = static_cast<std::ptrdiff_t>(ox) * stride + kx - pad;
          if (in_x < 0 || in_x >= static_cast<std::ptrdiff_t>(iw)) continue;
          const double* xin = x.data() + ((ni * h + in_y) * iw + in_x) * ci;
          const double* wrow = w.data() + (ky * kw + kx) * ci * co;
          for (std::size_t c = 0; c < ci; ++c) {
            const double xv = xin[c];
            const double* wc = wrow + c * co;
            for (std::size_t o = 0; o < co; ++o) out[o] += xv * wc[o];
          }
        }
      }
    }
  });
  return y;
}

Tensor conv2d_grad_input(const Tensor& gy, const Tensor& w, std::size_t in_h, std::size_t in_w,
                         int stride, int pad) {
  const std::size_t n = gy.dim(0), oh = gy.dim(1), ow = gy.dim(2), co = gy.dim(3);
  const std::size_t kh = w.dim(0), kw = w.dim(1), ci = w.dim(2);
  Tensor gx({n, in_h, in_w, ci});

  parallel_for(0, n, [&](std::size_t ni) {
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox) {
        const double* g = gy.data() + ((ni * oh + oy) * ow + ox) * co;
        for (std::size_t ky = 0; ky < kh; ++ky) {
          const std::ptrdiff_t in_y = static_cast<std::ptrdiff_t>(oy) * stride + ky - pad;
          if (in_y < 0 || in_y >= static_cast<std::ptrdiff_t>(in_h)) continue;
          for (std::size_t kx = 0; kx < kw; ++kx) {
            const std::ptrdiff_t in_x = static_cast<std::ptrdiff_t>(ox) * stride + kx - pad;
            if (in_x < 0 || in_x >= static_cast<std::ptrdiff_t>(in_w)) continue;
            double* gxin = gx.data() + ((ni * in_h + in_y) * in_w + in_x) * ci;
            const double* wrow = w.data() + (ky * kw + kx) * ci * co;
            for (std::size_t c = 0; c < ci; ++c) {
              const double* wc = wrow + c * co;
              double acc = 0.0;
              for (std::size_t o = 0; o < co; ++o) acc += wc[o] * g[o];
              gxin[c] += acc;
            }
          }
        }
      }
    }
  });
  return gx;
}

Tensor conv2d_grad_weights(const Tensor& gy, const Tensor& x, std::size_t kh, std::size_t kw,
                           int stride, int pad) {
  const std::size_t n = gy.dim(0), oh = gy.dim(1), ow = gy.dim(2), co = gy.dim(3);
  const std::size_t h = x.dim(1), iw = x.dim(2), ci = x.dim(3);
  Tensor gw({kh, kw, ci, co});

  // Threads partition output channels; each dw element keeps its sequential
  // accumulation order over (n, oy, ox).
  const int workers = max_threads();
  const std::size_t co_chunk = workers > 1 ? (co + workers - 1) / workers : co;
  parallel_for(0, (co + co_chunk - 1) / co_chunk, [&](std::size_t chunk) {
    const std::size_t c_lo = chunk * co_chunk;
    const std::size_t c_hi = std::min(co, c_lo + co_chunk);
    for (std::size_t ni = 0; ni < n; ++ni) {
      for (std::size_t oy = 0; oy < oh; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
          const double* g = gy.data() + ((ni * oh + oy) * ow + ox) * co;
          for (std::size_t ky = 0; ky < kh; ++ky) {
            const std::ptrdiff_t in_y = static_cast<std::ptrdiff_t>(oy) * stride + ky - pad;
            if (in_y < 0 || in_y >= static_cast<std::ptrdiff_t>(h)) continue;
            for (std::size_t kx = 0; kx < kw; ++kx) {
              const std::ptrdiff_t in_x = static_cast<std::ptrdiff_t>(ox) * stride + kx - pad;
              if (in_x < 0 || in_x >= static_cast<std::ptrdiff_t>(iw)) continue;
              const double* xin = x.data() + ((ni * h + in_y) * iw + in_x) * ci;
              double* gwrow = gw.data() + (ky * kw + kx) * ci * co;
              for (std::size_t c = 0; c < ci; ++c) {
                const double xv = xin[c];
                double* gwc = gwrow + c * co;
                for (std::size_t o = c_lo; o < c_hi; ++o) gwc[o] += xv * g[o];
              }
            }
          }
        }
      }
    }
  });
  return gw;
}

Tensor conv2d_grad_bias(const Tensor& gy) {
  const std::size_t co = gy.dim(3);
  Tensor gb({co});
  const std::size_t rows = gy.size() / co;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* g = gy.data() + r * co;
    for (std::size_t c = 0; c < co; ++c) gb[c] += g[c];
  }
  return gb;
}

Tensor upsample2x(const Tensor& x) {
  require_rank(x, 4, "upsample2x");
  const std::size_t n = x.dim(0), h = x.dim(1), w = x.dim(2), c = x.dim(3);
  Tensor y({n, 2 * h, 2 * w, c});
  for (std::size_t ni = 0; ni < n; ++ni)
    for (std::size_t yy = 0; yy < 2 * h; ++yy)
      for (std::size_t xx = 0; xx < 2 * w; ++xx)
        std::memcpy(y.data() + ((ni * 2 * h + yy) * 2 * w + xx) * c,
                    x.data() + ((ni * h + yy / 2) * w + xx / 2) * c, c * sizeof(double));
  return y;
}

Tensor upsample2x_grad(const Tensor& gy) {
  require_rank(gy, 4, "upsample2x_grad");
  const std::size_t n = gy.dim(0), oh = gy.dim(1), ow = gy.dim(2), c = gy.dim(3);
  const std::size_t h = oh / 2, w = ow / 2;
  Tensor gx({n, h, w, c});
  for (std::size_t ni = 0; ni < n; ++ni)
    for (std::size_t yy = 0; yy < oh; ++yy)
      for (std::size_t xx = 0; xx < ow; ++xx) {
        const double* g = gy.data() + ((ni * oh + yy) * ow + xx) * c;
        double* out = gx.data() + ((ni * h + yy / 2) * w + xx / 2) * c;
        for (std::size_t cc = 0; cc < c; ++cc) out[cc] += g[cc];
      }
  return gx;
}

Tensor sigmoid(const Tensor& x) {
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (v >= 0.0) {
      y[i] = 1.0 / (1.0 + std::exp(-v));
    } else {
      const double e = std::exp(v);
      y[i] = e / (1.0 + e);
    }
  }
  return y;
}

Tensor tanh_map(const Tensor& x) {
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::tanh(x[i]);
  return y;
}

Tensor leaky_relu(const Tensor& x, double slope) {
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] >= 0.0 ? x[i] : slope * x[i];
  return y;
}

Tensor repeat_rows(const Tensor& x, std::size_t times) {
  require_rank(x, 2, "repeat_rows");
  if (times == 0) throw ValueError("repeat_rows: times must be positive");
  const std::size_t r = x.dim(0), c = x.dim(1);
  Tensor y({r * times, c});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t t = 0; t < times; ++t)
      std::memcpy(y.data() + (i * times + t) * c, x.data() + i * c, c * sizeof(double));
  return y;
}

Tensor repeat_rows_grad(const Tensor& gy, std::size_t times) {
  const std::size_t rows = gy.dim(0) / times, c = gy.dim(1);
  Tensor gx({rows, c});
  for (std::size_t i = 0; i < rows; ++i) {
    double* out = gx.data() + i * c;
    for (std::size_t t = 0; t < times; ++t) {
      const double* g = gy.data() + (i * times + t) * c;
      for (std::size_t cc = 0; cc < c; ++cc) out[cc] += g[cc];
    }
  }
  return gx;
}

Tensor concat_last(const Tensor& a, const Tensor& b) {
  if (a.rank() != b.rank() || a.rank() == 0) {
    throw ShapeError("concat_last: rank mismatch " + a.shape_str() + " vs " + b.shape_str());
  }
  for (std::size_t i = 0; i + 1 < a.rank(); ++i) {
    if (a.dim(i) != b.dim(i)) {
      throw ShapeError("concat_last: leading dims differ " + a.shape_str() + " vs " +
                       b.shape_str());
    }
  }
  const std::size_t ca = a.dim(a.rank() - 1), cb = b.dim(b.rank() - 1);
  const std::size_t rows = a.size() / ca;
  std::vector<std::size_t> shape = a.shape();
  shape.back() = ca + cb;
  Tensor y(shape);
  for (std::size_t r = 0; r < rows; ++r) {
    std::memcpy(y.data() + r * (ca + cb), a.data() + r * ca, ca * sizeof(double));
    std::memcpy(y.data() + r * (ca + cb) + ca, b.data() + r * cb, cb * sizeof(double));
  }
  return y;
}

Tensor gather_rows(const Tensor& table, const std::vector<std::size_t>& ids) {
  require_rank(table, 2, "gather_rows");
  const std::size_t v = table.dim(0), e = table.dim(1);
  Tensor y({ids.size(), e});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= v) {
      throw ValueError("gather_rows: id " + std::to_string(ids[i]) +
                       " out of vocabulary of size " + std::to_string(v));
    }
    std::memcpy(y.data() + i * e, table.data() + ids[i] * e, e * sizeof(double));
  }
  return y;
}

Tensor softmax_rows(const Tensor& logits) {
  require_rank(logits, 2, "softmax_rows");
  const std::size_t n = logits.dim(0), c = logits.dim(1);
  Tensor p({n, c});
  for (std::size_t i = 0; i < n; ++i) {
    const double* in = logits.data() + i * c;
    double* out = p.data() + i * c;
    double m = in[0];
    for (std::size_t j = 1; j < c; ++j) m = std::max(m, in[j]);
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      out[j] = std::exp(in[j] - m);
      z += out[j];
    }
    for (std::size_t j = 0; j < c; ++j) out[j] /= z;
  }
  return p;
}

}  // namespace brl::nn
