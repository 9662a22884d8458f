#include "brl/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "brl/error.hpp"
#include "brl/nn_kernels.hpp"

namespace brl::ad {

NodeId Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return nodes_.size() - 1;
}

void Tape::accumulate(NodeId id, const Tensor& g) {
  Node& n = nodes_[id];
  if (!g.same_shape(n.value)) {
    throw ShapeError("gradient shape " + g.shape_str() + " does not match value " +
                     n.value.shape_str() + " of node '" + n.label + "'");
  }
  if (!n.has_grad) {
    n.grad = g;
    n.has_grad = true;
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) n.grad[i] += g[i];
  }
}

NodeId Tape::param(Tensor value, std::string label) {
  Node n;
  n.value = std::move(value);
  n.is_param = true;
  n.label = std::move(label);
  return push(std::move(n));
}

NodeId Tape::constant(Tensor value, std::string label) {
  Node n;
  n.value = std::move(value);
  n.label = std::move(label);
  return push(std::move(n));
}

NodeId Tape::add(NodeId a, NodeId b) {
  Node n;
  n.value = brl::add(value(a), value(b));
  n.parents = {a, b};
  n.label = "add";
  n.backprop = [](Tape& t, NodeId self) {
    const Tensor& g = t.nodes_[self].grad;
    t.accumulate(t.nodes_[self].parents[0], g);
    t.accumulate(t.nodes_[self].parents[1], g);
  };
  return push(std::move(n));
}

NodeId Tape::sub(NodeId a, NodeId b) {
  Node n;
  n.value = brl::sub(value(a), value(b));
  n.parents = {a, b};
  n.label = "sub";
  n.backprop = [](Tape& t, NodeId self) {
    const Tensor& g = t.nodes_[self].grad;
    t.accumulate(t.nodes_[self].parents[0], g);
    t.accumulate(t.nodes_[self].parents[1], brl::scale(g, -1.0));
  };
  return push(std::move(n));
}

NodeId Tape::mul(NodeId a, NodeId b) {
  Node n;
  n.value = brl::hadamard(value(a), value(b));
  n.parents = {a, b};
  n.label = "mul";
  n.backprop = [](Tape& t, NodeId self) {
    const Tensor& g = t.nodes_[self].grad;
    const NodeId a = t.nodes_[self].parents[0];
    const NodeId b = t.nodes_[self].parents[1];
    t.accumulate(a, brl::hadamard(g, t.value(b)));
    t.accumulate(b, brl::hadamard(g, t.value(a)));
  };
  return push(std::move(n));
}

NodeId Tape::scale(NodeId a, double s) {
  Node n;
  n.value = brl::scale(value(a), s);
  n.parents = {a};
  n.label = "scale";
  n.backprop = [s](Tape& t, NodeId self) {
    t.accumulate(t.nodes_[self].parents[0], brl::scale(t.nodes_[self].grad, s));
  };
  return push(std::move(n));
}

NodeId Tape::add_scalar(NodeId a, double s) {
  Node n;
  Tensor v = value(a);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += s;
  n.value = std::move(v);
  n.parents = {a};
  n.label = "add_scalar";
  n.backprop = [](Tape& t, NodeId self) {
    t.accumulate(t.nodes_[self].parents[0], t.nodes_[self].grad);
  };
  return push(std::move(n));
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  Node n;
  n.value = brl::matmul(value(a), value(b));
  n.parents = {a, b};
  n.label = "matmul";
  n.backprop = [](Tape& t, NodeId self) {
    const Tensor& g = t.nodes_[self].grad;
    const NodeId a = t.nodes_[self].parents[0];
    const NodeId b = t.nodes_[self].parents[1];
    t.accumulate(a, brl::matmul(g, brl::transpose(t.value(b))));
    t.accumulate(b, brl::matmul(brl::transpose(t.value(a)), g));
  };
  return push(std::move(n));
}

NodeId Tape::transpose(NodeId a) {
  Node n;
  n.value = brl::transpose(value(a));
  n.parents = {a};
  n.label = "transpose";
  n.backprop = [](Tape& t, NodeId self) {
    t.accumulate(t.nodes_[self].parents[0], brl::transpose(t.nodes_[self].grad));
  };
  return push(std::move(n));
}

NodeId Tape::reshape(NodeId a, std::vector<std::size_t> shape) {
  Node n;
  n.value = value(a).reshaped(shape);
  n.parents = {a};
  n.label = "reshape";
  n.backprop = [](Tape& t, NodeId self) {
    const Node& node = t.nodes_[self];
    t.accumulate(node.parents[0], node.grad.reshaped(t.value(node.parents[0]).shape()));
  };
  return push(std::move(n));
}

NodeId Tape::repeat_rows(NodeId a, std::size_t times) {
  Node n;
  n.value = nn::repeat_rows(value(a), times);
  n.parents = {a};
  n.label = "repeat_rows";
  n.backprop = [times](Tape& t, NodeId self) {
    t.accumulate(t.nodes_[self].parents[0], nn::repeat_rows_grad(t.nodes_[self].grad, times));
  };
  return push(std::move(n));
}

NodeId Tape::concat_last(NodeId a, NodeId b) {
  Node n;
  n.value = nn::concat_last(value(a), value(b));
  n.parents = {a, b};
  n.label = "concat_last";
  n.backprop = [](Tape& t, NodeId self) {
    const Node& node = t.nodes_[self];
    const Tensor& va = t.value(node.parents[0]);
    const Tensor& vb = t.value(node.parents[1]);
    const std::size_t ca = va.dim(va.rank() - 1);
    const std::size_t cb = vb.dim(vb.rank() - 1);
    const std::size_t rows = va.size() / ca;
    Tensor ga(va.shape());
    Tensor gb(vb.shape());
    const Tensor& g = node.grad;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t i = 0; i < ca; ++i) ga[r * ca + i] = g[r * (ca + cb) + i];
      for (std::size_t i = 0; i < cb; ++i) gb[r * cb + i] = g[r * (ca + cb) + ca + i];
    }
    t.accumulate(node.parents[0], ga);
    t.accumulate(node.parents[1], gb);
  };
  return push(std::move(n));
}

NodeId Tape::sum(NodeId a) {
  Node n;
  n.value = Tensor({1}, {brl::sum(value(a))});
  n.parents = {a};
  n.label = "sum";
  n.backprop = [](Tape& t, NodeId self) {
    const Node& node = t.nodes_[self];
    t.accumulate(node.parents[0],
                 Tensor::full(t.value(node.parents[0]).shape(), node.grad[0]));
  };
  return push(std::move(n));
}

NodeId Tape::mean(NodeId a) {
  const double inv = 1.0 / static_cast<double>(value(a).size());
  Node n;
  n.value = Tensor({1}, {brl::sum(value(a)) * inv});
  n.parents = {a};
  n.label = "mean";
  n.backprop = [inv](Tape& t, NodeId self) {
    const Node& node = t.nodes_[self];
    t.accumulate(node.parents[0],
                 Tensor::full(t.value(node.parents[0]).shape(), node.grad[0] * inv));
  };
  return push(std::move(n));
}

NodeId Tape::tanh(NodeId a) {
  Node n;
  n.value = nn::tanh_map(value(a));
  n.parents = {a};
  n.label = "tanh";
  n.backprop = [](Tape& t, NodeId self) {
    const Node& node = t.nodes_[self];
    Tensor gx(node.value.shape());
    for (std::size_t i = 0; i < gx.size(); ++i) {
      gx[i] = node.grad[i] * (1.0 - node.value[i] * node.value[i]);
    }
    t.accumulate(node.parents[0], gx);
  };
  return push(std::move(n));
}

NodeId Tape::sigmoid(NodeId a) {
  Node n;
  n.value = nn::sigmoid(value(a));
  n.parents = {a};
  n.label = "sigmoid";
  n.backprop = [](Tape& t, NodeId self) {
    const Node& node = t.nodes_[self];
    Tensor gx(node.value.shape());
    for (std::size_t i = 0; i < gx.size(); ++i) {
      gx[i] = node.grad[i] * node.value[i] * (1.0 - node.value[i]);
    }
    t.accumulate(node.parents[0], gx);
  };
  return push(std::move(n));
}

NodeId Tape::leaky_relu(NodeId a, double slope) {
  Node n;
  n.value = nn::leaky_relu(value(a), slope);
  n.parents = {a};
  n.label = "leaky_relu";
  n.is_leaky = true;
  n.backprop = [slope](Tape& t, NodeId self) {
    const Node& node = t.nodes_[self];
    const Tensor& x = t.value(node.parents[0]);
    Tensor gx(x.shape());
    for (std::size_t i = 0; i < gx.size(); ++i) {
      gx[i] = node.grad[i] * (x[i] >= 0.0 ? 1.0 : slope);
    }
    t.accumulate(node.parents[0], gx);
  };
  return push(std::move(n));
}

NodeId Tape::conv2d(NodeId x, NodeId w, NodeId bias, int stride, int pad) {
  Node n;
  n.value = nn::conv2d(value(x), value(w), value(bias), stride, pad);
  n.parents = {x, w, bias};
  n.label = "conv2d";
  n.backprop = [stride, pad](Tape& t, NodeId self) {
    const Node& node = t.nodes_[self];
    const Tensor& xv = t.value(node.parents[0]);
    const Tensor& wv = t.value(node.parents[1]);
    const Tensor& g = node.grad;
    t.accumulate(node.parents[0],
                 nn::conv2d_grad_input(g, wv, xv.dim(1), xv.dim(2), stride, pad));
    t.accumulate(node.parents[1],
                 nn::conv2d_grad_weights(g, xv, wv.dim(0), wv.dim(1), stride, pad));
    t.accumulate(node.parents[2], nn::conv2d_grad_bias(g));
  };
  return push(std::move(n));
}

NodeId Tape::upsample2x(NodeId x) {
  Node n;
  n.value = nn::upsample2x(value(x));
  n.parents = {x};
  n.label = "upsample2x";
  n.backprop = [](Tape& t, NodeId self) {
    t.accumulate(t.nodes_[self].parents[0], nn::upsample2x_grad(t.nodes_[self].grad));
  };
  return push(std::move(n));
}

NodeId Tape::gather_rows(NodeId table, std::vector<std::size_t> ids) {
  Node n;
  n.value = nn::gather_rows(value(table), ids);
  n.parents = {table};
  n.label = "gather_rows";
  n.backprop = [ids = std::move(ids)](Tape& t, NodeId self) {
    const Node& node = t.nodes_[self];
    const Tensor& tv = t.value(node.parents[0]);
    Tensor gt(tv.shape());
    const std::size_t e = tv.dim(1);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < e; ++j) gt[ids[i] * e + j] += node.grad[i * e + j];
    }
    t.accumulate(node.parents[0], gt);
  };
  return push(std::move(n));
}

NodeId Tape::bilinear_form(NodeId w, NodeId feat, NodeId cond) {
  const Tensor& wv = value(w);
  const Tensor& fv = value(feat);
  const Tensor& cv = value(cond);
  if (wv.rank() != 3 || fv.rank() != 1 || cv.rank() != 1 || wv.dim(1) != fv.size() ||
      wv.dim(2) != cv.size()) {
    throw ShapeError("bilinear_form: shapes " + wv.shape_str() + ", " + fv.shape_str() + ", " +
                     cv.shape_str() + " are inconsistent");
  }
  const std::size_t o = wv.dim(0), d = wv.dim(1), dc = wv.dim(2);
  Tensor out({o});
  for (std::size_t oi = 0; oi < o; ++oi) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double* wrow = wv.data() + (oi * d + i) * dc;
      double inner = 0.0;
      for (std::size_t j = 0; j < dc; ++j) inner += wrow[j] * cv[j];
      acc += fv[i] * inner;
    }
    out[oi] = acc;
  }
  Node n;
  n.value = std::move(out);
  n.parents = {w, feat, cond};
  n.label = "bilinear_form";
  n.backprop = [](Tape& t, NodeId self) {
    const Node& node = t.nodes_[self];
    const Tensor& wv = t.value(node.parents[0]);
    const Tensor& fv = t.value(node.parents[1]);
    const Tensor& cv = t.value(node.parents[2]);
    const std::size_t o = wv.dim(0), d = wv.dim(1), dc = wv.dim(2);
    const Tensor& g = node.grad;
    Tensor gw(wv.shape());
    Tensor gf(fv.shape());
    Tensor gc(cv.shape());
    for (std::size_t oi = 0; oi < o; ++oi) {
      const double go = g[oi];
      for (std::size_t i = 0; i < d; ++i) {
        const double* wrow = wv.data() + (oi * d + i) * dc;
        double* gwrow = gw.data() + (oi * d + i) * dc;
        double inner = 0.0;
        for (std::size_t j = 0; j < dc; ++j) {
          gwrow[j] = go * fv[i] * cv[j];
          inner += wrow[j] * cv[j];
          gc[j] += go * fv[i] * wrow[j];
        }
        gf[i] += go * inner;
      }
    }
    t.accumulate(node.parents[0], gw);
    t.accumulate(node.parents[1], gf);
    t.accumulate(node.parents[2], gc);
  };
  return push(std::move(n));
}

NodeId Tape::softmax_cross_entropy(NodeId logits, std::vector<std::size_t> labels) {
  const Tensor& lv = value(logits);
  if (lv.rank() != 2 || lv.dim(0) != labels.size()) {
    throw ShapeError("softmax_cross_entropy: logits " + lv.shape_str() + " vs " +
                     std::to_string(labels.size()) + " labels");
  }
  const std::size_t rows = lv.dim(0), cols = lv.dim(1);
  for (std::size_t lbl : labels) {
    if (lbl >= cols) throw ValueError("softmax_cross_entropy: label out of range");
  }
  const Tensor probs = nn::softmax_rows(lv);
  double loss = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    loss -= std::log(std::max(probs[i * cols + labels[i]], 1e-300));
  }
  loss /= static_cast<double>(rows);
  Node n;
  n.value = Tensor({1}, {loss});
  n.parents = {logits};
  n.label = "softmax_cross_entropy";
  n.backprop = [labels = std::move(labels), probs](Tape& t, NodeId self) {
    const Node& node = t.nodes_[self];
    const std::size_t rows = probs.dim(0), cols = probs.dim(1);
    const double g = node.grad[0] / static_cast<double>(rows);
    Tensor gl(probs.shape());
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        gl[i * cols + j] = g * (probs[i * cols + j] - (labels[i] == j ? 1.0 : 0.0));
      }
    }
    t.accumulate(node.parents[0], gl);
  };
  return push(std::move(n));
}

GradMap Tape::backward(NodeId root) {
  if (root >= nodes_.size()) throw ValueError("backward: root id out of range");
  if (nodes_[root].value.size() != 1) {
    throw ValueError("backward: root must be scalar-valued, got " +
                     nodes_[root].value.shape_str());
  }
  for (auto& n : nodes_) {
    n.has_grad = false;
    n.grad = Tensor();
  }
  accumulate(root, Tensor({1}, {1.0}));
  for (std::size_t i = root + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.has_grad && n.backprop) n.backprop(*this, i);
  }
  GradMap grads;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_param && nodes_[i].has_grad) grads.emplace(i, nodes_[i].grad);
  }
  return grads;
}

const Tensor& Tape::grad(NodeId id) const {
  if (!nodes_[id].has_grad) {
    throw ValueError("node '" + nodes_[id].label + "' holds no gradient");
  }
  return nodes_[id].grad;
}

double Tape::min_kink_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (const Node& n : nodes_) {
    if (!n.is_leaky) continue;
    const Tensor& x = nodes_[n.parents[0]].value;
    for (std::size_t i = 0; i < x.size(); ++i) best = std::min(best, std::fabs(x[i]));
  }
  return best;
}

std::string Tape::first_non_finite() const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Tensor& v = nodes_[i].value;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (!std::isfinite(v[j])) {
        return "node " + std::to_string(i) + " (" + nodes_[i].label + ")";
      }
    }
  }
  return "";
}

Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f, const Tensor& x,
                        double h) {
  if (!(h > 0.0)) throw ValueError("finite_diff_grad: h must be positive");
  Tensor g(x.shape());
  Tensor probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + h;
    const double fp = f(probe);
    probe[i] = orig - h;
    const double fm = f(probe);
    probe[i] = orig;
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw NumericError("finite_diff_grad: non-finite evaluation at coordinate " +
                         std::to_string(i));
    }
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace brl::ad
