#ifndef BRL_AUTODIFF_HPP_
#define BRL_AUTODIFF_HPP_

#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "brl/tensor.hpp"

namespace brl::ad {

using NodeId = std::size_t;

/// Gradient map returned by Tape::backward: parameter node id -> gradient.
using GradMap = std::map<NodeId, Tensor>;

/// Reverse-mode tape. One tape per training step, confined to one thread.
///
/// Nodes are appended in forward order, so iterating ids in reverse is a
/// topological order of the (acyclic) parent graph. Gradients accumulate in
/// that fixed reverse order, which makes backward() deterministic.
class Tape {
 public:
  /// Leaf that participates in backward() (a learnable parameter).
  NodeId param(Tensor value, std::string label = "param");

  /// Leaf treated as a constant: no gradient is accumulated for it.
  NodeId constant(Tensor value, std::string label = "const");

  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);  // elementwise
  NodeId scale(NodeId a, double s);
  NodeId add_scalar(NodeId a, double s);
  NodeId matmul(NodeId a, NodeId b);
  NodeId transpose(NodeId a);
  NodeId reshape(NodeId a, std::vector<std::size_t> shape);
  NodeId repeat_rows(NodeId a, std::size_t times);
  NodeId concat_last(NodeId a, NodeId b);
  NodeId sum(NodeId a);
  NodeId mean(NodeId a);

  NodeId tanh(NodeId a);
  NodeId sigmoid(NodeId a);
  NodeId leaky_relu(NodeId a, double slope);

  NodeId conv2d(NodeId x, NodeId w, NodeId bias, int stride, int pad);
  NodeId upsample2x(NodeId x);
  NodeId gather_rows(NodeId table, std::vector<std::size_t> ids);

  /// out[i] = feat · W_i · condᵀ for each slice W_i of w ([O,D,D']).
  NodeId bilinear_form(NodeId w, NodeId feat, NodeId cond);

  /// Mean cross-entropy of row-softmaxed logits against integer labels.
  NodeId softmax_cross_entropy(NodeId logits, std::vector<std::size_t> labels);

  const Tensor& value(NodeId id) const { return nodes_[id].value; }
  const std::string& label(NodeId id) const { return nodes_[id].label; }
  std::size_t node_count() const { return nodes_.size(); }

  /// Chain-rule pass from a scalar root. Returns gradients for every param
  /// leaf reachable from the root; unreachable params are absent.
  GradMap backward(NodeId root);

  bool has_grad(NodeId id) const { return nodes_[id].has_grad; }
  const Tensor& grad(NodeId id) const;

  /// Smallest |x| seen over all leaky_relu inputs; gradient checks use it
  /// to reject draws where a finite difference would straddle the kink.
  double min_kink_distance() const;

  /// First node (creation order) holding a non-finite value, as
  /// "node <id> (<label>)", or empty string when all values are finite.
  std::string first_non_finite() const;

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool has_grad = false;
    bool is_param = false;
    bool is_leaky = false;
    std::vector<NodeId> parents;
    std::function<void(Tape&, NodeId)> backprop;
    std::string label;
  };

  NodeId push(Node n);
  void accumulate(NodeId id, const Tensor& g);

  // deque: references returned by value() stay valid as nodes are appended
  std::deque<Node> nodes_;
};

/// Central finite differences (f(x+h e_i) - f(x-h e_i)) / 2h per coordinate.
/// The independent oracle for backward(); h must be positive.
Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f, const Tensor& x,
                        double h = 1e-5);

}  // namespace brl::ad

#endif  // BRL_AUTODIFF_HPP_
