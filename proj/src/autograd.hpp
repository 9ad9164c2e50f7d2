#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ops.hpp"

namespace fc2n {

// Learnable tensor plus its gradient accumulator and Adam state slots.
// Scalars (the concatenation weighting factors) are stored as 1x1x1x1.
struct Parameter {
  std::string name;
  Tensor4 value;
  Tensor4 grad;
  Tensor4 adam_m;
  Tensor4 adam_v;

  Parameter() = default;
  Parameter(std::string name_, Tensor4 value_)
      : name(std::move(name_)),
        value(std::move(value_)),
        grad(value.n(), value.h(), value.w(), value.c()),
        adam_m(value.n(), value.h(), value.w(), value.c()),
        adam_v(value.n(), value.h(), value.w(), value.c()) {}
};

enum class OpKind { Conv2d, Relu, Concat, Scale, Add, PixelShuffle, L1Loss };

// Dynamic tape: ops append their output value and a backward closure as they
// execute; backward() replays the closures in exact reverse order and then
// flushes node gradients into the bound Parameters. One tape is good for one
// forward/backward pair.
class Tape {
 public:
  using NodeId = int;

  NodeId leaf(Tensor4 v);
  // Binds a node to a Parameter; repeated calls with the same Parameter
  // return the same node.
  NodeId param(Parameter& p);

  const Tensor4& value(NodeId id) const { return nodes_[id].value; }
  // Gradient of the loss w.r.t. a node, valid after backward(). Zero tensor
  // if the node did not contribute to the loss.
  const Tensor4& grad(NodeId id);

  NodeId conv2d(NodeId input, NodeId kernel, NodeId bias, int padding);
  NodeId relu(NodeId x);
  NodeId concat_channels(const std::vector<NodeId>& parts);
  NodeId scale(NodeId x, NodeId lambda);
  NodeId add(NodeId a, NodeId b);
  NodeId pixel_shuffle(NodeId x, int r);
  NodeId l1_loss(NodeId pred, NodeId target);

  // Populates Parameter.grad for every parameter reachable from the loss.
  // Throws if the loss is not scalar, the tape is empty, or backward already
  // ran on this tape.
  void backward(NodeId loss);

  std::size_t num_ops() const { return ops_.size(); }
  int op_count(OpKind kind) const;

 private:
  struct Node {
    Tensor4 value;
    Tensor4 grad;        // allocated on first accumulation
    Parameter* bound = nullptr;
  };
  struct OpRecord {
    OpKind kind;
    std::function<void()> backprop;
  };

  NodeId push(Tensor4 v);
  void accum(NodeId id, Tensor4&& g);
  bool has_grad(NodeId id) const { return !nodes_[id].grad.empty(); }

  std::vector<Node> nodes_;
  std::vector<OpRecord> ops_;
  std::unordered_map<const Parameter*, NodeId> param_nodes_;
  bool backward_done_ = false;
};

}  // namespace fc2n
