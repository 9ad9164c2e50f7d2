#include "autograd.hpp"

namespace fc2n {

Tape::NodeId Tape::push(Tensor4 v) {
  nodes_.push_back(Node{std::move(v), Tensor4(), nullptr});
  return static_cast<NodeId>(nodes_.size() - 1);
}

Tape::NodeId Tape::leaf(Tensor4 v) { return push(std::move(v)); }

Tape::NodeId Tape::param(Parameter& p) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) return it->second;
  NodeId id = push(p.value);
  nodes_[id].bound = &p;
  param_nodes_.emplace(&p, id);
  return id;
}

const Tensor4& Tape::grad(NodeId id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Tensor4(n.value.n(), n.value.h(), n.value.w(), n.value.c());
  return n.grad;
}

void Tape::accum(NodeId id, Tensor4&& g) {
  Node& n = nodes_[id];
  if (n.grad.empty())
    n.grad = std::move(g);
  else
    n.grad.add_inplace(g);
}

Tape::NodeId Tape::conv2d(NodeId input, NodeId kernel, NodeId bias, int padding) {
  NodeId out = push(conv2d_fwd(nodes_[input].value, nodes_[kernel].value, nodes_[bias].value,
                               padding));
  ops_.push_back({OpKind::Conv2d, [this, input, kernel, bias, padding, out] {
                    if (!has_grad(out)) return;
                    const Tensor4& go = nodes_[out].grad;
                    const Tensor4& x = nodes_[input].value;
                    const Tensor4& kw = nodes_[kernel].value;
                    accum(input, conv2d_bwd_input(go, kw, padding, x.h(), x.w()));
                    accum(kernel, conv2d_bwd_kernel(go, x, kw.n(), padding));
                    accum(bias, conv2d_bwd_bias(go));
                  }});
  return out;
}

Tape::NodeId Tape::relu(NodeId x) {
  NodeId out = push(relu_fwd(nodes_[x].value));
  ops_.push_back({OpKind::Relu, [this, x, out] {
                    if (!has_grad(out)) return;
                    accum(x, relu_bwd(nodes_[out].grad, nodes_[x].value));
                  }});
  return out;
}

Tape::NodeId Tape::concat_channels(const std::vector<NodeId>& parts) {
  std::vector<const Tensor4*> vals;
  vals.reserve(parts.size());
  for (NodeId p : parts) vals.push_back(&nodes_[p].value);
  NodeId out = push(concat_channels_fwd(vals));
  ops_.push_back({OpKind::Concat, [this, parts, out] {
                    if (!has_grad(out)) return;
                    const Tensor4& go = nodes_[out].grad;
                    int c0 = 0;
                    for (NodeId p : parts) {
                      const int pc = nodes_[p].value.c();
                      accum(p, slice_channels(go, c0, pc));
                      c0 += pc;
                    }
                  }});
  return out;
}

Tape::NodeId Tape::scale(NodeId x, NodeId lambda) {
  const Tensor4& lv = nodes_[lambda].value;
  if (lv.size() != 1) throw ArgError("scale: lambda must be scalar, got " + lv.dims_str());
  NodeId out = push(scale_fwd(nodes_[x].value, lv[0]));
  ops_.push_back({OpKind::Scale, [this, x, lambda, out] {
                    if (!has_grad(out)) return;
                    const Tensor4& go = nodes_[out].grad;
                    const real lam = nodes_[lambda].value[0];
                    accum(x, scale_fwd(go, lam));
                    accum(lambda, Tensor4::scalar(scale_bwd_lambda(go, nodes_[x].value)));
                  }});
  return out;
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
  NodeId out = push(add_fwd(nodes_[a].value, nodes_[b].value));
  ops_.push_back({OpKind::Add, [this, a, b, out] {
                    if (!has_grad(out)) return;
                    accum(a, Tensor4(nodes_[out].grad));
                    accum(b, Tensor4(nodes_[out].grad));
                  }});
  return out;
}

Tape::NodeId Tape::pixel_shuffle(NodeId x, int r) {
  NodeId out = push(pixel_shuffle_fwd(nodes_[x].value, r));
  ops_.push_back({OpKind::PixelShuffle, [this, x, r, out] {
                    if (!has_grad(out)) return;
                    accum(x, pixel_unshuffle(nodes_[out].grad, r));
                  }});
  return out;
}

Tape::NodeId Tape::l1_loss(NodeId pred, NodeId target) {
  NodeId out = push(Tensor4::scalar(l1_loss_fwd(nodes_[pred].value, nodes_[target].value)));
  ops_.push_back({OpKind::L1Loss, [this, pred, target, out] {
                    if (!has_grad(out)) return;
                    accum(pred,
                          l1_loss_bwd(nodes_[pred].value, nodes_[target].value, nodes_[out].grad[0]));
                  }});
  return out;
}

void Tape::backward(NodeId loss) {
  if (backward_done_) throw Error("backward: stale tape, build a new one per forward pass");
  if (ops_.empty()) throw ArgError("backward: empty tape");
  if (nodes_[loss].value.size() != 1)
    throw ArgError("backward: loss must be scalar, got " + nodes_[loss].value.dims_str());
  backward_done_ = true;

  accum(loss, Tensor4::scalar(real(1)));
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) it->backprop();

  for (auto& [p, id] : param_nodes_) {
    if (has_grad(id)) nodes_[id].bound->grad.add_inplace(nodes_[id].grad);
  }
}

int Tape::op_count(OpKind kind) const {
  int n = 0;
  for (const auto& op : ops_)
    if (op.kind == kind) ++n;
  return n;
}

}  // namespace fc2n
