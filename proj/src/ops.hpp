#pragma once

#include <vector>

#include "tensor.hpp"

namespace fc2n {

// Raw forward/backward kernels on Tensor4. The tape (autograd.hpp) and the
// tape-free inference path both call into these. Stride is always 1 and
// padding is zero-fill; convolution uses cross-correlation semantics (no
// kernel flip), kernels are laid out [k, k, C_in, C_out].
//
// Every kernel is deterministic for a fixed thread count: parallel loops own
// disjoint output elements, and reductions (kernel/bias gradients) run
// sequentially over batch, then rows, then columns for each owned slot.

Tensor4 conv2d_fwd(const Tensor4& input, const Tensor4& kernel, const Tensor4& bias, int padding);
Tensor4 conv2d_bwd_input(const Tensor4& grad_out, const Tensor4& kernel, int padding, int in_h,
                         int in_w);
Tensor4 conv2d_bwd_kernel(const Tensor4& grad_out, const Tensor4& input, int k, int padding);
Tensor4 conv2d_bwd_bias(const Tensor4& grad_out);

Tensor4 relu_fwd(const Tensor4& x);
// Gradient is 0 at exactly x == 0.
Tensor4 relu_bwd(const Tensor4& grad_out, const Tensor4& x);

Tensor4 concat_channels_fwd(const std::vector<const Tensor4*>& parts);
// Slice channels [c0, c0+len) out of x; used for the concat backward split.
Tensor4 slice_channels(const Tensor4& x, int c0, int len);

Tensor4 scale_fwd(const Tensor4& x, real lambda);
// dLoss/dlambda = sum(x .* grad_out).
real scale_bwd_lambda(const Tensor4& grad_out, const Tensor4& x);

Tensor4 add_fwd(const Tensor4& a, const Tensor4& b);

// (N, H, W, C*r^2) -> (N, rH, rW, C); channel (dy*r + dx)*C + c lands at
// spatial offset (dy, dx) inside each r x r cell.
Tensor4 pixel_shuffle_fwd(const Tensor4& x, int r);
// Exact inverse reassembly of pixel_shuffle_fwd.
Tensor4 pixel_unshuffle(const Tensor4& y, int r);

// Mean absolute difference over all elements.
real l1_loss_fwd(const Tensor4& pred, const Tensor4& target);
// Subgradient: sign(pred - target) / element_count, 0 where equal.
Tensor4 l1_loss_bwd(const Tensor4& pred, const Tensor4& target, real upstream);

}  // namespace fc2n
