#include "ops.hpp"

#include <cmath>
#include <cstring>

namespace fc2n {

static void check_conv_args(const Tensor4& input, const Tensor4& kernel, const Tensor4& bias,
                            int padding) {
  const int k = kernel.n();
  if (k != kernel.h()) throw ArgError("conv2d: kernel must be square, got " + kernel.dims_str());
  if (k % 2 == 0) throw ArgError("conv2d: even kernel size " + std::to_string(k) + " unsupported");
  if (padding < 0) throw ArgError("conv2d: negative padding");
  if (kernel.w() != input.c())
    throw ShapeError("conv2d: input has " + std::to_string(input.c()) + " channels, kernel expects " +
                     std::to_string(kernel.w()));
  if (bias.size() != static_cast<std::size_t>(kernel.c()))
    throw ShapeError("conv2d: bias size " + std::to_string(bias.size()) + " vs C_out " +
                     std::to_string(kernel.c()));
  if (input.h() + 2 * padding < k || input.w() + 2 * padding < k)
    throw ShapeError("conv2d: spatial size " + input.dims_str() + " too small for kernel " +
                     std::to_string(k) + " with padding " + std::to_string(padding));
}

Tensor4 conv2d_fwd(const Tensor4& input, const Tensor4& kernel, const Tensor4& bias, int padding) {
  check_conv_args(input, kernel, bias, padding);
  const int k = kernel.n(), cin = kernel.w(), cout = kernel.c();
  const int n = input.n(), h = input.h(), w = input.w();
  const int oh = h + 2 * padding - k + 1;
  const int ow = w + 2 * padding - k + 1;
  Tensor4 out(n, oh, ow, cout);

  const real* in = input.data();
  const real* kw = kernel.data();
  const real* bs = bias.data();
  real* o = out.data();

#pragma omp parallel for collapse(2) schedule(static)
  for (int in_i = 0; in_i < n; ++in_i) {
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        real* orow = o + ((static_cast<std::size_t>(in_i) * oh + oy) * ow + ox) * cout;
        for (int u = 0; u < cout; ++u) orow[u] = bs[u];
        for (int ky = 0; ky < k; ++ky) {
          const int iy = oy + ky - padding;
          if (iy < 0 || iy >= h) continue;
          for (int kx = 0; kx < k; ++kx) {
            const int ix = ox + kx - padding;
            if (ix < 0 || ix >= w) continue;
            const real* irow = in + ((static_cast<std::size_t>(in_i) * h + iy) * w + ix) * cin;
            const real* krow = kw + (static_cast<std::size_t>(ky) * k + kx) * cin * cout;
            for (int ci = 0; ci < cin; ++ci) {
              const real a = irow[ci];
              const real* kc = krow + static_cast<std::size_t>(ci) * cout;
              for (int u = 0; u < cout; ++u) orow[u] += a * kc[u];
            }
          }
        }
      }
    }
  }
  return out;
}

Tensor4 conv2d_bwd_input(const Tensor4& grad_out, const Tensor4& kernel, int padding, int in_h,
                         int in_w) {
  const int k = kernel.n(), cin = kernel.w(), cout = kernel.c();
  const int n = grad_out.n(), oh = grad_out.h(), ow = grad_out.w();
  Tensor4 gin(n, in_h, in_w, cin);

  const real* go = grad_out.data();
  const real* kw = kernel.data();
  real* gi = gin.data();

  // Gather form: each input position sums the output positions it fed.
#pragma omp parallel for collapse(2) schedule(static)
  for (int in_i = 0; in_i < n; ++in_i) {
    for (int iy = 0; iy < in_h; ++iy) {
      for (int ix = 0; ix < in_w; ++ix) {
        real* grow = gi + ((static_cast<std::size_t>(in_i) * in_h + iy) * in_w + ix) * cin;
        for (int ky = 0; ky < k; ++ky) {
          const int oy = iy - ky + padding;
          if (oy < 0 || oy >= oh) continue;
          for (int kx = 0; kx < k; ++kx) {
            const int ox = ix - kx + padding;
            if (ox < 0 || ox >= ow) continue;
            const real* gorow = go + ((static_cast<std::size_t>(in_i) * oh + oy) * ow + ox) * cout;
            const real* krow = kw + (static_cast<std::size_t>(ky) * k + kx) * cin * cout;
            for (int ci = 0; ci < cin; ++ci) {
              const real* kc = krow + static_cast<std::size_t>(ci) * cout;
              real acc = 0;
              for (int u = 0; u < cout; ++u) acc += gorow[u] * kc[u];
              grow[ci] += acc;
            }
          }
        }
      }
    }
  }
  return gin;
}

Tensor4 conv2d_bwd_kernel(const Tensor4& grad_out, const Tensor4& input, int k, int padding) {
  const int cin = input.c(), cout = grad_out.c();
  const int n = input.n(), h = input.h(), w = input.w();
  const int oh = grad_out.h(), ow = grad_out.w();
  Tensor4 gk(k, k, cin, cout);

  const real* go = grad_out.data();
  const real* in = input.data();
  real* g = gk.data();

  // Each (ky, kx, ci) slot is owned by one iteration; accumulation over
  // batch, rows, cols runs in that fixed order.
#pragma omp parallel for collapse(2) schedule(static)
  for (int ky = 0; ky < k; ++ky) {
    for (int kx = 0; kx < k; ++kx) {
      for (int ci = 0; ci < cin; ++ci) {
        real* gslot = g + ((static_cast<std::size_t>(ky) * k + kx) * cin + ci) * cout;
        for (int in_i = 0; in_i < n; ++in_i) {
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = oy + ky - padding;
            if (iy < 0 || iy >= h) continue;
            for (int ox = 0; ox < ow; ++ox) {
              const int ix = ox + kx - padding;
              if (ix < 0 || ix >= w) continue;
              const real a = in[((static_cast<std::size_t>(in_i) * h + iy) * w + ix) * cin + ci];
              const real* gorow =
                  go + ((static_cast<std::size_t>(in_i) * oh + oy) * ow + ox) * cout;
              for (int u = 0; u < cout; ++u) gslot[u] += a * gorow[u];
            }
          }
        }
      }
    }
  }
  return gk;
}

Tensor4 conv2d_bwd_bias(const Tensor4& grad_out) {
  const int cout = grad_out.c();
  Tensor4 gb(1, 1, 1, cout);
  const real* go = grad_out.data();
  const std::size_t npix = grad_out.size() / cout;
  for (std::size_t p = 0; p < npix; ++p)
    for (int u = 0; u < cout; ++u) gb[u] += go[p * cout + u];
  return gb;
}

Tensor4 relu_fwd(const Tensor4& x) {
  Tensor4 y(x.n(), x.h(), x.w(), x.c());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0 ? x[i] : real(0);
  return y;
}

Tensor4 relu_bwd(const Tensor4& grad_out, const Tensor4& x) {
  Tensor4 g(x.n(), x.h(), x.w(), x.c());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] > 0 ? grad_out[i] : real(0);
  return g;
}

Tensor4 concat_channels_fwd(const std::vector<const Tensor4*>& parts) {
  if (parts.empty()) throw ArgError("concat_channels: empty part list");
  const Tensor4& first = *parts[0];
  int ctot = 0;
  for (const Tensor4* p : parts) {
    if (p->n() != first.n() || p->h() != first.h() || p->w() != first.w())
      throw ShapeError("concat_channels: part dims " + p->dims_str() + " vs " + first.dims_str());
    ctot += p->c();
  }
  Tensor4 out(first.n(), first.h(), first.w(), ctot);
  const std::size_t npix = static_cast<std::size_t>(first.n()) * first.h() * first.w();
  int coff = 0;
  for (const Tensor4* p : parts) {
    const int pc = p->c();
    const real* src = p->data();
    real* dst = out.data() + coff;
    for (std::size_t i = 0; i < npix; ++i)
      std::memcpy(dst + i * ctot, src + i * pc, sizeof(real) * pc);
    coff += pc;
  }
  return out;
}

Tensor4 slice_channels(const Tensor4& x, int c0, int len) {
  if (c0 < 0 || len < 1 || c0 + len > x.c())
    throw ArgError("slice_channels: range [" + std::to_string(c0) + "," +
                   std::to_string(c0 + len) + ") out of " + std::to_string(x.c()));
  Tensor4 out(x.n(), x.h(), x.w(), len);
  const std::size_t npix = static_cast<std::size_t>(x.n()) * x.h() * x.w();
  const real* src = x.data() + c0;
  real* dst = out.data();
  for (std::size_t i = 0; i < npix; ++i)
    std::memcpy(dst + i * len, src + i * x.c(), sizeof(real) * len);
  return out;
}

Tensor4 scale_fwd(const Tensor4& x, real lambda) {
  Tensor4 y(x.n(), x.h(), x.w(), x.c());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = lambda * x[i];
  return y;
}

real scale_bwd_lambda(const Tensor4& grad_out, const Tensor4& x) {
  real acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += grad_out[i] * x[i];
  return acc;
}

Tensor4 add_fwd(const Tensor4& a, const Tensor4& b) {
  if (!a.same_dims(b)) throw ShapeError("add: dims " + a.dims_str() + " vs " + b.dims_str());
  Tensor4 y(a.n(), a.h(), a.w(), a.c());
  for (std::size_t i = 0; i < a.size(); ++i) y[i] = a[i] + b[i];
  return y;
}

Tensor4 pixel_shuffle_fwd(const Tensor4& x, int r) {
  if (r < 1) throw ArgError("pixel_shuffle: r must be >= 1, got " + std::to_string(r));
  if (x.c() % (r * r) != 0)
    throw ShapeError("pixel_shuffle: channels " + std::to_string(x.c()) + " not divisible by r^2=" +
                     std::to_string(r * r));
  const int co = x.c() / (r * r);
  Tensor4 y(x.n(), x.h() * r, x.w() * r, co);
  for (int in_i = 0; in_i < x.n(); ++in_i)
    for (int iy = 0; iy < x.h(); ++iy)
      for (int ix = 0; ix < x.w(); ++ix)
        for (int dy = 0; dy < r; ++dy)
          for (int dx = 0; dx < r; ++dx) {
            const real* src = x.data() + x.index(in_i, iy, ix, (dy * r + dx) * co);
            real* dst = y.data() + y.index(in_i, iy * r + dy, ix * r + dx, 0);
            std::memcpy(dst, src, sizeof(real) * co);
          }
  return y;
}

Tensor4 pixel_unshuffle(const Tensor4& y, int r) {
  if (r < 1) throw ArgError("pixel_unshuffle: r must be >= 1, got " + std::to_string(r));
  if (y.h() % r != 0 || y.w() % r != 0)
    throw ShapeError("pixel_unshuffle: spatial dims " + y.dims_str() + " not divisible by r=" +
                     std::to_string(r));
  const int co = y.c();
  Tensor4 x(y.n(), y.h() / r, y.w() / r, co * r * r);
  for (int in_i = 0; in_i < x.n(); ++in_i)
    for (int iy = 0; iy < x.h(); ++iy)
      for (int ix = 0; ix < x.w(); ++ix)
        for (int dy = 0; dy < r; ++dy)
          for (int dx = 0; dx < r; ++dx) {
            const real* src = y.data() + y.index(in_i, iy * r + dy, ix * r + dx, 0);
            real* dst = x.data() + x.index(in_i, iy, ix, (dy * r + dx) * co);
            std::memcpy(dst, src, sizeof(real) * co);
          }
  return x;
}

real l1_loss_fwd(const Tensor4& pred, const Tensor4& target) {
  if (!pred.same_dims(target))
    throw ShapeError("l1_loss: dims " + pred.dims_str() + " vs " + target.dims_str());
  real acc = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - target[i]);
  return acc / static_cast<real>(pred.size());
}

Tensor4 l1_loss_bwd(const Tensor4& pred, const Tensor4& target, real upstream) {
  Tensor4 g(pred.n(), pred.h(), pred.w(), pred.c());
  const real s = upstream / static_cast<real>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const real d = pred[i] - target[i];
    g[i] = d > 0 ? s : (d < 0 ? -s : real(0));
  }
  return g;
}

}  // namespace fc2n
