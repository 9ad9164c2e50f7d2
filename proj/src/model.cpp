#include "model.hpp"

#include <atomic>
#include <cmath>
#include <memory>
#include <random>

namespace fc2n {

namespace {

std::atomic<std::uint64_t> g_forward_passes{0};

// Portable uniform in [0,1) from the raw 64-bit stream, so the draw sequence
// is pinned by the seed alone.
double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t conv_param_count(int k, int cin, int cout) {
  return static_cast<std::uint64_t>(k) * k * cin * cout + cout;
}

double conv_macs_per_px(int k, int cin, int cout) {
  return static_cast<double>(k) * k * cin * cout;
}

}  // namespace

void ModelConfig::validate() const {
  if (n < 1 || m < 1) throw ConfigError("model config: n and m must be >= 1");
  if (base_width < 1) throw ConfigError("model config: base_width must be >= 1");
  if (expand_width < base_width || expand_width % base_width != 0)
    throw ConfigError("model config: expand_width must be an integer multiple of base_width, got " +
                      std::to_string(expand_width) + " / " + std::to_string(base_width));
  if (scale != 2 && scale != 3 && scale != 4 && scale != 8)
    throw ConfigError("model config: unsupported scale " + std::to_string(scale) +
                      " (expected 2, 3, 4 or 8)");
}

std::vector<int> ModelConfig::upscale_stages() const {
  switch (scale) {
    case 2: return {2};
    case 3: return {3};
    case 4: return {2, 2};
    case 8: return {2, 2, 2};
    default: throw ConfigError("model config: unsupported scale " + std::to_string(scale));
  }
}

std::uint64_t count_params(const ModelConfig& cfg) {
  cfg.validate();
  const bool wcc = cfg.skip_mode == SkipMode::wcc;
  const int b = cfg.base_width, e = cfg.expand_width;

  std::uint64_t cb = conv_param_count(3, b, e) + conv_param_count(3, e, b);
  if (wcc) cb += conv_param_count(1, 2 * b, b) + (cfg.weighted_cb ? 2 : 0);

  std::uint64_t cg = static_cast<std::uint64_t>(cfg.m) * cb;
  if (wcc) cg += conv_param_count(1, 2 * b, b) + (cfg.weighted_cg ? 2 : 0);

  std::uint64_t total = conv_param_count(3, 3, b);  // shallow extraction
  total += static_cast<std::uint64_t>(cfg.n) * cg;
  total += conv_param_count(1, (cfg.n + 1) * b, b) + conv_param_count(3, b, b);  // fusion convs
  if (wcc && cfg.weighted_wgff) total += cfg.n + 1;
  for (int r : cfg.upscale_stages()) total += conv_param_count(3, b, b * r * r);
  total += conv_param_count(3, b, 3);  // output conv
  return total;
}

std::uint64_t compute_multiadds(const ModelConfig& cfg, int out_h, int out_w) {
  cfg.validate();
  if (out_h < 1 || out_w < 1) throw ArgError("compute_multiadds: output dims must be >= 1");
  const bool wcc = cfg.skip_mode == SkipMode::wcc;
  const int b = cfg.base_width, e = cfg.expand_width;
  const double lr_px =
      static_cast<double>(out_h) * out_w / (static_cast<double>(cfg.scale) * cfg.scale);

  double cb = conv_macs_per_px(3, b, e) + conv_macs_per_px(3, e, b);
  if (wcc) cb += conv_macs_per_px(1, 2 * b, b);
  double cg = cfg.m * cb;
  if (wcc) cg += conv_macs_per_px(1, 2 * b, b);

  double per_lr_px = conv_macs_per_px(3, 3, b) + cfg.n * cg +
                     conv_macs_per_px(1, (cfg.n + 1) * b, b) + conv_macs_per_px(3, b, b);

  double total = per_lr_px * lr_px;
  double px = lr_px;
  for (int r : cfg.upscale_stages()) {
    total += conv_macs_per_px(3, b, b * r * r) * px;
    px *= r * r;
  }
  total += conv_macs_per_px(3, b, 3) * static_cast<double>(out_h) * out_w;
  return static_cast<std::uint64_t>(std::llround(total));
}

// ---------------------------------------------------------------------------
// construction

Parameter& Model::add_param(const std::string& name, Tensor4 init) {
  registry_.emplace_back(name, std::move(init));
  return registry_.back();
}

Parameter& Model::add_lambda(const std::string& name) {
  return add_param(name, Tensor4::scalar(real(1)));  // weighting factors start at 1.0
}

struct ConvSpec {
  Parameter* weight = nullptr;
  Parameter* bias = nullptr;
  int padding = 0;
};

// Layer wiring over the registry; the deque gives stable Parameter addresses.
struct ModelLayers {
  struct Cb {
    ConvSpec expand, reduce, fuse;
    Parameter* lam1 = nullptr;
    Parameter* lam2 = nullptr;
  };
  struct Cg {
    std::vector<Cb> cbs;
    ConvSpec fuse;
    Parameter* lam_in = nullptr;
    Parameter* lam_out = nullptr;
  };
  ConvSpec head, wgff_fuse1, wgff_fuse2, tail;
  std::vector<Parameter*> wgff_lams;
  std::vector<Cg> cgs;
  std::vector<ConvSpec> up;
  std::vector<int> up_factors;
};

Model::~Model() = default;

Model::Model(ModelConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), layers_(std::make_unique<ModelLayers>()) {
  cfg_.validate();
  std::mt19937_64 rng(seed);
  const bool wcc = cfg_.skip_mode == SkipMode::wcc;
  const int b = cfg_.base_width, e = cfg_.expand_width;

  // Fan-in scaled uniform init keeps pre-activation variance bounded; biases
  // start at zero.
  auto conv = [&](const std::string& name, int k, int cin, int cout) {
    Tensor4 w(k, k, cin, cout);
    const double s = std::sqrt(1.0 / (static_cast<double>(k) * k * cin));
    for (std::size_t i = 0; i < w.size(); ++i)
      w[i] = static_cast<real>((2.0 * canonical(rng) - 1.0) * s);
    Parameter& pw = add_param(name + ".weight", std::move(w));
    Parameter& pb = add_param(name + ".bias", Tensor4(1, 1, 1, cout));
    return ConvSpec{&pw, &pb, (k - 1) / 2};
  };

  ModelLayers& L = *layers_;
  L.head = conv("head", 3, 3, b);

  for (int gi = 0; gi < cfg_.n; ++gi) {
    const std::string gp = "cg" + std::to_string(gi);
    ModelLayers::Cg cg;
    for (int bi = 0; bi < cfg_.m; ++bi) {
      const std::string bp = gp + ".cb" + std::to_string(bi);
      ModelLayers::Cb cb;
      cb.expand = conv(bp + ".expand", 3, b, e);
      cb.reduce = conv(bp + ".reduce", 3, e, b);
      if (wcc) {
        cb.fuse = conv(bp + ".fuse", 1, 2 * b, b);
        if (cfg_.weighted_cb) {
          cb.lam1 = &add_lambda(bp + ".lambda1");
          cb.lam2 = &add_lambda(bp + ".lambda2");
        }
      }
      cg.cbs.push_back(cb);
    }
    if (wcc) {
      cg.fuse = conv(gp + ".fuse", 1, 2 * b, b);
      if (cfg_.weighted_cg) {
        cg.lam_in = &add_lambda(gp + ".lambda_in");
        cg.lam_out = &add_lambda(gp + ".lambda_out");
      }
    }
    L.cgs.push_back(std::move(cg));
  }

  if (wcc && cfg_.weighted_wgff)
    for (int i = 0; i <= cfg_.n; ++i)
      L.wgff_lams.push_back(&add_lambda("wgff.lambda" + std::to_string(i)));
  L.wgff_fuse1 = conv("wgff.fuse1", 1, (cfg_.n + 1) * b, b);
  L.wgff_fuse2 = conv("wgff.fuse2", 3, b, b);

  int si = 0;
  for (int r : cfg_.upscale_stages()) {
    L.up.push_back(conv("up" + std::to_string(si++), 3, b, b * r * r));
    L.up_factors.push_back(r);
  }
  L.tail = conv("tail", 3, b, 3);
}

std::vector<Parameter*> Model::parameters() {
  std::vector<Parameter*> out;
  out.reserve(registry_.size());
  for (Parameter& p : registry_) out.push_back(&p);
  return out;
}

std::vector<const Parameter*> Model::parameters() const {
  std::vector<const Parameter*> out;
  out.reserve(registry_.size());
  for (const Parameter& p : registry_) out.push_back(&p);
  return out;
}

Parameter* Model::find(const std::string& name) {
  for (Parameter& p : registry_)
    if (p.name == name) return &p;
  return nullptr;
}

std::uint64_t Model::param_element_count() const {
  std::uint64_t total = 0;
  for (const Parameter& p : registry_) total += p.value.size();
  return total;
}

// ---------------------------------------------------------------------------
// forward: one composition, two executors (tape for training, plain tensors
// for inference)

namespace {

struct TapeExec {
  Tape& tape;
  using Ref = Tape::NodeId;
  Ref conv(const ConvSpec& c, Ref x) {
    return tape.conv2d(x, tape.param(*c.weight), tape.param(*c.bias), c.padding);
  }
  Ref relu(Ref x) { return tape.relu(x); }
  Ref concat(const std::vector<Ref>& parts) { return tape.concat_channels(parts); }
  Ref scale(Ref x, Parameter* lam) { return lam ? tape.scale(x, tape.param(*lam)) : x; }
  Ref add(Ref a, Ref b) { return tape.add(a, b); }
  Ref shuffle(Ref x, int r) { return tape.pixel_shuffle(x, r); }
};

struct PlainExec {
  using Ref = std::shared_ptr<const Tensor4>;
  static Ref mk(Tensor4 t) { return std::make_shared<const Tensor4>(std::move(t)); }
  Ref conv(const ConvSpec& c, Ref x) {
    return mk(conv2d_fwd(*x, c.weight->value, c.bias->value, c.padding));
  }
  Ref relu(Ref x) { return mk(relu_fwd(*x)); }
  Ref concat(const std::vector<Ref>& parts) {
    std::vector<const Tensor4*> ptrs;
    ptrs.reserve(parts.size());
    for (const Ref& p : parts) ptrs.push_back(p.get());
    return mk(concat_channels_fwd(ptrs));
  }
  Ref scale(Ref x, Parameter* lam) { return lam ? mk(scale_fwd(*x, lam->value[0])) : x; }
  Ref add(Ref a, Ref b) { return mk(add_fwd(*a, *b)); }
  Ref shuffle(Ref x, int r) { return mk(pixel_shuffle_fwd(*x, r)); }
};

template <class Ex>
typename Ex::Ref run_cb(Ex& ex, const ModelLayers::Cb& cb, bool wcc, typename Ex::Ref x) {
  auto h = ex.conv(cb.reduce, ex.relu(ex.conv(cb.expand, x)));
  if (!wcc) return ex.add(x, h);
  return ex.conv(cb.fuse, ex.concat({ex.scale(x, cb.lam1), ex.scale(h, cb.lam2)}));
}

template <class Ex>
typename Ex::Ref run_cg(Ex& ex, const ModelLayers::Cg& cg, bool wcc, typename Ex::Ref x) {
  auto y = x;
  for (const auto& cb : cg.cbs) y = run_cb(ex, cb, wcc, y);
  if (!wcc) return ex.add(x, y);
  return ex.conv(cg.fuse, ex.concat({ex.scale(x, cg.lam_in), ex.scale(y, cg.lam_out)}));
}

template <class Ex>
typename Ex::Ref run_network(Ex& ex, const ModelLayers& L, const ModelConfig& cfg,
                             typename Ex::Ref input) {
  const bool wcc = cfg.skip_mode == SkipMode::wcc;
  auto x0 = ex.conv(L.head, input);

  std::vector<typename Ex::Ref> feats{x0};
  auto x = x0;
  for (const auto& cg : L.cgs) {
    x = run_cg(ex, cg, wcc, x);
    feats.push_back(x);
  }

  std::vector<typename Ex::Ref> weighted;
  weighted.reserve(feats.size());
  for (std::size_t i = 0; i < feats.size(); ++i)
    weighted.push_back(ex.scale(feats[i], L.wgff_lams.empty() ? nullptr : L.wgff_lams[i]));
  auto deep = ex.conv(L.wgff_fuse2, ex.conv(L.wgff_fuse1, ex.concat(weighted)));

  for (std::size_t s = 0; s < L.up.size(); ++s)
    deep = ex.shuffle(ex.conv(L.up[s], deep), L.up_factors[s]);
  return ex.conv(L.tail, deep);
}

}  // namespace

Tape::NodeId Model::cb_forward(Tape& tape, Tape::NodeId x, int gi, int bi) {
  TapeExec ex{tape};
  return run_cb(ex, layers_->cgs.at(gi).cbs.at(bi), cfg_.skip_mode == SkipMode::wcc, x);
}

Tape::NodeId Model::cg_forward(Tape& tape, Tape::NodeId x, int gi) {
  TapeExec ex{tape};
  return run_cg(ex, layers_->cgs.at(gi), cfg_.skip_mode == SkipMode::wcc, x);
}

Tape::NodeId Model::forward(Tape& tape, Tape::NodeId lr_image) {
  const Tensor4& in = tape.value(lr_image);
  if (in.c() != 3)
    throw ShapeError("model forward: expected 3-channel input, got " + in.dims_str());
  g_forward_passes.fetch_add(1, std::memory_order_relaxed);
  TapeExec ex{tape};
  return run_network(ex, *layers_, cfg_, lr_image);
}

Tensor4 Model::infer(const Tensor4& lr_image) const {
  if (lr_image.c() != 3)
    throw ShapeError("model infer: expected 3-channel input, got " + lr_image.dims_str());
  g_forward_passes.fetch_add(1, std::memory_order_relaxed);
  PlainExec ex;
  auto out = run_network(ex, *layers_, cfg_, PlainExec::mk(lr_image));
  return Tensor4(*out);
}

std::uint64_t forward_pass_count() { return g_forward_passes.load(std::memory_order_relaxed); }

}  // namespace fc2n
