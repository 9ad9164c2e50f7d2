#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "adam.hpp"
#include "autograd.hpp"

namespace fc2n {

enum class SkipMode { wcc, residual };

// Full architectural description; the network is built deterministically
// from this plus a seed.
struct ModelConfig {
  int n = 4;               // concat groups
  int m = 4;               // concat blocks per group
  int base_width = 32;     // slim identity-path width
  int expand_width = 128;  // wide pre-ReLU width
  int scale = 2;           // in {2, 3, 4, 8}
  bool weighted_wgff = true;
  bool weighted_cg = true;
  bool weighted_cb = true;
  SkipMode skip_mode = SkipMode::wcc;

  int r_wa() const { return expand_width / base_width; }
  // Throws ConfigError on unsupported scale / inconsistent widths.
  void validate() const;

  static ModelConfig lightweight() { return ModelConfig{}; }
  static ModelConfig largescale() {
    ModelConfig c;
    c.n = 16;
    c.m = 8;
    return c;
  }

  // Sub-pixel upscale stages: x2 -> {2}, x3 -> {3}, x4 -> {2,2}, x8 -> {2,2,2}.
  std::vector<int> upscale_stages() const;
};

// Closed-form parameter count (kernels + biases + learnable weighting
// factors); equals the element count of a built model's registry exactly.
std::uint64_t count_params(const ModelConfig& cfg);

// Total multiply-accumulate count of all convolutions when producing an
// out_h x out_w output; kernel multiplications only (k^2*C_in*C_out per
// output pixel), bias adds and scalar weightings excluded. The nonlinear
// body runs at LR resolution.
std::uint64_t compute_multiadds(const ModelConfig& cfg, int out_h = 720, int out_w = 1280);

// Assembled network: shallow conv -> n CGs -> weighted global feature fusion
// -> sub-pixel upscale head -> 3-channel output conv. In residual skip mode
// the CBs/CGs are plain residual blocks and the fusion degrades to
// unweighted GFF.
class Model {
 public:
  Model(ModelConfig cfg, std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }

  // Registry in deterministic construction order.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  Parameter* find(const std::string& name);
  std::uint64_t param_element_count() const;

  // Single concat block / concat group, exposed for verification. gi/bi are
  // zero-based group/block indices.
  Tape::NodeId cb_forward(Tape& tape, Tape::NodeId x, int gi, int bi);
  Tape::NodeId cg_forward(Tape& tape, Tape::NodeId x, int gi);

  // Full network on a (N, h, w, 3) input in [0,1]; output (N, r*h, r*w, 3).
  Tape::NodeId forward(Tape& tape, Tape::NodeId lr_image);

  // Tape-free forward for inference.
  Tensor4 infer(const Tensor4& lr_image) const;

  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
  Model(Model&&) = default;
  Model& operator=(Model&&) = default;
  ~Model();

 private:
  Parameter& add_param(const std::string& name, Tensor4 init);
  Parameter& add_lambda(const std::string& name);

  ModelConfig cfg_;
  std::deque<Parameter> registry_;  // stable addresses
  std::unique_ptr<struct ModelLayers> layers_;
};

// Cumulative count of full-network forward passes in this process (tape and
// tape-free); lets callers assert how many passes an ensemble spent.
std::uint64_t forward_pass_count();

}  // namespace fc2n
