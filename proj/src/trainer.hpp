#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "model.hpp"

namespace fc2n {

struct TrainConfig {
  int batch_size = 16;
  int patch_size = 48;  // LR patch edge; HR patches are scale x larger
  std::int64_t total_steps = 2000;
  double lr_init = 2e-4;
  double lr_halve_every = 4.0e5;
  int scale = 2;
  std::uint64_t seed = 0;
  std::int64_t checkpoint_every = 1000;
  std::int64_t validate_every = 100;

  void validate() const;
};

// lr_init * 0.5^floor(step / lr_halve_every); non-increasing, piecewise
// constant with breakpoints at multiples of lr_halve_every.
double lr_schedule(std::int64_t step, const TrainConfig& cfg);

// Forward, L1 loss, backward, Adam update. Batches are (B,h,w,3) /
// (B,rh,rw,3) tensors in [0,1]. Returns the pre-update loss; throws
// TrainAbort with diagnostics if the loss goes non-finite.
real train_step(Model& model, const Tensor4& lr_batch, const Tensor4& hr_batch, AdamHyper& hyper);

// ---------------------------------------------------------------------------
// Checkpoints. Binary named-tensor archive:
//   magic "FC2N" | version u32 LE | tensor count u32 LE |
//   per tensor: name_len u16 LE, name, rank u8, dims u32 LE each,
//               payload as raw little-endian 32-bit floats |
//   step counter u64 LE.
// Tensors: every model Parameter under its registry name plus ".adam_m" /
// ".adam_v" moment slots, and a "__model_config__" descriptor vector.
//
// Saving commits the live state to the serialized 32-bit representation
// (identity in single-precision builds), so a run that continues after a
// save and a run resumed from that file follow bit-identical trajectories.

void checkpoint_save(Model& model, AdamHyper& hyper, const std::string& path);

struct LoadedCheckpoint {
  std::unique_ptr<Model> model;
  AdamHyper hyper;  // step_count restored; lr left for the schedule to set
};
LoadedCheckpoint checkpoint_load(const std::string& path);

// ---------------------------------------------------------------------------

struct TrainResult {
  std::int64_t final_step = 0;
  real final_loss = 0;
  std::string final_checkpoint;
};

// Runs train_step from hyper.step_count (0 on a fresh model, the saved step
// counter after checkpoint_load) up to cfg.total_steps. Patch sampling,
// augmentation draws and the learning rate at step k depend only on
// (cfg.seed, k), so a resumed run replays the uninterrupted stream. A log
// record "step<TAB>loss<TAB>lr<TAB>val_psnr?" is written every
// cfg.validate_every steps and at the final step; val_psnr is present when
// val_data is non-empty. Checkpoints land under out_dir every
// cfg.checkpoint_every steps plus ckpt_final.fc2n at completion.
TrainResult train_loop(Model& model, const std::vector<SrSample>& train_data,
                       const std::vector<SrSample>& val_data, const TrainConfig& cfg,
                       AdamHyper& hyper, const std::string& out_dir, std::ostream* log);

}  // namespace fc2n
