#include "trainer.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "ensemble.hpp"
#include "metrics.hpp"

namespace fs = std::filesystem;

namespace fc2n {

void TrainConfig::validate() const {
  if (batch_size < 1 || patch_size < 1 || total_steps < 0 || scale < 1 ||
      checkpoint_every < 1 || validate_every < 1)
    throw ConfigError("train config: sizes and intervals must be positive");
  if (!(lr_init > 0) || !(lr_halve_every > 0))
    throw ConfigError("train config: lr_init and lr_halve_every must be positive");
}

double lr_schedule(std::int64_t step, const TrainConfig& cfg) {
  if (step < 0) throw ArgError("lr_schedule: negative step");
  const double halvings = std::floor(static_cast<double>(step) / cfg.lr_halve_every);
  return cfg.lr_init * std::pow(0.5, halvings);
}

real train_step(Model& model, const Tensor4& lr_batch, const Tensor4& hr_batch, AdamHyper& hyper) {
  Tape tape;
  const Tape::NodeId pred = model.forward(tape, tape.leaf(lr_batch));
  const Tape::NodeId loss_node = tape.l1_loss(pred, tape.leaf(hr_batch));
  const real loss = tape.value(loss_node)[0];
  if (!std::isfinite(loss)) {
    std::ostringstream msg;
    msg << "train aborted: non-finite loss " << loss << " at step " << hyper.step_count
        << " (lr " << hyper.lr << ")";
    throw TrainAbort(msg.str());
  }
  tape.backward(loss_node);

  auto params = model.parameters();
  double grad_sq = 0, grad_max = 0;
  for (Parameter* p : params)
    for (std::size_t i = 0; i < p->grad.size(); ++i) {
      const double g = static_cast<double>(p->grad[i]);
      grad_sq += g * g;
      grad_max = std::max(grad_max, std::abs(g));
    }
  if (!std::isfinite(grad_sq)) {
    std::ostringstream msg;
    msg << "train aborted: non-finite gradients at step " << hyper.step_count << " (lr "
        << hyper.lr << ", loss " << loss << ", |g|max " << grad_max << ")";
    throw TrainAbort(msg.str());
  }
  adam_step(params, hyper);
  return loss;
}

namespace {

std::mt19937_64 step_rng(std::uint64_t seed, std::int64_t step) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32)};
  return std::mt19937_64(seq);
}

void fill_batch_row(Tensor4& batch, int row, const ImageRGB& img) {
  for (int y = 0; y < img.h(); ++y)
    for (int x = 0; x < img.w(); ++x)
      for (int c = 0; c < 3; ++c) batch.at(row, y, x, c) = img.at(c, y, x) / real(255);
}

real validation_psnr(Model& model, const std::vector<SrSample>& val, int scale) {
  double total = 0;
  for (const SrSample& s : val) {
    const ImageRGB sr = clamp_image(tensor_to_image(model.infer(image_to_tensor(s.lr)), false));
    total += static_cast<double>(psnr_y(sr, s.hr, scale));
  }
  return static_cast<real>(total / static_cast<double>(val.size()));
}

}  // namespace

TrainResult train_loop(Model& model, const std::vector<SrSample>& train_data,
                       const std::vector<SrSample>& val_data, const TrainConfig& cfg,
                       AdamHyper& hyper, const std::string& out_dir, std::ostream* log) {
  cfg.validate();
  if (train_data.empty()) throw ArgError("train_loop: empty dataset");
  if (!out_dir.empty()) fs::create_directories(out_dir);

  // Images large enough for the patch; the rest are skipped up front.
  std::vector<const SrSample*> eligible;
  for (const SrSample& s : train_data)
    if (s.lr.h() >= cfg.patch_size && s.lr.w() >= cfg.patch_size) eligible.push_back(&s);
  if (eligible.empty())
    throw ArgError("train_loop: no training image is at least " + std::to_string(cfg.patch_size) +
                   "x" + std::to_string(cfg.patch_size) + " in LR space");

  hyper.beta1 = real(0.9);
  hyper.beta2 = real(0.999);
  hyper.eps = real(1e-8);

  auto ckpt_path = [&](const std::string& tag) {
    return (fs::path(out_dir.empty() ? "." : out_dir) / ("ckpt_" + tag + ".fc2n")).string();
  };
  auto emit = [&](std::int64_t step, real loss, double lr) {
    if (!log) return;
    (*log) << step << '\t' << loss << '\t' << lr;
    if (!val_data.empty()) (*log) << '\t' << validation_psnr(model, val_data, cfg.scale);
    (*log) << '\n';
    log->flush();
  };

  const int p = cfg.patch_size, r = cfg.scale;
  Tensor4 lr_batch(cfg.batch_size, p, p, 3);
  Tensor4 hr_batch(cfg.batch_size, p * r, p * r, 3);

  real loss = 0;
  std::int64_t step = hyper.step_count;
  TrainResult result;
  for (; step < cfg.total_steps; ++step) {
    std::mt19937_64 rng = step_rng(cfg.seed, step);
    for (int b = 0; b < cfg.batch_size; ++b) {
      const SrSample& s =
          *eligible[uniform_below(rng, static_cast<std::uint32_t>(eligible.size()))];
      auto pair = extract_patch_pair(s.hr, s.lr, p, r, rng);
      // Each augmentation flag is an independent coin flip.
      const bool fh = rng() & 1, fv = rng() & 1, rot = rng() & 1, comp = rng() & 1;
      PatchPair aug = augment(*pair, fh, fv, rot, comp);
      fill_batch_row(lr_batch, b, aug.lr);
      fill_batch_row(hr_batch, b, aug.hr);
    }
    hyper.lr = static_cast<real>(lr_schedule(step, cfg));
    loss = train_step(model, lr_batch, hr_batch, hyper);

    const std::int64_t done = step + 1;
    if (done % cfg.validate_every == 0 || done == cfg.total_steps) emit(done, loss, hyper.lr);
    if (done % cfg.checkpoint_every == 0 && done != cfg.total_steps)
      checkpoint_save(model, hyper, ckpt_path(std::to_string(done)));
  }

  result.final_step = step;
  result.final_loss = loss;
  result.final_checkpoint = ckpt_path("final");
  checkpoint_save(model, hyper, result.final_checkpoint);
  return result;
}

}  // namespace fc2n
