#pragma once

#include <string>
#include <vector>

#include "ensemble.hpp"
#include "model.hpp"

namespace fc2n {

struct EvalRow {
  std::string name;
  real psnr = 0;
  real ssim = 0;
};

struct EvalReport {
  std::string dataset;
  int scale = 1;
  EnsembleMode mode = EnsembleMode::none;
  int shave = 0;
  std::vector<EvalRow> rows;  // filename order
  real mean_psnr = 0;
  real mean_ssim = 0;
};

// Unclamped model predictor suitable for ensembles.
Predictor model_predictor(const Model& model);
// Plain bicubic upscale baseline at the given integer scale.
Predictor bicubic_predictor(int scale);

// Y-channel PSNR/SSIM per image plus arithmetic means. shave < 0 selects the
// default of `scale` pixels per border. Images may be processed concurrently;
// rows keep filename order.
EvalReport evaluate_dataset(const Predictor& f, const std::vector<SrSample>& samples,
                            const std::string& dataset_name, int scale, EnsembleMode mode,
                            int shave = -1);

std::string report_table(const EvalReport& report);
// "image,psnr_db,ssim" rows plus a MEAN row.
std::string report_csv(const EvalReport& report);

}  // namespace fc2n
