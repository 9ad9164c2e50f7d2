#include "evaluate.hpp"

#include <iomanip>
#include <sstream>

#include "metrics.hpp"
#include "resize.hpp"

namespace fc2n {

Predictor model_predictor(const Model& model) {
  return [&model](const ImageRGB& lr) {
    return tensor_to_image(model.infer(image_to_tensor(lr)), /*clamp=*/false);
  };
}

Predictor bicubic_predictor(int scale) {
  if (scale < 1) throw ArgError("bicubic_predictor: scale must be >= 1");
  return [scale](const ImageRGB& lr) {
    return bicubic_resize(lr, lr.h() * scale, lr.w() * scale, true);
  };
}

EvalReport evaluate_dataset(const Predictor& f, const std::vector<SrSample>& samples,
                            const std::string& dataset_name, int scale, EnsembleMode mode,
                            int shave) {
  if (samples.empty()) throw ArgError("evaluate_dataset: empty dataset");
  if (scale < 1) throw ArgError("evaluate_dataset: scale must be >= 1");
  EvalReport report;
  report.dataset = dataset_name;
  report.scale = scale;
  report.mode = mode;
  report.shave = shave < 0 ? scale : shave;
  report.rows.resize(samples.size());

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples.size()); ++i) {
    const SrSample& s = samples[i];
    const ImageRGB sr = clamp_image(predict_with_ensemble(f, s.lr, mode));
    report.rows[i] = EvalRow{s.name, psnr_y(sr, s.hr, report.shave),
                             ssim_y(sr, s.hr, report.shave)};
  }

  double psum = 0, ssum = 0;
  for (const EvalRow& r : report.rows) {
    psum += static_cast<double>(r.psnr);
    ssum += static_cast<double>(r.ssim);
  }
  report.mean_psnr = static_cast<real>(psum / static_cast<double>(report.rows.size()));
  report.mean_ssim = static_cast<real>(ssum / static_cast<double>(report.rows.size()));
  return report;
}

namespace {
const char* mode_name(EnsembleMode m) {
  switch (m) {
    case EnsembleMode::none: return "none";
    case EnsembleMode::geo: return "geo";
    case EnsembleMode::geo_range: return "geo+range";
  }
  return "?";
}
}  // namespace

std::string report_table(const EvalReport& report) {
  std::ostringstream out;
  std::size_t name_w = 5;
  for (const EvalRow& r : report.rows) name_w = std::max(name_w, r.name.size());
  out << report.dataset << "  x" << report.scale << "  ensemble=" << mode_name(report.mode)
      << "  shave=" << report.shave << "\n";
  out << std::left << std::setw(static_cast<int>(name_w) + 2) << "image" << std::right
      << std::setw(10) << "psnr_db" << std::setw(10) << "ssim" << "\n";
  out << std::fixed;
  for (const EvalRow& r : report.rows)
    out << std::left << std::setw(static_cast<int>(name_w) + 2) << r.name << std::right
        << std::setw(10) << std::setprecision(2) << r.psnr << std::setw(10)
        << std::setprecision(4) << r.ssim << "\n";
  out << std::left << std::setw(static_cast<int>(name_w) + 2) << "MEAN" << std::right
      << std::setw(10) << std::setprecision(2) << report.mean_psnr << std::setw(10)
      << std::setprecision(4) << report.mean_ssim << "\n";
  return out.str();
}

std::string report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "image,psnr_db,ssim\n" << std::fixed;
  for (const EvalRow& r : report.rows)
    out << r.name << ',' << std::setprecision(4) << r.psnr << ',' << std::setprecision(6)
        << r.ssim << "\n";
  out << "MEAN," << std::setprecision(4) << report.mean_psnr << ',' << std::setprecision(6)
      << report.mean_ssim << "\n";
  return out.str();
}

}  // namespace fc2n
