#pragma once

#include <string>

#include "model.hpp"
#include "trainer.hpp"

namespace fc2n {

// Flat "key = value" run configuration. Blank lines and '#' comments are
// allowed; unknown keys are rejected with their line number. Missing keys
// take the lightweight-preset defaults; expand_width additionally defaults
// to 4 * base_width when only the latter is given.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  std::string data_dir;
  std::string val_dir;
  std::string out_dir = "out";

  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_text(const std::string& text, const std::string& origin = "<string>");

  // Full validation (model + train); train-only requirements (data_dir)
  // are checked by require_data_dir().
  void validate() const;
  void require_data_dir() const;
};

}  // namespace fc2n
