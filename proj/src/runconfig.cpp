#include "runconfig.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fc2n {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_line(const std::string& origin, int line, const std::string& why) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + why);
}

long long parse_int(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
  long long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    bad_line(origin, line, "key '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

double parse_float(const std::string& origin, int line, const std::string& key,
                   const std::string& v) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    bad_line(origin, line, "key '" + key + "' expects a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& origin, int line, const std::string& key,
                const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_line(origin, line, "key '" + key + "' expects true/false, got '" + v + "'");
}

}  // namespace

RunConfig RunConfig::parse_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  bool saw_expand = false, saw_base = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) bad_line(origin, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) bad_line(origin, line_no, "expected 'key = value'");

    if (key == "n") cfg.model.n = static_cast<int>(parse_int(origin, line_no, key, val));
    else if (key == "m") cfg.model.m = static_cast<int>(parse_int(origin, line_no, key, val));
    else if (key == "base_width") {
      cfg.model.base_width = static_cast<int>(parse_int(origin, line_no, key, val));
      saw_base = true;
    } else if (key == "expand_width") {
      cfg.model.expand_width = static_cast<int>(parse_int(origin, line_no, key, val));
      saw_expand = true;
    } else if (key == "scale") {
      cfg.model.scale = static_cast<int>(parse_int(origin, line_no, key, val));
      cfg.train.scale = cfg.model.scale;
    } else if (key == "weighted_wgff") cfg.model.weighted_wgff = parse_bool(origin, line_no, key, val);
    else if (key == "weighted_cg") cfg.model.weighted_cg = parse_bool(origin, line_no, key, val);
    else if (key == "weighted_cb") cfg.model.weighted_cb = parse_bool(origin, line_no, key, val);
    else if (key == "skip_mode") {
      if (val == "wcc") cfg.model.skip_mode = SkipMode::wcc;
      else if (val == "residual") cfg.model.skip_mode = SkipMode::residual;
      else bad_line(origin, line_no, "skip_mode must be 'wcc' or 'residual', got '" + val + "'");
    } else if (key == "batch_size") cfg.train.batch_size = static_cast<int>(parse_int(origin, line_no, key, val));
    else if (key == "patch_size") cfg.train.patch_size = static_cast<int>(parse_int(origin, line_no, key, val));
    else if (key == "lr_init") cfg.train.lr_init = parse_float(origin, line_no, key, val);
    else if (key == "lr_halve_every") cfg.train.lr_halve_every = parse_float(origin, line_no, key, val);
    else if (key == "total_steps") cfg.train.total_steps = parse_int(origin, line_no, key, val);
    else if (key == "seed") cfg.train.seed = static_cast<std::uint64_t>(parse_int(origin, line_no, key, val));
    else if (key == "checkpoint_every") cfg.train.checkpoint_every = parse_int(origin, line_no, key, val);
    else if (key == "validate_every") cfg.train.validate_every = parse_int(origin, line_no, key, val);
    else if (key == "data_dir") cfg.data_dir = val;
    else if (key == "val_dir") cfg.val_dir = val;
    else if (key == "out_dir") cfg.out_dir = val;
    else bad_line(origin, line_no, "unknown key '" + key + "'");
  }

  if (saw_base && !saw_expand) cfg.model.expand_width = 4 * cfg.model.base_width;
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

void RunConfig::validate() const {
  model.validate();
  train.validate();
  if (train.scale != model.scale)
    throw ConfigError("config: train/model scale mismatch");  // set jointly by the scale key
}

void RunConfig::require_data_dir() const {
  if (data_dir.empty()) throw ConfigError("config: missing required key 'data_dir'");
}

}  // namespace fc2n
