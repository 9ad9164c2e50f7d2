#include <cstring>
#include <fstream>
#include <unordered_map>

#include "trainer.hpp"

namespace fc2n {

namespace {

constexpr char kMagic[4] = {'F', 'C', '2', 'N'};
constexpr std::uint32_t kVersion = 1;
constexpr const char* kConfigTensor = "__model_config__";

void put_u16(std::ostream& out, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}
void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}
void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}
void put_f32(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

std::uint16_t get_u16(std::istream& in, const std::string& path) {
  unsigned char b[2];
  if (!in.read(reinterpret_cast<char*>(b), 2)) throw FormatError(path + ": truncated checkpoint");
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}
std::uint32_t get_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError(path + ": truncated checkpoint");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}
std::uint64_t get_u64(std::istream& in, const std::string& path) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw FormatError(path + ": truncated checkpoint");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}
float get_f32(std::istream& in, const std::string& path) {
  const std::uint32_t bits = get_u32(in, path);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

struct RawTensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;
};

void write_tensor(std::ostream& out, const std::string& name,
                  const std::vector<std::uint32_t>& dims, const float* data, std::size_t count) {
  put_u16(out, static_cast<std::uint16_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  out.put(static_cast<char>(dims.size()));
  for (std::uint32_t d : dims) put_u32(out, d);
  for (std::size_t i = 0; i < count; ++i) put_f32(out, data[i]);
}

// Rounds a live tensor through the serialized width and returns the stored
// payload.
std::vector<float> quantize_tensor(Tensor4& t) {
  std::vector<float> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[i] = static_cast<float>(t[i]);
    t[i] = static_cast<real>(out[i]);
  }
  return out;
}

std::vector<float> encode_model_config(const ModelConfig& c) {
  return {static_cast<float>(c.n),
          static_cast<float>(c.m),
          static_cast<float>(c.base_width),
          static_cast<float>(c.expand_width),
          static_cast<float>(c.scale),
          c.weighted_wgff ? 1.f : 0.f,
          c.weighted_cg ? 1.f : 0.f,
          c.weighted_cb ? 1.f : 0.f,
          c.skip_mode == SkipMode::residual ? 1.f : 0.f};
}

ModelConfig decode_model_config(const std::vector<float>& v, const std::string& path) {
  if (v.size() != 9) throw FormatError(path + ": malformed " + std::string(kConfigTensor));
  ModelConfig c;
  c.n = static_cast<int>(v[0]);
  c.m = static_cast<int>(v[1]);
  c.base_width = static_cast<int>(v[2]);
  c.expand_width = static_cast<int>(v[3]);
  c.scale = static_cast<int>(v[4]);
  c.weighted_wgff = v[5] != 0.f;
  c.weighted_cg = v[6] != 0.f;
  c.weighted_cb = v[7] != 0.f;
  c.skip_mode = v[8] != 0.f ? SkipMode::residual : SkipMode::wcc;
  return c;
}

std::vector<std::uint32_t> tensor_dims(const Tensor4& t) {
  return {static_cast<std::uint32_t>(t.n()), static_cast<std::uint32_t>(t.h()),
          static_cast<std::uint32_t>(t.w()), static_cast<std::uint32_t>(t.c())};
}

}  // namespace

void checkpoint_save(Model& model, AdamHyper& hyper, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path);

  auto params = model.parameters();
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(params.size() * 3 + 1));

  const std::vector<float> cfg = encode_model_config(model.config());
  write_tensor(out, kConfigTensor, {static_cast<std::uint32_t>(cfg.size())}, cfg.data(),
               cfg.size());

  for (Parameter* p : params) {
    const auto dims = tensor_dims(p->value);
    std::vector<float> v = quantize_tensor(p->value);
    write_tensor(out, p->name, dims, v.data(), v.size());
    v = quantize_tensor(p->adam_m);
    write_tensor(out, p->name + ".adam_m", dims, v.data(), v.size());
    v = quantize_tensor(p->adam_v);
    write_tensor(out, p->name + ".adam_v", dims, v.data(), v.size());
  }
  put_u64(out, static_cast<std::uint64_t>(hyper.step_count));
  if (!out) throw IoError("short write to checkpoint " + path);
}

LoadedCheckpoint checkpoint_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);

  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError(path + ": bad magic, not an FC2N checkpoint");
  const std::uint32_t version = get_u32(in, path);
  if (version != kVersion)
    throw FormatError(path + ": unsupported checkpoint version " + std::to_string(version));
  const std::uint32_t count = get_u32(in, path);

  std::unordered_map<std::string, RawTensor> tensors;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint16_t name_len = get_u16(in, path);
    std::string name(name_len, '\0');
    if (!in.read(name.data(), name_len)) throw FormatError(path + ": truncated checkpoint");
    const int rank = in.get();
    if (rank < 1 || rank > 4) throw FormatError(path + ": bad tensor rank");
    RawTensor t;
    std::size_t total = 1;
    for (int d = 0; d < rank; ++d) {
      t.dims.push_back(get_u32(in, path));
      total *= t.dims.back();
    }
    if (total == 0 || total > (1u << 30)) throw FormatError(path + ": bad tensor dims");
    t.data.resize(total);
    for (std::size_t e = 0; e < total; ++e) t.data[e] = get_f32(in, path);
    if (!tensors.emplace(std::move(name), std::move(t)).second)
      throw FormatError(path + ": duplicate tensor name");
  }
  const std::uint64_t step = get_u64(in, path);

  auto cfg_it = tensors.find(kConfigTensor);
  if (cfg_it == tensors.end())
    throw FormatError(path + ": missing " + std::string(kConfigTensor));
  const ModelConfig cfg = decode_model_config(cfg_it->second.data, path);

  LoadedCheckpoint out;
  out.model = std::make_unique<Model>(cfg, 0);
  auto params = out.model->parameters();
  if (tensors.size() != params.size() * 3 + 1)
    throw FormatError(path + ": tensor count " + std::to_string(tensors.size()) +
                      " does not match the architecture (" +
                      std::to_string(params.size() * 3 + 1) + " expected)");

  auto fill = [&](Tensor4& dst, const std::string& name) {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw FormatError(path + ": missing tensor " + name);
    if (it->second.data.size() != dst.size())
      throw FormatError(path + ": size mismatch for tensor " + name);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<real>(it->second.data[i]);
  };
  for (Parameter* p : params) {
    fill(p->value, p->name);
    fill(p->adam_m, p->name + ".adam_m");
    fill(p->adam_v, p->name + ".adam_v");
    p->grad.zero();
  }
  out.hyper.step_count = static_cast<std::int64_t>(step);
  return out;
}

}  // namespace fc2n
