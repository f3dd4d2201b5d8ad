#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "dhse/error.hpp"
#include "dhse/nn/param.hpp"

namespace dhse {

// Model checkpoint layout (little-endian):
//   magic "DHSM" | u32 version=1
//   u64 config_len | config bytes (JSON text, opaque to this reader)
//   u32 tensor_count | per tensor:
//     u32 name_len, name bytes, u32 rank, u64 dims[rank], f64 payload
struct CheckpointTensor {
  std::string name;
  std::vector<std::size_t> dims;
  std::vector<double> data;
};

struct Checkpoint {
  std::string config_json;
  std::vector<CheckpointTensor> tensors;
};

namespace detail {

template <typename T>
void ckpt_write(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ckpt_read(std::istream& in, const std::string& what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ValidationError("truncated checkpoint while reading " + what);
  return v;
}

}  // namespace detail

inline void save_checkpoint(const std::string& path, const std::string& config_json,
                            std::span<const ParamRef> params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  out.write("DHSM", 4);
  detail::ckpt_write(out, static_cast<std::uint32_t>(1));
  detail::ckpt_write(out, static_cast<std::uint64_t>(config_json.size()));
  out.write(config_json.data(), static_cast<std::streamsize>(config_json.size()));
  detail::ckpt_write(out, static_cast<std::uint32_t>(params.size()));
  for (const ParamRef& p : params) {
    detail::ckpt_write(out, static_cast<std::uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    detail::ckpt_write(out, static_cast<std::uint32_t>(p.dims.size()));
    for (std::size_t d : p.dims) detail::ckpt_write(out, static_cast<std::uint64_t>(d));
    out.write(reinterpret_cast<const char*>(p.value.data()),
              static_cast<std::streamsize>(p.value.size() * sizeof(double)));
  }
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "DHSM", 4) != 0) {
    throw ValidationError("bad magic in checkpoint: " + path);
  }
  const auto version = detail::ckpt_read<std::uint32_t>(in, "version");
  if (version != 1) {
    throw ValidationError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  const auto config_len = detail::ckpt_read<std::uint64_t>(in, "config length");
  ckpt.config_json.resize(config_len);
  in.read(ckpt.config_json.data(), static_cast<std::streamsize>(config_len));
  if (!in) throw ValidationError("truncated checkpoint config block");
  const auto count = detail::ckpt_read<std::uint32_t>(in, "tensor count");
  for (std::uint32_t t = 0; t < count; ++t) {
    CheckpointTensor tensor;
    const auto name_len = detail::ckpt_read<std::uint32_t>(in, "tensor name length");
    tensor.name.resize(name_len);
    in.read(tensor.name.data(), name_len);
    if (!in) throw ValidationError("truncated checkpoint tensor name");
    const auto rank = detail::ckpt_read<std::uint32_t>(in, "tensor rank");
    std::size_t total = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      const auto dim = detail::ckpt_read<std::uint64_t>(in, "tensor dim");
      tensor.dims.push_back(static_cast<std::size_t>(dim));
      total *= static_cast<std::size_t>(dim);
    }
    tensor.data.resize(total);
    in.read(reinterpret_cast<char*>(tensor.data.data()),
            static_cast<std::streamsize>(total * sizeof(double)));
    if (!in) throw ValidationError("truncated checkpoint tensor payload");
    ckpt.tensors.push_back(std::move(tensor));
  }
  return ckpt;
}

// Copies checkpoint tensors into the live parameters, matched by name.
inline void apply_checkpoint(const Checkpoint& ckpt, std::span<ParamRef> params) {
  for (auto& p : params) {
    const CheckpointTensor* found = nullptr;
    for (const auto& t : ckpt.tensors) {
      if (t.name == p.name) {
        found = &t;
        break;
      }
    }
    if (found == nullptr) throw ValidationError("checkpoint is missing tensor " + p.name);
    if (found->dims != p.dims || found->data.size() != p.value.size()) {
      throw ValidationError("checkpoint tensor " + p.name + " has mismatched shape");
    }
    std::copy(found->data.begin(), found->data.end(), p.value.begin());
  }
}

}  // namespace dhse
