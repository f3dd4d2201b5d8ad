#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "dhse/error.hpp"
#include "dhse/matrix.hpp"

namespace dhse {

static_assert(std::endian::native == std::endian::little,
              "feature cache format is little-endian; big-endian hosts unsupported");

// Named column range [begin, end) within a FeatureMatrix.
struct FeatureBlock {
  std::string name;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  bool operator==(const FeatureBlock&) const = default;
};

namespace detail {

template <typename T>
void write_pod(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::string& what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ValidationError("truncated feature file while reading " + what);
  return v;
}

}  // namespace detail

// Per-node raw feature rows, stored and serialized as 32-bit floats.
//
// Binary layout (all little-endian):
//   magic "DHSE" | u32 version=1 | u64 rows | u64 cols
//   u32 block_count | per block: u32 name_len, name bytes, u64 begin, u64 end
//   rows*cols f32 payload, row-major
// Block ranges must partition [0, cols).
class FeatureMatrix {
 public:
  static constexpr char kMagic[4] = {'D', 'H', 'S', 'E'};
  static constexpr std::uint32_t kVersion = 1;

  FeatureMatrix() = default;
  FeatureMatrix(std::uint64_t rows, std::uint64_t cols, std::vector<FeatureBlock> blocks)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0f), blocks_(std::move(blocks)) {
    validate_blocks();
  }

  static FeatureMatrix from_matrix(const Matrix& m, std::vector<FeatureBlock> blocks) {
    FeatureMatrix fm(m.rows(), m.cols(), std::move(blocks));
    for (std::size_t i = 0; i < m.size(); ++i) {
      fm.data_[i] = static_cast<float>(m.data()[i]);
      if (!std::isfinite(fm.data_[i])) {
        throw ValidationError("feature value at flat index " + std::to_string(i) +
                              " is not finite in 32-bit range");
      }
    }
    return fm;
  }

  static FeatureMatrix from_matrix(const Matrix& m, const std::string& block_name) {
    return from_matrix(m, {FeatureBlock{block_name, 0, m.cols()}});
  }

  Matrix to_matrix() const {
    Matrix m(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) {
      m.data()[i] = static_cast<double>(data_[i]);
    }
    return m;
  }

  std::uint64_t rows() const { return rows_; }
  std::uint64_t cols() const { return cols_; }
  const std::vector<FeatureBlock>& blocks() const { return blocks_; }
  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  float at(std::uint64_t i, std::uint64_t j) const { return data_[i * cols_ + j]; }
  float& at(std::uint64_t i, std::uint64_t j) { return data_[i * cols_ + j]; }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open feature file for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    detail::write_pod(out, kVersion);
    detail::write_pod(out, rows_);
    detail::write_pod(out, cols_);
    detail::write_pod(out, static_cast<std::uint32_t>(blocks_.size()));
    for (const FeatureBlock& b : blocks_) {
      detail::write_pod(out, static_cast<std::uint32_t>(b.name.size()));
      out.write(b.name.data(), static_cast<std::streamsize>(b.name.size()));
      detail::write_pod(out, b.begin);
      detail::write_pod(out, b.end);
    }
    out.write(reinterpret_cast<const char*>(data_.data()),
              static_cast<std::streamsize>(data_.size() * sizeof(float)));
    if (!out) throw IoError("failed writing feature file: " + path);
  }

  static FeatureMatrix load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open feature file: " + path);
    char magic[4];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
      throw ValidationError("bad magic in feature file: " + path);
    }
    const auto version = detail::read_pod<std::uint32_t>(in, "version");
    if (version != kVersion) {
      throw ValidationError("unsupported feature file version " + std::to_string(version));
    }
    FeatureMatrix fm;
    fm.rows_ = detail::read_pod<std::uint64_t>(in, "rows");
    fm.cols_ = detail::read_pod<std::uint64_t>(in, "cols");
    const auto block_count = detail::read_pod<std::uint32_t>(in, "block count");
    for (std::uint32_t i = 0; i < block_count; ++i) {
      FeatureBlock b;
      const auto name_len = detail::read_pod<std::uint32_t>(in, "block name length");
      b.name.resize(name_len);
      in.read(b.name.data(), name_len);
      if (!in) throw ValidationError("truncated feature file while reading block name");
      b.begin = detail::read_pod<std::uint64_t>(in, "block begin");
      b.end = detail::read_pod<std::uint64_t>(in, "block end");
      fm.blocks_.push_back(std::move(b));
    }
    fm.validate_blocks();
    fm.data_.resize(fm.rows_ * fm.cols_);
    in.read(reinterpret_cast<char*>(fm.data_.data()),
            static_cast<std::streamsize>(fm.data_.size() * sizeof(float)));
    if (!in) throw ValidationError("truncated feature payload in " + path);
    for (float v : fm.data_) {
      if (!std::isfinite(v)) throw ValidationError("non-finite feature value in " + path);
    }
    return fm;
  }

 private:
  void validate_blocks() const {
    std::uint64_t at = 0;
    for (const FeatureBlock& b : blocks_) {
      if (b.begin != at || b.end < b.begin || b.end > cols_) {
        throw ValidationError("feature blocks do not partition the columns");
      }
      at = b.end;
    }
    if (at != cols_) throw ValidationError("feature blocks do not cover all columns");
  }

  std::uint64_t rows_ = 0;
  std::uint64_t cols_ = 0;
  std::vector<float> data_;
  std::vector<FeatureBlock> blocks_;
};

}  // namespace dhse
