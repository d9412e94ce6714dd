#pragma once

// Little-endian binary readers/writers shared by the NRFM / NRAB / NRPC
// loaders. Reads are bounds-checked against the buffer so truncated files
// surface as FormatError instead of UB.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "warpgraph/errors.hpp"

namespace warpgraph::detail {

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  in.seekg(0, std::ios::end);
  const std::streamoff len = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> buf(static_cast<size_t>(len));
  if (len > 0) in.read(reinterpret_cast<char*>(buf.data()), len);
  if (!in) throw IoError("cannot read file: " + path);
  return buf;
}

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& buf, std::string name)
      : buf_(buf), name_(std::move(name)) {}

  void expect_magic(const char magic[4]) {
    if (buf_.size() < pos_ + 4 || std::memcmp(buf_.data() + pos_, magic, 4) != 0)
      throw FormatError(name_ + ": bad magic, expected '" + std::string(magic, 4) + "'");
    pos_ += 4;
  }

  std::uint8_t u8() {
    need(1);
    return buf_[pos_++];
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(buf_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  float f32() {
    std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(buf_[pos_ + i]) << (8 * i);
    pos_ += 8;
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }

  void expect_end() {
    if (pos_ != buf_.size())
      throw FormatError(name_ + ": trailing bytes beyond declared payload");
  }

  size_t remaining() const { return buf_.size() - pos_; }

 private:
  void need(size_t n) {
    if (buf_.size() - pos_ < n) throw FormatError(name_ + ": truncated file");
  }

  const std::vector<std::uint8_t>& buf_;
  std::string name_;
  size_t pos_ = 0;
};

class Writer {
 public:
  void magic(const char m[4]) { append(m, 4); }
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(std::uint8_t(v >> (8 * i)));
  }
  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) buf_.push_back(std::uint8_t(bits >> (8 * i)));
  }

  void write_to(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out.write(reinterpret_cast<const char*>(buf_.data()),
              static_cast<std::streamsize>(buf_.size()));
    if (!out) throw IoError("write failed: " + path);
  }

 private:
  void append(const char* p, size_t n) {
    buf_.insert(buf_.end(), p, p + n);
  }
  std::vector<std::uint8_t> buf_;
};

}  // namespace warpgraph::detail
