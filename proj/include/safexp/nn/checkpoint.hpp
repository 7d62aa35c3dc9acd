#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "safexp/types.hpp"

namespace safexp::nn {

/// Flat checkpoint container: an ordered list of named float32 tensors with
/// shapes, stored little-endian. Loading is strict about names and shapes so
/// that a mismatched file aborts before anything runs with it.
class TensorStore {
 public:
  struct Entry {
    std::string name;
    std::vector<std::uint32_t> shape;
    std::vector<float> data;
  };

  static constexpr std::uint32_t kMagic = 0x4b435853;  // "SXCK"
  static constexpr std::uint32_t kVersion = 1;

  void add(std::string name, std::vector<std::uint32_t> shape, std::vector<float> data) {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    if (n != data.size()) throw std::invalid_argument("TensorStore::add: shape/data mismatch");
    entries_.push_back({std::move(name), std::move(shape), std::move(data)});
  }

  template <class Scalar>
  void add_vector(const std::string& name, const Vec<Scalar>& v) {
    std::vector<float> data(static_cast<std::size_t>(v.size()));
    for (Index i = 0; i < v.size(); ++i) data[static_cast<std::size_t>(i)] = static_cast<float>(v[i]);
    add(name, {static_cast<std::uint32_t>(v.size())}, std::move(data));
  }

  template <class Scalar>
  Vec<Scalar> get_vector(const std::string& name, Index expected_size) const {
    const Entry& e = find(name);
    if (e.shape.size() != 1 || static_cast<Index>(e.shape[0]) != expected_size)
      throw std::runtime_error("TensorStore: shape mismatch for tensor '" + name + "'");
    Vec<Scalar> v(expected_size);
    for (Index i = 0; i < expected_size; ++i) v[i] = static_cast<Scalar>(e.data[static_cast<std::size_t>(i)]);
    return v;
  }

  bool has(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return true;
    return false;
  }

  const Entry& find(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return e;
    throw std::runtime_error("TensorStore: missing tensor '" + name + "'");
  }

  const std::vector<Entry>& entries() const { return entries_; }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("TensorStore::save: cannot open " + path);
    write_u32(out, kMagic);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(entries_.size()));
    for (const auto& e : entries_) {
      write_u32(out, static_cast<std::uint32_t>(e.name.size()));
      out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
      write_u32(out, static_cast<std::uint32_t>(e.shape.size()));
      for (auto d : e.shape) write_u32(out, d);
      out.write(reinterpret_cast<const char*>(e.data.data()),
                static_cast<std::streamsize>(e.data.size() * sizeof(float)));
    }
    if (!out) throw std::runtime_error("TensorStore::save: write failed for " + path);
  }

  static TensorStore load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("TensorStore::load: cannot open " + path);
    if (read_u32(in) != kMagic) throw std::runtime_error("TensorStore::load: bad magic in " + path);
    const std::uint32_t version = read_u32(in);
    if (version != kVersion)
      throw std::runtime_error("TensorStore::load: unsupported version " + std::to_string(version));
    TensorStore store;
    const std::uint32_t count = read_u32(in);
    for (std::uint32_t i = 0; i < count; ++i) {
      Entry e;
      const std::uint32_t name_len = read_u32(in);
      e.name.resize(name_len);
      in.read(e.name.data(), name_len);
      const std::uint32_t ndim = read_u32(in);
      std::size_t n = 1;
      for (std::uint32_t d = 0; d < ndim; ++d) {
        e.shape.push_back(read_u32(in));
        n *= e.shape.back();
      }
      e.data.resize(n);
      in.read(reinterpret_cast<char*>(e.data.data()),
              static_cast<std::streamsize>(n * sizeof(float)));
      if (!in) throw std::runtime_error("TensorStore::load: truncated file " + path);
      store.entries_.push_back(std::move(e));
    }
    return store;
  }

 private:
  static void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  }
  static std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw std::runtime_error("TensorStore::load: truncated header");
    return v;
  }

  std::vector<Entry> entries_;
};

}  // namespace safexp::nn
