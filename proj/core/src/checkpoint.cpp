#include "latticegan/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <vector>

namespace latticegan {

namespace {

constexpr std::array<char, 8> kMagic = {'L', 'G', 'A', 'N', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    bytes_.insert(bytes_.end(), p, p + size);
  }

  const std::vector<unsigned char>& bytes() const { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class Reader {
 public:
  Reader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

  std::uint8_t u8() { return *take(1); }
  std::uint32_t u32() {
    const unsigned char* p = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const unsigned char* p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  const unsigned char* take(std::size_t n) {
    if (pos_ + n > size_) throw std::runtime_error("checkpoint truncated");
    const unsigned char* p = data_ + pos_;
    pos_ += n;
    return p;
  }
  std::size_t remaining() const { return size_ - pos_; }

 private:
  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

void write_genome(Writer& w, const Genome& g) {
  w.u32(static_cast<std::uint32_t>(g.network.layers.size()));
  for (const auto& layer : g.network.layers) {
    w.u32(static_cast<std::uint32_t>(layer.input_dim));
    w.u32(static_cast<std::uint32_t>(layer.output_dim));
    w.u8(static_cast<std::uint8_t>(layer.activation));
  }
  w.u64(g.network.params.size());
  for (const double v : g.network.params) w.f64(v);
  w.f64(g.learning_rate);
  w.u64(g.adam.t);
  w.f64(g.adam.beta1);
  w.f64(g.adam.beta2);
  w.f64(g.adam.epsilon);
  for (const double v : g.adam.m) w.f64(v);
  for (const double v : g.adam.v) w.f64(v);
}

Genome read_genome(Reader& r) {
  Genome g;
  const std::uint32_t n_layers = r.u32();
  if (n_layers == 0 || n_layers > 1024) throw std::runtime_error("checkpoint: bad layer count");
  g.network.layers.resize(n_layers);
  for (auto& layer : g.network.layers) {
    layer.input_dim = r.u32();
    layer.output_dim = r.u32();
    const std::uint8_t act = r.u8();
    if (act > static_cast<std::uint8_t>(Activation::Identity)) {
      throw std::runtime_error("checkpoint: bad activation code");
    }
    layer.activation = static_cast<Activation>(act);
  }
  const std::uint64_t n_params = r.u64();
  if (n_params != param_count(g.network.layers)) {
    throw std::runtime_error("checkpoint: parameter count does not match layer shapes");
  }
  if (n_params * 8 > r.remaining()) throw std::runtime_error("checkpoint truncated");
  g.network.params.resize(n_params);
  for (double& v : g.network.params) v = r.f64();
  g.learning_rate = r.f64();
  g.adam.t = r.u64();
  g.adam.beta1 = r.f64();
  g.adam.beta2 = r.f64();
  g.adam.epsilon = r.f64();
  g.adam.m.resize(n_params);
  for (double& v : g.adam.m) v = r.f64();
  g.adam.v.resize(n_params);
  for (double& v : g.adam.v) v = r.f64();
  return g;
}

}  // namespace

std::uint32_t crc32(const unsigned char* data, std::size_t size) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < size; ++i) {
    crc = table[(crc ^ data[i]) & 0xff] ^ (crc >> 8);
  }
  return crc ^ 0xFFFFFFFFu;
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  Writer w;
  w.raw(kMagic.data(), kMagic.size());
  w.u32(kCheckpointVersion);
  w.u64(checkpoint.config_text.size());
  w.raw(checkpoint.config_text.data(), checkpoint.config_text.size());
  w.u32(static_cast<std::uint32_t>(checkpoint.population.cells.size()));
  for (const auto& cell : checkpoint.population.cells) {
    w.u64(cell.generation);
    write_genome(w, cell.generator);
    write_genome(w, cell.discriminator);
  }

  const std::uint32_t digest = crc32(w.bytes().data(), w.bytes().size());

  const std::string tmp_path = path + ".tmp";
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp_path + "' for writing");
    out.write(reinterpret_cast<const char*>(w.bytes().data()),
              static_cast<std::streamsize>(w.bytes().size()));
    Writer tail;
    tail.u32(digest);
    out.write(reinterpret_cast<const char*>(tail.bytes().data()), 4);
    if (!out) throw std::runtime_error("write failed for '" + tmp_path + "'");
  }
  std::filesystem::rename(tmp_path, path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

  if (bytes.size() < kMagic.size() + 4 + 4) throw std::runtime_error("checkpoint truncated");
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw std::runtime_error("not a checkpoint file (bad magic)");
  }

  const std::uint32_t stored_digest =
      std::uint32_t(bytes[bytes.size() - 4]) | std::uint32_t(bytes[bytes.size() - 3]) << 8 |
      std::uint32_t(bytes[bytes.size() - 2]) << 16 | std::uint32_t(bytes[bytes.size() - 1]) << 24;
  const std::uint32_t computed = crc32(bytes.data(), bytes.size() - 4);
  if (stored_digest != computed) {
    throw std::runtime_error("checkpoint digest mismatch (corrupted or truncated file)");
  }

  Reader r(bytes.data(), bytes.size() - 4);
  r.take(kMagic.size());
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }

  Checkpoint out;
  const std::uint64_t config_len = r.u64();
  if (config_len > r.remaining()) throw std::runtime_error("checkpoint truncated");
  const unsigned char* text = r.take(config_len);
  out.config_text.assign(reinterpret_cast<const char*>(text), config_len);

  const std::uint32_t z = r.u32();
  if (z == 0) throw std::runtime_error("checkpoint: empty population");
  out.population.cells.resize(z);
  for (auto& cell : out.population.cells) {
    cell.generation = r.u64();
    cell.generator = read_genome(r);
    cell.discriminator = read_genome(r);
  }
  if (r.remaining() != 0) throw std::runtime_error("checkpoint: trailing bytes");
  return out;
}

CheckpointInfo inspect_checkpoint(const std::string& path) {
  const Checkpoint cp = load_checkpoint(path);
  CheckpointInfo info;
  info.version = kCheckpointVersion;
  info.cell_count = cp.population.cells.size();
  info.config_text = cp.config_text;
  info.min_generation = cp.population.cells.front().generation;
  info.max_generation = cp.population.cells.front().generation;
  for (const auto& cell : cp.population.cells) {
    info.min_generation = std::min(info.min_generation, cell.generation);
    info.max_generation = std::max(info.max_generation, cell.generation);
  }
  info.generator_params = cp.population.cells.front().generator.network.params.size();
  info.discriminator_params = cp.population.cells.front().discriminator.network.params.size();
  return info;
}

}  // namespace latticegan
