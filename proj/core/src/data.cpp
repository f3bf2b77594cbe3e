#include "latticegan/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace latticegan {

namespace {

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

std::uint32_t read_u32_be(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void write_u32_be(std::ofstream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {
      static_cast<unsigned char>((v >> 24) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff),
      static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>(v & 0xff),
  };
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

}  // namespace

Matrix ring_of_gaussians(std::size_t modes, double radius) {
  if (modes < 1) throw std::invalid_argument("ring_of_gaussians: need at least one mode");
  Matrix centers(modes, 2);
  for (std::size_t k = 0; k < modes; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(modes);
    centers.at(k, 0) = radius * std::cos(angle);
    centers.at(k, 1) = radius * std::sin(angle);
  }
  return centers;
}

Matrix sample_real(const DataSpec& spec, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_real: n must be >= 1");
  if (const auto* gm = std::get_if<GaussianMixtureSpec>(&spec.source)) {
    if (gm->centers.rows < 1) throw std::invalid_argument("sample_real: mixture needs a center");
    if (!(gm->sigma > 0.0)) throw std::invalid_argument("sample_real: sigma must be > 0");
    Matrix out(n, gm->centers.cols);
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t k = rng.index(gm->centers.rows);
      for (std::size_t c = 0; c < out.cols; ++c) {
        out.at(r, c) = gm->centers.at(k, c) + rng.gaussian(0.0, gm->sigma);
      }
    }
    return out;
  }
  const auto& idx = std::get<IdxFileSpec>(spec.source);
  const Matrix dataset = load_idx(idx.path);
  return sample_rows(dataset, n, rng);
}

Matrix sample_latent(const LatentSpec& spec, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_latent: n must be >= 1");
  if (spec.dim < 1) throw std::invalid_argument("sample_latent: dim must be >= 1");
  Matrix out(n, spec.dim);
  for (double& v : out.data) v = rng.uniform(-1.0, 1.0);
  return out;
}

Matrix sample_rows(const Matrix& dataset, std::size_t n, Rng& rng) {
  if (dataset.rows == 0) throw std::invalid_argument("sample_rows: empty dataset");
  Matrix out(n, dataset.cols);
  for (std::size_t r = 0; r < n; ++r) {
    const auto src = dataset.row(rng.index(dataset.rows));
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

Matrix load_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_idx: cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

  if (bytes.size() < 4) throw std::runtime_error("load_idx: truncated header in '" + path + "'");
  const std::uint32_t magic = read_u32_be(bytes.data());
  std::size_t ndim = 0;
  if (magic == kIdxImagesMagic) {
    ndim = 3;
  } else if (magic == kIdxLabelsMagic) {
    ndim = 1;
  } else {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%08x", magic);
    throw std::runtime_error("load_idx: bad magic " + std::string(buf) + " in '" + path + "'");
  }

  if (bytes.size() < 4 + 4 * ndim) {
    throw std::runtime_error("load_idx: truncated dimension header in '" + path + "'");
  }
  std::vector<std::size_t> dims(ndim);
  std::size_t total = 1;
  for (std::size_t d = 0; d < ndim; ++d) {
    dims[d] = read_u32_be(bytes.data() + 4 + 4 * d);
    if (dims[d] == 0) throw std::runtime_error("load_idx: zero-sized dimension in '" + path + "'");
    if (total > std::numeric_limits<std::size_t>::max() / dims[d]) {
      throw std::runtime_error("load_idx: dimension overflow in '" + path + "'");
    }
    total *= dims[d];
  }

  const std::size_t header = 4 + 4 * ndim;
  if (bytes.size() < header + total) {
    throw std::runtime_error("load_idx: truncated payload in '" + path + "' (expected " +
                             std::to_string(total) + " bytes, have " +
                             std::to_string(bytes.size() - header) + ")");
  }

  const std::size_t samples = dims[0];
  const std::size_t features = total / samples;
  Matrix out(samples, features);
  for (std::size_t i = 0; i < total; ++i) {
    out.data[i] = static_cast<double>(bytes[header + i]) / 127.5 - 1.0;
  }
  return out;
}

void save_idx(const Matrix& dataset, std::size_t image_rows, std::size_t image_cols,
              const std::string& path) {
  if (image_rows * image_cols != dataset.cols) {
    throw std::invalid_argument("save_idx: image shape does not match feature count");
  }
  if (dataset.rows == 0) throw std::invalid_argument("save_idx: empty dataset");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_idx: cannot open '" + path + "' for writing");
  write_u32_be(out, kIdxImagesMagic);
  write_u32_be(out, static_cast<std::uint32_t>(dataset.rows));
  write_u32_be(out, static_cast<std::uint32_t>(image_rows));
  write_u32_be(out, static_cast<std::uint32_t>(image_cols));
  std::vector<unsigned char> bytes(dataset.data.size());
  for (std::size_t i = 0; i < dataset.data.size(); ++i) {
    const double raw = (dataset.data[i] + 1.0) * 127.5;
    bytes[i] = static_cast<unsigned char>(std::clamp(std::lround(raw), 0L, 255L));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("save_idx: write failed for '" + path + "'");
}

std::vector<Matrix> shuffled_batches(const Matrix& dataset, std::size_t batch_size, Rng& rng) {
  if (batch_size < 1) throw std::invalid_argument("shuffled_batches: batch_size must be >= 1");
  if (dataset.rows == 0) throw std::invalid_argument("shuffled_batches: empty dataset");

  std::vector<std::size_t> order(dataset.rows);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.index(i)]);
  }

  std::vector<Matrix> batches;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t count = std::min(batch_size, order.size() - start);
    Matrix batch(count, dataset.cols);
    for (std::size_t r = 0; r < count; ++r) {
      const auto src = dataset.row(order[start + r]);
      std::copy(src.begin(), src.end(), batch.row(r).begin());
    }
    batches.push_back(std::move(batch));
  }
  return batches;
}

}  // namespace latticegan
