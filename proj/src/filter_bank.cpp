#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "segmetrics/separability.hpp"

namespace segmetrics {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'X', 'F', 'B'};
constexpr std::uint32_t kVersion = 1;
// Guards against absurd headers before allocating.
constexpr std::uint64_t kMaxWeights = 1ULL << 28;

std::uint32_t read_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4))
    throw Error(ErrorCode::FormatError, "truncated filter bank header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

float read_f32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4))
    throw Error(ErrorCode::FormatError, "truncated filter bank payload");
  const std::uint32_t bits = static_cast<std::uint32_t>(b[0]) |
                             (static_cast<std::uint32_t>(b[1]) << 8) |
                             (static_cast<std::uint32_t>(b[2]) << 16) |
                             (static_cast<std::uint32_t>(b[3]) << 24);
  return std::bit_cast<float>(bits);
}

void write_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff),
                              static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

void write_f32(std::ostream& out, float v) { write_u32(out, std::bit_cast<std::uint32_t>(v)); }

}  // namespace

void ConvFilterBank::validate() const {
  if (num_filters < 1 || in_channels < 1 || kernel_h < 1 || kernel_w < 1)
    throw Error(ErrorCode::FormatError, "filter bank dimensions must be positive");
  if (stride < 1) throw Error(ErrorCode::FormatError, "filter bank stride must be >= 1");
  if (padding < 0) throw Error(ErrorCode::FormatError, "filter bank padding must be >= 0");
  if (input_mean.size() != in_channels || input_std.size() != in_channels)
    throw Error(ErrorCode::FormatError, "normalisation statistics do not match channel count");
  if (weights.rows() != num_filters || weights.cols() != in_channels * kernel_h * kernel_w)
    throw Error(ErrorCode::FormatError, "weight matrix shape does not match header");
  if (!weights.allFinite() || !input_mean.allFinite() || !input_std.allFinite())
    throw Error(ErrorCode::FormatError, "non-finite filter bank values");
  if ((input_std.array() <= 0.0f).any())
    throw Error(ErrorCode::FormatError, "input std must be positive");
}

bool ConvFilterBank::operator==(const ConvFilterBank& other) const {
  return num_filters == other.num_filters && in_channels == other.in_channels &&
         kernel_h == other.kernel_h && kernel_w == other.kernel_w && stride == other.stride &&
         padding == other.padding && input_mean == other.input_mean &&
         input_std == other.input_std && weights == other.weights;
}

ConvFilterBank ConvFilterBank::random(std::uint64_t seed, int num_filters, int in_channels,
                                      int kernel, int stride, int padding) {
  ConvFilterBank bank;
  bank.num_filters = num_filters;
  bank.in_channels = in_channels;
  bank.kernel_h = kernel;
  bank.kernel_w = kernel;
  bank.stride = stride;
  bank.padding = padding;
  if (in_channels == 3) {
    bank.input_mean = Eigen::Vector3f(0.485f, 0.456f, 0.406f);
    bank.input_std = Eigen::Vector3f(0.229f, 0.224f, 0.225f);
  } else {
    bank.input_mean = Eigen::VectorXf::Constant(in_channels, 0.5f);
    bank.input_std = Eigen::VectorXf::Constant(in_channels, 0.25f);
  }
  Rng rng(seed);
  const int fan_in = in_channels * kernel * kernel;
  const double scale = std::sqrt(2.0 / fan_in);
  bank.weights.resize(num_filters, fan_in);
  for (Eigen::Index i = 0; i < bank.weights.size(); ++i)
    bank.weights.data()[i] = static_cast<float>(scale * standard_normal(rng));
  bank.validate();
  return bank;
}

ConvFilterBank read_filter_bank(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4)) throw Error(ErrorCode::FormatError, "truncated filter bank");
  if (magic != kMagic) throw Error(ErrorCode::FormatError, "bad filter bank magic");
  const auto version = read_u32(in);
  if (version != kVersion)
    throw Error(ErrorCode::FormatError, "unsupported filter bank version " + std::to_string(version));

  ConvFilterBank bank;
  const auto num_filters = read_u32(in);
  const auto in_channels = read_u32(in);
  const auto kernel_h = read_u32(in);
  const auto kernel_w = read_u32(in);
  const auto stride = read_u32(in);
  const auto padding = read_u32(in);
  const std::uint64_t fan_in = std::uint64_t{in_channels} * kernel_h * kernel_w;
  const std::uint64_t n_weights = fan_in * num_filters;
  if (num_filters == 0 || fan_in == 0 || n_weights > kMaxWeights || stride == 0 ||
      padding > (1u << 16))
    throw Error(ErrorCode::FormatError, "implausible filter bank shape");
  bank.num_filters = static_cast<int>(num_filters);
  bank.in_channels = static_cast<int>(in_channels);
  bank.kernel_h = static_cast<int>(kernel_h);
  bank.kernel_w = static_cast<int>(kernel_w);
  bank.stride = static_cast<int>(stride);
  bank.padding = static_cast<int>(padding);

  bank.input_mean.resize(bank.in_channels);
  bank.input_std.resize(bank.in_channels);
  for (int c = 0; c < bank.in_channels; ++c) bank.input_mean(c) = read_f32(in);
  for (int c = 0; c < bank.in_channels; ++c) bank.input_std(c) = read_f32(in);
  bank.weights.resize(bank.num_filters, static_cast<Eigen::Index>(fan_in));
  for (std::uint64_t i = 0; i < n_weights; ++i) bank.weights.data()[i] = read_f32(in);
  if (in.peek() != std::char_traits<char>::eof())
    throw Error(ErrorCode::FormatError, "trailing bytes after filter bank payload");
  bank.validate();
  return bank;
}

void write_filter_bank(std::ostream& out, const ConvFilterBank& bank) {
  bank.validate();
  out.write(kMagic.data(), 4);
  write_u32(out, kVersion);
  for (int v : {bank.num_filters, bank.in_channels, bank.kernel_h, bank.kernel_w, bank.stride,
                bank.padding})
    write_u32(out, static_cast<std::uint32_t>(v));
  for (int c = 0; c < bank.in_channels; ++c) write_f32(out, bank.input_mean(c));
  for (int c = 0; c < bank.in_channels; ++c) write_f32(out, bank.input_std(c));
  for (Eigen::Index i = 0; i < bank.weights.size(); ++i) write_f32(out, bank.weights.data()[i]);
}

ConvFilterBank load_filter_bank(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open filter bank " + path.string());
  return read_filter_bank(in);
}

void save_filter_bank(const std::filesystem::path& path, const ConvFilterBank& bank) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write filter bank " + path.string());
  write_filter_bank(out, bank);
  if (!out) throw Error(ErrorCode::IoError, "failed writing filter bank " + path.string());
}

}  // namespace segmetrics
