#include "segmetrics/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>

#include <csetjmp>

namespace segmetrics {

namespace {

enum class Format { Png, Jpeg, Unknown };

Format sniff(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  if (in.gcount() >= 8 && png_sig_cmp(sig, 0, 8) == 0) return Format::Png;
  if (in.gcount() >= 3 && sig[0] == 0xFF && sig[1] == 0xD8 && sig[2] == 0xFF) return Format::Jpeg;
  return Format::Unknown;
}

struct Decoded {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<unsigned char> pixels;  // interleaved 8-bit
};

Decoded decode_png(const std::filesystem::path& path, bool gray) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw Error(ErrorCode::IoError, "cannot decode PNG " + path.string() + ": " + image.message);
  const bool source_gray = (image.format & PNG_FORMAT_FLAG_COLOR) == 0;
  const bool want_gray = gray || source_gray;
  image.format = want_gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  Decoded out;
  out.height = static_cast<int>(image.height);
  out.width = static_cast<int>(image.width);
  out.channels = want_gray ? 1 : 3;
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  // Composite any alpha onto black.
  png_color background{0, 0, 0};
  if (!png_image_finish_read(&image, &background, out.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorCode::IoError, "cannot decode PNG " + path.string() + ": " + image.message);
  }
  return out;
}

struct JpegErrorManager {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

Decoded decode_jpeg(const std::filesystem::path& path, bool gray) {
  std::FILE* file = std::fopen(path.c_str(), "rb");
  if (!file) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  Decoded out;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    std::fclose(file);
    throw Error(ErrorCode::IoError, "cannot decode JPEG " + path.string() + ": " + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = (gray || cinfo.jpeg_color_space == JCS_GRAYSCALE) ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  out.height = static_cast<int>(cinfo.output_height);
  out.width = static_cast<int>(cinfo.output_width);
  out.channels = cinfo.output_components;
  out.pixels.resize(static_cast<std::size_t>(out.height) * out.width * out.channels);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out.pixels.data() +
                   static_cast<std::size_t>(cinfo.output_scanline) * out.width * out.channels;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  std::fclose(file);
  return out;
}

Decoded decode(const std::filesystem::path& path, bool gray) {
  switch (sniff(path)) {
    case Format::Png: return decode_png(path, gray);
    case Format::Jpeg: return decode_jpeg(path, gray);
    case Format::Unknown: break;
  }
  throw Error(ErrorCode::FormatError, "unsupported image format: " + path.string());
}

void encode_png(const std::filesystem::path& path, int height, int width, int channels,
                const std::vector<unsigned char>& pixels) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, tmp.c_str(), 0, pixels.data(), 0, nullptr))
    throw Error(ErrorCode::IoError, "cannot write PNG " + path.string() + ": " + image.message);
  std::filesystem::rename(tmp, path);
}

}  // namespace

BinaryMask read_mask(const std::filesystem::path& path) {
  const auto d = decode(path, true);
  BinaryMask m(d.height, d.width);
  for (int i = 0; i < d.height * d.width; ++i) m.data()[i] = d.pixels[static_cast<std::size_t>(i)] != 0;
  return m;
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
  std::vector<unsigned char> px(static_cast<std::size_t>(mask.size()));
  for (Eigen::Index i = 0; i < mask.size(); ++i) px[static_cast<std::size_t>(i)] = mask.data()[i] ? 255 : 0;
  encode_png(path, static_cast<int>(mask.rows()), static_cast<int>(mask.cols()), 1, px);
}

RasterImage read_image(const std::filesystem::path& path) {
  const auto d = decode(path, false);
  RasterImage img(d.height, d.width, d.channels);
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x)
      for (int c = 0; c < d.channels; ++c)
        img.planes[c](y, x) =
            d.pixels[(static_cast<std::size_t>(y) * d.width + x) * d.channels + c];
  return promote_to_rgb(img);
}

void write_image_png(const std::filesystem::path& path, const RasterImage& image) {
  const int channels = image.channels();
  if (channels != 1 && channels != 3)
    throw Error(ErrorCode::ChannelMismatch, "PNG output needs 1 or 3 channels");
  const auto h = static_cast<int>(image.height());
  const auto w = static_cast<int>(image.width());
  std::vector<unsigned char> px(static_cast<std::size_t>(h) * w * channels);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c) {
        const float v = std::clamp(image.planes[c](y, x), 0.0f, 255.0f);
        px[(static_cast<std::size_t>(y) * w + x) * channels + c] =
            static_cast<unsigned char>(std::lround(v));
      }
  encode_png(path, h, w, channels, px);
}

Plane<double> read_attention_map(const std::filesystem::path& path) {
  if (sniff(path) != Format::Unknown) {
    const auto d = decode(path, true);
    Plane<double> a(d.height, d.width);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = d.pixels[static_cast<std::size_t>(i)] / 255.0;
    return a;
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
    std::istringstream ss(line);
    std::vector<double> row;
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorCode::FormatError, "bad number '" + tok + "' in " + path.string());
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::FormatError, "empty attention map " + path.string());
  Plane<double> a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t y = 0; y < rows.size(); ++y) {
    if (rows[y].size() != rows.front().size())
      throw Error(ErrorCode::FormatError, "ragged attention map " + path.string());
    for (std::size_t x = 0; x < rows[y].size(); ++x) a(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = rows[y][x];
  }
  return a;
}

}  // namespace segmetrics
