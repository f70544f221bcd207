#include "gene_atlas/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "gene_atlas/error.hpp"

namespace gene_atlas {
namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorCode::kImageDecode, message);
}

class PpmReader {
 public:
  explicit PpmReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail("ppm: expected a number");
    unsigned long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 0xFFFFFFFFul) fail("ppm: number out of range");
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 2;
};

Image decode_ppm(std::span<const unsigned char> bytes) {
  const bool ascii = bytes[1] == '3';
  PpmReader reader(bytes);
  Image image;
  image.width = static_cast<std::uint32_t>(reader.number());
  image.height = static_cast<std::uint32_t>(reader.number());
  const auto maxval = reader.number();
  if (image.width == 0 || image.height == 0) fail("ppm: empty image");
  if (maxval == 0 || maxval > 255) fail("ppm: only 8-bit maxval is supported");
  const std::size_t samples = image.pixel_count() * 3;
  image.rgb.resize(samples);
  const auto scale = [maxval](unsigned long v) {
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  };
  if (ascii) {
    for (std::size_t i = 0; i < samples; ++i) {
      const auto v = reader.number();
      if (v > maxval) fail("ppm: sample exceeds maxval");
      image.rgb[i] = scale(v);
    }
  } else {
    reader.advance(1);  // single whitespace after maxval
    if (reader.pos() + samples > bytes.size()) fail("ppm: truncated pixel data");
    for (std::size_t i = 0; i < samples; ++i) {
      const auto v = bytes[reader.pos() + i];
      if (v > maxval) fail("ppm: sample exceeds maxval");
      image.rgb[i] = scale(v);
    }
  }
  return image;
}

Image decode_png(std::span<const unsigned char> bytes) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    fail(std::string("png: ") + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  Image image;
  image.width = png.width;
  image.height = png.height;
  image.rgb.resize(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, image.rgb.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    fail("png: " + message);
  }
  if (image.pixel_count() == 0) fail("png: empty image");
  return image;
}

}  // namespace

Image decode_image_bytes(std::span<const unsigned char> bytes) {
  static constexpr unsigned char kPngSignature[] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '6' || bytes[1] == '3')) {
    return decode_ppm(bytes);
  }
  fail("unsupported image format (expected PNG or PPM)");
}

Image decode_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open image " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode_image_bytes(bytes);
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.rgb.data()),
            static_cast<std::streamsize>(image.rgb.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

void write_png(const std::filesystem::path& path, const Image& image) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = image.width;
  png.height = image.height;
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, image.rgb.data(), 0, nullptr)) {
    throw Error(ErrorCode::kIo, std::string("png write failed: ") + png.message);
  }
}

}  // namespace gene_atlas
