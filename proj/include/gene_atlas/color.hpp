#pragma once

// Dominant-color extraction: seeded k-means over RGB pixels, hex rendering of
// the largest cluster, and a fixed HSV rule for the cool/warm/neutral class.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gene_atlas/schema.hpp"

namespace gene_atlas {

struct Pixel {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

// Decoded 8-bit RGB raster, rows top to bottom, 3 bytes per pixel.
struct Image {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> rgb;

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }
};

// Throws Error{kImageDecode} when the buffer size disagrees with the header.
std::vector<Pixel> image_pixels(const Image& image);

struct KMeansParams {
  std::uint32_t k = 5;
  std::uint64_t seed = 0;
  std::uint32_t max_iter = 100;
  double tol = 1e-3;
};

// Perceptual class thresholds. Hue in degrees; saturation and value in [0,1].
struct PerceptualRule {
  double min_saturation = 0.15;
  double min_value = 0.15;
  double warm_hue_below = 90.0;     // warm: [0, warm_hue_below)
  double warm_hue_from = 330.0;     //    or [warm_hue_from, 360)
};
inline constexpr PerceptualRule kPerceptualRule{};

// Images larger than this are sampled with a uniform stride before clustering.
inline constexpr std::size_t kMaxClusterPixels = 10'000;

// Clusters sorted by proportion descending, then by hex. Empty clusters are
// dropped, so fewer than k clusters may come back. Throws Error{kEmptyInput}
// for no pixels and Error{kInvalidArgument} for k == 0, max_iter == 0 or a
// non-positive tolerance.
std::vector<ColorCluster> kmeans_palette(std::span<const Pixel> pixels, const KMeansParams& params);

// Largest proportion; ties go to the lexicographically smallest hex.
const ColorCluster& dominant_cluster(std::span<const ColorCluster> clusters);

// Round-half-up per channel, "#RRGGBB" uppercase. Throws Error{kInvalidArgument}
// for channels outside [0, 255].
std::string rgb_to_hex(const Rgb& color);

bool is_hex_code(std::string_view text);

struct Hsv {
  double hue = 0;         // [0, 360)
  double saturation = 0;  // [0, 1]
  double value = 0;       // [0, 1]
};

Hsv rgb_to_hsv(const Rgb& color);

ColorClass classify_perceptual(const Rgb& color, const PerceptualRule& rule = kPerceptualRule);

std::vector<Pixel> downsample(std::span<const Pixel> pixels, std::size_t limit = kMaxClusterPixels);

ColorProfile extract_profile(std::span<const Pixel> pixels, const KMeansParams& params);
ColorProfile extract_profile(const Image& image, const KMeansParams& params);

}  // namespace gene_atlas
