#include "gene_atlas/color.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "gene_atlas/error.hpp"
#include "gene_atlas/random.hpp"

namespace gene_atlas {
namespace {

double squared_distance(const Pixel& p, const Rgb& c) {
  const double dr = p.r - c.r;
  const double dg = p.g - c.g;
  const double db = p.b - c.b;
  return dr * dr + dg * dg + db * db;
}

double squared_distance(const Rgb& a, const Rgb& b) {
  const double dr = a.r - b.r;
  const double dg = a.g - b.g;
  const double db = a.b - b.b;
  return dr * dr + dg * dg + db * db;
}

Rgb to_rgb(const Pixel& p) { return {double(p.r), double(p.g), double(p.b)}; }

std::size_t nearest(const Pixel& p, const std::vector<Rgb>& centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centers.size(); ++j) {
    const double d = squared_distance(p, centers[j]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

// k-means++ seeding. Stops early once every pixel coincides with a chosen
// center, so inputs with fewer distinct colors than k get fewer centers.
std::vector<Rgb> seed_centers(std::span<const Pixel> pixels, std::uint32_t k, SplitMix64& rng) {
  std::vector<Rgb> centers;
  centers.push_back(to_rgb(pixels[rng.below(pixels.size())]));
  std::vector<double> d2(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) d2[i] = squared_distance(pixels[i], centers[0]);

  while (centers.size() < k) {
    double total = 0;
    for (double d : d2) total += d;
    if (total <= 0) break;
    const double target = rng.uniform() * total;
    double acc = 0;
    std::size_t pick = pixels.size();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      if (d2[i] <= 0) continue;
      acc += d2[i];
      pick = i;
      if (acc > target) break;
    }
    centers.push_back(to_rgb(pixels[pick]));
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      d2[i] = std::min(d2[i], squared_distance(pixels[i], centers.back()));
    }
  }
  return centers;
}

void check_channel(double v) {
  if (!(v >= 0.0 && v <= 255.0)) {
    throw Error(ErrorCode::kInvalidArgument, "color channel outside [0, 255]");
  }
}

}  // namespace

std::vector<Pixel> image_pixels(const Image& image) {
  if (image.rgb.size() != image.pixel_count() * 3) {
    throw Error(ErrorCode::kImageDecode, "pixel buffer size does not match image dimensions");
  }
  std::vector<Pixel> out(image.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {image.rgb[3 * i], image.rgb[3 * i + 1], image.rgb[3 * i + 2]};
  }
  return out;
}

std::vector<ColorCluster> kmeans_palette(std::span<const Pixel> pixels,
                                         const KMeansParams& params) {
  if (pixels.empty()) throw Error(ErrorCode::kEmptyInput, "no pixels to cluster");
  if (params.k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (params.max_iter == 0) throw Error(ErrorCode::kInvalidArgument, "max_iter must be positive");
  if (!(params.tol > 0)) throw Error(ErrorCode::kInvalidArgument, "tol must be positive");

  SplitMix64 rng(params.seed);
  std::vector<Rgb> centers = seed_centers(pixels, params.k, rng);
  const std::size_t k = centers.size();
  std::vector<std::size_t> assignment(pixels.size(), 0);
  std::vector<std::size_t> counts(k, 0);

  for (std::uint32_t iter = 0; iter < params.max_iter; ++iter) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      assignment[i] = nearest(pixels[i], centers);
      ++counts[assignment[i]];
    }

    // Empty-cluster repair: hand the farthest point to the empty cluster.
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] != 0) continue;
      double far_d = 0;
      std::size_t far_i = pixels.size();
      for (std::size_t i = 0; i < pixels.size(); ++i) {
        const double d = squared_distance(pixels[i], centers[assignment[i]]);
        if (d > far_d && counts[assignment[i]] > 1) {
          far_d = d;
          far_i = i;
        }
      }
      if (far_i == pixels.size()) continue;
      --counts[assignment[far_i]];
      assignment[far_i] = j;
      counts[j] = 1;
      centers[j] = to_rgb(pixels[far_i]);
    }

    std::vector<std::array<std::uint64_t, 3>> sums(k, {0, 0, 0});
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      auto& s = sums[assignment[i]];
      s[0] += pixels[i].r;
      s[1] += pixels[i].g;
      s[2] += pixels[i].b;
    }
    double movement = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;
      const double n = static_cast<double>(counts[j]);
      const Rgb mean{sums[j][0] / n, sums[j][1] / n, sums[j][2] / n};
      movement = std::max(movement, std::sqrt(squared_distance(mean, centers[j])));
      centers[j] = mean;
    }
    if (movement < params.tol) break;
  }

  std::vector<ColorCluster> clusters;
  const double total = static_cast<double>(pixels.size());
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] == 0) continue;
    clusters.push_back({centers[j], static_cast<double>(counts[j]) / total});
  }
  std::sort(clusters.begin(), clusters.end(), [](const ColorCluster& a, const ColorCluster& b) {
    if (a.proportion != b.proportion) return a.proportion > b.proportion;
    return rgb_to_hex(a.centroid) < rgb_to_hex(b.centroid);
  });
  return clusters;
}

const ColorCluster& dominant_cluster(std::span<const ColorCluster> clusters) {
  if (clusters.empty()) throw Error(ErrorCode::kEmptyInput, "no clusters");
  const ColorCluster* best = &clusters[0];
  std::string best_hex = rgb_to_hex(best->centroid);
  for (const auto& c : clusters.subspan(1)) {
    if (c.proportion > best->proportion) {
      best = &c;
      best_hex = rgb_to_hex(c.centroid);
    } else if (c.proportion == best->proportion) {
      auto hex = rgb_to_hex(c.centroid);
      if (hex < best_hex) {
        best = &c;
        best_hex = std::move(hex);
      }
    }
  }
  return *best;
}

std::string rgb_to_hex(const Rgb& color) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string out = "#";
  for (double v : {color.r, color.g, color.b}) {
    check_channel(v);
    const auto byte = static_cast<unsigned>(std::min(255.0, std::floor(v + 0.5)));
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

bool is_hex_code(std::string_view text) {
  if (text.size() != 7 || text[0] != '#') return false;
  return std::all_of(text.begin() + 1, text.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'F');
  });
}

Hsv rgb_to_hsv(const Rgb& color) {
  check_channel(color.r);
  check_channel(color.g);
  check_channel(color.b);
  const double r = color.r / 255.0;
  const double g = color.g / 255.0;
  const double b = color.b / 255.0;
  const double hi = std::max({r, g, b});
  const double lo = std::min({r, g, b});
  const double delta = hi - lo;

  Hsv out;
  out.value = hi;
  out.saturation = hi > 0 ? delta / hi : 0;
  if (delta > 0) {
    double h;
    if (hi == r) {
      h = 60.0 * ((g - b) / delta);
    } else if (hi == g) {
      h = 60.0 * ((b - r) / delta + 2.0);
    } else {
      h = 60.0 * ((r - g) / delta + 4.0);
    }
    if (h < 0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.hue = h;
  }
  return out;
}

ColorClass classify_perceptual(const Rgb& color, const PerceptualRule& rule) {
  const Hsv hsv = rgb_to_hsv(color);
  if (hsv.saturation < rule.min_saturation || hsv.value < rule.min_value) {
    return ColorClass::kNeutral;
  }
  if (hsv.hue < rule.warm_hue_below || hsv.hue >= rule.warm_hue_from) return ColorClass::kWarm;
  return ColorClass::kCool;
}

std::vector<Pixel> downsample(std::span<const Pixel> pixels, std::size_t limit) {
  if (limit == 0 || pixels.size() <= limit) return {pixels.begin(), pixels.end()};
  const std::size_t stride = (pixels.size() + limit - 1) / limit;
  std::vector<Pixel> out;
  out.reserve(limit);
  for (std::size_t i = 0; i < pixels.size(); i += stride) out.push_back(pixels[i]);
  return out;
}

ColorProfile extract_profile(std::span<const Pixel> pixels, const KMeansParams& params) {
  const auto sample = downsample(pixels);
  ColorProfile profile;
  profile.clusters = kmeans_palette(sample, params);
  const auto& dominant = dominant_cluster(profile.clusters);
  profile.dominant_hex = rgb_to_hex(dominant.centroid);
  profile.perceptual_class = classify_perceptual(dominant.centroid);
  return profile;
}

ColorProfile extract_profile(const Image& image, const KMeansParams& params) {
  const auto pixels = image_pixels(image);
  return extract_profile(std::span<const Pixel>(pixels), params);
}

}  // namespace gene_atlas
