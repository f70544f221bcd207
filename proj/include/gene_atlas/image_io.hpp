#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "gene_atlas/color.hpp"

namespace gene_atlas {

// Reads binary/ASCII PPM (P6/P3) or PNG, chosen by file signature. Alpha is
// dropped; grayscale and palette PNGs are expanded to RGB. Throws
// Error{kImageDecode} on any read or format failure.
Image decode_image(const std::filesystem::path& path);
Image decode_image_bytes(std::span<const unsigned char> bytes);

void write_ppm(const std::filesystem::path& path, const Image& image);
void write_png(const std::filesystem::path& path, const Image& image);

}  // namespace gene_atlas
