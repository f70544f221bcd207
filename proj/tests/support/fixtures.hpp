#pragma once

// Hand-built records, drafts and images shared by the unit and acceptance
// suites, plus full-scan oracles for the exploration engine.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gene_atlas/annotation.hpp"
#include "gene_atlas/color.hpp"
#include "gene_atlas/exploration.hpp"
#include "gene_atlas/schema.hpp"

namespace gene_atlas::testing {

// Miao hundred-bird coat: three middle dimensions (all three themes
// available), patterns Animal + Plant, Silk/Brocade/Other materials.
CostumeRecord hundred_bird_coat();

// Dong pleated skirt: no ReligiousBeliefs context.
CostumeRecord pleated_skirt();

// Coder A's draft of hundred_bird_coat() (no color profile).
AnnotationDraft coder_a_draft();
// Coder B agrees with A everywhere except that B also marks Velvet, and B
// lists every term in a different order.
AnnotationDraft coder_b_draft_one_disagreement();

struct Mutation {
  std::string name;
  CostumeRecord record;
  std::string expected_path;
};

// Twenty single-fault variants of hundred_bird_coat(): three per surface
// category, four middle, four inner.
std::vector<Mutation> mutation_fixtures();

// 100x100 raster: 6000 px of kBlobA, 3000 of kBlobB, 1000 of kBlobC.
inline constexpr Pixel kBlobA{200, 30, 40};
inline constexpr Pixel kBlobB{20, 60, 180};
inline constexpr Pixel kBlobC{240, 220, 200};
Image three_blob_image();

Image uniform_image(std::uint32_t width, std::uint32_t height, Pixel color);

struct ColorCase {
  std::string label;
  Rgb color;
  ColorClass expected;
};

// Twelve colors with classes worked out by hand from the HSV rule.
std::vector<ColorCase> hand_color_table();

// A fresh, empty directory under the system temp dir.
std::filesystem::path fresh_dir(const std::string& name);

std::string read_file(const std::filesystem::path& path);

// --- oracles -------------------------------------------------------------

// Linear scans over the records; no index involved.
bool oracle_has_tag(const CostumeRecord& record, GeneCategory category, std::string_view value);
std::vector<std::string> oracle_browse(std::span<const CostumeRecord> records, GeneCategory category,
                                       std::string_view value);
std::vector<SearchHit> oracle_search(std::span<const CostumeRecord> records, std::string_view query);
std::vector<RelatedGroup> oracle_related(std::span<const CostumeRecord> records,
                                         const std::string& costume_id, GeneCategory category);

// Fifty queries drawn from the corpus text with mixed case, some multi-word,
// some with no hits.
std::vector<std::string> seeded_queries(std::span<const CostumeRecord> records, std::uint64_t seed);

std::vector<CostumeRecord> records_of(const std::map<std::string, CostumeRecord>& records);

}  // namespace gene_atlas::testing
