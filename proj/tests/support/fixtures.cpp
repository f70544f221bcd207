#include "support/fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gene_atlas/random.hpp"
#include "gene_atlas/text.hpp"

namespace gene_atlas::testing {

CostumeRecord hundred_bird_coat() {
  CostumeRecord r;
  r.id = "GA-F001";
  r.title = "Miao Hundred-Bird Coat";
  r.ethnic_group = "Miao";
  r.region = "Guizhou";
  r.image_refs = {"images/hundred_bird_coat.png"};
  r.surface.patterns = {{"Animal", {"phoenix", "butterfly"}}, {"Plant", {"maple leaf"}}};
  r.surface.materials = {{"Silk", std::nullopt}, {"Brocade", std::nullopt}, {"Other", "feather"}};
  r.surface.forms = {"Top", "Skirt", "Accessory"};
  r.surface.color_profile = ColorProfile{
      {{{190, 30, 45}, 0.55}, {{30, 40, 120}, 0.30}, {{235, 225, 200}, 0.15}},
      "#BE1E2D",
      ColorClass::kWarm};
  r.middle = {
      {"ReligiousBeliefs",
       "The coat is worn when the clan honours the butterfly mother at the ancestral drum rite. "
       "Feathers at the hem carry prayers to the sky."},
      {"FestiveCeremonies",
       "Young women wear the coat during the spring courtship festival. Each village sets its own dance order."},
      {"ArtsEntertainment",
       "Singers perform the bird-calling song while the feathered panels sway."},
  };
  r.inner = {"Harmony", "Dedication"};
  r.source_text = "Field notes on a Miao hundred-bird coat from southeastern Guizhou.";
  return r;
}

CostumeRecord pleated_skirt() {
  CostumeRecord r;
  r.id = "GA-F002";
  r.title = "Dong Pleated Skirt";
  r.ethnic_group = "Dong";
  r.region = "Guangxi";
  r.surface.patterns = {{"Geometric", {"diamond lattice"}}};
  r.surface.materials = {{"Cloth", std::nullopt}};
  r.surface.forms = {"Skirt"};
  r.middle = {
      {"FestiveCeremonies", "The skirt is unfolded for the drum-tower new year gathering."},
      {"LivelihoodActivities", "Its indigo cloth is dyed and beaten by hand after the rice harvest."},
  };
  r.inner = {"Friendliness"};
  r.source_text = "Collection entry for a Dong pleated skirt.";
  return r;
}

AnnotationDraft coder_a_draft() {
  const auto r = hundred_bird_coat();
  AnnotationDraft d;
  d.coder_id = "coder-a";
  d.costume_id = r.id;
  d.surface = r.surface;
  d.surface.color_profile.reset();
  d.middle = r.middle;
  d.inner = r.inner;
  return d;
}

AnnotationDraft coder_b_draft_one_disagreement() {
  auto d = coder_a_draft();
  d.coder_id = "coder-b";
  std::reverse(d.surface.patterns.begin(), d.surface.patterns.end());
  std::reverse(d.surface.materials.begin(), d.surface.materials.end());
  d.surface.materials.push_back({"Velvet", std::nullopt});
  std::reverse(d.surface.forms.begin(), d.surface.forms.end());
  std::reverse(d.middle.begin(), d.middle.end());
  std::reverse(d.inner.begin(), d.inner.end());
  return d;
}

std::vector<Mutation> mutation_fixtures() {
  std::vector<Mutation> out;
  auto add = [&](std::string name, std::string path, auto&& mutate) {
    auto r = hundred_bird_coat();
    mutate(r);
    out.push_back({std::move(name), std::move(r), std::move(path)});
  };
  add("pattern not in vocabulary", "surface.patterns[0].class",
      [](CostumeRecord& r) { r.surface.patterns[0].pattern_class = "Floral"; });
  add("pattern lowercase", "surface.patterns[1].class",
      [](CostumeRecord& r) { r.surface.patterns[1].pattern_class = "plant"; });
  add("pattern empty", "surface.patterns[0].class",
      [](CostumeRecord& r) { r.surface.patterns[0].pattern_class = ""; });

  add("color hex not hexadecimal", "surface.color_profile.dominant_hex",
      [](CostumeRecord& r) { r.surface.color_profile->dominant_hex = "#GG1E2D"; });
  add("color hex missing hash", "surface.color_profile.dominant_hex",
      [](CostumeRecord& r) { r.surface.color_profile->dominant_hex = "BE1E2D"; });
  add("color hex lowercase", "surface.color_profile.dominant_hex",
      [](CostumeRecord& r) { r.surface.color_profile->dominant_hex = "#be1e2d"; });

  add("material not in vocabulary", "surface.materials[0]",
      [](CostumeRecord& r) { r.surface.materials[0].material = "Cotton"; });
  add("material lowercase", "surface.materials[1]",
      [](CostumeRecord& r) { r.surface.materials[1].material = "brocade"; });
  add("material invented", "surface.materials[2]",
      [](CostumeRecord& r) { r.surface.materials[2] = {"Plastic", std::nullopt}; });

  add("form not in vocabulary", "surface.forms[0]",
      [](CostumeRecord& r) { r.surface.forms[0] = "Gloves"; });
  add("form belt", "surface.forms[2]", [](CostumeRecord& r) { r.surface.forms[2] = "Belt"; });
  add("form uppercase", "surface.forms[1]", [](CostumeRecord& r) { r.surface.forms[1] = "SKIRT"; });

  add("middle dimension unknown", "middle[0].dimension",
      [](CostumeRecord& r) { r.middle[0].dimension = "Economy"; });
  add("middle dimension shortened", "middle[0].dimension",
      [](CostumeRecord& r) { r.middle[0].dimension = "Religion"; });
  add("middle dimension lowercase", "middle[1].dimension",
      [](CostumeRecord& r) { r.middle[1].dimension = "festiveceremonies"; });
  add("middle dimension invented", "middle[2].dimension",
      [](CostumeRecord& r) { r.middle[2].dimension = "Politics"; });

  add("inner concept unknown", "inner[0]", [](CostumeRecord& r) { r.inner[0] = "Wealth"; });
  add("inner concept loyalty", "inner[1]", [](CostumeRecord& r) { r.inner[1] = "Loyalty"; });
  add("inner concept lowercase", "inner[0]", [](CostumeRecord& r) { r.inner[0] = "harmony"; });
  add("inner concept display spelling", "inner[1]",
      [](CostumeRecord& r) { r.inner[1] = "Rule of Law"; });
  return out;
}

Image uniform_image(std::uint32_t width, std::uint32_t height, Pixel color) {
  Image img{width, height, {}};
  img.rgb.reserve(std::size_t{width} * height * 3);
  for (std::size_t i = 0; i < std::size_t{width} * height; ++i) {
    img.rgb.insert(img.rgb.end(), {color.r, color.g, color.b});
  }
  return img;
}

Image three_blob_image() {
  Image img{100, 100, {}};
  for (std::uint32_t y = 0; y < 100; ++y) {
    const Pixel p = y < 60 ? kBlobA : (y < 90 ? kBlobB : kBlobC);
    for (std::uint32_t x = 0; x < 100; ++x) img.rgb.insert(img.rgb.end(), {p.r, p.g, p.b});
  }
  return img;
}

std::vector<ColorCase> hand_color_table() {
  // Hues: red 0, orange 38.8, yellow 60, green 120, cyan 180, blue 240,
  // violet 270 exactly (r = 127.5), pink 340 (g-b = -85 over a 255 range).
  // Grays have s = 0; the near-black has v = 30/255 < 0.15.
  return {
      {"pure red", {255, 0, 0}, ColorClass::kWarm},
      {"orange", {255, 165, 0}, ColorClass::kWarm},
      {"yellow", {255, 255, 0}, ColorClass::kWarm},
      {"green", {0, 255, 0}, ColorClass::kCool},
      {"cyan", {0, 255, 255}, ColorClass::kCool},
      {"blue", {0, 0, 255}, ColorClass::kCool},
      {"violet at 270", {127.5, 0, 255}, ColorClass::kCool},
      {"mid gray", {128, 128, 128}, ColorClass::kNeutral},
      {"light gray", {200, 200, 200}, ColorClass::kNeutral},
      {"dark gray", {60, 60, 60}, ColorClass::kNeutral},
      {"near black", {20, 10, 30}, ColorClass::kNeutral},
      {"pink at 340", {255, 0, 85}, ColorClass::kWarm},
  };
}

std::filesystem::path fresh_dir(const std::string& name) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("gene_atlas_" + name + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool oracle_has_tag(const CostumeRecord& record, GeneCategory category, std::string_view value) {
  switch (category) {
    case GeneCategory::kPattern:
      return std::any_of(record.surface.patterns.begin(), record.surface.patterns.end(),
                         [&](const PatternGene& p) { return p.pattern_class == value; });
    case GeneCategory::kMaterial:
      return std::any_of(record.surface.materials.begin(), record.surface.materials.end(),
                         [&](const MaterialGene& m) { return m.material == value; });
    case GeneCategory::kForm:
      return std::find(record.surface.forms.begin(), record.surface.forms.end(), value) !=
             record.surface.forms.end();
    case GeneCategory::kColor:
      return record.surface.color_profile &&
             name_of(record.surface.color_profile->perceptual_class) == value;
  }
  return false;
}

std::vector<std::string> oracle_browse(std::span<const CostumeRecord> records, GeneCategory category,
                                       std::string_view value) {
  std::vector<std::string> ids;
  for (const auto& r : records) {
    if (oracle_has_tag(r, category, value)) ids.push_back(r.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

namespace {

std::vector<std::string> category_values(GeneCategory category) {
  std::vector<std::string> out;
  auto collect = [&](auto values) {
    for (auto v : values) out.emplace_back(name_of(v));
  };
  switch (category) {
    case GeneCategory::kPattern: collect(all_values<PatternClass>()); break;
    case GeneCategory::kColor: collect(all_values<ColorClass>()); break;
    case GeneCategory::kMaterial: collect(all_values<MaterialClass>()); break;
    case GeneCategory::kForm: collect(all_values<FormClass>()); break;
  }
  return out;
}

// Searchable text of a record, rebuilt from its fields.
std::vector<std::string> oracle_fields(const CostumeRecord& r) {
  std::vector<std::string> fields{r.title, r.ethnic_group};
  if (r.region) fields.push_back(*r.region);
  for (const auto& p : r.surface.patterns) fields.insert(fields.end(), p.motifs.begin(), p.motifs.end());
  for (auto category : all_values<GeneCategory>()) {
    for (const auto& value : category_values(category)) {
      if (oracle_has_tag(r, category, value)) {
        fields.emplace_back(GeneTag::make(category, value).display());
      }
    }
  }
  return fields;
}

}  // namespace

std::vector<SearchHit> oracle_search(std::span<const CostumeRecord> records, std::string_view query) {
  const auto raw = text::tokenize_query(query);
  const std::set<std::string> terms(raw.begin(), raw.end());
  std::vector<SearchHit> hits;
  for (const auto& r : records) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& field : oracle_fields(r)) {
      for (const auto& token : text::tokenize(field)) {
        if (terms.contains(token)) ++counts[token];
      }
    }
    if (!terms.empty() && counts.size() == terms.size()) {
      std::uint64_t score = 0;
      for (const auto& [term, n] : counts) score += n;
      hits.push_back({r.id, score});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    return a.score != b.score ? a.score > b.score : a.costume_id < b.costume_id;
  });
  return hits;
}

std::vector<RelatedGroup> oracle_related(std::span<const CostumeRecord> records,
                                         const std::string& costume_id, GeneCategory category) {
  const auto self = std::find_if(records.begin(), records.end(),
                                 [&](const CostumeRecord& r) { return r.id == costume_id; });
  std::vector<RelatedGroup> out;
  if (self == records.end()) return out;
  for (const auto& value : category_values(category)) {
    if (!oracle_has_tag(*self, category, value)) continue;
    RelatedGroup group{GeneTag::make(category, value), {}};
    for (const auto& r : records) {
      if (r.id != costume_id && oracle_has_tag(r, category, value)) group.ids.push_back(r.id);
    }
    std::sort(group.ids.begin(), group.ids.end());
    out.push_back(std::move(group));
  }
  return out;
}

std::vector<std::string> seeded_queries(std::span<const CostumeRecord> records, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::string> words;
  for (const auto& r : records) {
    for (const auto& field : oracle_fields(r)) {
      for (const auto& token : text::tokenize(field)) words.push_back(token);
    }
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());

  const std::vector<std::string> misses = {"velour", "kimono", "zzyzx", "无此词"};
  std::vector<std::string> queries;
  while (queries.size() < 50) {
    const auto kind = rng.below(10);
    std::string q;
    if (kind == 0) {
      q = misses[rng.below(misses.size())];
    } else {
      const std::size_t n = 1 + rng.below(kind < 6 ? 1 : 3);
      for (std::size_t i = 0; i < n; ++i) {
        if (!q.empty()) q += rng.chance(0.5) ? " " : ", ";
        q += words[rng.below(words.size())];
      }
      if (rng.chance(0.3) && !q.empty() && q[0] >= 'a' && q[0] <= 'z') q[0] = static_cast<char>(q[0] - 32);
    }
    queries.push_back(std::move(q));
  }
  return queries;
}

std::vector<CostumeRecord> records_of(const std::map<std::string, CostumeRecord>& records) {
  std::vector<CostumeRecord> out;
  for (const auto& [id, r] : records) out.push_back(r);
  return out;
}

}  // namespace gene_atlas::testing
