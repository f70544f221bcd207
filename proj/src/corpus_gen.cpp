#include "gene_atlas/corpus_gen.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "gene_atlas/color.hpp"

namespace gene_atlas {
namespace {

constexpr std::array<std::string_view, 12> kGroups = {
    "Miao", "Yi", "Dong", "Bai", "Tibetan", "Mongolian",
    "Zhuang", "Dai", "Hani", "Uyghur", "Li", "Naxi"};

constexpr std::array<std::string_view, 8> kRegions = {
    "Guizhou", "Yunnan", "Guangxi", "Sichuan", "Hainan", "Xinjiang", "Inner Mongolia", "Qinghai"};

constexpr std::array<std::string_view, 10> kAdjectives = {
    "Embroidered", "Pleated", "Festival", "Wedding", "Silver-Trimmed",
    "Indigo", "Batik", "Hundred-Bird", "Layered", "Brocaded"};

constexpr std::array<std::string_view, 8> kGarments = {
    "Jacket", "Robe", "Skirt Ensemble", "Headdress", "Vest", "Apron", "Coat", "Tunic"};

constexpr std::array<std::string_view, 8> kCjkTitles = {
    "百鸟衣", "百褶裙", "银饰盛装", "蜡染上衣", "刺绣围腰", "锦鸡服", "织锦长袍", "绣花鞋"};

constexpr std::array<std::array<std::string_view, 4>, 3> kMotifs = {{
    {"fret", "diamond lattice", "spiral", "zigzag"},
    {"butterfly", "dragon", "phoenix", "fish"},
    {"peony", "lotus", "pomegranate", "vine scroll"},
}};

constexpr std::array<std::string_view, 4> kOtherMaterials = {
    "ramie", "felt", "bamboo fiber", "feather"};

// Two clauses per middle dimension, completed as "Among the <group>, ...".
constexpr std::array<std::array<std::string_view, 2>, 6> kPhrases = {{
    {"elders wear this garment when honoring ancestral spirits at the village shrine",
     "ritual specialists add protective charms to the hem before sacrifices"},
    {"families bring this piece out for the new year dances and harvest fairs",
     "brides receive this outfit as part of the wedding procession"},
    {"the number of trims signals the wearer's clan and marital status",
     "young women sew their own set before coming of age"},
    {"the sturdy weave suits long days in the terraced fields",
     "herders rely on the layered cut while moving with the flocks"},
    {"singers and dancers wear it for antiphonal song gatherings",
     "the costume appears in local opera and storytelling performances"},
    {"thick quilting keeps out the mountain cold at high altitude",
     "light fabric and open sleeves suit the humid river valleys"},
}};

struct Hsv3 {
  double h, s, v;
};

Pixel hsv_pixel(const Hsv3& c) {
  const double chroma = c.v * c.s;
  const double hp = c.h / 60.0;
  const double x = chroma * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = chroma, g = x; break;
    case 1: r = x, g = chroma; break;
    case 2: g = chroma, b = x; break;
    case 3: g = x, b = chroma; break;
    case 4: r = x, b = chroma; break;
    default: r = chroma, b = x; break;
  }
  const double m = c.v - chroma;
  auto channel = [&](double value) {
    return static_cast<std::uint8_t>(std::lround((value + m) * 255.0));
  };
  return {channel(r), channel(g), channel(b)};
}

double between(SplitMix64& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

Pixel color_of_class(ColorClass cls, SplitMix64& rng) {
  switch (cls) {
    case ColorClass::kWarm:
      return hsv_pixel({between(rng, 5, 75), between(rng, 0.55, 0.95), between(rng, 0.55, 0.95)});
    case ColorClass::kCool:
      return hsv_pixel({between(rng, 110, 310), between(rng, 0.55, 0.95), between(rng, 0.55, 0.95)});
    case ColorClass::kNeutral:
      break;
  }
  return hsv_pixel({between(rng, 0, 359), between(rng, 0, 0.08), between(rng, 0.3, 0.9)});
}

// 200 pixels: 120 of the dominant color, 60 and 20 of two others.
ColorProfile synthetic_profile(ColorClass dominant, SplitMix64& rng) {
  const Pixel main = color_of_class(dominant, rng);
  const Pixel second = color_of_class(static_cast<ColorClass>(rng.below(3)), rng);
  const Pixel third = color_of_class(static_cast<ColorClass>(rng.below(3)), rng);
  std::vector<Pixel> pixels(120, main);
  pixels.insert(pixels.end(), 60, second);
  pixels.insert(pixels.end(), 20, third);
  return extract_profile(pixels, KMeansParams{.k = 3, .seed = rng.next()});
}

template <typename E>
std::vector<E> pick_terms(std::uint32_t index, SplitMix64& rng, double p) {
  const auto forced = static_cast<E>(index % vocabulary_size<E>());
  std::vector<E> out;
  for (auto v : all_values<E>()) {
    const bool extra = rng.chance(p);
    if (v == forced || extra) out.push_back(v);
  }
  return out;
}

template <typename T, std::size_t N>
const T& pick(const std::array<T, N>& items, SplitMix64& rng) {
  return items[rng.below(N)];
}

}  // namespace

CostumeRecord generate_record(std::uint32_t index, SplitMix64& rng) {
  CostumeRecord r;
  char id[16];
  std::snprintf(id, sizeof(id), "GA-%04u", index + 1);
  r.id = id;
  r.ethnic_group = pick(kGroups, rng);
  if (index % 7 == 3) {
    r.title = std::string(r.ethnic_group) + " " + std::string(pick(kCjkTitles, rng));
  } else {
    r.title = std::string(r.ethnic_group) + " " + std::string(pick(kAdjectives, rng)) + " " +
              std::string(pick(kGarments, rng));
  }
  if (rng.chance(0.7)) r.region = std::string(pick(kRegions, rng));
  r.image_refs = {"images/" + r.id + ".png"};

  for (auto p : pick_terms<PatternClass>(index, rng, 0.3)) {
    const auto& bank = kMotifs[static_cast<std::size_t>(p)];
    PatternGene gene{std::string(name_of(p)), {std::string(pick(bank, rng))}};
    if (rng.chance(0.4)) {
      auto extra = std::string(pick(bank, rng));
      if (extra != gene.motifs.front()) gene.motifs.push_back(std::move(extra));
    }
    r.surface.patterns.push_back(std::move(gene));
  }
  for (auto m : pick_terms<MaterialClass>(index, rng, 0.2)) {
    MaterialGene gene{std::string(name_of(m)), std::nullopt};
    if (m == MaterialClass::kOther) gene.label = std::string(pick(kOtherMaterials, rng));
    r.surface.materials.push_back(std::move(gene));
  }
  for (auto f : pick_terms<FormClass>(index, rng, 0.3)) r.surface.forms.emplace_back(name_of(f));
  r.surface.color_profile = synthetic_profile(static_cast<ColorClass>(index % 3), rng);

  for (auto d : pick_terms<MiddleDimension>(index, rng, 0.35)) {
    const auto& phrases = kPhrases[static_cast<std::size_t>(d)];
    const std::size_t first = rng.below(2);
    std::string narrative = "Among the " + std::string(r.ethnic_group) + ", " +
                            std::string(phrases[first]) + ".";
    if (rng.chance(0.5)) {
      narrative += " Elsewhere " + std::string(phrases[1 - first]) + ".";
    }
    r.middle.push_back({std::string(name_of(d)), std::move(narrative)});
  }
  for (auto c : pick_terms<InnerConcept>(index, rng, 0.15)) r.inner.emplace_back(name_of(c));

  r.source_text = r.title + ".";
  for (const auto& m : r.middle) r.source_text += " " + m.narrative;
  return r;
}

Corpus generate_corpus(std::uint32_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Corpus corpus;
  for (std::uint32_t i = 0; i < n; ++i) {
    auto record = generate_record(i, rng);
    auto id = record.id;
    corpus.records.emplace(std::move(id), std::move(record));
  }
  corpus.version = n;
  return corpus;
}

}  // namespace gene_atlas
