#pragma once

// Three-layer cultural gene model: closed surface vocabularies, the six
// middle-layer context dimensions, and the twelve inner-layer value concepts.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace gene_atlas {

enum class PatternClass : std::uint8_t { kGeometric, kAnimal, kPlant };

enum class ColorClass : std::uint8_t { kCool, kWarm, kNeutral };

// The ninth material slot is `kOther`; it may carry a free-text label.
enum class MaterialClass : std::uint8_t {
  kCloth,
  kSilk,
  kBrocade,
  kSatin,
  kVelvet,
  kGauze,
  kLeather,
  kMetal,
  kOther,
};

enum class FormClass : std::uint8_t { kTop, kPants, kSkirt, kShoes, kHat, kAccessory };

enum class MiddleDimension : std::uint8_t {
  kReligiousBeliefs,
  kFestiveCeremonies,
  kSocialStructures,
  kLivelihoodActivities,
  kArtsEntertainment,
  kEnvironmentalAdaptation,
};

enum class InnerLevel : std::uint8_t { kState, kSocietal, kIndividual };

enum class InnerConcept : std::uint8_t {
  kProsperity,
  kDemocracy,
  kCivility,
  kHarmony,
  kFreedom,
  kEquality,
  kJustice,
  kRuleOfLaw,
  kCommunityGuardianship,
  kDedication,
  kIntegrity,
  kFriendliness,
};

enum class GeneCategory : std::uint8_t { kPattern, kColor, kMaterial, kForm };

// Canonical names (used in documents and tag strings) and display names
// (used in prompts, the token index and the UI) for every vocabulary.
template <typename E>
struct VocabularyTraits;

#define GENE_ATLAS_VOCABULARY(E, N)                              \
  template <>                                                    \
  struct VocabularyTraits<E> {                                   \
    static constexpr std::size_t kSize = N;                      \
    static const std::array<std::string_view, N> kNames;         \
    static const std::array<std::string_view, N> kDisplayNames;  \
  };

GENE_ATLAS_VOCABULARY(PatternClass, 3)
GENE_ATLAS_VOCABULARY(ColorClass, 3)
GENE_ATLAS_VOCABULARY(MaterialClass, 9)
GENE_ATLAS_VOCABULARY(FormClass, 6)
GENE_ATLAS_VOCABULARY(MiddleDimension, 6)
GENE_ATLAS_VOCABULARY(InnerLevel, 3)
GENE_ATLAS_VOCABULARY(InnerConcept, 12)
GENE_ATLAS_VOCABULARY(GeneCategory, 4)

#undef GENE_ATLAS_VOCABULARY

template <typename E>
constexpr std::size_t vocabulary_size() {
  return VocabularyTraits<E>::kSize;
}

template <typename E>
std::string_view name_of(E value) {
  return VocabularyTraits<E>::kNames[static_cast<std::size_t>(value)];
}

template <typename E>
std::string_view display_name(E value) {
  return VocabularyTraits<E>::kDisplayNames[static_cast<std::size_t>(value)];
}

// Exact, case-sensitive match against canonical names.
template <typename E>
std::optional<E> parse_term(std::string_view name) {
  const auto& names = VocabularyTraits<E>::kNames;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<E>(i);
  }
  return std::nullopt;
}

template <typename E>
std::array<E, VocabularyTraits<E>::kSize> all_values() {
  std::array<E, VocabularyTraits<E>::kSize> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<E>(i);
  return out;
}

// Case-insensitive lookup used for user-facing inputs ("festive", "form").
template <typename E>
std::optional<E> parse_term_loose(std::string_view name);

struct InnerConceptInfo {
  InnerConcept concept_id;
  InnerLevel level;
  std::string_view expression_example;
  std::string_view connotation;
};

const InnerConceptInfo& concept_info(InnerConcept concept_id);

// Throws Error{kUnknownConcept} for names outside the twelve.
InnerLevel concept_level(std::string_view name);

// Category strings: "Pattern", "Color", "Material", "Form", "middle", "inner"
// (matched case-insensitively). Throws Error{kUnknownCategory}.
std::vector<std::string> taxonomy(std::string_view category);

// ---------------------------------------------------------------------------
// Gene tags
// ---------------------------------------------------------------------------

// A (category, value) pair from the closed surface vocabularies. Ordered by
// category, then by declaration order of the value.
class GeneTag {
 public:
  template <typename E>
  static GeneTag of(E value);

  // Throws Error{kUnknownTag} unless `value` names a term of `category`.
  static GeneTag make(GeneCategory category, std::string_view value);

  // "Category:Value", e.g. "Form:Hat". The category part is case-insensitive.
  static GeneTag parse(std::string_view text);

  GeneCategory category() const { return category_; }
  std::size_t ordinal() const { return ordinal_; }
  std::string_view value() const;
  std::string_view display() const;
  std::string to_string() const;

  friend auto operator<=>(const GeneTag&, const GeneTag&) = default;

 private:
  GeneTag(GeneCategory category, std::size_t ordinal)
      : category_(category), ordinal_(ordinal) {}

  GeneCategory category_;
  std::size_t ordinal_;
};

template <typename E>
GeneTag GeneTag::of(E value) {
  const auto ordinal = static_cast<std::size_t>(value);
  if constexpr (std::is_same_v<E, PatternClass>) {
    return GeneTag(GeneCategory::kPattern, ordinal);
  } else if constexpr (std::is_same_v<E, ColorClass>) {
    return GeneTag(GeneCategory::kColor, ordinal);
  } else if constexpr (std::is_same_v<E, MaterialClass>) {
    return GeneTag(GeneCategory::kMaterial, ordinal);
  } else {
    static_assert(std::is_same_v<E, FormClass>, "not a surface vocabulary");
    return GeneTag(GeneCategory::kForm, ordinal);
  }
}

std::vector<GeneTag> tags_of_category(GeneCategory category);

// ---------------------------------------------------------------------------
// Record model. Vocabulary fields hold canonical names as text so that
// documents with illegal values can be represented and reported.
// ---------------------------------------------------------------------------

struct Rgb {
  double r = 0;
  double g = 0;
  double b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct ColorCluster {
  Rgb centroid;
  double proportion = 0;

  friend bool operator==(const ColorCluster&, const ColorCluster&) = default;
};

struct ColorProfile {
  std::vector<ColorCluster> clusters;
  std::string dominant_hex;
  ColorClass perceptual_class = ColorClass::kNeutral;

  friend bool operator==(const ColorProfile&, const ColorProfile&) = default;
};

struct PatternGene {
  std::string pattern_class;
  std::vector<std::string> motifs;  // free text, e.g. "butterfly"

  friend bool operator==(const PatternGene&, const PatternGene&) = default;
};

struct MaterialGene {
  std::string material;
  std::optional<std::string> label;  // only meaningful for "Other"

  friend bool operator==(const MaterialGene&, const MaterialGene&) = default;
};

struct SurfaceGenes {
  std::vector<PatternGene> patterns;
  std::vector<MaterialGene> materials;
  std::vector<std::string> forms;
  std::optional<ColorProfile> color_profile;

  friend bool operator==(const SurfaceGenes&, const SurfaceGenes&) = default;
};

struct MiddleContext {
  std::string dimension;
  std::string narrative;

  friend bool operator==(const MiddleContext&, const MiddleContext&) = default;
};

struct CostumeRecord {
  std::string id;
  std::string title;
  std::string ethnic_group;
  std::optional<std::string> region;
  std::vector<std::string> image_refs;
  SurfaceGenes surface;
  std::vector<MiddleContext> middle;
  std::vector<std::string> inner;
  std::string source_text;

  friend bool operator==(const CostumeRecord&, const CostumeRecord&) = default;
};

struct Violation {
  std::string path;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

ValidationResult validate_record(const CostumeRecord& record);

// Vocabulary checks shared with annotation drafts (no id / color profile).
void validate_surface_terms(const SurfaceGenes& surface, std::vector<Violation>& out);
void validate_middle(const std::vector<MiddleContext>& middle, std::vector<Violation>& out);
void validate_inner(const std::vector<std::string>& inner, std::vector<Violation>& out);
void validate_color_profile(const ColorProfile& profile, std::string_view path,
                            std::vector<Violation>& out);

// Tags carried by a record: surface patterns, materials, forms and the
// dominant perceptual color class. Illegal terms are skipped.
std::vector<GeneTag> record_tags(const CostumeRecord& record);

const MiddleContext* find_middle(const CostumeRecord& record, MiddleDimension dimension);

}  // namespace gene_atlas
