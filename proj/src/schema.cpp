#include "gene_atlas/schema.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "gene_atlas/color.hpp"
#include "gene_atlas/error.hpp"

namespace gene_atlas {

using namespace std::string_view_literals;

const std::array<std::string_view, 3> VocabularyTraits<PatternClass>::kNames = {
    "Geometric", "Animal", "Plant"};
const std::array<std::string_view, 3> VocabularyTraits<PatternClass>::kDisplayNames = {
    "Geometric", "Animal", "Plant"};

const std::array<std::string_view, 3> VocabularyTraits<ColorClass>::kNames = {
    "Cool", "Warm", "Neutral"};
const std::array<std::string_view, 3> VocabularyTraits<ColorClass>::kDisplayNames = {
    "Cool", "Warm", "Neutral"};

const std::array<std::string_view, 9> VocabularyTraits<MaterialClass>::kNames = {
    "Cloth", "Silk", "Brocade", "Satin", "Velvet", "Gauze", "Leather", "Metal", "Other"};
const std::array<std::string_view, 9> VocabularyTraits<MaterialClass>::kDisplayNames = {
    "Cloth", "Silk", "Brocade", "Satin", "Velvet", "Gauze", "Leather", "Metal", "Other"};

const std::array<std::string_view, 6> VocabularyTraits<FormClass>::kNames = {
    "Top", "Pants", "Skirt", "Shoes", "Hat", "Accessory"};
const std::array<std::string_view, 6> VocabularyTraits<FormClass>::kDisplayNames = {
    "Top", "Pants", "Skirt", "Shoes", "Hat", "Accessory"};

const std::array<std::string_view, 6> VocabularyTraits<MiddleDimension>::kNames = {
    "ReligiousBeliefs",     "FestiveCeremonies", "SocialStructures",
    "LivelihoodActivities", "ArtsEntertainment", "EnvironmentalAdaptation"};
const std::array<std::string_view, 6> VocabularyTraits<MiddleDimension>::kDisplayNames = {
    "Religious Beliefs",     "Festive Ceremonies",  "Social Structures",
    "Livelihood Activities", "Arts & Entertainment", "Environmental Adaptation"};

const std::array<std::string_view, 3> VocabularyTraits<InnerLevel>::kNames = {
    "State", "Societal", "Individual"};
const std::array<std::string_view, 3> VocabularyTraits<InnerLevel>::kDisplayNames = {
    "Values at the State Level", "Guiding Principles at the Societal Level",
    "Moral Norms at the Individual Level"};

const std::array<std::string_view, 12> VocabularyTraits<InnerConcept>::kNames = {
    "Prosperity", "Democracy", "Civility",              "Harmony",
    "Freedom",    "Equality",  "Justice",               "RuleOfLaw",
    "CommunityGuardianship",   "Dedication", "Integrity", "Friendliness"};
const std::array<std::string_view, 12> VocabularyTraits<InnerConcept>::kDisplayNames = {
    "Prosperity", "Democracy", "Civility",               "Harmony",
    "Freedom",    "Equality",  "Justice",                "Rule of Law",
    "Community Guardianship",  "Dedication", "Integrity", "Friendliness"};

const std::array<std::string_view, 4> VocabularyTraits<GeneCategory>::kNames = {
    "Pattern", "Color", "Material", "Form"};
const std::array<std::string_view, 4> VocabularyTraits<GeneCategory>::kDisplayNames = {
    "Pattern", "Color", "Material", "Form"};

namespace {

std::string fold_key(std::string_view text) {
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

// Seed data: one row per concept, in declaration order.
const std::array<InnerConceptInfo, 12> kInnerConcepts = {{
    {InnerConcept::kProsperity, InnerLevel::kState,
     "The recurring use of patterns symbolizing fertility and abundance (e.g., pomegranates, "
     "fish, wheat ears), and the use of splendid materials in festive and wedding attire.",
     "Materializes the collective aspiration for life's continuity, abundant resources, and "
     "well-being. This universal pursuit inspires innovation in contemporary cultural "
     "industries."},
    {InnerConcept::kDemocracy, InnerLevel::kState,
     "Certain ceremonial garments worn by elders or community leaders may symbolize a "
     "tradition of collective deliberation and respect for members' rights.",
     "Reflects the inherent wisdom in community governance and social harmony. This provides "
     "insights into diverse forms of social organization and inspires modern approaches to "
     "participatory consensus-building."},
    {InnerConcept::kCivility, InnerLevel::kState,
     "Exquisite craftsmanship, complex narrative patterns, and strict dress codes for specific "
     "rituals all demonstrate a high regard for wisdom, skill, and behavioral propriety.",
     "Highlights the universal human respect for knowledge, skill, and decorum. This inspires "
     "a greater appreciation for the transmission of traditional crafts and mutual respect in "
     "cross-cultural communication."},
    {InnerConcept::kHarmony, InnerLevel::kState,
     "The extensive use of natural materials, colors, and motifs (flora and fauna) embodies "
     "the philosophy of \"harmony between heaven and humanity\" and a reverence for nature.",
     "Emphasizes the valuable ecological wisdom inherent in many traditional cultures. In an "
     "era of global environmental challenges, this concept offers profound inspiration for "
     "sustainable design."},
    {InnerConcept::kFreedom, InnerLevel::kSocietal,
     "The structure of nomadic attire, often designed for ease of movement, reflects an "
     "adaptation to a migratory lifestyle and a yearning for physical and spiritual freedom.",
     "Reflects the human desire for vitality, mobility, and liberation of the spirit. This "
     "spirit encourages the exploration of the unknown and continues to inspire artistic and "
     "cultural expression."},
    {InnerConcept::kEquality, InnerLevel::kSocietal,
     "Symbolic elements shared across different genders or social classes in ceremonial "
     "attire; patterns narrating stories of resistance against oppression.",
     "Expresses the pursuit of fairness and the inherent value of individuals within the "
     "community. These ideas contribute to the development of more inclusive societies "
     "today."},
    {InnerConcept::kJustice, InnerLevel::kSocietal,
     "The solemn and symmetrical design of garments worn by law-keepers or ritual hosts may "
     "symbolize the authority and responsibility to uphold community norms and dispense "
     "fairness.",
     "Embodies the universal human need to establish and maintain a just order. Studying "
     "traditional norms helps us understand the formation of justice concepts in diverse "
     "cultural contexts."},
    {InnerConcept::kRuleOfLaw, InnerLevel::kSocietal,
     "The specific rules governing who wears what on which occasion is itself a form of "
     "social contract, reflecting a shared respect for communal order and established "
     "customs.",
     "Emphasizes the importance of abiding by agreements and respecting rules in social life. "
     "This consciousness is a cornerstone of social stability and cultural transmission."},
    {InnerConcept::kCommunityGuardianship, InnerLevel::kIndividual,
     "Totemic patterns symbolizing a specific region or ethnic group; iconic garments that "
     "evoke collective emotion and are worn during significant community events.",
     "Reflects a deep emotional bond and sense of responsibility towards one's homeland and "
     "community. This identity is the foundation of cultural diversity and a spiritual tie "
     "that unifies a community."},
    {InnerConcept::kDedication, InnerLevel::kIndividual,
     "The meticulous, time-consuming, and highly skilled craftsmanship involved in making a "
     "garment is itself a testament to the artisan's dedication, patience, and creative "
     "spirit.",
     "Showcases the universal virtue of creating value through diligent work and skill. This "
     "\"spirit of craftsmanship\" is a vital driving force for social and cultural "
     "development."},
    {InnerConcept::kIntegrity, InnerLevel::kIndividual,
     "The simple, unadorned style of certain garments may symbolize an honest and upright "
     "character; the formality of attire worn for oaths or important agreements implies a "
     "high regard for trustworthiness.",
     "As the foundation of interpersonal relationships and social trust, integrity is a "
     "crucial virtue shared across cultures, especially vital for building harmonious "
     "communities in our complex modern world."},
    {InnerConcept::kFriendliness, InnerLevel::kIndividual,
     "The vibrant colors and welcoming motifs (e.g., blooming flowers) of festive or "
     "ceremonial attire often convey signals of hospitality and inclusiveness.",
     "Embodies the universal human desire to establish friendly relations and foster "
     "emotional communication. This quality is essential for promoting cross-cultural "
     "understanding and cooperation."},
}};

template <typename E>
std::vector<std::string> names_of() {
  std::vector<std::string> out;
  for (auto name : VocabularyTraits<E>::kNames) out.emplace_back(name);
  return out;
}

std::string_view tag_value_name(GeneCategory category, std::size_t ordinal) {
  switch (category) {
    case GeneCategory::kPattern: return VocabularyTraits<PatternClass>::kNames[ordinal];
    case GeneCategory::kColor: return VocabularyTraits<ColorClass>::kNames[ordinal];
    case GeneCategory::kMaterial: return VocabularyTraits<MaterialClass>::kNames[ordinal];
    case GeneCategory::kForm: return VocabularyTraits<FormClass>::kNames[ordinal];
  }
  return {};
}

std::string_view tag_value_display(GeneCategory category, std::size_t ordinal) {
  switch (category) {
    case GeneCategory::kPattern: return VocabularyTraits<PatternClass>::kDisplayNames[ordinal];
    case GeneCategory::kColor: return VocabularyTraits<ColorClass>::kDisplayNames[ordinal];
    case GeneCategory::kMaterial: return VocabularyTraits<MaterialClass>::kDisplayNames[ordinal];
    case GeneCategory::kForm: return VocabularyTraits<FormClass>::kDisplayNames[ordinal];
  }
  return {};
}

std::size_t category_size(GeneCategory category) {
  switch (category) {
    case GeneCategory::kPattern: return vocabulary_size<PatternClass>();
    case GeneCategory::kColor: return vocabulary_size<ColorClass>();
    case GeneCategory::kMaterial: return vocabulary_size<MaterialClass>();
    case GeneCategory::kForm: return vocabulary_size<FormClass>();
  }
  return 0;
}

bool is_blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string indexed(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

}  // namespace

template <typename E>
std::optional<E> parse_term_loose(std::string_view name) {
  const auto key = fold_key(name);
  if (key.empty()) return std::nullopt;
  for (std::size_t i = 0; i < VocabularyTraits<E>::kSize; ++i) {
    if (fold_key(VocabularyTraits<E>::kNames[i]) == key ||
        fold_key(VocabularyTraits<E>::kDisplayNames[i]) == key) {
      return static_cast<E>(i);
    }
  }
  return std::nullopt;
}

template std::optional<PatternClass> parse_term_loose<PatternClass>(std::string_view);
template std::optional<ColorClass> parse_term_loose<ColorClass>(std::string_view);
template std::optional<MaterialClass> parse_term_loose<MaterialClass>(std::string_view);
template std::optional<FormClass> parse_term_loose<FormClass>(std::string_view);
template std::optional<MiddleDimension> parse_term_loose<MiddleDimension>(std::string_view);
template std::optional<InnerLevel> parse_term_loose<InnerLevel>(std::string_view);
template std::optional<InnerConcept> parse_term_loose<InnerConcept>(std::string_view);
template std::optional<GeneCategory> parse_term_loose<GeneCategory>(std::string_view);

const InnerConceptInfo& concept_info(InnerConcept concept_id) {
  return kInnerConcepts[static_cast<std::size_t>(concept_id)];
}

InnerLevel concept_level(std::string_view name) {
  const auto concept_id = parse_term<InnerConcept>(name);
  if (!concept_id) {
    throw Error(ErrorCode::kUnknownConcept, "unknown inner concept: " + std::string(name));
  }
  return concept_info(*concept_id).level;
}

std::vector<std::string> taxonomy(std::string_view category) {
  const auto key = fold_key(category);
  if (key == "middle") return names_of<MiddleDimension>();
  if (key == "inner") return names_of<InnerConcept>();
  if (const auto gene = parse_term_loose<GeneCategory>(category)) {
    switch (*gene) {
      case GeneCategory::kPattern: return names_of<PatternClass>();
      case GeneCategory::kColor: return names_of<ColorClass>();
      case GeneCategory::kMaterial: return names_of<MaterialClass>();
      case GeneCategory::kForm: return names_of<FormClass>();
    }
  }
  throw Error(ErrorCode::kUnknownCategory, "unknown category: " + std::string(category));
}

// ---------------------------------------------------------------------------

GeneTag GeneTag::make(GeneCategory category, std::string_view value) {
  const auto size = category_size(category);
  for (std::size_t i = 0; i < size; ++i) {
    if (tag_value_name(category, i) == value) return GeneTag(category, i);
  }
  throw Error(ErrorCode::kUnknownTag, "unknown tag value '" + std::string(value) + "' for " +
                                          std::string(name_of(category)));
}

GeneTag GeneTag::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kUnknownTag, "tag must be Category:Value, got '" +
                                            std::string(text) + "'");
  }
  const auto category = parse_term_loose<GeneCategory>(text.substr(0, colon));
  if (!category) {
    throw Error(ErrorCode::kUnknownTag, "unknown tag category in '" + std::string(text) + "'");
  }
  return make(*category, text.substr(colon + 1));
}

std::string_view GeneTag::value() const { return tag_value_name(category_, ordinal_); }

std::string_view GeneTag::display() const { return tag_value_display(category_, ordinal_); }

std::string GeneTag::to_string() const {
  return std::string(name_of(category_)) + ":" + std::string(value());
}

std::vector<GeneTag> tags_of_category(GeneCategory category) {
  std::vector<GeneTag> out;
  const auto size = category_size(category);
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(GeneTag::make(category, tag_value_name(category, i)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

void validate_surface_terms(const SurfaceGenes& surface, std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < surface.patterns.size(); ++i) {
    const auto& pattern = surface.patterns[i];
    const auto path = indexed("surface.patterns", i);
    if (!parse_term<PatternClass>(pattern.pattern_class)) {
      out.push_back({path + ".class", "unknown pattern class '" + pattern.pattern_class + "'"});
    } else if (!seen.insert(pattern.pattern_class).second) {
      out.push_back({path + ".class", "duplicate pattern class '" + pattern.pattern_class + "'"});
    }
    for (std::size_t m = 0; m < pattern.motifs.size(); ++m) {
      if (is_blank(pattern.motifs[m])) {
        out.push_back({indexed(path + ".motifs", m), "empty motif label"});
      }
    }
  }

  seen.clear();
  for (std::size_t i = 0; i < surface.materials.size(); ++i) {
    const auto& material = surface.materials[i];
    const auto path = indexed("surface.materials", i);
    const auto parsed = parse_term<MaterialClass>(material.material);
    if (!parsed) {
      out.push_back({path, "unknown material '" + material.material + "'"});
      continue;
    }
    if (!seen.insert(material.material).second) {
      out.push_back({path, "duplicate material '" + material.material + "'"});
    }
    if (material.label && *parsed != MaterialClass::kOther) {
      out.push_back({path + ".label", "only the Other material carries a label"});
    }
  }

  seen.clear();
  if (surface.forms.empty()) {
    out.push_back({"surface.forms", "at least one form is required"});
  }
  for (std::size_t i = 0; i < surface.forms.size(); ++i) {
    const auto& form = surface.forms[i];
    if (!parse_term<FormClass>(form)) {
      out.push_back({indexed("surface.forms", i), "unknown form '" + form + "'"});
    } else if (!seen.insert(form).second) {
      out.push_back({indexed("surface.forms", i), "duplicate form '" + form + "'"});
    }
  }
}

void validate_color_profile(const ColorProfile& profile, std::string_view base,
                            std::vector<Violation>& out) {
  const std::string path(base);
  if (profile.clusters.empty()) {
    out.push_back({path + ".clusters", "color profile has no clusters"});
  }
  double total = 0;
  bool centroids_ok = true;
  for (std::size_t i = 0; i < profile.clusters.size(); ++i) {
    const auto& cluster = profile.clusters[i];
    if (!(cluster.proportion >= 0.0 && cluster.proportion <= 1.0)) {
      out.push_back({indexed(path + ".clusters", i) + ".proportion", "proportion outside [0,1]"});
    }
    for (double channel : {cluster.centroid.r, cluster.centroid.g, cluster.centroid.b}) {
      if (!(channel >= 0.0 && channel <= 255.0)) {
        out.push_back({indexed(path + ".clusters", i) + ".centroid", "channel outside [0,255]"});
        centroids_ok = false;
        break;
      }
    }
    total += cluster.proportion;
  }
  if (!profile.clusters.empty() && std::abs(total - 1.0) > 1e-9) {
    out.push_back({path + ".clusters", "cluster proportions do not sum to 1"});
  }
  if (!is_hex_code(profile.dominant_hex)) {
    out.push_back({path + ".dominant_hex",
                   "'" + profile.dominant_hex + "' is not an uppercase #RRGGBB code"});
  } else if (!profile.clusters.empty() && centroids_ok) {
    const auto& dominant = dominant_cluster(profile.clusters);
    if (rgb_to_hex(dominant.centroid) != profile.dominant_hex) {
      out.push_back({path + ".dominant_hex", "does not match the dominant cluster centroid"});
    }
  }
}

void validate_middle(const std::vector<MiddleContext>& middle, std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < middle.size(); ++i) {
    const auto path = indexed("middle", i);
    const auto& context = middle[i];
    if (!parse_term<MiddleDimension>(context.dimension)) {
      out.push_back({path + ".dimension", "unknown middle dimension '" + context.dimension + "'"});
    } else if (!seen.insert(context.dimension).second) {
      out.push_back({path + ".dimension", "duplicate dimension '" + context.dimension + "'"});
    }
    if (is_blank(context.narrative)) {
      out.push_back({path + ".narrative", "narrative is empty"});
    }
  }
}

void validate_inner(const std::vector<std::string>& inner, std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (!parse_term<InnerConcept>(inner[i])) {
      out.push_back({indexed("inner", i), "unknown concept '" + inner[i] + "'"});
    } else if (!seen.insert(inner[i]).second) {
      out.push_back({indexed("inner", i), "duplicate concept '" + inner[i] + "'"});
    }
  }
}

ValidationResult validate_record(const CostumeRecord& record) {
  ValidationResult result;
  auto& out = result.violations;
  if (is_blank(record.id)) out.push_back({"id", "id is empty"});
  for (std::size_t i = 0; i < record.image_refs.size(); ++i) {
    if (record.image_refs[i].empty()) out.push_back({indexed("image_refs", i), "empty path"});
  }
  validate_surface_terms(record.surface, out);
  if (record.surface.color_profile) {
    validate_color_profile(*record.surface.color_profile, "surface.color_profile", out);
  }
  validate_middle(record.middle, out);
  validate_inner(record.inner, out);
  return result;
}

std::vector<GeneTag> record_tags(const CostumeRecord& record) {
  std::set<GeneTag> tags;
  for (const auto& pattern : record.surface.patterns) {
    if (auto v = parse_term<PatternClass>(pattern.pattern_class)) tags.insert(GeneTag::of(*v));
  }
  for (const auto& material : record.surface.materials) {
    if (auto v = parse_term<MaterialClass>(material.material)) tags.insert(GeneTag::of(*v));
  }
  for (const auto& form : record.surface.forms) {
    if (auto v = parse_term<FormClass>(form)) tags.insert(GeneTag::of(*v));
  }
  if (record.surface.color_profile) {
    tags.insert(GeneTag::of(record.surface.color_profile->perceptual_class));
  }
  return {tags.begin(), tags.end()};
}

const MiddleContext* find_middle(const CostumeRecord& record, MiddleDimension dimension) {
  const auto name = name_of(dimension);
  for (const auto& context : record.middle) {
    if (context.dimension == name) return &context;
  }
  return nullptr;
}

}  // namespace gene_atlas
