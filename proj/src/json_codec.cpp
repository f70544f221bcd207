#include "gene_atlas/json_codec.hpp"

#include <algorithm>
#include <set>

#include "gene_atlas/color.hpp"
#include "gene_atlas/error.hpp"

namespace gene_atlas {
namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedBody, what);
}

// Reads fields of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j_.is_object()) malformed(context_ + ": expected an object");
  }

  const Json* optional(std::string_view key) {
    seen_.emplace(key);
    const auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  const Json& required(std::string_view key) {
    const Json* v = optional(key);
    if (!v) malformed(context_ + ": missing field '" + std::string(key) + "'");
    return *v;
  }

  std::string string(std::string_view key) { return as_string(required(key), key); }

  std::optional<std::string> optional_string(std::string_view key) {
    const Json* v = optional(key);
    if (!v) return std::nullopt;
    return as_string(*v, key);
  }

  std::vector<std::string> strings(std::string_view key, bool required_field = false) {
    const Json* v = required_field ? &required(key) : optional(key);
    std::vector<std::string> out;
    if (!v) return out;
    if (!v->is_array()) malformed(context_ + "." + std::string(key) + ": expected an array");
    for (const auto& item : *v) out.push_back(as_string(item, key));
    return out;
  }

  const Json& array(std::string_view key, bool required_field = false) {
    static const Json kEmpty = Json::array();
    const Json* v = required_field ? &required(key) : optional(key);
    if (!v) return kEmpty;
    if (!v->is_array()) malformed(context_ + "." + std::string(key) + ": expected an array");
    return *v;
  }

  double number(std::string_view key) {
    const Json& v = required(key);
    if (!v.is_number()) malformed(context_ + "." + std::string(key) + ": expected a number");
    return v.get<double>();
  }

  std::uint64_t unsigned_number(std::string_view key) {
    const Json& v = required(key);
    if (!v.is_number_unsigned()) {
      malformed(context_ + "." + std::string(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  void allow(std::string_view key) { seen_.emplace(key); }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) {
        throw Error(ErrorCode::kUnknownField, context_ + ": unknown field '" + key + "'");
      }
    }
  }

 private:
  std::string as_string(const Json& v, std::string_view key) const {
    if (!v.is_string()) malformed(context_ + "." + std::string(key) + ": expected a string");
    return v.get<std::string>();
  }

  const Json& j_;
  std::string context_;
  std::set<std::string, std::less<>> seen_;
};

Json surface_to_json(const SurfaceGenes& s) {
  Json patterns = Json::array();
  for (const auto& p : s.patterns) {
    patterns.push_back({{"class", p.pattern_class}, {"motifs", p.motifs}});
  }
  Json materials = Json::array();
  for (const auto& m : s.materials) {
    Json entry = {{"material", m.material}};
    if (m.label) entry["label"] = *m.label;
    materials.push_back(std::move(entry));
  }
  Json out = {{"patterns", patterns}, {"materials", materials}, {"forms", s.forms}};
  if (s.color_profile) out["color_profile"] = to_json(*s.color_profile);
  return out;
}

SurfaceGenes surface_from_json(const Json& j) {
  ObjectReader r(j, "surface");
  SurfaceGenes s;
  for (const auto& item : r.array("patterns")) {
    ObjectReader pr(item, "surface.patterns[]");
    PatternGene p;
    p.pattern_class = pr.string("class");
    p.motifs = pr.strings("motifs");
    pr.finish();
    s.patterns.push_back(std::move(p));
  }
  for (const auto& item : r.array("materials")) {
    ObjectReader mr(item, "surface.materials[]");
    MaterialGene m;
    m.material = mr.string("material");
    m.label = mr.optional_string("label");
    mr.finish();
    s.materials.push_back(std::move(m));
  }
  s.forms = r.strings("forms");
  if (const Json* cp = r.optional("color_profile")) s.color_profile = color_profile_from_json(*cp);
  r.finish();
  return s;
}

Json middle_to_json(const std::vector<MiddleContext>& middle) {
  Json out = Json::array();
  for (const auto& c : middle) out.push_back({{"dimension", c.dimension}, {"narrative", c.narrative}});
  return out;
}

std::vector<MiddleContext> middle_from_json(const Json& arr) {
  std::vector<MiddleContext> out;
  for (const auto& item : arr) {
    ObjectReader r(item, "middle[]");
    MiddleContext c;
    c.dimension = r.string("dimension");
    c.narrative = r.string("narrative");
    r.finish();
    out.push_back(std::move(c));
  }
  return out;
}

InnerConcept parse_concept(const std::string& name) {
  if (auto c = parse_term<InnerConcept>(name)) return *c;
  if (auto c = parse_term_loose<InnerConcept>(name)) return *c;
  throw Error(ErrorCode::kUnknownConcept, "unknown inner concept: " + name);
}

template <typename E>
Json vocabulary_entries() {
  Json out = Json::array();
  for (auto v : all_values<E>()) {
    out.push_back({{"name", name_of(v)}, {"display", display_name(v)}});
  }
  return out;
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
}

Json to_json(const ColorProfile& profile) {
  Json clusters = Json::array();
  for (const auto& c : profile.clusters) {
    clusters.push_back({{"centroid", {c.centroid.r, c.centroid.g, c.centroid.b}},
                        {"proportion", c.proportion}});
  }
  return {{"clusters", clusters},
          {"dominant_hex", profile.dominant_hex},
          {"perceptual_class", name_of(profile.perceptual_class)}};
}

ColorProfile color_profile_from_json(const Json& j) {
  ObjectReader r(j, "color_profile");
  ColorProfile p;
  for (const auto& item : r.array("clusters", true)) {
    ObjectReader cr(item, "color_profile.clusters[]");
    const Json& centroid = cr.required("centroid");
    if (!centroid.is_array() || centroid.size() != 3 ||
        !std::all_of(centroid.begin(), centroid.end(), [](const Json& v) { return v.is_number(); })) {
      malformed("color_profile.clusters[].centroid: expected [r, g, b]");
    }
    ColorCluster c;
    c.centroid = {centroid[0].get<double>(), centroid[1].get<double>(), centroid[2].get<double>()};
    c.proportion = cr.number("proportion");
    cr.finish();
    p.clusters.push_back(c);
  }
  p.dominant_hex = r.string("dominant_hex");
  const auto cls = r.string("perceptual_class");
  const auto parsed = parse_term<ColorClass>(cls);
  if (!parsed) malformed("color_profile.perceptual_class: unknown class '" + cls + "'");
  p.perceptual_class = *parsed;
  r.finish();
  return p;
}

Json to_json(const CostumeRecord& record) {
  Json out = {{"id", record.id},
              {"title", record.title},
              {"ethnic_group", record.ethnic_group},
              {"image_refs", record.image_refs},
              {"surface", surface_to_json(record.surface)},
              {"middle", middle_to_json(record.middle)},
              {"inner", record.inner},
              {"source_text", record.source_text}};
  if (record.region) out["region"] = *record.region;
  return out;
}

CostumeRecord record_from_json(const Json& j) {
  ObjectReader r(j, "record");
  CostumeRecord record;
  record.id = r.string("id");
  record.title = r.string("title");
  record.ethnic_group = r.string("ethnic_group");
  record.region = r.optional_string("region");
  record.image_refs = r.strings("image_refs");
  record.surface = surface_from_json(r.required("surface"));
  record.middle = middle_from_json(r.array("middle"));
  record.inner = r.strings("inner");
  record.source_text = r.optional_string("source_text").value_or("");
  r.finish();
  return record;
}

Json to_json(const AnnotationDraft& draft) {
  Json out = {{"coder_id", draft.coder_id},
              {"costume_id", draft.costume_id},
              {"surface", surface_to_json(draft.surface)},
              {"middle", middle_to_json(draft.middle)},
              {"inner", draft.inner}};
  if (draft.manual_color_class) out["manual_color_class"] = *draft.manual_color_class;
  return out;
}

AnnotationDraft draft_from_json(const Json& j) {
  ObjectReader r(j, "draft");
  AnnotationDraft d;
  d.coder_id = r.string("coder_id");
  d.costume_id = r.string("costume_id");
  d.surface = surface_from_json(r.required("surface"));
  d.middle = middle_from_json(r.array("middle"));
  d.inner = r.strings("inner");
  d.manual_color_class = r.optional_string("manual_color_class");
  r.finish();
  return d;
}

Json to_json(const MergedAnnotation& merged) {
  Json out = {{"surface", surface_to_json(merged.surface)},
              {"middle", middle_to_json(merged.middle)},
              {"inner", merged.inner}};
  if (merged.manual_color_class) out["manual_color_class"] = *merged.manual_color_class;
  return out;
}

Json to_json(const ReconciliationReport& report) {
  Json conflicts = Json::array();
  for (const auto& c : report.conflicts) {
    conflicts.push_back({{"field_path", c.field_path}, {"value_a", c.value_a}, {"value_b", c.value_b}});
  }
  return {{"costume_id", report.costume_id},
          {"agreement_rate", report.agreement_rate},
          {"conflicts", conflicts},
          {"total_fields", report.total_fields}};
}

Json to_json(const ValidationResult& result) {
  Json violations = Json::array();
  for (const auto& v : result.violations) {
    violations.push_back({{"path", v.path}, {"message", v.message}});
  }
  return {{"ok", result.ok()}, {"violations", violations}};
}

Decisions decisions_from_json(const Json& j) {
  if (!j.is_object()) malformed("decisions: expected an object of field_path -> \"A\" | \"B\"");
  Decisions out;
  for (const auto& [path, side] : j.items()) {
    if (side == "A" || side == "a") {
      out[path] = Side::kA;
    } else if (side == "B" || side == "b") {
      out[path] = Side::kB;
    } else {
      malformed("decisions." + path + ": expected \"A\" or \"B\"");
    }
  }
  return out;
}

IngestMeta meta_from_json(const Json& j) {
  ObjectReader r(j, "meta");
  IngestMeta m;
  m.id = r.string("id");
  m.title = r.string("title");
  m.ethnic_group = r.string("ethnic_group");
  m.region = r.optional_string("region");
  m.image_refs = r.strings("image_refs");
  r.finish();
  return m;
}

Json to_json(const CoCreationRequest& request) {
  return {{"costume_id", request.costume_id},
          {"context_theme", name_of(request.context_theme)},
          {"inner_concept", name_of(request.inner_concept)},
          {"user_note", request.user_note},
          {"seed", request.seed}};
}

CoCreationRequest request_from_json(const Json& j, std::initializer_list<std::string_view> extra_keys) {
  ObjectReader r(j, "request");
  CoCreationRequest req;
  req.costume_id = r.string("costume_id");
  req.context_theme = parse_theme(r.string("context_theme"));
  req.inner_concept = parse_concept(r.string("inner_concept"));
  req.user_note = r.optional_string("user_note").value_or("");
  req.seed = r.unsigned_number("seed");
  for (auto key : extra_keys) r.allow(key);
  r.finish();
  return req;
}

Json to_json(const NarrativeArtifact& artifact) {
  Json out = {{"request", to_json(artifact.request)},
              {"story", artifact.story},
              {"image_prompt", artifact.image_prompt},
              {"provider_id", artifact.provider_id},
              {"created_at", artifact.created_at}};
  if (artifact.image_ref) out["image_ref"] = *artifact.image_ref;
  return out;
}

NarrativeArtifact artifact_from_json(const Json& j) {
  ObjectReader r(j, "artifact");
  NarrativeArtifact a;
  a.request = request_from_json(r.required("request"));
  a.story = r.string("story");
  a.image_prompt = r.string("image_prompt");
  a.image_ref = r.optional_string("image_ref");
  a.provider_id = r.string("provider_id");
  a.created_at = r.string("created_at");
  r.finish();
  return a;
}

Json to_json(const ScaffoldReport& report) {
  return {{"passed", report.passed()}, {"missing", report.missing}};
}

Json to_json(const AssembledPrompt& prompt) {
  return {{"story_prompt", prompt.story_prompt},
          {"image_prompt", prompt.image_prompt},
          {"provenance", prompt.provenance}};
}

PromptTemplate template_from_json(const Json& j) {
  ObjectReader r(j, "template");
  PromptTemplate t;
  t.name = r.string("name");
  t.story_body = r.string("story_body");
  t.image_body = r.string("image_body");
  r.finish();
  return t;
}

Json to_json(const BrowseResult& result) {
  return {{"total", result.total}, {"ids", result.ids}};
}

Json to_json(const SearchResult& result) {
  Json hits = Json::array();
  for (const auto& h : result.hits) hits.push_back({{"costume_id", h.costume_id}, {"score", h.score}});
  return {{"total", result.total}, {"hits", hits}};
}

Json to_json(const std::vector<RelatedGroup>& groups) {
  Json out = Json::array();
  for (const auto& g : groups) out.push_back({{"tag", g.tag.to_string()}, {"ids", g.ids}});
  return out;
}

Json vocabulary_document() {
  Json inner = Json::array();
  for (auto c : all_values<InnerConcept>()) {
    const auto& info = concept_info(c);
    inner.push_back({{"name", name_of(c)},
                     {"display", display_name(c)},
                     {"level", name_of(info.level)},
                     {"expression_example", info.expression_example},
                     {"connotation", info.connotation}});
  }
  Json themes = Json::array();
  for (auto t : {Theme::kReligious, Theme::kFestive, Theme::kArtistic}) {
    themes.push_back({{"name", name_of(t)}, {"dimension", name_of(theme_dimension(t))}});
  }
  return {{"format", "gene-atlas/1"},
          {"pattern", vocabulary_entries<PatternClass>()},
          {"color", vocabulary_entries<ColorClass>()},
          {"material", vocabulary_entries<MaterialClass>()},
          {"form", vocabulary_entries<FormClass>()},
          {"middle", vocabulary_entries<MiddleDimension>()},
          {"inner_levels", vocabulary_entries<InnerLevel>()},
          {"inner", inner},
          {"themes", themes},
          {"perceptual_rule",
           {{"min_saturation", kPerceptualRule.min_saturation},
            {"min_value", kPerceptualRule.min_value},
            {"warm_hue_below", kPerceptualRule.warm_hue_below},
            {"warm_hue_from", kPerceptualRule.warm_hue_from}}}};
}

}  // namespace gene_atlas
