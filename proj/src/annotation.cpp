#include "gene_atlas/annotation.hpp"

#include <algorithm>

#include "gene_atlas/error.hpp"
#include "gene_atlas/text.hpp"

namespace gene_atlas {
namespace {

constexpr std::string_view kNone = "none";

template <typename E>
std::string field_path(std::string_view prefix, E value) {
  return std::string(prefix) + "." + std::string(name_of(value));
}

template <typename E>
std::string middle_path(E dimension, std::string_view leaf) {
  return "middle." + std::string(name_of(dimension)) + "." + std::string(leaf);
}

const PatternGene* find_pattern(const SurfaceGenes& s, PatternClass p) {
  for (const auto& g : s.patterns) {
    if (g.pattern_class == name_of(p)) return &g;
  }
  return nullptr;
}

const MaterialGene* find_material(const SurfaceGenes& s, MaterialClass m) {
  for (const auto& g : s.materials) {
    if (g.material == name_of(m)) return &g;
  }
  return nullptr;
}

bool has_form(const SurfaceGenes& s, FormClass f) {
  return std::find(s.forms.begin(), s.forms.end(), name_of(f)) != s.forms.end();
}

const MiddleContext* find_context(const std::vector<MiddleContext>& middle, MiddleDimension d) {
  for (const auto& c : middle) {
    if (c.dimension == name_of(d)) return &c;
  }
  return nullptr;
}

bool has_concept(const std::vector<std::string>& inner, InnerConcept c) {
  return std::find(inner.begin(), inner.end(), name_of(c)) != inner.end();
}

std::string flag(bool v) { return v ? "true" : "false"; }

void require_valid(const AnnotationDraft& draft, std::string_view label) {
  const auto result = validate_draft(draft);
  if (!result.ok()) {
    throw Error(ErrorCode::kValidationFailed,
                "draft " + std::string(label) + " is invalid: " + describe(result.violations));
  }
}

// The drafts' values for every compared field, in comparison order.
std::vector<std::pair<std::string, std::string>> field_values(const AnnotationDraft& d,
                                                              const AnnotationDraft& other) {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto p : all_values<PatternClass>()) {
    out.emplace_back(field_path("surface.patterns", p), flag(find_pattern(d.surface, p)));
  }
  for (auto m : all_values<MaterialClass>()) {
    out.emplace_back(field_path("surface.materials", m), flag(find_material(d.surface, m)));
  }
  for (auto f : all_values<FormClass>()) {
    out.emplace_back(field_path("surface.forms", f), flag(has_form(d.surface, f)));
  }
  for (auto dim : all_values<MiddleDimension>()) {
    out.emplace_back(middle_path(dim, "present"),
                     find_context(d.middle, dim) ? "present" : "absent");
  }
  // A narrative is only compared when both coders recorded the dimension;
  // otherwise the presence field already carries the disagreement.
  for (auto dim : all_values<MiddleDimension>()) {
    const auto* mine = find_context(d.middle, dim);
    const auto* theirs = find_context(other.middle, dim);
    out.emplace_back(middle_path(dim, "narrative"),
                     mine && theirs ? text::normalize_narrative(mine->narrative) : "");
  }
  for (auto c : all_values<InnerConcept>()) {
    out.emplace_back(field_path("inner", c), flag(has_concept(d.inner, c)));
  }
  out.emplace_back("manual_color_class",
                   d.manual_color_class ? *d.manual_color_class : std::string(kNone));
  return out;
}

}  // namespace

std::string describe(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.path + ": " + v.message;
  }
  return out;
}

ValidationResult validate_draft(const AnnotationDraft& draft) {
  ValidationResult result;
  auto& out = result.violations;
  if (draft.coder_id.empty()) out.push_back({"coder_id", "coder id is empty"});
  if (draft.costume_id.empty()) out.push_back({"costume_id", "costume id is empty"});
  validate_surface_terms(draft.surface, out);
  if (draft.surface.color_profile) {
    out.push_back({"surface.color_profile", "drafts do not carry a color profile"});
  }
  validate_middle(draft.middle, out);
  validate_inner(draft.inner, out);
  if (draft.manual_color_class && !parse_term<ColorClass>(*draft.manual_color_class)) {
    out.push_back({"manual_color_class", "unknown color class '" + *draft.manual_color_class + "'"});
  }
  return result;
}

const std::vector<std::string>& comparison_fields() {
  static const std::vector<std::string> fields = [] {
    AnnotationDraft empty;
    std::vector<std::string> out;
    for (auto& [path, value] : field_values(empty, empty)) out.push_back(path);
    return out;
  }();
  return fields;
}

ReconciliationReport compare_drafts(const AnnotationDraft& a, const AnnotationDraft& b) {
  if (a.costume_id != b.costume_id) {
    throw Error(ErrorCode::kCostumeMismatch,
                "drafts annotate different costumes: '" + a.costume_id + "' vs '" +
                    b.costume_id + "'");
  }
  require_valid(a, "A");
  require_valid(b, "B");

  const auto va = field_values(a, b);
  const auto vb = field_values(b, a);
  ReconciliationReport report;
  report.costume_id = a.costume_id;
  report.total_fields = va.size();
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (va[i].second != vb[i].second) {
      report.conflicts.push_back({va[i].first, va[i].second, vb[i].second});
    }
  }
  report.agreement_rate = static_cast<double>(report.total_fields - report.conflicts.size()) /
                          static_cast<double>(report.total_fields);
  return report;
}

MergedAnnotation project(const AnnotationDraft& draft) {
  MergedAnnotation out;
  for (auto p : all_values<PatternClass>()) {
    if (const auto* g = find_pattern(draft.surface, p)) out.surface.patterns.push_back(*g);
  }
  for (auto m : all_values<MaterialClass>()) {
    if (const auto* g = find_material(draft.surface, m)) out.surface.materials.push_back(*g);
  }
  for (auto f : all_values<FormClass>()) {
    if (has_form(draft.surface, f)) out.surface.forms.emplace_back(name_of(f));
  }
  for (auto d : all_values<MiddleDimension>()) {
    if (const auto* c = find_context(draft.middle, d)) out.middle.push_back(*c);
  }
  for (auto c : all_values<InnerConcept>()) {
    if (has_concept(draft.inner, c)) out.inner.emplace_back(name_of(c));
  }
  out.manual_color_class = draft.manual_color_class;
  return out;
}

MergedAnnotation resolve(const ReconciliationReport& report, const AnnotationDraft& a,
                         const AnnotationDraft& b, const Decisions& decisions) {
  const auto fresh = compare_drafts(a, b);
  if (fresh.costume_id != report.costume_id || fresh.total_fields != report.total_fields ||
      fresh.conflicts != report.conflicts) {
    throw Error(ErrorCode::kStaleReport, "report does not match the supplied drafts");
  }

  std::map<std::string, Side> sides;
  std::string missing;
  for (const auto& conflict : report.conflicts) {
    const auto it = decisions.find(conflict.field_path);
    if (it == decisions.end()) {
      if (!missing.empty()) missing += ", ";
      missing += conflict.field_path;
    } else {
      sides[conflict.field_path] = it->second;
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kMissingDecision, "no decision for: " + missing);
  }
  for (const auto& [path, side] : decisions) {
    if (!sides.contains(path)) {
      throw Error(ErrorCode::kInvalidDecision, "decision for non-conflicting field: " + path);
    }
  }

  const auto pick = [&](const std::string& path) -> const AnnotationDraft& {
    const auto it = sides.find(path);
    return it != sides.end() && it->second == Side::kB ? b : a;
  };

  MergedAnnotation out;
  for (auto p : all_values<PatternClass>()) {
    if (const auto* g = find_pattern(pick(field_path("surface.patterns", p)).surface, p)) {
      out.surface.patterns.push_back(*g);
    }
  }
  for (auto m : all_values<MaterialClass>()) {
    if (const auto* g = find_material(pick(field_path("surface.materials", m)).surface, m)) {
      out.surface.materials.push_back(*g);
    }
  }
  for (auto f : all_values<FormClass>()) {
    if (has_form(pick(field_path("surface.forms", f)).surface, f)) {
      out.surface.forms.emplace_back(name_of(f));
    }
  }
  for (auto d : all_values<MiddleDimension>()) {
    const auto& presence_side = pick(middle_path(d, "present"));
    const auto* context = find_context(presence_side.middle, d);
    if (!context) continue;
    MiddleContext merged = *context;
    if (find_context(a.middle, d) && find_context(b.middle, d)) {
      merged = *find_context(pick(middle_path(d, "narrative")).middle, d);
    }
    out.middle.push_back(std::move(merged));
  }
  for (auto c : all_values<InnerConcept>()) {
    if (has_concept(pick(field_path("inner", c)).inner, c)) out.inner.emplace_back(name_of(c));
  }
  out.manual_color_class = pick("manual_color_class").manual_color_class;

  std::vector<Violation> violations;
  validate_surface_terms(out.surface, violations);
  validate_middle(out.middle, violations);
  validate_inner(out.inner, violations);
  if (!violations.empty()) {
    throw Error(ErrorCode::kValidationFailed, "merged annotation is invalid: " + describe(violations));
  }
  return out;
}

CostumeRecord ingest_record(const std::string& source_text, const IngestMeta& meta,
                            std::span<const Image> images, const MergedAnnotation& merged,
                            const KMeansParams& color_params,
                            const std::set<std::string>& existing_ids) {
  if (existing_ids.contains(meta.id)) {
    throw Error(ErrorCode::kDuplicateId, "costume id already in corpus: " + meta.id);
  }
  CostumeRecord record;
  record.id = meta.id;
  record.title = meta.title;
  record.ethnic_group = meta.ethnic_group;
  record.region = meta.region;
  record.image_refs = meta.image_refs;
  record.surface = merged.surface;
  record.middle = merged.middle;
  record.inner = merged.inner;
  record.source_text = source_text;

  if (!images.empty()) {
    ColorProfile profile = extract_profile(images.front(), color_params);
    if (merged.manual_color_class) {
      const auto manual = parse_term<ColorClass>(*merged.manual_color_class);
      if (!manual) {
        throw Error(ErrorCode::kValidationFailed,
                    "manual_color_class: unknown color class '" + *merged.manual_color_class + "'");
      }
      profile.perceptual_class = *manual;
    }
    record.surface.color_profile = std::move(profile);
  }

  const auto result = validate_record(record);
  if (!result.ok()) {
    throw Error(ErrorCode::kValidationFailed, "record is invalid: " + describe(result.violations));
  }
  return record;
}

}  // namespace gene_atlas
