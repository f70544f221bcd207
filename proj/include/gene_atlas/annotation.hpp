#pragma once

// Double-coder annotation: two independent drafts are compared over a fixed,
// schema-derived set of boolean/text fields; a third coder settles each
// conflict through an explicit decisions map; the merge is then ingested as a
// validated CostumeRecord.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gene_atlas/color.hpp"
#include "gene_atlas/schema.hpp"

namespace gene_atlas {

struct AnnotationDraft {
  std::string coder_id;
  std::string costume_id;
  SurfaceGenes surface;  // color_profile must be absent
  std::vector<MiddleContext> middle;
  std::vector<std::string> inner;
  std::optional<std::string> manual_color_class;

  friend bool operator==(const AnnotationDraft&, const AnnotationDraft&) = default;
};

// Full vocabulary validation of a draft, paths as in validate_record().
ValidationResult validate_draft(const AnnotationDraft& draft);

struct Conflict {
  std::string field_path;
  std::string value_a;
  std::string value_b;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

struct ReconciliationReport {
  std::string costume_id;
  double agreement_rate = 1.0;
  std::vector<Conflict> conflicts;
  std::size_t total_fields = 0;

  friend bool operator==(const ReconciliationReport&, const ReconciliationReport&) = default;
};

// Every compared field path, in comparison order:
//   surface.patterns.<Pattern>, surface.materials.<Material>,
//   surface.forms.<Form>, middle.<Dimension>.present,
//   middle.<Dimension>.narrative, inner.<Concept>, manual_color_class.
const std::vector<std::string>& comparison_fields();

// Throws Error{kCostumeMismatch} if the drafts annotate different costumes and
// Error{kValidationFailed} if either draft is invalid.
ReconciliationReport compare_drafts(const AnnotationDraft& a, const AnnotationDraft& b);

enum class Side { kA, kB };

using Decisions = std::map<std::string, Side>;

struct MergedAnnotation {
  SurfaceGenes surface;
  std::vector<MiddleContext> middle;
  std::vector<std::string> inner;
  std::optional<std::string> manual_color_class;

  friend bool operator==(const MergedAnnotation&, const MergedAnnotation&) = default;
};

// A draft's annotation in canonical (vocabulary declaration) order.
MergedAnnotation project(const AnnotationDraft& draft);

// Throws Error{kStaleReport} if `report` is not compare_drafts(a, b),
// Error{kMissingDecision} listing undecided conflict paths,
// Error{kInvalidDecision} for decisions on paths that are not in conflict, and
// Error{kValidationFailed} if the merged annotation is not a valid record body.
MergedAnnotation resolve(const ReconciliationReport& report, const AnnotationDraft& a,
                         const AnnotationDraft& b, const Decisions& decisions);

struct IngestMeta {
  std::string id;
  std::string title;
  std::string ethnic_group;
  std::optional<std::string> region;
  std::vector<std::string> image_refs;
};

// Builds and validates a record. The first image (if any) gets a color
// profile; a manual color class overrides its perceptual class. Throws
// Error{kDuplicateId} when `existing_ids` contains meta.id, and
// Error{kValidationFailed} with the violation list otherwise. Without an
// image there is no color profile, so a manual class has nothing to override.
CostumeRecord ingest_record(const std::string& source_text, const IngestMeta& meta,
                            std::span<const Image> images, const MergedAnnotation& merged,
                            const KMeansParams& color_params,
                            const std::set<std::string>& existing_ids);

// "path: message; path: message" for error reporting.
std::string describe(const std::vector<Violation>& violations);

}  // namespace gene_atlas
