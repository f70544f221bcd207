#pragma once

// JSON encoding of the domain types for the corpus interchange format, the
// CLI and the HTTP service. Decoders are strict: wrong types raise
// Error{kMalformedBody} and unexpected keys raise Error{kUnknownField}.

#include "json.hpp"

#include "gene_atlas/annotation.hpp"
#include "gene_atlas/exploration.hpp"
#include "gene_atlas/narrative.hpp"
#include "gene_atlas/schema.hpp"

namespace gene_atlas {

using Json = nlohmann::json;

Json to_json(const ColorProfile& profile);
ColorProfile color_profile_from_json(const Json& j);

Json to_json(const CostumeRecord& record);
CostumeRecord record_from_json(const Json& j);

Json to_json(const AnnotationDraft& draft);
AnnotationDraft draft_from_json(const Json& j);

Json to_json(const MergedAnnotation& merged);
Json to_json(const ReconciliationReport& report);
Json to_json(const ValidationResult& result);

// {"surface.materials.Metal": "B", ...}
Decisions decisions_from_json(const Json& j);

IngestMeta meta_from_json(const Json& j);

Json to_json(const CoCreationRequest& request);
// Keys listed in `extra_keys` are tolerated (the caller reads them).
CoCreationRequest request_from_json(const Json& j, std::initializer_list<std::string_view> extra_keys = {});

Json to_json(const NarrativeArtifact& artifact);
NarrativeArtifact artifact_from_json(const Json& j);

Json to_json(const ScaffoldReport& report);
Json to_json(const AssembledPrompt& prompt);

PromptTemplate template_from_json(const Json& j);

Json to_json(const BrowseResult& result);
Json to_json(const SearchResult& result);
Json to_json(const std::vector<RelatedGroup>& groups);

// Every closed vocabulary, for clients that render the same lists. Keys are
// sorted; serialized as UTF-8.
Json vocabulary_document();

// Parses one JSON document; Error{kMalformedBody} on syntax errors.
Json parse_json(std::string_view text);

}  // namespace gene_atlas
