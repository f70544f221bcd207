#pragma once

// Scaffolded co-creation: prompts are assembled deterministically from the
// three gene layers and a user's selections, sent to a generation provider,
// and the returned story is checked lexically for the cultural anchors.

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "gene_atlas/schema.hpp"

namespace gene_atlas {

enum class Theme : std::uint8_t { kReligious, kFestive, kArtistic };

std::string_view name_of(Theme theme);
// Case-insensitive; throws Error{kUnknownTheme}.
Theme parse_theme(std::string_view text);
MiddleDimension theme_dimension(Theme theme);
// Themes whose mapped middle dimension the record carries.
std::vector<Theme> available_themes(const CostumeRecord& record);

inline constexpr std::size_t kMaxUserNoteLength = 500;  // codepoints

struct CoCreationRequest {
  std::string costume_id;
  Theme context_theme = Theme::kFestive;
  InnerConcept inner_concept = InnerConcept::kHarmony;
  std::string user_note;
  std::uint64_t seed = 0;

  friend bool operator==(const CoCreationRequest&, const CoCreationRequest&) = default;
};

// Throws Error{kValidationFailed} for an over-long note or empty costume id.
void validate_request(const CoCreationRequest& request);

struct PromptTemplate {
  std::string name;
  std::string story_body;
  std::string image_body;
};

// Placeholders every story body must contain.
const std::vector<std::string>& required_placeholders();
// Every placeholder the assembler can fill.
const std::vector<std::string>& known_placeholders();

// Throws Error{kInvalidTemplate} for a missing required placeholder or an
// unterminated "{{".
void validate_template(const PromptTemplate& prompt_template);

// The bundled template (data/default_template.json).
const PromptTemplate& default_template();

enum class GeneLayer : std::uint8_t { kSurface, kMiddle, kInner };

// Layer a provenance source path belongs to, if any.
std::optional<GeneLayer> source_layer(std::string_view source_path);

struct AssembledPrompt {
  std::string story_prompt;
  std::string image_prompt;
  std::map<std::string, std::string> provenance;  // placeholder -> source field path
  std::map<std::string, std::string> bindings;    // placeholder -> substituted text

  friend bool operator==(const AssembledPrompt&, const AssembledPrompt&) = default;
};

// "patterns: …; materials: …; forms: …; dominant color: <hex> (<class>)"
std::string surface_summary(const SurfaceGenes& surface);

// Throws Error{kCostumeMismatch}, Error{kThemeUnavailable},
// Error{kUnresolvedPlaceholder} or Error{kInvalidTemplate}.
AssembledPrompt assemble_prompt(const CostumeRecord& record, const CoCreationRequest& request,
                                const PromptTemplate& prompt_template = default_template());

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

struct ProviderRequest {
  std::string story_prompt;
  std::string image_prompt;
  std::uint64_t seed = 0;
  std::uint32_t max_length = 2000;
  // In-process only; never sent over the wire.
  std::map<std::string, std::string> anchors;
};

struct ProviderResponse {
  std::string story;
  std::optional<std::string> image_descriptor;
  std::optional<std::string> refusal_reason;
};

// Implementations throw Error{kProviderTimeout} when the backend cannot be
// reached in time; refusals come back in the response.
class GenerationProvider {
 public:
  virtual ~GenerationProvider() = default;
  virtual std::string id() const = 0;
  virtual ProviderResponse complete(const ProviderRequest& request) = 0;
};

// Deterministic offline provider: sentence skeletons picked by a splitmix64
// stream over the seed, with the title, concept and a narrative excerpt
// embedded verbatim.
class MockProvider final : public GenerationProvider {
 public:
  std::string id() const override { return "mock"; }
  ProviderResponse complete(const ProviderRequest& request) override;
};

ProviderResponse mock_provider(const ProviderRequest& request);

// First sentence of a narrative, or the whole text if that sentence is
// shorter than ten codepoints.
std::string narrative_excerpt(std::string_view narrative);

struct RemoteProviderConfig {
  std::string endpoint;  // e.g. "http://127.0.0.1:9000/v1/generate"
  std::string credential_env = "GENE_ATLAS_PROVIDER_TOKEN";
  std::chrono::milliseconds timeout{30'000};
};

// JSON over HTTP: POST {story_prompt, image_prompt, seed, max_length},
// response {story, image_descriptor?, refusal_reason?}. A bearer token is
// read from the configured environment variable when set.
class RemoteProvider final : public GenerationProvider {
 public:
  explicit RemoteProvider(RemoteProviderConfig config);
  std::string id() const override { return "remote"; }
  ProviderResponse complete(const ProviderRequest& request) override;

 private:
  RemoteProviderConfig config_;
};

struct NarrativeArtifact {
  CoCreationRequest request;
  std::string story;
  std::string image_prompt;
  std::optional<std::string> image_ref;
  std::string provider_id;
  std::string created_at;  // ISO-8601 UTC

  friend bool operator==(const NarrativeArtifact&, const NarrativeArtifact&) = default;
};

std::string utc_now_iso8601();

struct GenerateOptions {
  std::uint32_t retries = 2;
  std::uint32_t max_length = 2000;
};

// Timeouts are retried up to `options.retries` times, then reported as
// Error{kProviderTimeout}. A refusal is reported at once as
// Error{kProviderRefusal}.
NarrativeArtifact generate(GenerationProvider& provider, const AssembledPrompt& prompt,
                           const CoCreationRequest& request, const GenerateOptions& options = {});

// Named providers plus an in-flight limit on provider calls.
class ProviderRegistry {
 public:
  static constexpr std::ptrdiff_t kMaxInFlight = 4;

  void add(std::shared_ptr<GenerationProvider> provider);
  bool contains(const std::string& id) const;
  std::vector<std::string> ids() const;

  // Throws Error{kUnknownProvider}.
  NarrativeArtifact generate(const std::string& provider_id, const AssembledPrompt& prompt,
                             const CoCreationRequest& request,
                             const GenerateOptions& options = {});

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<GenerationProvider>> providers_;
  std::counting_semaphore<kMaxInFlight> in_flight_{kMaxInFlight};
};

struct ScaffoldReport {
  std::vector<std::string> missing;  // subset of {"title", "inner_concept", "middle_narrative"}

  bool passed() const { return missing.empty(); }

  friend bool operator==(const ScaffoldReport&, const ScaffoldReport&) = default;
};

inline constexpr std::size_t kMinExcerptLength = 10;

ScaffoldReport validate_scaffold(const NarrativeArtifact& artifact, const AssembledPrompt& prompt);

}  // namespace gene_atlas
