#include "gene_atlas/narrative.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <ctime>
#include <set>

#include "gene_atlas/default_template.hpp"
#include "gene_atlas/error.hpp"
#include "gene_atlas/json_codec.hpp"
#include "gene_atlas/random.hpp"
#include "gene_atlas/text.hpp"

namespace gene_atlas {
namespace {

constexpr std::array<std::string_view, 3> kThemeNames = {"Religious", "Festive", "Artistic"};

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

// Substituted values never introduce new placeholders.
std::string defuse_braces(std::string value) {
  while (value.find("{{") != std::string::npos || value.find("}}") != std::string::npos) {
    replace_all(value, "{{", "{");
    replace_all(value, "}}", "}");
  }
  return value;
}

std::vector<std::string> placeholders_in(const std::string& body) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = body.find("{{", pos)) != std::string::npos) {
    const auto close = body.find("}}", pos + 2);
    if (close == std::string::npos) {
      throw Error(ErrorCode::kInvalidTemplate, "unterminated placeholder in template");
    }
    out.push_back(body.substr(pos + 2, close - pos - 2));
    pos = close + 2;
  }
  return out;
}

std::string substitute(const std::string& body, const std::map<std::string, std::string>& values,
                       std::set<std::string>& used) {
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    const auto open = body.find("{{", pos);
    if (open == std::string::npos) break;
    const auto close = body.find("}}", open + 2);
    if (close == std::string::npos) {
      throw Error(ErrorCode::kInvalidTemplate, "unterminated placeholder in template");
    }
    const auto name = body.substr(open + 2, close - open - 2);
    const auto it = values.find(name);
    if (it == values.end()) {
      throw Error(ErrorCode::kUnresolvedPlaceholder, "template references unknown field {{" + name + "}}");
    }
    out.append(body, pos, open - pos);
    out += it->second;
    used.insert(name);
    pos = close + 2;
  }
  out.append(body, pos, std::string::npos);
  return out;
}

// Mock story skeleton bank: eight sentence slots, eight variants each.
// Slots 0 and 7 carry {title}, slot 3 the narrative {excerpt}, slot 5 the
// {concept}; the others are filler.
using Slot = std::array<std::string_view, 8>;
constexpr std::array<Slot, 8> kSkeletons = {{
    {"Long ago, in a village of the {group} people, an elder unfolded the {title} before the gathered families.",
     "The {title} had passed through many hands among the {group} before it reached the young weaver.",
     "Every spring the {group} brought out the {title}, and every spring it told its story again.",
     "No one remembered who first stitched the {title}, but every {group} child knew its colours by heart.",
     "When the rains came late, the {group} elders sent for the {title}.",
     "A traveller once asked a {group} grandmother why she guarded the {title} so closely.",
     "The morning the {title} was finished, the whole {group} village came to see it.",
     "In the house by the river, a {group} family kept the {title} wrapped in cloth scented with herbs."},
    {"Its threads held the light of many seasons.",
     "The mountains stood quiet around the settlement.",
     "Smoke rose from the hearths as the evening meal was prepared.",
     "Children ran ahead along the terraced paths.",
     "The river carried the sound of drums down the valley.",
     "A cold wind moved through the pine forest.",
     "Lanterns were hung along the eaves of every house.",
     "The market square slowly filled with voices."},
    {"Each stitch had been counted twice by careful fingers.",
     "The dyes came from roots and leaves gathered at dawn.",
     "Patterns were learned by watching, never from books.",
     "The loom creaked through many long nights of work.",
     "Silver ornaments chimed softly with every movement.",
     "The embroidery repeated motifs older than anyone's memory.",
     "Mothers taught daughters the same knots their mothers had taught them.",
     "The cloth was pressed smooth with a heated river stone."},
    {"The elders explained it this way: \"{excerpt}\"",
     "It was written in the village record: \"{excerpt}\"",
     "Everyone present remembered the old saying: \"{excerpt}\"",
     "The storyteller began with what all of them knew: \"{excerpt}\"",
     "A song carried the memory: \"{excerpt}\"",
     "Her grandmother's words returned to her: \"{excerpt}\"",
     "The village chronicle put it plainly: \"{excerpt}\"",
     "Before the ceremony, the elder reminded them: \"{excerpt}\""},
    {"For a while no one spoke.",
     "The fire crackled and the drums fell silent.",
     "Someone began to hum a melody from childhood.",
     "Outside, the first stars appeared over the ridge.",
     "The weaver smoothed the fabric with both hands.",
     "A bird called from the bamboo grove.",
     "The young ones leaned closer to listen.",
     "Rain tapped gently on the tiled roof."},
    {"In that moment they understood the garment as a lesson in {concept}.",
     "What the cloth taught, above all, was {concept}.",
     "The elders called this spirit {concept}, and it lived in every thread.",
     "Through the garment, the value of {concept} passed from one generation to the next.",
     "It was {concept}, they said, that held the community together.",
     "Those who wore it promised to honour {concept}.",
     "The patterns, the colours, the care: all of it spoke of {concept}.",
     "Her teacher had a single word for what she felt: {concept}."},
    {"The festival lasted until dawn.",
     "Years later, the story was still told at every gathering.",
     "The children repeated the tale to their own children.",
     "Visitors from distant valleys came to see it.",
     "The garment was folded away until the next ceremony.",
     "New hands began to learn the old stitches.",
     "The village grew, but the custom remained.",
     "Some details changed with each telling, but not the heart of it."},
    {"And so the {title} remains, a living thread between past and present.",
     "Today the {title} still carries that memory.",
     "Whoever looks closely at the {title} can still read its story.",
     "The {title} endures, and with it the voices of those who made it.",
     "That is why the {title} is never simply clothing.",
     "Even now, the {title} is worn with quiet pride.",
     "The {title} waits for the next hands that will carry it forward.",
     "In every fold of the {title}, the story continues."},
}};

std::string anchor(const std::map<std::string, std::string>& anchors, const std::string& key,
                   std::string_view fallback) {
  const auto it = anchors.find(key);
  return it != anchors.end() ? it->second : std::string(fallback);
}

// Single left-to-right pass so anchor text is never rescanned for slots.
std::string fill_skeleton(std::string_view skeleton, const std::map<std::string, std::string>& slots) {
  std::string out;
  std::size_t pos = 0;
  while (pos < skeleton.size()) {
    const auto open = skeleton.find('{', pos);
    if (open == std::string_view::npos) break;
    const auto close = skeleton.find('}', open);
    out.append(skeleton.substr(pos, open - pos));
    out += slots.at(std::string(skeleton.substr(open + 1, close - open - 1)));
    pos = close + 1;
  }
  out.append(skeleton.substr(std::min(pos, skeleton.size())));
  return out;
}

}  // namespace

std::string_view name_of(Theme theme) { return kThemeNames[static_cast<std::size_t>(theme)]; }

Theme parse_theme(std::string_view text) {
  const auto key = lower_ascii(text);
  for (std::size_t i = 0; i < kThemeNames.size(); ++i) {
    if (lower_ascii(kThemeNames[i]) == key) return static_cast<Theme>(i);
  }
  throw Error(ErrorCode::kUnknownTheme,
              "unknown theme '" + std::string(text) + "' (expected Religious, Festive or Artistic)");
}

MiddleDimension theme_dimension(Theme theme) {
  switch (theme) {
    case Theme::kReligious: return MiddleDimension::kReligiousBeliefs;
    case Theme::kFestive: return MiddleDimension::kFestiveCeremonies;
    case Theme::kArtistic: return MiddleDimension::kArtsEntertainment;
  }
  return MiddleDimension::kFestiveCeremonies;
}

std::vector<Theme> available_themes(const CostumeRecord& record) {
  std::vector<Theme> out;
  for (auto theme : {Theme::kReligious, Theme::kFestive, Theme::kArtistic}) {
    if (find_middle(record, theme_dimension(theme))) out.push_back(theme);
  }
  return out;
}

void validate_request(const CoCreationRequest& request) {
  if (request.costume_id.empty()) {
    throw Error(ErrorCode::kValidationFailed, "costume_id is empty");
  }
  if (text::codepoint_count(request.user_note) > kMaxUserNoteLength) {
    throw Error(ErrorCode::kValidationFailed, "user_note exceeds 500 characters");
  }
}

const std::vector<std::string>& required_placeholders() {
  static const std::vector<std::string> names = {
      "title", "ethnic_group", "surface_summary", "middle_narrative",
      "inner_concept", "inner_connotation", "user_note"};
  return names;
}

const std::vector<std::string>& known_placeholders() {
  static const std::vector<std::string> names = {
      "title", "ethnic_group", "region", "surface_summary", "middle_dimension",
      "middle_narrative", "inner_concept", "inner_level", "inner_expression",
      "inner_connotation", "user_note", "theme"};
  return names;
}

void validate_template(const PromptTemplate& prompt_template) {
  const auto story = placeholders_in(prompt_template.story_body);
  placeholders_in(prompt_template.image_body);
  for (const auto& required : required_placeholders()) {
    if (std::find(story.begin(), story.end(), required) == story.end()) {
      throw Error(ErrorCode::kInvalidTemplate,
                  "template '" + prompt_template.name + "' story body lacks {{" + required + "}}");
    }
  }
}

const PromptTemplate& default_template() {
  static const PromptTemplate instance = [] {
    auto t = template_from_json(nlohmann::json::parse(generated::kDefaultTemplateJson));
    validate_template(t);
    return t;
  }();
  return instance;
}

std::optional<GeneLayer> source_layer(std::string_view path) {
  if (path.starts_with("record.surface")) return GeneLayer::kSurface;
  if (path.starts_with("record.middle")) return GeneLayer::kMiddle;
  if (path.starts_with("inner_concepts.") || path == "request.inner_concept") {
    return GeneLayer::kInner;
  }
  return std::nullopt;
}

std::string surface_summary(const SurfaceGenes& surface) {
  std::vector<std::string> patterns;
  for (auto p : all_values<PatternClass>()) {
    for (const auto& gene : surface.patterns) {
      if (gene.pattern_class != name_of(p)) continue;
      std::string item(display_name(p));
      if (!gene.motifs.empty()) item += " (" + join(gene.motifs, ", ") + ")";
      patterns.push_back(std::move(item));
    }
  }
  std::vector<std::string> materials;
  for (auto m : all_values<MaterialClass>()) {
    for (const auto& gene : surface.materials) {
      if (gene.material != name_of(m)) continue;
      std::string item(display_name(m));
      if (gene.label) item += " (" + *gene.label + ")";
      materials.push_back(std::move(item));
    }
  }
  std::vector<std::string> forms;
  for (auto f : all_values<FormClass>()) {
    if (std::find(surface.forms.begin(), surface.forms.end(), name_of(f)) != surface.forms.end()) {
      forms.emplace_back(display_name(f));
    }
  }
  const auto list = [](const std::vector<std::string>& items) {
    return items.empty() ? std::string("none") : join(items, ", ");
  };
  std::string color = "unknown";
  if (surface.color_profile) {
    color = surface.color_profile->dominant_hex + " (" +
            std::string(display_name(surface.color_profile->perceptual_class)) + ")";
  }
  return "patterns: " + list(patterns) + "; materials: " + list(materials) +
         "; forms: " + list(forms) + "; dominant color: " + color;
}

AssembledPrompt assemble_prompt(const CostumeRecord& record, const CoCreationRequest& request,
                                const PromptTemplate& prompt_template) {
  if (record.id != request.costume_id) {
    throw Error(ErrorCode::kCostumeMismatch,
                "request is for '" + request.costume_id + "' but record is '" + record.id + "'");
  }
  validate_request(request);
  validate_template(prompt_template);

  const auto dimension = theme_dimension(request.context_theme);
  const MiddleContext* context = find_middle(record, dimension);
  if (!context) {
    throw Error(ErrorCode::kThemeUnavailable,
                "costume '" + record.id + "' has no " + std::string(display_name(dimension)) +
                    " context for the " + std::string(name_of(request.context_theme)) + " theme");
  }
  const auto& info = concept_info(request.inner_concept);
  const std::string dim_name(name_of(dimension));
  const std::string concept_name(name_of(request.inner_concept));

  struct Source {
    std::string value;
    std::string path;
  };
  const std::map<std::string, Source> sources = {
      {"title", {record.title, "record.title"}},
      {"ethnic_group", {record.ethnic_group, "record.ethnic_group"}},
      {"region", {record.region.value_or(""), "record.region"}},
      {"surface_summary", {surface_summary(record.surface), "record.surface"}},
      {"middle_dimension", {std::string(display_name(dimension)), "record.middle[" + dim_name + "].dimension"}},
      {"middle_narrative", {context->narrative, "record.middle[" + dim_name + "].narrative"}},
      {"inner_concept", {std::string(display_name(request.inner_concept)), "request.inner_concept"}},
      {"inner_level", {std::string(display_name(info.level)), "inner_concepts." + concept_name + ".level"}},
      {"inner_expression", {std::string(info.expression_example), "inner_concepts." + concept_name + ".expression_example"}},
      {"inner_connotation", {std::string(info.connotation), "inner_concepts." + concept_name + ".connotation"}},
      {"user_note", {request.user_note, "request.user_note"}},
      {"theme", {std::string(name_of(request.context_theme)), "request.context_theme"}},
  };
  std::map<std::string, std::string> values;
  for (const auto& [name, source] : sources) values[name] = defuse_braces(source.value);

  AssembledPrompt out;
  std::set<std::string> used;
  out.story_prompt = substitute(prompt_template.story_body, values, used);
  out.image_prompt = substitute(prompt_template.image_body, values, used);
  for (const auto& name : used) {
    out.provenance[name] = sources.at(name).path;
    out.bindings[name] = values.at(name);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string narrative_excerpt(std::string_view narrative) {
  const std::string normalized = text::collapse_whitespace(narrative);
  std::size_t end = std::string::npos;
  for (std::string_view stop : {". ", "! ", "? ", "\xE3\x80\x82"}) {  // U+3002
    const auto pos = normalized.find(stop);
    if (pos != std::string::npos) end = std::min(end, pos + (stop.size() == 3 ? 3 : 1));
  }
  std::string first = end == std::string::npos ? normalized : normalized.substr(0, end);
  if (text::codepoint_count(first) < kMinExcerptLength) return normalized;
  return first;
}

ProviderResponse mock_provider(const ProviderRequest& request) {
  const std::map<std::string, std::string> slots = {
      {"title", anchor(request.anchors, "title", "the garment")},
      {"group", anchor(request.anchors, "ethnic_group", "community")},
      {"concept", anchor(request.anchors, "inner_concept", "tradition")},
      {"excerpt", narrative_excerpt(anchor(request.anchors, "middle_narrative", "the old ways endure"))},
  };
  SplitMix64 rng(request.seed);
  std::string story;
  for (const auto& slot : kSkeletons) {
    if (!story.empty()) story += ' ';
    story += fill_skeleton(slot[rng.below(slot.size())], slots);
  }

  static constexpr char kHex[] = "0123456789abcdef";
  const auto h = stable_hash(request.image_prompt.data(), request.image_prompt.size());
  std::string descriptor = "mock-image:";
  for (int shift = 60; shift >= 0; shift -= 4) descriptor.push_back(kHex[(h >> shift) & 0xF]);

  ProviderResponse response;
  response.story = std::move(story);
  response.image_descriptor = std::move(descriptor);
  return response;
}

ProviderResponse MockProvider::complete(const ProviderRequest& request) {
  return mock_provider(request);
}

std::string utc_now_iso8601() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

NarrativeArtifact generate(GenerationProvider& provider, const AssembledPrompt& prompt,
                           const CoCreationRequest& request, const GenerateOptions& options) {
  ProviderRequest call;
  call.story_prompt = prompt.story_prompt;
  call.image_prompt = prompt.image_prompt;
  call.seed = request.seed;
  call.max_length = options.max_length;
  call.anchors = prompt.bindings;

  std::optional<ProviderResponse> response;
  std::string last_error;
  const std::uint32_t attempts = options.retries + 1;
  for (std::uint32_t attempt = 0; attempt < attempts && !response; ++attempt) {
    try {
      response = provider.complete(call);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kProviderTimeout) throw;
      last_error = e.what();
    }
  }
  if (!response) {
    throw Error(ErrorCode::kProviderTimeout,
                "provider '" + provider.id() + "' timed out after " + std::to_string(attempts) +
                    " attempts: " + last_error);
  }
  if (response->refusal_reason) {
    const auto& reason = *response->refusal_reason;
    throw Error(ErrorCode::kProviderRefusal,
                "provider refused: " + (reason.empty() ? std::string("no reason given") : reason));
  }
  if (response->story.empty()) {
    throw Error(ErrorCode::kProviderRefusal, "provider returned an empty story");
  }

  NarrativeArtifact artifact;
  artifact.request = request;
  artifact.story = std::move(response->story);
  artifact.image_prompt = prompt.image_prompt;
  artifact.image_ref = std::move(response->image_descriptor);
  artifact.provider_id = provider.id();
  artifact.created_at = utc_now_iso8601();
  return artifact;
}

void ProviderRegistry::add(std::shared_ptr<GenerationProvider> provider) {
  std::lock_guard lock(mutex_);
  auto id = provider->id();
  providers_[std::move(id)] = std::move(provider);
}

bool ProviderRegistry::contains(const std::string& id) const {
  std::lock_guard lock(mutex_);
  return providers_.contains(id);
}

std::vector<std::string> ProviderRegistry::ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, provider] : providers_) out.push_back(id);
  return out;
}

NarrativeArtifact ProviderRegistry::generate(const std::string& provider_id,
                                             const AssembledPrompt& prompt,
                                             const CoCreationRequest& request,
                                             const GenerateOptions& options) {
  std::shared_ptr<GenerationProvider> provider;
  {
    std::lock_guard lock(mutex_);
    const auto it = providers_.find(provider_id);
    if (it == providers_.end()) {
      throw Error(ErrorCode::kUnknownProvider, "no provider registered as '" + provider_id + "'");
    }
    provider = it->second;
  }
  in_flight_.acquire();
  struct Release {
    std::counting_semaphore<kMaxInFlight>& sem;
    ~Release() { sem.release(); }
  } release{in_flight_};
  return gene_atlas::generate(*provider, prompt, request, options);
}

ScaffoldReport validate_scaffold(const NarrativeArtifact& artifact, const AssembledPrompt& prompt) {
  const auto binding = [&](const std::string& key) {
    const auto it = prompt.bindings.find(key);
    return it == prompt.bindings.end() ? std::string() : it->second;
  };
  ScaffoldReport report;
  const auto title = binding("title");
  if (title.empty() || !text::contains_folded(artifact.story, title)) {
    report.missing.emplace_back("title");
  }
  const auto concept_name = binding("inner_concept");
  if (concept_name.empty() || !text::contains_folded(artifact.story, concept_name)) {
    report.missing.emplace_back("inner_concept");
  }
  const auto narrative = binding("middle_narrative");
  if (narrative.empty() || !text::contains_excerpt(artifact.story, narrative, kMinExcerptLength)) {
    report.missing.emplace_back("middle_narrative");
  }
  return report;
}

}  // namespace gene_atlas
