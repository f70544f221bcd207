// gene_atlas: operator CLI. Every invocation writes one JSON document to
// stdout. Exit 0 on success, 1 on operational errors ({code, message} on
// stdout), 2 on usage errors (one line on stderr).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gene_atlas/annotation.hpp"
#include "gene_atlas/api.hpp"
#include "gene_atlas/color.hpp"
#include "gene_atlas/corpus_gen.hpp"
#include "gene_atlas/error.hpp"
#include "gene_atlas/exploration.hpp"
#include "gene_atlas/image_io.hpp"
#include "gene_atlas/json_codec.hpp"
#include "gene_atlas/narrative.hpp"
#include "gene_atlas/store.hpp"

namespace ga = gene_atlas;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown after the report has been printed for an ingest that cannot finish.
struct ReportedFailure {
  ga::Json document;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ga::Error(ga::ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ga::Json read_json(const std::string& path) { return ga::parse_json(read_text(path)); }

std::vector<ga::CostumeRecord> records_of(const ga::Corpus& corpus) {
  std::vector<ga::CostumeRecord> out;
  out.reserve(corpus.records.size());
  for (const auto& [id, record] : corpus.records) out.push_back(record);
  return out;
}

template <typename Fn>
auto as_usage(Fn fn) {
  try {
    return fn();
  } catch (const ga::Error& e) {
    throw UsageError(e.what());
  }
}

struct IngestArgs {
  std::string data_dir, meta, text, draft_a, draft_b, decisions;
  std::vector<std::string> images;
  std::uint32_t k = 5;
  std::uint64_t seed = 0;
};

ga::Json run_ingest(const IngestArgs& args) {
  ga::Store store(args.data_dir, ga::AccessMode::kReadWrite);
  const auto meta = ga::meta_from_json(read_json(args.meta));
  const auto source = read_text(args.text);
  const auto a = ga::draft_from_json(read_json(args.draft_a));
  const auto b = ga::draft_from_json(read_json(args.draft_b));
  ga::Decisions decisions;
  if (!args.decisions.empty()) decisions = ga::decisions_from_json(read_json(args.decisions));
  std::vector<ga::Image> images;
  for (const auto& path : args.images) images.push_back(ga::decode_image(path));

  const auto report = ga::compare_drafts(a, b);
  ga::MergedAnnotation merged;
  try {
    merged = ga::resolve(report, a, b, decisions);
  } catch (const ga::Error& e) {
    ga::Json doc = ga::error_body(e);
    doc["report"] = ga::to_json(report);
    throw ReportedFailure{std::move(doc)};
  }
  std::set<std::string> existing;
  for (const auto& [id, record] : store.corpus()->records) existing.insert(id);
  auto record = ga::ingest_record(source, meta, images, merged,
                                  ga::KMeansParams{.k = args.k, .seed = args.seed}, existing);
  store.add_record(record);
  return {{"report", ga::to_json(report)}, {"record", ga::to_json(record)},
          {"corpus_version", store.corpus_version()}};
}

struct GenerateArgs {
  std::string data_dir, costume, theme, concept_name, note, provider = "mock", endpoint, user;
  std::uint64_t seed = 0;
  bool save = false;
};

ga::Json run_generate(const GenerateArgs& args) {
  ga::CoCreationRequest request;
  request.costume_id = args.costume;
  request.context_theme = as_usage([&] { return ga::parse_theme(args.theme); });
  request.inner_concept = as_usage([&] {
    const auto c = ga::parse_term_loose<ga::InnerConcept>(args.concept_name);
    if (!c) throw ga::Error(ga::ErrorCode::kUnknownConcept, "unknown concept: " + args.concept_name);
    return *c;
  });
  request.user_note = args.note;
  request.seed = args.seed;
  if (args.provider == "remote" && args.endpoint.empty()) {
    throw UsageError("--provider remote needs --endpoint");
  }
  ga::validate_request(request);

  ga::Store store(args.data_dir, args.save ? ga::AccessMode::kReadWrite : ga::AccessMode::kReadOnly);
  const auto corpus = store.corpus();
  const auto it = corpus->records.find(request.costume_id);
  if (it == corpus->records.end()) {
    throw ga::Error(ga::ErrorCode::kUnknownCostume, "unknown costume: " + request.costume_id);
  }
  const auto prompt = ga::assemble_prompt(it->second, request);

  ga::ProviderRegistry registry;
  registry.add(std::make_shared<ga::MockProvider>());
  if (!args.endpoint.empty()) {
    registry.add(std::make_shared<ga::RemoteProvider>(ga::RemoteProviderConfig{.endpoint = args.endpoint}));
  }
  auto artifact = registry.generate(args.provider, prompt, request);
  ga::Json out = {{"artifact", ga::to_json(artifact)},
                  {"scaffold", ga::to_json(ga::validate_scaffold(artifact, prompt))},
                  {"provenance", prompt.provenance}};
  if (args.save) {
    std::optional<std::string> user;
    if (!args.user.empty()) user = args.user;
    out["artifact_id"] = store.append_artifact(std::move(artifact), user);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gene_atlas: cultural-gene costume corpus tools"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Reconcile two drafts and add the record");
  ingest_cmd->add_option("--data-dir", ingest.data_dir)->required();
  ingest_cmd->add_option("--meta", ingest.meta)->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--text", ingest.text)->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--draft-a", ingest.draft_a)->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--draft-b", ingest.draft_b)->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--decisions", ingest.decisions)->check(CLI::ExistingFile);
  ingest_cmd->add_option("--image", ingest.images)->check(CLI::ExistingFile);
  ingest_cmd->add_option("--k", ingest.k)->check(CLI::Range(1, 64));
  ingest_cmd->add_option("--seed", ingest.seed);

  std::string image;
  std::uint32_t k = 5;
  std::uint64_t color_seed = 0;
  auto* colors_cmd = app.add_subcommand("colors", "Extract the color profile of an image");
  colors_cmd->add_option("--image", image)->required()->check(CLI::ExistingFile);
  colors_cmd->add_option("--k", k)->check(CLI::Range(1, 64));
  colors_cmd->add_option("--seed", color_seed);

  std::string data_dir, tag, query;
  std::uint64_t page = 1, page_size = ga::kDefaultPageSize;
  auto* browse_cmd = app.add_subcommand("browse", "List costumes carrying a tag");
  browse_cmd->add_option("--data-dir", data_dir)->required();
  browse_cmd->add_option("--tag", tag)->required();
  browse_cmd->add_option("--page", page);
  browse_cmd->add_option("--page-size", page_size);

  auto* search_cmd = app.add_subcommand("search", "Keyword search");
  search_cmd->add_option("--data-dir", data_dir)->required();
  search_cmd->add_option("--q", query)->required();
  search_cmd->add_option("--page", page);
  search_cmd->add_option("--page-size", page_size);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Co-create a story for a costume");
  generate_cmd->add_option("--data-dir", gen.data_dir)->required();
  generate_cmd->add_option("--costume", gen.costume)->required();
  generate_cmd->add_option("--theme", gen.theme)->required();
  generate_cmd->add_option("--concept", gen.concept_name)->required();
  generate_cmd->add_option("--seed", gen.seed)->required();
  generate_cmd->add_option("--note", gen.note);
  generate_cmd->add_option("--provider", gen.provider)->check(CLI::IsMember({"mock", "remote"}));
  generate_cmd->add_option("--endpoint", gen.endpoint, "Remote provider URL");
  generate_cmd->add_flag("--save", gen.save, "Append the artifact to the log");
  generate_cmd->add_option("--user", gen.user);

  ga::ServiceConfig serve;
  std::string serve_endpoint;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--data-dir", data_dir)->required();
  serve_cmd->add_option("--host", serve.host);
  serve_cmd->add_option("--port", serve.port)->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--endpoint", serve_endpoint, "Remote provider URL");

  std::uint32_t n = 100;
  std::uint64_t corpus_seed = 7;
  auto* seed_cmd = app.add_subcommand("seed-corpus", "Write the synthetic fixture corpus");
  seed_cmd->add_option("--data-dir", data_dir)->required();
  seed_cmd->add_option("--n", n)->check(CLI::Range(0u, 9999u));
  seed_cmd->add_option("--seed", corpus_seed);

  auto* taxonomies_cmd = app.add_subcommand("taxonomies", "Print every vocabulary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    ga::Json out;
    if (*ingest_cmd) {
      out = run_ingest(ingest);
    } else if (*colors_cmd) {
      const auto profile = ga::extract_profile(ga::decode_image(image),
                                               ga::KMeansParams{.k = k, .seed = color_seed});
      out = ga::to_json(profile);
    } else if (*browse_cmd) {
      const auto parsed = as_usage([&] { return ga::GeneTag::parse(tag); });
      const auto paging = as_usage([&] { return ga::PageRequest(page, page_size); });
      ga::Store store(data_dir, ga::AccessMode::kReadOnly);
      const auto index = ga::build_index(records_of(*store.corpus()));
      out = ga::to_json(ga::browse_by_tag(index, parsed, paging));
    } else if (*search_cmd) {
      const auto paging = as_usage([&] { return ga::PageRequest(page, page_size); });
      ga::Store store(data_dir, ga::AccessMode::kReadOnly);
      const auto index = ga::build_index(records_of(*store.corpus()));
      out = ga::to_json(ga::search_keyword(index, query, paging));
    } else if (*generate_cmd) {
      out = run_generate(gen);
    } else if (*serve_cmd) {
      serve.data_dir = data_dir;
      if (!serve_endpoint.empty()) serve.remote = ga::RemoteProviderConfig{.endpoint = serve_endpoint};
      ga::ApiService service(serve);
      const int port = service.bind();
      std::cerr << "serving " << data_dir << " on http://" << serve.host << ":" << port << "\n";
      std::cout << ga::Json{{"host", serve.host}, {"port", port}}.dump() << std::endl;
      service.run();
      return 0;
    } else if (*seed_cmd) {
      ga::Store store(data_dir, ga::AccessMode::kReadWrite);
      store.replace_corpus(ga::generate_corpus(n, corpus_seed));
      out = {{"count", n}, {"seed", corpus_seed}, {"version", store.corpus_version()},
             {"path", (store.data_dir() / "corpus.jsonl").string()}};
    } else if (*taxonomies_cmd) {
      out = ga::vocabulary_document();
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ReportedFailure& failure) {
    std::cout << failure.document.dump(2) << "\n";
    std::cerr << failure.document["message"].get<std::string>() << "\n";
    return 1;
  } catch (const ga::Error& e) {
    std::cout << ga::error_body(e).dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << ga::Json{{"code", "internal"}, {"message", e.what()}}.dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return 1;
  }
}
