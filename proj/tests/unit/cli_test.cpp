#include <sys/wait.h>

#include <cstdio>
#include <fstream>

#include <gtest/gtest.h>

#include "gene_atlas/annotation.hpp"
#include "gene_atlas/color.hpp"
#include "gene_atlas/corpus_gen.hpp"
#include "gene_atlas/image_io.hpp"
#include "gene_atlas/json_codec.hpp"
#include "gene_atlas/store.hpp"
#include "support/fixtures.hpp"

namespace gene_atlas {
namespace {

namespace fs = std::filesystem;

struct Run {
  int exit_code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string command = std::string(GENE_ATLAS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return {};
  Run run;
  char buf[4096];
  while (const auto n = std::fread(buf, 1, sizeof(buf), pipe)) run.out.append(buf, n);
  const int status = ::pclose(pipe);
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

void write_json(const fs::path& path, const Json& j) { std::ofstream(path) << j.dump(); }

TEST(Cli, ColorsMatchesLibrary) {
  const auto dir = testing::fresh_dir("cli_colors");
  const auto blue = testing::uniform_image(40, 30, {20, 60, 180});
  write_png(dir / "blue.png", blue);
  auto run = run_cli("colors --image " + quoted(dir / "blue.png"));
  ASSERT_EQ(run.exit_code, 0) << run.out;
  const auto j = Json::parse(run.out);
  EXPECT_EQ(j.at("dominant_hex"), "#143CB4");
  EXPECT_EQ(j.at("perceptual_class"), "Cool");
  EXPECT_EQ(j, to_json(extract_profile(blue, {})));

  write_ppm(dir / "blobs.ppm", testing::three_blob_image());
  run = run_cli("colors --k 3 --seed 4 --image " + quoted(dir / "blobs.ppm"));
  ASSERT_EQ(run.exit_code, 0);
  EXPECT_EQ(Json::parse(run.out), to_json(extract_profile(testing::three_blob_image(), {.k = 3, .seed = 4})));
}

TEST(Cli, SeedCorpusIsByteStable) {
  const auto a = testing::fresh_dir("cli_seed_a");
  const auto b = testing::fresh_dir("cli_seed_b");
  const auto ra = run_cli("seed-corpus --n 100 --seed 7 --data-dir " + quoted(a));
  const auto rb = run_cli("seed-corpus --n 100 --seed 7 --data-dir " + quoted(b));
  ASSERT_EQ(ra.exit_code, 0);
  ASSERT_EQ(rb.exit_code, 0);
  const auto bytes = testing::read_file(a / "corpus.jsonl");
  EXPECT_EQ(bytes, testing::read_file(b / "corpus.jsonl"));
  EXPECT_EQ(load_corpus(a / "corpus.jsonl"), generate_corpus(100, 7));
  const auto summary = Json::parse(ra.out);
  EXPECT_EQ(summary.at("count"), 100);
  EXPECT_EQ(summary.at("version"), 100);
}

TEST(Cli, BrowseAndSearchMatchLibrary) {
  const auto dir = testing::fresh_dir("cli_browse");
  ASSERT_EQ(run_cli("seed-corpus --n 60 --seed 3 --data-dir " + quoted(dir)).exit_code, 0);
  const auto records = testing::records_of(generate_corpus(60, 3).records);
  const auto index = build_index(records);

  auto run = run_cli("browse --tag Material:Silk --page 2 --page-size 5 --data-dir " + quoted(dir));
  ASSERT_EQ(run.exit_code, 0);
  EXPECT_EQ(Json::parse(run.out), to_json(browse_by_tag(index, GeneTag::parse("Material:Silk"), PageRequest(2, 5))));

  run = run_cli("search --q 'silk top' --data-dir " + quoted(dir));
  ASSERT_EQ(run.exit_code, 0);
  EXPECT_EQ(Json::parse(run.out), to_json(search_keyword(index, "silk top", PageRequest())));
}

TEST(Cli, IngestNeedsDecisionsForConflicts) {
  const auto dir = testing::fresh_dir("cli_ingest");
  write_json(dir / "meta.json", {{"id", "GA-F001"}, {"title", "Miao Hundred-Bird Coat"},
                                 {"ethnic_group", "Miao"}, {"region", "Guizhou"},
                                 {"image_refs", {"coat.png"}}});
  std::ofstream(dir / "source.txt") << "Field notes.";
  write_json(dir / "a.json", to_json(testing::coder_a_draft()));
  write_json(dir / "b.json", to_json(testing::coder_b_draft_one_disagreement()));
  write_json(dir / "decisions.json", {{"surface.materials.Velvet", "A"}});
  write_png(dir / "coat.png", testing::three_blob_image());
  const auto base = "ingest --data-dir " + quoted(dir / "data") + " --meta " + quoted(dir / "meta.json") +
                    " --text " + quoted(dir / "source.txt") + " --draft-a " + quoted(dir / "a.json") +
                    " --draft-b " + quoted(dir / "b.json");

  auto run = run_cli(base);
  EXPECT_EQ(run.exit_code, 1);
  auto j = Json::parse(run.out);
  EXPECT_EQ(j.at("code"), "missing_decision");
  EXPECT_EQ(j.at("report").at("conflicts")[0].at("field_path"), "surface.materials.Velvet");

  run = run_cli(base + " --k 3 --image " + quoted(dir / "coat.png") + " --decisions " +
                quoted(dir / "decisions.json"));
  ASSERT_EQ(run.exit_code, 0) << run.out;
  j = Json::parse(run.out);
  EXPECT_EQ(j.at("corpus_version"), 1);
  const auto record = record_from_json(j.at("record"));
  EXPECT_EQ(record.surface.color_profile->dominant_hex, rgb_to_hex({200, 30, 40}));
  EXPECT_EQ(load_corpus(dir / "data" / "corpus.jsonl").records.at("GA-F001"), record);

  run = run_cli(base + " --decisions " + quoted(dir / "decisions.json"));
  EXPECT_EQ(run.exit_code, 1);
  EXPECT_EQ(Json::parse(run.out).at("code"), "duplicate_id");
}

TEST(Cli, GenerateWithAndWithoutSave) {
  const auto dir = testing::fresh_dir("cli_generate");
  {
    Store store(dir, AccessMode::kReadWrite);
    store.add_record(testing::hundred_bird_coat());
  }
  auto run = run_cli("generate --data-dir " + quoted(dir) +
                     " --costume GA-F001 --theme religious --concept 'Rule of Law' --seed 3");
  ASSERT_EQ(run.exit_code, 0) << run.out;
  auto j = Json::parse(run.out);
  EXPECT_FALSE(j.contains("artifact_id"));
  EXPECT_EQ(j.at("scaffold").at("passed"), true);
  const auto record = testing::hundred_bird_coat();
  const CoCreationRequest request{"GA-F001", Theme::kReligious, InnerConcept::kRuleOfLaw, "", 3};
  const auto prompt = assemble_prompt(record, request);
  EXPECT_EQ(j.at("artifact").at("story"),
            mock_provider({prompt.story_prompt, prompt.image_prompt, 3, 2000, prompt.bindings}).story);

  run = run_cli("generate --save --user ana --data-dir " + quoted(dir) +
                " --costume GA-F001 --theme Festive --concept Harmony --seed 1");
  ASSERT_EQ(run.exit_code, 0);
  EXPECT_EQ(Json::parse(run.out).at("artifact_id"), 1);
  EXPECT_EQ(load_artifacts(dir / "artifacts.jsonl").size(), 1u);

  run = run_cli("generate --data-dir " + quoted(dir) + " --costume GA-F001 --theme Festive --concept Harmony --seed 1 --note " +
                std::string(501, 'x'));
  EXPECT_EQ(run.exit_code, 1);
  EXPECT_EQ(Json::parse(run.out).at("code"), "validation_failed");
}

TEST(Cli, UsageErrorsExitTwo) {
  const auto dir = testing::fresh_dir("cli_usage");
  EXPECT_EQ(run_cli("").exit_code, 2);
  EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
  EXPECT_EQ(run_cli("browse --data-dir " + quoted(dir)).exit_code, 2);
  EXPECT_EQ(run_cli("browse --tag Form:Cape --data-dir " + quoted(dir)).exit_code, 2);
  EXPECT_EQ(run_cli("search --q x --page 0 --data-dir " + quoted(dir)).exit_code, 2);
  EXPECT_EQ(run_cli("generate --data-dir " + quoted(dir) + " --costume X --theme Martial --concept Harmony --seed 1")
                .exit_code,
            2);
  EXPECT_EQ(run_cli("colors --image /nonexistent.png").exit_code, 2);
}

TEST(Cli, OperationalErrorsExitOne) {
  const auto dir = testing::fresh_dir("cli_errors");
  auto run = run_cli("search --q ',,' --data-dir " + quoted(dir));
  EXPECT_EQ(run.exit_code, 1);
  EXPECT_EQ(Json::parse(run.out).at("code"), "empty_query");
  run = run_cli("generate --data-dir " + quoted(dir) + " --costume GA-0001 --theme Festive --concept Harmony --seed 1");
  EXPECT_EQ(run.exit_code, 1);
  EXPECT_EQ(Json::parse(run.out).at("code"), "unknown_costume");

  std::ofstream(dir / "broken.png") << "not an image";
  run = run_cli("colors --image " + quoted(dir / "broken.png"));
  EXPECT_EQ(run.exit_code, 1);
  EXPECT_EQ(Json::parse(run.out).at("code"), "image_decode");
}

TEST(Cli, LockConflictWithOpenWriter) {
  const auto dir = testing::fresh_dir("cli_lock");
  Store writer(dir, AccessMode::kReadWrite);
  const auto run = run_cli("search --q silk --data-dir " + quoted(dir));
  EXPECT_EQ(run.exit_code, 1);
  EXPECT_EQ(Json::parse(run.out).at("code"), "lock_held");
}

TEST(Cli, TaxonomiesDocument) {
  const auto run = run_cli("taxonomies");
  ASSERT_EQ(run.exit_code, 0);
  EXPECT_EQ(Json::parse(run.out), vocabulary_document());
}

}  // namespace
}  // namespace gene_atlas
