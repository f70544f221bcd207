#include "gene_atlas/json_codec.hpp"

#include <gtest/gtest.h>

#include "gene_atlas/corpus_gen.hpp"
#include "gene_atlas/error.hpp"
#include "support/fixtures.hpp"

namespace gene_atlas {
namespace {

ErrorCode code_of(auto fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(JsonCodec, RecordRoundTrip) {
  for (const auto& record : {testing::hundred_bird_coat(), testing::pleated_skirt()}) {
    EXPECT_EQ(record_from_json(to_json(record)), record);
    EXPECT_EQ(record_from_json(parse_json(to_json(record).dump())), record);
  }
  for (const auto& [id, record] : generate_corpus(30, 4).records) {
    EXPECT_EQ(record_from_json(to_json(record)), record) << id;
  }
}

TEST(JsonCodec, RecordShape) {
  const auto j = to_json(testing::hundred_bird_coat());
  EXPECT_EQ(j.at("surface").at("color_profile").at("dominant_hex"), "#BE1E2D");
  EXPECT_EQ(j.at("surface").at("color_profile").at("perceptual_class"), "Warm");
  EXPECT_EQ(j.at("surface").at("color_profile").at("clusters")[0].at("centroid"), Json({190, 30, 45}));
  EXPECT_EQ(j.at("surface").at("materials")[2], Json({{"material", "Other"}, {"label", "feather"}}));
  EXPECT_FALSE(j.at("surface").at("materials")[0].contains("label"));
  EXPECT_EQ(j.at("middle")[0].at("dimension"), "ReligiousBeliefs");
  EXPECT_FALSE(to_json(testing::pleated_skirt()).at("surface").contains("color_profile"));
}

TEST(JsonCodec, StrictDecoding) {
  auto j = to_json(testing::hundred_bird_coat());
  j["colour"] = "red";
  EXPECT_EQ(code_of([&] { record_from_json(j); }), ErrorCode::kUnknownField);
  j = to_json(testing::hundred_bird_coat());
  j["surface"]["forms"] = "Top";
  EXPECT_EQ(code_of([&] { record_from_json(j); }), ErrorCode::kMalformedBody);
  j = to_json(testing::hundred_bird_coat());
  j.erase("title");
  EXPECT_EQ(code_of([&] { record_from_json(j); }), ErrorCode::kMalformedBody);
  EXPECT_EQ(code_of([] { parse_json("{\"a\":"); }), ErrorCode::kMalformedBody);
}

TEST(JsonCodec, DraftsAndDecisions) {
  const auto draft = testing::coder_b_draft_one_disagreement();
  EXPECT_EQ(draft_from_json(to_json(draft)), draft);
  const auto decisions = decisions_from_json(Json{{"surface.materials.Velvet", "b"}, {"inner.Harmony", "A"}});
  EXPECT_EQ(decisions, (Decisions{{"surface.materials.Velvet", Side::kB}, {"inner.Harmony", Side::kA}}));
  EXPECT_EQ(code_of([] { decisions_from_json(Json{{"x", "C"}}); }), ErrorCode::kMalformedBody);
  EXPECT_EQ(code_of([] { decisions_from_json(Json::array()); }), ErrorCode::kMalformedBody);
}

TEST(JsonCodec, ReportShape) {
  const auto report = compare_drafts(testing::coder_a_draft(), testing::coder_b_draft_one_disagreement());
  const auto j = to_json(report);
  EXPECT_EQ(j.at("costume_id"), "GA-F001");
  EXPECT_EQ(j.at("total_fields"), 43);
  EXPECT_EQ(j.at("conflicts")[0],
            Json({{"field_path", "surface.materials.Velvet"}, {"value_a", "false"}, {"value_b", "true"}}));
}

TEST(JsonCodec, RequestAndArtifact) {
  const CoCreationRequest request{"GA-F001", Theme::kArtistic, InnerConcept::kRuleOfLaw, "hi", 7};
  EXPECT_EQ(request_from_json(to_json(request)), request);
  auto j = to_json(request);
  j["context_theme"] = "artistic";
  j["inner_concept"] = "rule of law";
  EXPECT_EQ(request_from_json(j), request);
  j["provider"] = "mock";
  EXPECT_EQ(code_of([&] { request_from_json(j); }), ErrorCode::kUnknownField);
  EXPECT_EQ(request_from_json(j, {"provider"}), request);
  j["context_theme"] = "Martial";
  EXPECT_EQ(code_of([&] { request_from_json(j, {"provider"}); }), ErrorCode::kUnknownTheme);

  NarrativeArtifact artifact{request, "story", "image", "mock-image:1", "mock", "2026-01-01T00:00:00Z"};
  EXPECT_EQ(artifact_from_json(to_json(artifact)), artifact);
  artifact.image_ref.reset();
  EXPECT_EQ(artifact_from_json(to_json(artifact)), artifact);
}

TEST(JsonCodec, VocabularyDocument) {
  const auto doc = vocabulary_document();
  EXPECT_EQ(doc.at("form").size(), 6u);
  EXPECT_EQ(doc.at("material").size(), 9u);
  EXPECT_EQ(doc.at("inner").size(), 12u);
  EXPECT_EQ(doc.at("themes").size(), 3u);
  EXPECT_EQ(doc.at("inner")[0].at("level"), "State");
  EXPECT_DOUBLE_EQ(doc.at("perceptual_rule").at("min_saturation").get<double>(), 0.15);
}

}  // namespace
}  // namespace gene_atlas
