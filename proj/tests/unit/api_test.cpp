#include "gene_atlas/api.hpp"

#include <atomic>
#include <thread>

#include <gtest/gtest.h>

#include "httplib.h"

#include "gene_atlas/corpus_gen.hpp"
#include "support/fixtures.hpp"

namespace gene_atlas {
namespace {

struct Reply {
  int status = 0;
  Json body;
};

class ApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto dir = testing::fresh_dir("api");
    {
      auto corpus = generate_corpus(100, 21);
      corpus.records.emplace("GA-F001", testing::hundred_bird_coat());
      corpus.records.emplace("GA-F002", testing::pleated_skirt());
      Store seed(dir, AccessMode::kReadWrite);
      seed.replace_corpus(corpus);
      records_ = testing::records_of(corpus.records);
    }
    index_ = build_index(records_);
    ServiceConfig config;
    config.port = 0;
    config.data_dir = dir;
    config.generate.retries = 1;
    service_ = std::make_unique<ApiService>(config);
    const int port = service_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port);
  }
  void TearDown() override {
    client_.reset();
    service_->stop();
  }

  static Reply wrap(const httplib::Result& r) {
    if (!r) return {-1, nullptr};
    return {r->status, r->body.empty() ? Json() : Json::parse(r->body)};
  }
  Reply get(const std::string& path) { return wrap(client_->Get(path)); }
  Reply post(const std::string& path, const std::string& body) {
    return wrap(client_->Post(path, body, "application/json"));
  }
  Reply del(const std::string& path, const std::string& body) {
    return wrap(client_->Delete(path, body, "application/json"));
  }

  const CostumeRecord& record(const std::string& id) const {
    for (const auto& r : records_) {
      if (r.id == id) return r;
    }
    throw std::out_of_range(id);
  }

  std::vector<CostumeRecord> records_;
  GeneIndex index_;
  std::unique_ptr<ApiService> service_;
  std::unique_ptr<httplib::Client> client_;
};

void expect_error(const Reply& reply, int status, const std::string& code) {
  EXPECT_EQ(reply.status, status) << reply.body.dump();
  ASSERT_TRUE(reply.body.is_object());
  EXPECT_EQ(reply.body.at("code"), code);
  EXPECT_TRUE(reply.body.at("message").is_string());
}

TEST_F(ApiTest, TaxonomiesAndTags) {
  const auto tax = get("/api/taxonomies");
  EXPECT_EQ(tax.status, 200);
  EXPECT_EQ(tax.body, vocabulary_document());
  for (auto category : all_values<GeneCategory>()) {
    const auto reply = get("/api/tags/" + std::string(name_of(category)));
    EXPECT_EQ(reply.status, 200);
    EXPECT_EQ(reply.body, tag_listing(index_, category));
  }
  EXPECT_EQ(get("/api/tags/form").body, tag_listing(index_, GeneCategory::kForm));
}

TEST_F(ApiTest, BrowseMatchesModule) {
  for (auto category : all_values<GeneCategory>()) {
    for (const auto& tag : tags_of_category(category)) {
      for (std::uint64_t page : {1u, 2u}) {
        const auto reply =
            get("/api/costumes?tag=" + tag.to_string() + "&page=" + std::to_string(page) + "&page_size=9");
        ASSERT_EQ(reply.status, 200) << tag.to_string();
        const auto expected = browse_by_tag(index_, tag, PageRequest(page, 9));
        EXPECT_EQ(reply.body.at("total"), expected.total);
        EXPECT_EQ(reply.body.at("page"), page);
        EXPECT_EQ(reply.body.at("page_size"), 9);
        ASSERT_EQ(reply.body.at("items").size(), expected.ids.size());
        for (std::size_t i = 0; i < expected.ids.size(); ++i) {
          EXPECT_EQ(reply.body["items"][i], costume_summary(record(expected.ids[i])));
        }
      }
    }
  }
  const auto all = get("/api/costumes");
  EXPECT_EQ(all.body.at("total"), 102);
  EXPECT_EQ(all.body.at("items").size(), 20u);
  EXPECT_EQ(all.body.at("items")[0].at("id"), "GA-0001");
}

TEST_F(ApiTest, DetailMatchesModule) {
  for (const auto* id : {"GA-F001", "GA-F002", "GA-0007", "GA-0100"}) {
    const auto reply = get(std::string("/api/costumes/") + id);
    EXPECT_EQ(reply.status, 200);
    EXPECT_EQ(reply.body, costume_detail(record(id), index_)) << id;
  }
  const auto coat = get("/api/costumes/GA-F001").body;
  EXPECT_EQ(coat.at("available_themes"), Json({"Religious", "Festive", "Artistic"}));
  EXPECT_EQ(coat.at("inner_concepts").size(), 2u);
}

TEST_F(ApiTest, SearchMatchesModule) {
  for (const auto& q : testing::seeded_queries(records_, 4)) {
    const auto expected = search_keyword(index_, q, PageRequest(1, 50));
    const auto reply = client_->Get("/api/search", httplib::Params{{"q", q}, {"page_size", "50"}},
                                    httplib::Headers{});
    ASSERT_TRUE(reply);
    ASSERT_EQ(reply->status, 200) << q;
    const auto body = Json::parse(reply->body);
    EXPECT_EQ(body.at("total"), expected.total) << q;
    ASSERT_EQ(body.at("hits").size(), expected.hits.size()) << q;
    for (std::size_t i = 0; i < expected.hits.size(); ++i) {
      auto summary = costume_summary(record(expected.hits[i].costume_id));
      summary["score"] = expected.hits[i].score;
      EXPECT_EQ(body["hits"][i], summary);
    }
  }
}

TEST_F(ApiTest, FavoritesFlow) {
  auto r = post("/api/favorites", R"({"user_id":"ana","costume_id":"GA-F002"})");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, Json({{"user_id", "ana"}, {"costume_ids", {"GA-F002"}}, {"changed", true}}));
  r = post("/api/favorites", R"({"user_id":"ana","costume_id":"GA-0003"})");
  r = post("/api/favorites", R"({"user_id":"ana","costume_id":"GA-F002"})");
  EXPECT_EQ(r.body.at("changed"), false);
  EXPECT_EQ(get("/api/favorites?user_id=ana").body,
            Json({{"user_id", "ana"}, {"costume_ids", {"GA-F002", "GA-0003"}}}));
  r = del("/api/favorites", R"({"user_id":"ana","costume_id":"GA-F002"})");
  EXPECT_EQ(r.body.at("costume_ids"), Json({"GA-0003"}));
  EXPECT_EQ(service_->store().list_favorites("ana"), std::vector<std::string>{"GA-0003"});
  expect_error(post("/api/favorites", R"({"user_id":"ana","costume_id":"GA-NONE"})"), 404, "unknown_costume");
  expect_error(get("/api/favorites"), 422, "validation_failed");
}

TEST_F(ApiTest, GenerateMatchesModule) {
  const auto& coat = record("GA-F001");
  const CoCreationRequest request{"GA-F001", Theme::kArtistic, InnerConcept::kHarmony, "keep it short", 12};
  Json body = to_json(request);
  body["user_id"] = "ana";
  const auto reply = post("/api/generate", body.dump());
  ASSERT_EQ(reply.status, 200) << reply.body.dump();

  const auto prompt = assemble_prompt(coat, request);
  const auto direct =
      mock_provider({prompt.story_prompt, prompt.image_prompt, 12, 2000, prompt.bindings});
  const auto artifact = artifact_from_json(reply.body.at("artifact"));
  EXPECT_EQ(artifact.story, direct.story);
  EXPECT_EQ(artifact.image_ref, direct.image_descriptor);
  EXPECT_EQ(artifact.image_prompt, prompt.image_prompt);
  EXPECT_EQ(artifact.request, request);
  EXPECT_EQ(reply.body.at("provenance"), Json(prompt.provenance));
  EXPECT_EQ(reply.body.at("scaffold"), Json({{"passed", true}, {"missing", Json::array()}}));
  EXPECT_EQ(reply.body.at("artifact_id"), 1);

  body["save"] = false;
  EXPECT_EQ(post("/api/generate", body.dump()).body.at("artifact_id"), nullptr);

  const auto listed = get("/api/artifacts?costume_id=GA-F001&user_id=ana").body;
  EXPECT_EQ(listed.at("total"), 1);
  EXPECT_EQ(listed.at("items")[0].at("id"), 1);
  EXPECT_EQ(artifact_from_json(listed.at("items")[0].at("artifact")), artifact);
  EXPECT_EQ(get("/api/artifacts?user_id=bob").body.at("total"), 0);
}

class ScriptedProvider : public GenerationProvider {
 public:
  explicit ScriptedProvider(std::string mode) : mode_(std::move(mode)) {}
  std::string id() const override { return mode_; }
  ProviderResponse complete(const ProviderRequest&) override {
    if (mode_ == "stalls") throw Error(ErrorCode::kProviderTimeout, "stalled");
    return {"", std::nullopt, "not today"};
  }

 private:
  std::string mode_;
};

TEST_F(ApiTest, ErrorTable) {
  expect_error(get("/api/costumes?tag=Form:Cape"), 404, "unknown_tag");
  expect_error(get("/api/costumes?tag=Texture:Silk"), 404, "unknown_tag");
  expect_error(get("/api/costumes/GA-9999"), 404, "unknown_costume");
  expect_error(get("/api/tags/Texture"), 404, "unknown_category");
  expect_error(post("/api/favorites", "{not json"), 400, "malformed_body");
  expect_error(post("/api/favorites", "[1,2]"), 400, "malformed_body");
  expect_error(post("/api/favorites", R"({"user_id":"a","costume_id":"GA-F001","x":1})"), 422, "unknown_field");
  expect_error(post("/api/generate", R"({"costume_id":"GA-F002","context_theme":"Religious",)"
                                     R"("inner_concept":"Harmony","seed":1})"),
               422, "theme_unavailable");
  expect_error(post("/api/generate", R"({"costume_id":"GA-F002","context_theme":"Martial",)"
                                     R"("inner_concept":"Harmony","seed":1})"),
               422, "unknown_theme");
  expect_error(post("/api/generate", R"({"costume_id":"GA-F002","context_theme":"Festive",)"
                                     R"("inner_concept":"Wealth","seed":1})"),
               422, "unknown_concept");
  expect_error(post("/api/generate", R"({"costume_id":"GA-F002","context_theme":"Festive",)"
                                     R"("inner_concept":"Harmony","seed":"one"})"),
               400, "malformed_body");
  expect_error(get("/api/search?q=%20%2C"), 422, "empty_query");
  expect_error(get("/api/search?q=silk&page=0"), 422, "invalid_page");
  expect_error(get("/api/search?q=silk&page_size=101"), 422, "invalid_page");
  expect_error(get("/api/search?q=silk&page=two"), 422, "invalid_page");
  expect_error(get("/api/search?query=silk"), 422, "unknown_field");
  expect_error(get("/api/nothing"), 404, "unknown_route");
  expect_error(wrap(client_->Put("/api/favorites", "{}", "application/json")), 404, "unknown_route");
}

TEST_F(ApiTest, ProviderFailures) {
  service_->add_provider(std::make_shared<ScriptedProvider>("stalls"));
  service_->add_provider(std::make_shared<ScriptedProvider>("refuses"));
  const std::string base = R"({"costume_id":"GA-F001","context_theme":"Festive","inner_concept":"Harmony","seed":1,)";
  expect_error(post("/api/generate", base + R"("provider":"stalls"})"), 504, "provider_timeout");
  expect_error(post("/api/generate", base + R"("provider":"refuses"})"), 502, "provider_refusal");
  expect_error(post("/api/generate", base + R"("provider":"oracle"})"), 422, "unknown_provider");
  EXPECT_TRUE(service_->store().list_artifacts().empty());
}

TEST_F(ApiTest, IndexFollowsStoreChanges) {
  auto extra = testing::pleated_skirt();
  extra.id = "GA-X001";
  extra.title = "Zzyzx Sash";
  EXPECT_EQ(get("/api/search?q=zzyzx").body.at("total"), 0);
  service_->store().add_record(extra);
  EXPECT_EQ(get("/api/search?q=zzyzx").body.at("total"), 1);
  EXPECT_EQ(get("/api/costumes").body.at("total"), 103);
}

TEST_F(ApiTest, ConcurrentReadersAndWriters) {
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  const int port = service_->port();
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      httplib::Client c("127.0.0.1", port);
      for (int i = 0; i < 20; ++i) {
        const auto user = "u" + std::to_string(t);
        auto a = c.Get("/api/search?q=miao");
        auto b = c.Post("/api/favorites",
                        Json({{"user_id", user}, {"costume_id", "GA-" + std::string(i < 9 ? "000" : "00") +
                                                                    std::to_string(i + 1)}})
                            .dump(),
                        "application/json");
        if (!a || a->status != 200 || !b || b->status != 200) ++failures;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(failures.load(), 0);
  for (int t = 0; t < 8; ++t) {
    EXPECT_EQ(service_->store().list_favorites("u" + std::to_string(t)).size(), 20u);
  }
}

TEST(ApiServiceTest, SecondServiceOnSameDirIsLocked) {
  const auto dir = testing::fresh_dir("api_lock");
  ServiceConfig config;
  config.port = 0;
  config.data_dir = dir;
  ApiService first(config);
  try {
    ApiService second(config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLockHeld);
  }
}

TEST(ApiServiceTest, PortInUse) {
  const auto dir_a = testing::fresh_dir("api_port_a");
  const auto dir_b = testing::fresh_dir("api_port_b");
  ServiceConfig config;
  config.port = 0;
  config.data_dir = dir_a;
  ApiService first(config);
  const int port = first.bind();
  config.port = port;
  config.data_dir = dir_b;
  ApiService second(config);
  try {
    second.bind();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPortBind);
  }
}

}  // namespace
}  // namespace gene_atlas
