#include "gene_atlas/api.hpp"

#include <charconv>
#include <initializer_list>
#include <set>
#include <thread>

#include "httplib.h"

#include "gene_atlas/error.hpp"

namespace gene_atlas {
namespace {

constexpr const char* kJsonType = "application/json";

void reject_unknown_params(const httplib::Request& req, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : req.params) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw Error(ErrorCode::kUnknownField, "unknown query parameter '" + key + "'");
  }
}

std::optional<std::string> param(const httplib::Request& req, const std::string& key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

std::uint64_t page_number(const httplib::Request& req, const std::string& key, std::uint64_t fallback) {
  const auto text = param(req, key);
  if (!text) return fallback;
  std::uint64_t value = 0;
  const auto* end = text->data() + text->size();
  const auto [ptr, ec] = std::from_chars(text->data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidPage, key + " must be a positive integer, got '" + *text + "'");
  }
  return value;
}

PageRequest page_request(const httplib::Request& req) {
  return PageRequest(page_number(req, "page", 1), page_number(req, "page_size", kDefaultPageSize));
}

Json body_object(const httplib::Request& req) {
  Json body = parse_json(req.body);
  if (!body.is_object()) throw Error(ErrorCode::kMalformedBody, "request body must be a JSON object");
  return body;
}

std::string body_string(const Json& body, const std::string& key) {
  const auto it = body.find(key);
  if (it == body.end()) throw Error(ErrorCode::kMalformedBody, "missing field '" + key + "'");
  if (!it->is_string()) throw Error(ErrorCode::kMalformedBody, "'" + key + "' must be a string");
  return it->get<std::string>();
}

void reject_unknown_keys(const Json& body, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : body.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw Error(ErrorCode::kUnknownField, "unknown field '" + key + "'");
  }
}

const CostumeRecord& find_record(const Corpus& corpus, const std::string& id) {
  const auto it = corpus.records.find(id);
  if (it == corpus.records.end()) throw Error(ErrorCode::kUnknownCostume, "unknown costume: " + id);
  return it->second;
}

Json paged(std::size_t total, const PageRequest& page) {
  return {{"total", total}, {"page", page.page()}, {"page_size", page.page_size()}};
}

}  // namespace

Json costume_summary(const CostumeRecord& record) {
  Json out = {{"id", record.id}, {"title", record.title}, {"ethnic_group", record.ethnic_group}};
  if (record.region) out["region"] = *record.region;
  if (record.surface.color_profile) out["dominant_hex"] = record.surface.color_profile->dominant_hex;
  if (!record.image_refs.empty()) out["image_ref"] = record.image_refs.front();
  return out;
}

Json costume_detail(const CostumeRecord& record, const GeneIndex& index) {
  Json related = Json::object();
  for (auto category : all_values<GeneCategory>()) {
    related[std::string(name_of(category))] = to_json(related_costumes(index, record.id, category));
  }
  Json tags = Json::array();
  for (const auto& tag : record_tags(record)) tags.push_back(tag.to_string());
  Json concepts = Json::array();
  for (const auto& name : record.inner) {
    const auto parsed = parse_term<InnerConcept>(name);
    if (!parsed) continue;
    const auto& info = concept_info(*parsed);
    concepts.push_back({{"name", name},
                        {"display", display_name(*parsed)},
                        {"level", name_of(info.level)},
                        {"expression_example", info.expression_example},
                        {"connotation", info.connotation}});
  }
  Json themes = Json::array();
  for (auto theme : available_themes(record)) themes.push_back(name_of(theme));
  return {{"record", to_json(record)},
          {"tags", tags},
          {"related", related},
          {"inner_concepts", concepts},
          {"available_themes", themes}};
}

Json tag_listing(const GeneIndex& index, GeneCategory category) {
  Json tags = Json::array();
  for (const auto& tag : tags_of_category(category)) {
    const auto it = index.tag_postings.find(tag);
    const std::size_t count = it == index.tag_postings.end() ? 0 : it->second.size();
    tags.push_back({{"tag", tag.to_string()}, {"value", tag.value()}, {"display", tag.display()},
                    {"count", count}});
  }
  return {{"category", name_of(category)}, {"tags", tags}};
}

Json error_body(const Error& error) {
  return {{"code", to_string(error.code())}, {"message", error.what()}};
}

struct ApiService::Impl {
  ServiceConfig config;
  Store store;
  IndexHolder index;
  std::mutex rebuild_mutex;
  ProviderRegistry providers;
  httplib::Server server;
  std::thread thread;
  int bound_port = -1;

  explicit Impl(ServiceConfig cfg)
      : config(std::move(cfg)), store(config.data_dir, AccessMode::kReadWrite) {
    providers.add(std::make_shared<MockProvider>());
    if (config.remote) providers.add(std::make_shared<RemoteProvider>(*config.remote));
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    rebuild(store.corpus());
    install_routes();
  }

  // Rebuilds the index when the store has moved on since the last build.
  std::pair<std::shared_ptr<const Corpus>, std::shared_ptr<const GeneIndex>> current_index() {
    auto corpus = store.corpus();
    if (index.corpus_version() != corpus->version) {
      std::lock_guard lock(rebuild_mutex);
      corpus = store.corpus();
      if (index.corpus_version() != corpus->version) rebuild(corpus);
    }
    return {corpus, index.snapshot()};
  }

  void rebuild(const std::shared_ptr<const Corpus>& corpus) {
    std::vector<CostumeRecord> records;
    records.reserve(corpus->records.size());
    for (const auto& [id, record] : corpus->records) records.push_back(record);
    index.publish(std::make_shared<const GeneIndex>(build_index(records)), corpus->version);
  }

  template <typename Fn>
  httplib::Server::Handler wrap(Fn fn) {
    return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
      try {
        const Json body = fn(req);
        res.status = 200;
        res.set_content(body.dump(), kJsonType);
      } catch (const Error& e) {
        res.status = http_status(e.code());
        res.set_content(error_body(e).dump(), kJsonType);
      } catch (const Json::exception& e) {
        res.status = 400;
        res.set_content(Json{{"code", "malformed_body"}, {"message", e.what()}}.dump(), kJsonType);
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(Json{{"code", "internal"}, {"message", e.what()}}.dump(), kJsonType);
      }
    };
  }

  void install_routes() {
    server.Get("/api/taxonomies", wrap([](const httplib::Request& req) {
      reject_unknown_params(req, {});
      return vocabulary_document();
    }));

    server.Get(R"(/api/tags/([^/]+))", wrap([this](const httplib::Request& req) {
      reject_unknown_params(req, {});
      const auto category = parse_term_loose<GeneCategory>(req.matches[1].str());
      if (!category) {
        throw Error(ErrorCode::kUnknownCategory, "unknown category: " + req.matches[1].str());
      }
      return tag_listing(*current_index().second, *category);
    }));

    server.Get("/api/costumes", wrap([this](const httplib::Request& req) {
      reject_unknown_params(req, {"tag", "page", "page_size"});
      const auto page = page_request(req);
      const auto [corpus, idx] = current_index();
      std::vector<std::string> ids;
      std::size_t total = 0;
      if (const auto tag = param(req, "tag")) {
        const auto result = browse_by_tag(*idx, GeneTag::parse(*tag), page);
        total = result.total;
        ids = result.ids;
      } else {
        total = idx->id_order.size();
        ids = page.slice(std::span<const std::string>(idx->id_order));
      }
      Json out = paged(total, page);
      out["items"] = Json::array();
      for (const auto& id : ids) out["items"].push_back(costume_summary(find_record(*corpus, id)));
      return out;
    }));

    server.Get(R"(/api/costumes/([^/]+))", wrap([this](const httplib::Request& req) {
      reject_unknown_params(req, {});
      const auto [corpus, idx] = current_index();
      return costume_detail(find_record(*corpus, req.matches[1].str()), *idx);
    }));

    server.Get("/api/search", wrap([this](const httplib::Request& req) {
      reject_unknown_params(req, {"q", "page", "page_size"});
      const auto page = page_request(req);
      const auto [corpus, idx] = current_index();
      const auto result = search_keyword(*idx, param(req, "q").value_or(""), page);
      Json out = paged(result.total, page);
      out["hits"] = Json::array();
      for (const auto& hit : result.hits) {
        Json item = costume_summary(find_record(*corpus, hit.costume_id));
        item["score"] = hit.score;
        out["hits"].push_back(std::move(item));
      }
      return out;
    }));

    server.Post("/api/favorites", wrap([this](const httplib::Request& req) {
      reject_unknown_params(req, {});
      const Json body = body_object(req);
      reject_unknown_keys(body, {"user_id", "costume_id"});
      const auto user = body_string(body, "user_id");
      const bool changed = store.add_favorite(user, body_string(body, "costume_id"));
      return Json{{"user_id", user}, {"costume_ids", store.list_favorites(user)}, {"changed", changed}};
    }));

    server.Delete("/api/favorites", wrap([this](const httplib::Request& req) {
      reject_unknown_params(req, {});
      const Json body = body_object(req);
      reject_unknown_keys(body, {"user_id", "costume_id"});
      const auto user = body_string(body, "user_id");
      const bool changed = store.remove_favorite(user, body_string(body, "costume_id"));
      return Json{{"user_id", user}, {"costume_ids", store.list_favorites(user)}, {"changed", changed}};
    }));

    server.Get("/api/favorites", wrap([this](const httplib::Request& req) {
      reject_unknown_params(req, {"user_id"});
      const auto user = param(req, "user_id").value_or("");
      if (user.empty()) throw Error(ErrorCode::kValidationFailed, "user_id is required");
      return Json{{"user_id", user}, {"costume_ids", store.list_favorites(user)}};
    }));

    server.Post("/api/generate", wrap([this](const httplib::Request& req) {
      reject_unknown_params(req, {});
      const Json body = body_object(req);
      const auto request = request_from_json(body, {"provider", "user_id", "save"});
      validate_request(request);
      const std::string provider = body.contains("provider") ? body_string(body, "provider") : "mock";
      std::optional<std::string> user;
      if (body.contains("user_id")) user = body_string(body, "user_id");
      bool save = true;
      if (const auto it = body.find("save"); it != body.end()) {
        if (!it->is_boolean()) throw Error(ErrorCode::kMalformedBody, "'save' must be a boolean");
        save = it->get<bool>();
      }

      const auto corpus = store.corpus();
      const auto& record = find_record(*corpus, request.costume_id);
      const auto prompt = assemble_prompt(record, request);
      auto artifact = providers.generate(provider, prompt, request, config.generate);
      const auto scaffold = validate_scaffold(artifact, prompt);
      Json out = {{"artifact", to_json(artifact)},
                  {"scaffold", to_json(scaffold)},
                  {"provenance", prompt.provenance}};
      out["artifact_id"] = save ? Json(store.append_artifact(std::move(artifact), user)) : Json(nullptr);
      return out;
    }));

    server.Get("/api/artifacts", wrap([this](const httplib::Request& req) {
      reject_unknown_params(req, {"costume_id", "user_id"});
      ArtifactFilter filter{param(req, "costume_id"), param(req, "user_id")};
      Json items = Json::array();
      for (const auto& entry : store.list_artifacts(filter)) {
        Json item = {{"id", entry.id}, {"artifact", to_json(entry.artifact)}};
        if (entry.user_id) item["user_id"] = *entry.user_id;
        items.push_back(std::move(item));
      }
      return Json{{"total", items.size()}, {"items", items}};
    }));

    const auto unknown = wrap([](const httplib::Request& req) -> Json {
      throw Error(ErrorCode::kUnknownRoute, "no route for " + req.method + " " + req.path);
    });
    server.Get(".*", unknown);
    server.Post(".*", unknown);
    server.Put(".*", unknown);
    server.Delete(".*", unknown);
    server.Patch(".*", unknown);
  }

  void bind() {
    if (bound_port >= 0) return;
    if (config.port == 0) {
      bound_port = server.bind_to_any_port(config.host);
    } else if (server.bind_to_port(config.host, config.port)) {
      bound_port = config.port;
    }
    if (bound_port < 0) {
      throw Error(ErrorCode::kPortBind,
                  "cannot bind " + config.host + ":" + std::to_string(config.port));
    }
  }
};

ApiService::ApiService(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

ApiService::~ApiService() { stop(); }

void ApiService::add_provider(std::shared_ptr<GenerationProvider> provider) {
  impl_->providers.add(std::move(provider));
}

int ApiService::bind() {
  impl_->bind();
  return impl_->bound_port;
}

int ApiService::start() {
  impl_->bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->bound_port;
}

void ApiService::run() {
  impl_->bind();
  impl_->server.listen_after_bind();
}

void ApiService::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int ApiService::port() const { return impl_->bound_port; }

Store& ApiService::store() { return impl_->store; }

}  // namespace gene_atlas
