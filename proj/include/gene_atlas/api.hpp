#pragma once

// HTTP/JSON service over one data directory. Routes:
//
//   GET    /api/taxonomies
//   GET    /api/tags/{category}
//   GET    /api/costumes?tag=&page=&page_size=
//   GET    /api/costumes/{id}
//   GET    /api/search?q=&page=&page_size=
//   POST   /api/favorites      {user_id, costume_id}
//   DELETE /api/favorites      {user_id, costume_id}
//   GET    /api/favorites?user_id=
//   POST   /api/generate       {costume_id, context_theme, inner_concept, seed,
//                               user_note?, provider?, user_id?, save?}
//   GET    /api/artifacts?costume_id=&user_id=
//
// Errors come back as {code, message} with the status from http_status().

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "gene_atlas/exploration.hpp"
#include "gene_atlas/json_codec.hpp"
#include "gene_atlas/narrative.hpp"
#include "gene_atlas/store.hpp"

namespace gene_atlas {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path data_dir;
  std::optional<RemoteProviderConfig> remote;
  GenerateOptions generate;
};

// Shapes shared by the service and the CLI.
Json costume_summary(const CostumeRecord& record);
Json costume_detail(const CostumeRecord& record, const GeneIndex& index);
Json tag_listing(const GeneIndex& index, GeneCategory category);
Json error_body(const Error& error);

class ApiService {
 public:
  // Opens the data directory read-write; throws Error{kLockHeld} if another
  // handle owns it.
  explicit ApiService(ServiceConfig config);
  ~ApiService();
  ApiService(const ApiService&) = delete;
  ApiService& operator=(const ApiService&) = delete;

  // Extra providers, e.g. a scripted one in tests. The mock provider is always
  // registered, the remote one when configured.
  void add_provider(std::shared_ptr<GenerationProvider> provider);

  // Binds without serving yet; returns the bound port. Throws
  // Error{kPortBind}.
  int bind();
  // Binds and serves on a background thread; returns the bound port. Throws
  // Error{kPortBind}.
  int start();
  // Binds and serves on the calling thread until stop().
  void run();
  void stop();

  int port() const;
  Store& store();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gene_atlas
