#pragma once

// Line-oriented JSON persistence for the corpus, favorites and the artifact
// log, plus the data-directory handle the CLI and service share.
//
// Every file starts with a header line {"format": "gene-atlas/1", ...}
// followed by one object per line. Writes go to a temp file that is renamed
// over the target, so a reader sees either the old or the new document.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gene_atlas/error.hpp"
#include "gene_atlas/narrative.hpp"
#include "gene_atlas/schema.hpp"

namespace gene_atlas {

inline constexpr std::string_view kFormatVersion = "gene-atlas/1";

// Error{kMalformedDocument} carrying the 1-based line that failed.
class DocumentError : public Error {
 public:
  DocumentError(const std::filesystem::path& path, std::size_t line, const std::string& reason);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Corpus {
  std::map<std::string, CostumeRecord> records;
  std::uint64_t version = 0;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// user id -> costume ids in insertion order
struct Favorites {
  std::map<std::string, std::vector<std::string>> by_user;

  friend bool operator==(const Favorites&, const Favorites&) = default;
};

struct StoredArtifact {
  std::uint64_t id = 0;
  std::optional<std::string> user_id;
  NarrativeArtifact artifact;

  friend bool operator==(const StoredArtifact&, const StoredArtifact&) = default;
};

struct ArtifactFilter {
  std::optional<std::string> costume_id;
  std::optional<std::string> user_id;
};

// DocumentError for syntax, schema, or count problems;
// Error{kVersionMismatch} for a header with another format string;
// Error{kIo} when the file cannot be read or written. A missing file loads as
// empty.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(const std::filesystem::path& path);

void save_favorites(const Favorites& favorites, const std::filesystem::path& path);
Favorites load_favorites(const std::filesystem::path& path);

void save_artifacts(const std::vector<StoredArtifact>& log, const std::filesystem::path& path);
std::vector<StoredArtifact> load_artifacts(const std::filesystem::path& path);

// Writes `contents` next to `path` and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

struct DanglingFavorite {
  std::string user_id;
  std::string costume_id;

  friend bool operator==(const DanglingFavorite&, const DanglingFavorite&) = default;
};

enum class AccessMode { kReadOnly, kReadWrite };

// An open data directory: corpus.jsonl, favorites.jsonl, artifacts.jsonl and
// a lock file. Read-write handles hold an exclusive lock, read-only handles a
// shared one; a conflicting open throws Error{kLockHeld}. Mutations are
// serialized internally and persisted before they return.
class Store {
 public:
  Store(const std::filesystem::path& data_dir, AccessMode mode);
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const std::filesystem::path& data_dir() const { return data_dir_; }

  std::shared_ptr<const Corpus> corpus() const;
  std::uint64_t corpus_version() const;

  // Throws Error{kDuplicateId} or Error{kValidationFailed}.
  void add_record(CostumeRecord record);
  // Replaces the whole corpus, e.g. with a generated fixture.
  void replace_corpus(Corpus corpus);
  // Throws Error{kUnknownCostume}. Favorites pointing at the record stay and
  // show up in dangling_favorites().
  void remove_record(const std::string& id);

  // Returns false when nothing changed. Throws Error{kUnknownCostume} (add)
  // or Error{kValidationFailed} for an empty user id.
  bool add_favorite(const std::string& user_id, const std::string& costume_id);
  bool remove_favorite(const std::string& user_id, const std::string& costume_id);
  std::vector<std::string> list_favorites(const std::string& user_id) const;
  std::vector<DanglingFavorite> dangling_favorites() const;

  std::uint64_t append_artifact(NarrativeArtifact artifact,
                                std::optional<std::string> user_id = std::nullopt);
  std::vector<StoredArtifact> list_artifacts(const ArtifactFilter& filter = {}) const;

 private:
  void require_writable() const;

  std::filesystem::path data_dir_;
  AccessMode mode_;
  int lock_fd_ = -1;

  mutable std::mutex mutex_;
  std::shared_ptr<const Corpus> corpus_;
  Favorites favorites_;
  std::vector<StoredArtifact> artifacts_;
};

}  // namespace gene_atlas
