#include "gene_atlas/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "gene_atlas/annotation.hpp"
#include "gene_atlas/json_codec.hpp"

namespace fs = std::filesystem;

namespace gene_atlas {
namespace {

std::string errno_text() { return std::strerror(errno); }

std::string document_line(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::strict) + "\n";
}

// Splits on LF; a trailing CR is dropped. The final element is the text
// after the last LF (empty for a well-terminated file).
std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find('\n', start);
    std::string line = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (lines.back().empty()) lines.pop_back();
  return lines;
}

std::optional<std::string> read_file(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Parses header + body lines. `on_header` receives the header object,
// `on_line` each body object; both may throw Error, which is reported with
// the line number. Returns the number of body lines.
struct DocumentReader {
  const fs::path& path;

  std::size_t read(const std::string& text, const std::function<void(const Json&)>& on_header,
                   const std::function<void(const Json&, std::size_t)>& on_line,
                   std::optional<std::uint64_t>* declared_count) const {
    const auto lines = split_lines(text);
    if (lines.empty()) throw DocumentError(path, 1, "missing header line");
    std::size_t body = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::size_t line_no = i + 1;
      Json j;
      try {
        j = Json::parse(lines[i]);
      } catch (const Json::parse_error& e) {
        throw DocumentError(path, line_no, std::string("invalid JSON: ") + e.what());
      }
      if (!j.is_object()) throw DocumentError(path, line_no, "expected a JSON object");
      try {
        if (i == 0) {
          read_header(j, declared_count);
          on_header(j);
        } else {
          on_line(j, line_no);
          ++body;
        }
      } catch (const DocumentError&) {
        throw;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kVersionMismatch) throw;
        throw DocumentError(path, line_no, e.what());
      } catch (const Json::exception& e) {
        throw DocumentError(path, line_no, e.what());
      }
    }
    if (declared_count && *declared_count && **declared_count != body) {
      throw DocumentError(path, body + 2,
                          "header declares " + std::to_string(**declared_count) +
                              " entries but the file ends after " + std::to_string(body));
    }
    return body;
  }

  void read_header(const Json& j, std::optional<std::uint64_t>* declared_count) const {
    const auto format = j.find("format");
    if (format == j.end() || !format->is_string()) {
      throw Error(ErrorCode::kMalformedBody, "header has no format string");
    }
    if (format->get<std::string>() != kFormatVersion) {
      throw Error(ErrorCode::kVersionMismatch, path.string() + ": unsupported format '" +
                                                   format->get<std::string>() + "', expected '" +
                                                   std::string(kFormatVersion) + "'");
    }
    if (declared_count) {
      if (auto count = j.find("count"); count != j.end()) {
        if (!count->is_number_unsigned()) {
          throw Error(ErrorCode::kMalformedBody, "header count must be a non-negative integer");
        }
        *declared_count = count->get<std::uint64_t>();
      }
    }
  }
};

std::string header_line(std::size_t count, std::optional<std::uint64_t> version = std::nullopt) {
  Json header = {{"format", kFormatVersion}, {"count", count}};
  if (version) header["version"] = *version;
  return document_line(header);
}

}  // namespace

DocumentError::DocumentError(const fs::path& path, std::size_t line, const std::string& reason)
    : Error(ErrorCode::kMalformedDocument,
            path.string() + ":" + std::to_string(line) + ": " + reason),
      line_(line) {}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorCode::kIo, "cannot write " + tmp.string() + ": " + errno_text());
  std::size_t written = 0;
  while (written < contents.size()) {
    const auto n = ::write(fd, contents.data() + written, contents.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const auto reason = errno_text();
      ::close(fd);
      throw Error(ErrorCode::kIo, "cannot write " + tmp.string() + ": " + reason);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    throw Error(ErrorCode::kIo, "cannot flush " + tmp.string() + ": " + errno_text());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename into " + path.string() + ": " + ec.message());
}

void save_corpus(const Corpus& corpus, const fs::path& path) {
  std::string out = header_line(corpus.records.size(), corpus.version);
  for (const auto& [id, record] : corpus.records) out += document_line(to_json(record));
  write_file_atomic(path, out);
}

Corpus load_corpus(const fs::path& path) {
  Corpus corpus;
  const auto text = read_file(path);
  if (!text) return corpus;
  std::optional<std::uint64_t> count;
  DocumentReader{path}.read(
      *text,
      [&](const Json& header) {
        const auto version = header.find("version");
        if (version == header.end() || !version->is_number_unsigned()) {
          throw Error(ErrorCode::kMalformedBody, "corpus header needs a non-negative version");
        }
        corpus.version = version->get<std::uint64_t>();
      },
      [&](const Json& j, std::size_t) {
        auto record = record_from_json(j);
        const auto result = validate_record(record);
        if (!result.ok()) {
          throw Error(ErrorCode::kValidationFailed, "invalid record: " + describe(result.violations));
        }
        if (corpus.records.contains(record.id)) {
          throw Error(ErrorCode::kDuplicateId, "duplicate id " + record.id);
        }
        auto id = record.id;
        corpus.records.emplace(std::move(id), std::move(record));
      },
      &count);
  return corpus;
}

void save_favorites(const Favorites& favorites, const fs::path& path) {
  std::string out = header_line(favorites.by_user.size());
  for (const auto& [user, ids] : favorites.by_user) {
    out += document_line({{"user_id", user}, {"costume_ids", ids}});
  }
  write_file_atomic(path, out);
}

Favorites load_favorites(const fs::path& path) {
  Favorites favorites;
  const auto text = read_file(path);
  if (!text) return favorites;
  std::optional<std::uint64_t> count;
  DocumentReader{path}.read(
      *text, [](const Json&) {},
      [&](const Json& j, std::size_t) {
        const auto user = j.at("user_id").get<std::string>();
        auto ids = j.at("costume_ids").get<std::vector<std::string>>();
        if (user.empty()) throw Error(ErrorCode::kMalformedBody, "empty user_id");
        if (j.size() != 2) throw Error(ErrorCode::kUnknownField, "unexpected favorites field");
        if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size()) {
          throw Error(ErrorCode::kMalformedBody, "duplicate favorite for " + user);
        }
        if (!favorites.by_user.emplace(user, std::move(ids)).second) {
          throw Error(ErrorCode::kMalformedBody, "user " + user + " listed twice");
        }
      },
      &count);
  return favorites;
}

void save_artifacts(const std::vector<StoredArtifact>& log, const fs::path& path) {
  std::string out = header_line(log.size());
  for (const auto& entry : log) {
    Json line = {{"id", entry.id}, {"artifact", to_json(entry.artifact)}};
    if (entry.user_id) line["user_id"] = *entry.user_id;
    out += document_line(line);
  }
  write_file_atomic(path, out);
}

std::vector<StoredArtifact> load_artifacts(const fs::path& path) {
  std::vector<StoredArtifact> log;
  const auto text = read_file(path);
  if (!text) return log;
  std::optional<std::uint64_t> count;
  DocumentReader{path}.read(
      *text, [](const Json&) {},
      [&](const Json& j, std::size_t) {
        StoredArtifact entry;
        entry.id = j.at("id").get<std::uint64_t>();
        if (entry.id != log.size() + 1) {
          throw Error(ErrorCode::kMalformedBody, "artifact ids must be dense and ascending, got " +
                                                     std::to_string(entry.id));
        }
        entry.artifact = artifact_from_json(j.at("artifact"));
        std::size_t known = 2;
        if (auto user = j.find("user_id"); user != j.end()) {
          entry.user_id = user->get<std::string>();
          ++known;
        }
        if (j.size() != known) throw Error(ErrorCode::kUnknownField, "unexpected artifact field");
        log.push_back(std::move(entry));
      },
      &count);
  return log;
}

// ---------------------------------------------------------------------------
// Store
// ---------------------------------------------------------------------------

Store::Store(const fs::path& data_dir, AccessMode mode) : data_dir_(data_dir), mode_(mode) {
  std::error_code ec;
  fs::create_directories(data_dir_, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + data_dir_.string() + ": " + ec.message());

  const auto lock_path = data_dir_ / "lock";
  lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (lock_fd_ < 0) throw Error(ErrorCode::kIo, "cannot open " + lock_path.string() + ": " + errno_text());
  const int op = (mode_ == AccessMode::kReadWrite ? LOCK_EX : LOCK_SH) | LOCK_NB;
  if (::flock(lock_fd_, op) != 0) {
    ::close(lock_fd_);
    lock_fd_ = -1;
    throw Error(ErrorCode::kLockHeld, "data directory " + data_dir_.string() +
                                          " is locked by another process or handle");
  }

  try {
    corpus_ = std::make_shared<const Corpus>(load_corpus(data_dir_ / "corpus.jsonl"));
    favorites_ = load_favorites(data_dir_ / "favorites.jsonl");
    artifacts_ = load_artifacts(data_dir_ / "artifacts.jsonl");
  } catch (...) {
    ::close(lock_fd_);
    lock_fd_ = -1;
    throw;
  }
}

Store::~Store() {
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

void Store::require_writable() const {
  if (mode_ != AccessMode::kReadWrite) {
    throw Error(ErrorCode::kInvalidArgument, "store opened read-only");
  }
}

std::shared_ptr<const Corpus> Store::corpus() const {
  std::lock_guard lock(mutex_);
  return corpus_;
}

std::uint64_t Store::corpus_version() const {
  std::lock_guard lock(mutex_);
  return corpus_->version;
}

void Store::add_record(CostumeRecord record) {
  require_writable();
  std::lock_guard lock(mutex_);
  if (corpus_->records.contains(record.id)) {
    throw Error(ErrorCode::kDuplicateId, "costume id already exists: " + record.id);
  }
  const auto result = validate_record(record);
  if (!result.ok()) throw Error(ErrorCode::kValidationFailed, describe(result.violations));
  auto next = std::make_shared<Corpus>(*corpus_);
  auto id = record.id;
  next->records.emplace(std::move(id), std::move(record));
  ++next->version;
  save_corpus(*next, data_dir_ / "corpus.jsonl");
  corpus_ = std::move(next);
}

void Store::replace_corpus(Corpus corpus) {
  require_writable();
  for (const auto& [id, record] : corpus.records) {
    if (id != record.id) throw Error(ErrorCode::kValidationFailed, "record keyed as " + id + " has id " + record.id);
    const auto result = validate_record(record);
    if (!result.ok()) {
      throw Error(ErrorCode::kValidationFailed, id + ": " + describe(result.violations));
    }
  }
  std::lock_guard lock(mutex_);
  save_corpus(corpus, data_dir_ / "corpus.jsonl");
  corpus_ = std::make_shared<const Corpus>(std::move(corpus));
}

void Store::remove_record(const std::string& id) {
  require_writable();
  std::lock_guard lock(mutex_);
  if (!corpus_->records.contains(id)) throw Error(ErrorCode::kUnknownCostume, "unknown costume: " + id);
  auto next = std::make_shared<Corpus>(*corpus_);
  next->records.erase(id);
  ++next->version;
  save_corpus(*next, data_dir_ / "corpus.jsonl");
  corpus_ = std::move(next);
}

bool Store::add_favorite(const std::string& user_id, const std::string& costume_id) {
  require_writable();
  if (user_id.empty()) throw Error(ErrorCode::kValidationFailed, "user_id must not be empty");
  std::lock_guard lock(mutex_);
  if (!corpus_->records.contains(costume_id)) {
    throw Error(ErrorCode::kUnknownCostume, "unknown costume: " + costume_id);
  }
  auto next = favorites_;
  auto& ids = next.by_user[user_id];
  if (std::find(ids.begin(), ids.end(), costume_id) != ids.end()) return false;
  ids.push_back(costume_id);
  save_favorites(next, data_dir_ / "favorites.jsonl");
  favorites_ = std::move(next);
  return true;
}

bool Store::remove_favorite(const std::string& user_id, const std::string& costume_id) {
  require_writable();
  if (user_id.empty()) throw Error(ErrorCode::kValidationFailed, "user_id must not be empty");
  std::lock_guard lock(mutex_);
  const auto user = favorites_.by_user.find(user_id);
  if (user == favorites_.by_user.end()) return false;
  const auto it = std::find(user->second.begin(), user->second.end(), costume_id);
  if (it == user->second.end()) return false;
  auto next = favorites_;
  auto& ids = next.by_user[user_id];
  ids.erase(std::find(ids.begin(), ids.end(), costume_id));
  if (ids.empty()) next.by_user.erase(user_id);
  save_favorites(next, data_dir_ / "favorites.jsonl");
  favorites_ = std::move(next);
  return true;
}

std::vector<std::string> Store::list_favorites(const std::string& user_id) const {
  std::lock_guard lock(mutex_);
  const auto it = favorites_.by_user.find(user_id);
  if (it == favorites_.by_user.end()) return {};
  return it->second;
}

std::vector<DanglingFavorite> Store::dangling_favorites() const {
  std::lock_guard lock(mutex_);
  std::vector<DanglingFavorite> out;
  for (const auto& [user, ids] : favorites_.by_user) {
    for (const auto& id : ids) {
      if (!corpus_->records.contains(id)) out.push_back({user, id});
    }
  }
  return out;
}

std::uint64_t Store::append_artifact(NarrativeArtifact artifact, std::optional<std::string> user_id) {
  require_writable();
  std::lock_guard lock(mutex_);
  auto next = artifacts_;
  const std::uint64_t id = next.size() + 1;
  next.push_back({id, std::move(user_id), std::move(artifact)});
  save_artifacts(next, data_dir_ / "artifacts.jsonl");
  artifacts_ = std::move(next);
  return id;
}

std::vector<StoredArtifact> Store::list_artifacts(const ArtifactFilter& filter) const {
  std::lock_guard lock(mutex_);
  std::vector<StoredArtifact> out;
  for (const auto& entry : artifacts_) {
    if (filter.costume_id && entry.artifact.request.costume_id != *filter.costume_id) continue;
    if (filter.user_id && entry.user_id != filter.user_id) continue;
    out.push_back(entry);
  }
  return out;
}

}  // namespace gene_atlas
