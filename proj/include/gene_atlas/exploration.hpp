#pragma once

// Gene-first index: tag postings for browse and related-costume hops, and a
// term-frequency token index for keyword search.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "gene_atlas/schema.hpp"

namespace gene_atlas {

struct GeneIndex {
  std::map<GeneTag, std::vector<std::string>> tag_postings;  // ids sorted ascending
  std::map<std::string, std::map<std::string, std::uint32_t>> token_postings;
  std::vector<std::string> id_order;
  std::map<std::string, std::vector<GeneTag>> costume_tags;

  friend bool operator==(const GeneIndex&, const GeneIndex&) = default;
};

inline constexpr std::uint32_t kMaxPageSize = 100;
inline constexpr std::uint32_t kDefaultPageSize = 20;

class PageRequest {
 public:
  // Throws Error{kInvalidPage} unless page >= 1 and 1 <= page_size <= 100.
  PageRequest(std::uint64_t page = 1, std::uint64_t page_size = kDefaultPageSize);

  // Everything on one page; for oracles and internal listings.
  static PageRequest all() { return PageRequest(Unchecked{}); }

  std::uint64_t page() const { return page_; }
  std::uint64_t page_size() const { return page_size_; }

  template <typename T>
  std::vector<T> slice(std::span<const T> items) const {
    const std::uint64_t offset = (page_ - 1) * page_size_;
    if (offset >= items.size()) return {};
    const auto end = std::min<std::uint64_t>(items.size(), offset + page_size_);
    return {items.begin() + static_cast<std::ptrdiff_t>(offset),
            items.begin() + static_cast<std::ptrdiff_t>(end)};
  }

 private:
  struct Unchecked {};
  explicit PageRequest(Unchecked) : page_(1), page_size_(UINT32_MAX) {}

  std::uint64_t page_;
  std::uint64_t page_size_;
};

struct BrowseResult {
  std::size_t total = 0;
  std::vector<std::string> ids;

  friend bool operator==(const BrowseResult&, const BrowseResult&) = default;
};

struct SearchHit {
  std::string costume_id;
  std::uint64_t score = 0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

struct SearchResult {
  std::size_t total = 0;
  std::vector<SearchHit> hits;

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

struct RelatedGroup {
  GeneTag tag;
  std::vector<std::string> ids;

  friend bool operator==(const RelatedGroup&, const RelatedGroup&) = default;
};

// Text fields that feed the token index for one record.
std::vector<std::string> indexed_text(const CostumeRecord& record);

// Throws Error{kDuplicateId}.
GeneIndex build_index(std::span<const CostumeRecord> records);

BrowseResult browse_by_tag(const GeneIndex& index, const GeneTag& tag, const PageRequest& page);

// AND over query tokens, score = summed term frequency, ordered by score
// descending then id. Throws Error{kEmptyQuery} when no tokens remain.
SearchResult search_keyword(const GeneIndex& index, std::string_view query,
                            const PageRequest& page);

// Throws Error{kUnknownCostume}.
std::vector<RelatedGroup> related_costumes(const GeneIndex& index, const std::string& costume_id,
                                           GeneCategory category);

// Holds the current immutable index; readers get a snapshot, rebuilds swap a
// fresh one in.
class IndexHolder {
 public:
  std::shared_ptr<const GeneIndex> snapshot() const;
  void publish(std::shared_ptr<const GeneIndex> index, std::uint64_t corpus_version);
  std::uint64_t corpus_version() const;

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const GeneIndex> index_ = std::make_shared<GeneIndex>();
  std::uint64_t corpus_version_ = 0;
};

}  // namespace gene_atlas
