#include "gene_atlas/exploration.hpp"

#include <algorithm>
#include <set>

#include "gene_atlas/error.hpp"
#include "gene_atlas/text.hpp"

namespace gene_atlas {

PageRequest::PageRequest(std::uint64_t page, std::uint64_t page_size)
    : page_(page), page_size_(page_size) {
  if (page < 1) throw Error(ErrorCode::kInvalidPage, "page must be >= 1");
  if (page_size < 1 || page_size > kMaxPageSize) {
    throw Error(ErrorCode::kInvalidPage, "page_size must be within [1, 100]");
  }
}

std::vector<std::string> indexed_text(const CostumeRecord& record) {
  std::vector<std::string> out{record.title, record.ethnic_group};
  if (record.region) out.push_back(*record.region);
  for (const auto& pattern : record.surface.patterns) {
    for (const auto& motif : pattern.motifs) out.push_back(motif);
  }
  for (const auto& tag : record_tags(record)) out.emplace_back(tag.display());
  return out;
}

GeneIndex build_index(std::span<const CostumeRecord> records) {
  GeneIndex index;
  std::set<std::string> ids;
  for (const auto& record : records) {
    if (!ids.insert(record.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate costume id: " + record.id);
    }
  }
  index.id_order.assign(ids.begin(), ids.end());

  for (const auto& record : records) {
    auto tags = record_tags(record);
    for (const auto& tag : tags) index.tag_postings[tag].push_back(record.id);
    index.costume_tags[record.id] = std::move(tags);
    for (const auto& field : indexed_text(record)) {
      for (auto& token : text::tokenize(field)) ++index.token_postings[token][record.id];
    }
  }
  for (auto& [tag, posting] : index.tag_postings) std::sort(posting.begin(), posting.end());
  return index;
}

BrowseResult browse_by_tag(const GeneIndex& index, const GeneTag& tag, const PageRequest& page) {
  const auto it = index.tag_postings.find(tag);
  if (it == index.tag_postings.end()) return {};
  return {it->second.size(), page.slice(std::span<const std::string>(it->second))};
}

SearchResult search_keyword(const GeneIndex& index, std::string_view query,
                            const PageRequest& page) {
  auto tokens = text::tokenize_query(query);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  if (tokens.empty()) throw Error(ErrorCode::kEmptyQuery, "query has no searchable terms");

  std::vector<const std::map<std::string, std::uint32_t>*> postings;
  for (const auto& token : tokens) {
    const auto it = index.token_postings.find(token);
    if (it == index.token_postings.end()) return {};
    postings.push_back(&it->second);
  }
  std::sort(postings.begin(), postings.end(),
            [](const auto* a, const auto* b) { return a->size() < b->size(); });

  std::vector<SearchHit> hits;
  for (const auto& [id, freq] : *postings.front()) {
    std::uint64_t score = freq;
    bool all = true;
    for (std::size_t i = 1; i < postings.size() && all; ++i) {
      const auto it = postings[i]->find(id);
      if (it == postings[i]->end()) {
        all = false;
      } else {
        score += it->second;
      }
    }
    if (all) hits.push_back({id, score});
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.costume_id < b.costume_id;
  });
  return {hits.size(), page.slice(std::span<const SearchHit>(hits))};
}

std::vector<RelatedGroup> related_costumes(const GeneIndex& index, const std::string& costume_id,
                                           GeneCategory category) {
  const auto it = index.costume_tags.find(costume_id);
  if (it == index.costume_tags.end()) {
    throw Error(ErrorCode::kUnknownCostume, "unknown costume: " + costume_id);
  }
  std::vector<RelatedGroup> out;
  for (const auto& tag : it->second) {
    if (tag.category() != category) continue;
    RelatedGroup group{tag, {}};
    for (const auto& id : index.tag_postings.at(tag)) {
      if (id != costume_id) group.ids.push_back(id);
    }
    out.push_back(std::move(group));
  }
  return out;
}

std::shared_ptr<const GeneIndex> IndexHolder::snapshot() const {
  std::lock_guard lock(mutex_);
  return index_;
}

void IndexHolder::publish(std::shared_ptr<const GeneIndex> index, std::uint64_t corpus_version) {
  std::lock_guard lock(mutex_);
  index_ = std::move(index);
  corpus_version_ = corpus_version;
}

std::uint64_t IndexHolder::corpus_version() const {
  std::lock_guard lock(mutex_);
  return corpus_version_;
}

}  // namespace gene_atlas
