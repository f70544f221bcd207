#pragma once

// Seeded synthetic corpus. Field values are drawn from the closed
// vocabularies; record i is additionally forced to carry term i mod |V| of
// each vocabulary, so every tag, middle dimension and inner concept appears
// at least once when n >= 12 (and every color class once n >= 3).

#include <cstdint>

#include "gene_atlas/random.hpp"
#include "gene_atlas/store.hpp"

namespace gene_atlas {

// Ids are "GA-0001" ... ; the corpus version equals n.
Corpus generate_corpus(std::uint32_t n, std::uint64_t seed);

// Titles of every seventh record are in Chinese script, to exercise the CJK
// tokenizer path.
CostumeRecord generate_record(std::uint32_t index, SplitMix64& rng);

}  // namespace gene_atlas
