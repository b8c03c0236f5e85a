#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neurnkit/archspec.hpp"
#include "neurnkit/simmat.hpp"

namespace neurnkit {

/// Layer-combination mining settings. For any compared pair the maximum
/// combination length is n-1 where n is the shorter model's layer count;
/// this also applies to self-comparison.
struct PatternConfig {
    std::size_t min_len = 2;
    bool uniform_weights = false; // weight 1 per pattern instead of its length

    void validate() const;
};

/// Distinct contiguous layer combinations, ordered (std::set keeps the
/// enumeration deterministic).
using PatternSet = std::set<std::string>;

/// All distinct contiguous substrings of seq with length in
/// [min_len, max_len]. A sequence shorter than min_len yields an empty set.
PatternSet enumerate_ngrams(std::string_view seq, std::size_t min_len,
                            std::size_t max_len);

/// Sum of pattern weights (length each, or 1 when uniform).
std::size_t pattern_weight(const PatternSet& patterns, const PatternConfig& cfg);

/// Weighted common-combination score normalized so identical specs score 1:
/// W(common) / min(W(a), W(b)), in [0, 1], symmetric.
double pattern_similarity(const ArchSpec& a, const ArchSpec& b,
                          const PatternConfig& cfg);

struct RankedPattern {
    std::string pattern;              // encoded layer codes
    std::vector<std::string> models;  // containing models, input order
};

/// Combinations ranked by how many models contain them; ties prefer the
/// longer pattern, then lexicographic order. At most k entries.
std::vector<RankedPattern> top_common_patterns(std::span<const ArchSpec> specs,
                                               std::size_t k,
                                               const PatternConfig& cfg = {});

/// Symmetric unit-diagonal matrix of pattern_similarity over all pairs.
SimilarityMatrix pattern_matrix(std::span<const ArchSpec> specs,
                                const PatternConfig& cfg);

/// CSV rows: pattern as layer names joined by '+', containing-model count,
/// models joined by ';'.
std::string top_patterns_csv(std::span<const RankedPattern> ranked,
                             const LayerAlphabet& alphabet);

} // namespace neurnkit
