#include "neurnkit/patterns.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "neurnkit/error.hpp"

namespace neurnkit {

void PatternConfig::validate() const {
    if (min_len < 2) throw Error("pattern config: min_len must be >= 2");
}

PatternSet enumerate_ngrams(std::string_view seq, std::size_t min_len,
                            std::size_t max_len) {
    PatternSet patterns;
    if (seq.size() < min_len || max_len < min_len) return patterns;
    const std::size_t longest = std::min(max_len, seq.size());
    for (std::size_t len = min_len; len <= longest; ++len) {
        for (std::size_t start = 0; start + len <= seq.size(); ++start) {
            patterns.emplace(seq.substr(start, len));
        }
    }
    return patterns;
}

std::size_t pattern_weight(const PatternSet& patterns, const PatternConfig& cfg) {
    std::size_t weight = 0;
    for (const auto& p : patterns) weight += cfg.uniform_weights ? 1 : p.size();
    return weight;
}

namespace {

std::size_t pair_max_len(const ArchSpec& a, const ArchSpec& b) {
    return std::min(a.layer_count(), b.layer_count()) - 1;
}

void check_pair_lengths(const ArchSpec& a, const ArchSpec& b,
                        const PatternConfig& cfg) {
    // Both specs need min_len + 1 layers so that max_len = n-1 >= min_len.
    for (const ArchSpec* s : {&a, &b}) {
        if (s->layer_count() < cfg.min_len + 1) {
            throw Error("patterns: spec \"" + s->name + "\" has " +
                        std::to_string(s->layer_count()) + " layers, need at least " +
                        std::to_string(cfg.min_len + 1));
        }
    }
}

} // namespace

double pattern_similarity(const ArchSpec& a, const ArchSpec& b,
                          const PatternConfig& cfg) {
    cfg.validate();
    check_pair_lengths(a, b, cfg);
    const std::size_t max_len = pair_max_len(a, b);

    const PatternSet a_set = enumerate_ngrams(a.layers, cfg.min_len, max_len);
    const PatternSet b_set = enumerate_ngrams(b.layers, cfg.min_len, max_len);

    PatternSet common;
    std::set_intersection(a_set.begin(), a_set.end(), b_set.begin(), b_set.end(),
                          std::inserter(common, common.begin()));

    const std::size_t denom =
        std::min(pattern_weight(a_set, cfg), pattern_weight(b_set, cfg));
    return static_cast<double>(pattern_weight(common, cfg)) /
           static_cast<double>(denom);
}

std::vector<RankedPattern> top_common_patterns(std::span<const ArchSpec> specs,
                                               std::size_t k,
                                               const PatternConfig& cfg) {
    cfg.validate();
    if (k == 0) throw Error("patterns: k must be > 0");
    if (specs.size() < 2) throw Error("patterns: need at least 2 specs");

    // Per-model sets use the self rule: max_len = own layer count - 1.
    std::map<std::string, std::vector<std::string>> containers;
    for (const auto& spec : specs) {
        if (spec.layer_count() < cfg.min_len + 1) {
            throw Error("patterns: spec \"" + spec.name + "\" has " +
                        std::to_string(spec.layer_count()) + " layers, need at least " +
                        std::to_string(cfg.min_len + 1));
        }
        const PatternSet set =
            enumerate_ngrams(spec.layers, cfg.min_len, spec.layer_count() - 1);
        for (const auto& p : set) containers[p].push_back(spec.name);
    }

    std::vector<RankedPattern> ranked;
    ranked.reserve(containers.size());
    for (auto& [pattern, models] : containers) {
        ranked.push_back({pattern, std::move(models)});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedPattern& x, const RankedPattern& y) {
                         if (x.models.size() != y.models.size()) {
                             return x.models.size() > y.models.size();
                         }
                         if (x.pattern.size() != y.pattern.size()) {
                             return x.pattern.size() > y.pattern.size();
                         }
                         return x.pattern < y.pattern;
                     });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

SimilarityMatrix pattern_matrix(std::span<const ArchSpec> specs,
                                const PatternConfig& cfg) {
    cfg.validate();
    if (specs.size() < 2) throw Error("patterns: need at least 2 specs");
    std::unordered_set<std::string> names;
    for (const auto& spec : specs) {
        if (!names.insert(spec.name).second) {
            throw Error("patterns: duplicate spec name \"" + spec.name + "\"");
        }
    }

    const std::size_t n = specs.size();
    std::vector<std::string> labels;
    labels.reserve(n);
    for (const auto& spec : specs) labels.push_back(spec.name);

    std::vector<double> values(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = pattern_similarity(specs[i], specs[j], cfg);
            values[i * n + j] = s;
            values[j * n + i] = s;
        }
    }
    return SimilarityMatrix(std::move(labels), std::move(values),
                            MatrixKind::similarity);
}

std::string top_patterns_csv(std::span<const RankedPattern> ranked,
                             const LayerAlphabet& alphabet) {
    std::string out = "pattern,model_count,models\n";
    for (const auto& entry : ranked) {
        std::string joined;
        for (char code : entry.pattern) {
            if (!joined.empty()) joined += '+';
            joined += alphabet.name_for(code);
        }
        out += joined;
        out += ',';
        out += std::to_string(entry.models.size());
        out += ',';
        for (std::size_t i = 0; i < entry.models.size(); ++i) {
            if (i > 0) out += ';';
            out += entry.models[i];
        }
        out += '\n';
    }
    return out;
}

} // namespace neurnkit
