#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace neurnkit {

/// One layer type: a human-readable name paired with the single-character
/// code used when an architecture is encoded as a string.
struct LayerKind {
    std::string name;
    char code;
};

/// Bijective name<->code table for a set of layer kinds. Immutable after
/// construction and safe to share across threads.
class LayerAlphabet {
public:
    /// Validates bijectivity; throws Error naming the first duplicate.
    explicit LayerAlphabet(std::vector<LayerKind> entries);

    std::size_t size() const { return entries_.size(); }
    const std::vector<LayerKind>& entries() const { return entries_; }

    bool has_name(std::string_view name) const;
    bool has_code(char code) const;
    char code_for(std::string_view name) const;
    const std::string& name_for(char code) const;

private:
    std::vector<LayerKind> entries_;
    std::unordered_map<std::string, char> by_name_;
    std::unordered_map<char, std::size_t> by_code_;
};

/// A named architecture as an ordered sequence of layer-kind codes.
/// Every code is guaranteed to belong to the alphabet it was parsed with.
struct ArchSpec {
    std::string name;
    std::string layers; // one code per layer, document order

    std::size_t layer_count() const { return layers.size(); }
};

/// Parses an alphabet document: a JSON object mapping layer name to a
/// single-character code, in document order.
LayerAlphabet parse_alphabet(std::string_view text);

/// Parses a spec document ({"name": ..., "layers": [names...]}) against a
/// validated alphabet. Order is preserved exactly; the first unknown layer
/// name is reported with its zero-based position.
ArchSpec parse_spec(std::string_view text, const LayerAlphabet& alphabet);

/// The spec's layer sequence as a plain symbol string. Pure.
std::string encode(const ArchSpec& spec);

/// Rebuilds an ArchSpec from an encoded symbol string, validating every
/// code against the alphabet. decode(encode(s)) == s for any valid spec.
ArchSpec decode(std::string_view name, std::string_view codes,
                const LayerAlphabet& alphabet);

/// Layer names of a spec in order, resolved through the alphabet.
std::vector<std::string> layer_names(const ArchSpec& spec,
                                     const LayerAlphabet& alphabet);

/// Serializes a spec back to its document form.
std::string spec_to_json(const ArchSpec& spec, const LayerAlphabet& alphabet);

} // namespace neurnkit
