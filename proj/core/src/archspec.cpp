#include "neurnkit/archspec.hpp"

#include <utility>

#include <json.hpp>

#include "neurnkit/error.hpp"

namespace neurnkit {

namespace {

// ordered_json keeps object members in document order, which fixes the
// alphabet's entry order and makes parsing deterministic.
using json = nlohmann::ordered_json;

json parse_json(std::string_view text, const char* what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw Error(std::string(what) + ": not well-formed JSON");
    }
    return doc;
}

} // namespace

LayerAlphabet::LayerAlphabet(std::vector<LayerKind> entries)
    : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw Error("alphabet: must contain at least one layer kind");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const LayerKind& kind = entries_[i];
        if (kind.name.empty()) {
            throw Error("alphabet: empty layer name at entry " + std::to_string(i));
        }
        if (!by_name_.emplace(kind.name, kind.code).second) {
            throw Error("alphabet: duplicate layer name \"" + kind.name + "\"");
        }
        if (!by_code_.emplace(kind.code, i).second) {
            throw Error("alphabet: duplicate code '" + std::string(1, kind.code) +
                        "' (layer \"" + kind.name + "\")");
        }
    }
}

bool LayerAlphabet::has_name(std::string_view name) const {
    return by_name_.find(std::string(name)) != by_name_.end();
}

bool LayerAlphabet::has_code(char code) const {
    return by_code_.find(code) != by_code_.end();
}

char LayerAlphabet::code_for(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) {
        throw Error("alphabet: unknown layer name \"" + std::string(name) + "\"");
    }
    return it->second;
}

const std::string& LayerAlphabet::name_for(char code) const {
    auto it = by_code_.find(code);
    if (it == by_code_.end()) {
        throw Error("alphabet: unknown code '" + std::string(1, code) + "'");
    }
    return entries_[it->second].name;
}

LayerAlphabet parse_alphabet(std::string_view text) {
    json doc = parse_json(text, "alphabet");
    if (!doc.is_object()) {
        throw Error("alphabet: document must be an object of name -> code");
    }
    std::vector<LayerKind> entries;
    entries.reserve(doc.size());
    for (const auto& [name, value] : doc.items()) {
        if (!value.is_string() || value.get<std::string>().size() != 1) {
            throw Error("alphabet: code for \"" + name +
                        "\" must be a single-character string");
        }
        entries.push_back({name, value.get<std::string>()[0]});
    }
    return LayerAlphabet(std::move(entries));
}

ArchSpec parse_spec(std::string_view text, const LayerAlphabet& alphabet) {
    json doc = parse_json(text, "spec");
    if (!doc.is_object() || !doc.contains("name") || !doc.contains("layers")) {
        throw Error("spec: document must be an object with \"name\" and \"layers\"");
    }
    if (!doc["name"].is_string() || doc["name"].get<std::string>().empty()) {
        throw Error("spec: \"name\" must be a non-empty string");
    }
    if (!doc["layers"].is_array() || doc["layers"].empty()) {
        throw Error("spec: \"layers\" must be a non-empty array");
    }

    ArchSpec spec;
    spec.name = doc["name"].get<std::string>();
    spec.layers.reserve(doc["layers"].size());
    std::size_t pos = 0;
    for (const auto& layer : doc["layers"]) {
        if (!layer.is_string()) {
            throw Error("spec \"" + spec.name + "\": layer at position " +
                        std::to_string(pos) + " is not a string");
        }
        const auto name = layer.get<std::string>();
        if (!alphabet.has_name(name)) {
            throw Error("spec \"" + spec.name + "\": unknown layer \"" + name +
                        "\" at position " + std::to_string(pos));
        }
        spec.layers.push_back(alphabet.code_for(name));
        ++pos;
    }
    return spec;
}

std::string encode(const ArchSpec& spec) {
    return spec.layers;
}

ArchSpec decode(std::string_view name, std::string_view codes,
                const LayerAlphabet& alphabet) {
    if (name.empty()) throw Error("decode: empty spec name");
    if (codes.empty()) throw Error("decode: empty code sequence");
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (!alphabet.has_code(codes[i])) {
            throw Error("decode \"" + std::string(name) + "\": unknown code '" +
                        std::string(1, codes[i]) + "' at position " + std::to_string(i));
        }
    }
    return ArchSpec{std::string(name), std::string(codes)};
}

std::vector<std::string> layer_names(const ArchSpec& spec,
                                     const LayerAlphabet& alphabet) {
    std::vector<std::string> names;
    names.reserve(spec.layers.size());
    for (char code : spec.layers) names.push_back(alphabet.name_for(code));
    return names;
}

std::string spec_to_json(const ArchSpec& spec, const LayerAlphabet& alphabet) {
    json doc;
    doc["name"] = spec.name;
    doc["layers"] = layer_names(spec, alphabet);
    return doc.dump(2) + "\n";
}

} // namespace neurnkit
