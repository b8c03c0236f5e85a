#pragma once

#include <stdexcept>
#include <string>

namespace neurnkit {

/// Thrown for every validation, parse, and I/O failure in this library.
/// Messages carry enough context (names, indices, line numbers) to act on.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace neurnkit
