#pragma once

namespace neurnkit {

inline constexpr const char* kVersion = "0.1.0";
/// Version of the bundled data fixtures (alphabet, architecture specs,
/// transfer-accuracy table); bumped whenever any fixture changes.
inline constexpr const char* kFixtureVersion = "1";

} // namespace neurnkit
