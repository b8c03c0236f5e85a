#include <benchmark/benchmark.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "neurnkit/align.hpp"
#include "neurnkit/archspec.hpp"
#include "neurnkit/imageio.hpp"
#include "neurnkit/patterns.hpp"
#include "neurnkit/rng.hpp"

using namespace neurnkit;

namespace {

std::string random_sequence(std::size_t len, std::uint64_t seed) {
    static constexpr char kSymbols[] = "CBRMADSF";
    Rng rng(seed);
    std::string seq;
    seq.reserve(len);
    for (std::size_t i = 0; i < len; ++i) seq.push_back(kSymbols[rng.below(8)]);
    return seq;
}

std::vector<ArchSpec> bundled_specs() {
    const std::filesystem::path data_dir = NEURNKIT_DATA_DIR;
    const LayerAlphabet alphabet =
        parse_alphabet(read_file(data_dir / "alphabet.json"));
    std::vector<std::filesystem::path> files;
    for (const auto& entry :
         std::filesystem::directory_iterator(data_dir / "archspecs")) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<ArchSpec> specs;
    for (const auto& file : files) specs.push_back(parse_spec(read_file(file), alphabet));
    return specs;
}

void BM_nw_score(benchmark::State& state) {
    const auto len = static_cast<std::size_t>(state.range(0));
    const std::string a = random_sequence(len, 1);
    const std::string b = random_sequence(len, 2);
    const ScoreParams params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nw_score(a, b, params));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(len * len));
}

void BM_pairwise_matrix_bundled(benchmark::State& state) {
    const auto specs = bundled_specs();
    const ScoreParams params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pairwise_matrix(specs, params));
    }
}

void BM_pattern_matrix_bundled(benchmark::State& state) {
    const auto specs = bundled_specs();
    const PatternConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pattern_matrix(specs, cfg));
    }
}

} // namespace

BENCHMARK(BM_nw_score)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_pairwise_matrix_bundled);
BENCHMARK(BM_pattern_matrix_bundled)->Unit(benchmark::kMillisecond);
