#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neurnkit/align.hpp"
#include "neurnkit/archspec.hpp"
#include "neurnkit/error.hpp"
#include "neurnkit/harness.hpp"
#include "neurnkit/imageio.hpp"
#include "neurnkit/neurn.hpp"
#include "neurnkit/patterns.hpp"
#include "neurnkit/simmat.hpp"
#include "neurnkit/version.hpp"

namespace fs = std::filesystem;
using namespace neurnkit;

namespace {

// All outputs go through a temp file + rename so a failure never leaves a
// partial artifact behind.
void atomic_write(const fs::path& path, std::string_view bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    try {
        write_file(tmp, bytes);
        fs::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

std::string format6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct SpecSet {
    LayerAlphabet alphabet;
    std::vector<ArchSpec> specs;
};

fs::path find_alphabet(const fs::path& specs_dir, const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    for (const fs::path& candidate :
         {specs_dir / "alphabet.json", specs_dir.parent_path() / "alphabet.json"}) {
        if (fs::exists(candidate)) return candidate;
    }
    throw Error("no alphabet file given and none found next to " + specs_dir.string());
}

SpecSet load_specs(const std::string& specs_dir, const std::string& alphabet_path) {
    const fs::path dir(specs_dir);
    if (!fs::is_directory(dir)) throw Error(specs_dir + " is not a directory");

    LayerAlphabet alphabet = parse_alphabet(read_file(find_alphabet(dir, alphabet_path)));

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json" &&
            entry.path().filename() != "alphabet.json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.size() < 2) {
        throw Error("need at least 2 spec files in " + specs_dir + ", found " +
                    std::to_string(files.size()));
    }

    std::vector<ArchSpec> specs;
    specs.reserve(files.size());
    for (const auto& file : files) {
        try {
            specs.push_back(parse_spec(read_file(file), alphabet));
        } catch (const Error& e) {
            throw Error(file.string() + ": " + e.what());
        }
    }
    return SpecSet{std::move(alphabet), std::move(specs)};
}

bool looks_like_idx(std::string_view bytes) {
    return bytes.size() >= 4 && bytes[0] == '\0' && bytes[1] == '\0';
}

struct NeurnApplyArgs {
    std::string input, output, padding = "replicate";
    int k = 3;
    bool global_max = false;
};

void run_neurn_apply(const NeurnApplyArgs& args) {
    NeurnConfig cfg;
    cfg.k = args.k;
    cfg.global_max = args.global_max;
    if (args.padding == "replicate") {
        cfg.padding = Padding::replicate;
    } else if (args.padding == "reflect") {
        cfg.padding = Padding::reflect;
    } else {
        throw Error("padding must be replicate or reflect, got " + args.padding);
    }

    const std::string bytes = read_file(args.input);
    if (looks_like_idx(bytes)) {
        const std::vector<Image> images = read_idx_images(bytes);
        atomic_write(args.output, write_idx_images(transform_batch(images, cfg)));
        std::cout << "transformed " << images.size() << " images (k=" << cfg.k << ")\n";
    } else {
        const Image image = read_pgm(bytes);
        atomic_write(args.output, write_pgm(transform(image, cfg)));
        std::cout << "transformed " << image.width() << "x" << image.height()
                  << " image (k=" << cfg.k << ")\n";
    }
}

struct AlignMatrixArgs {
    std::string specs_dir, alphabet, out;
    ScoreParams params;
    bool raw = false;
    bool cluster = false;
};

void run_align_matrix(const AlignMatrixArgs& args) {
    const SpecSet set = load_specs(args.specs_dir, args.alphabet);
    SimilarityMatrix matrix = args.raw ? pairwise_raw_matrix(set.specs, args.params)
                                       : pairwise_matrix(set.specs, args.params);
    if (args.cluster && !args.raw) {
        matrix = matrix.reordered(cluster_order(matrix));
    }
    atomic_write(args.out, to_csv(matrix));
    std::cout << matrix.size() << "x" << matrix.size() << " matrix -> " << args.out << "\n";
}

struct PatternsArgs {
    std::string specs_dir, alphabet, out;
    std::size_t k = 100;
    std::size_t min_len = 2;
    bool uniform_weights = false;
    bool cluster = false;
};

void run_patterns_top(const PatternsArgs& args) {
    if (args.k == 0) throw Error("--k must be > 0");
    const SpecSet set = load_specs(args.specs_dir, args.alphabet);
    PatternConfig cfg{args.min_len, args.uniform_weights};
    const auto ranked = top_common_patterns(set.specs, args.k, cfg);
    atomic_write(args.out, top_patterns_csv(ranked, set.alphabet));
    std::cout << ranked.size() << " patterns -> " << args.out << "\n";
}

void run_patterns_matrix(const PatternsArgs& args) {
    const SpecSet set = load_specs(args.specs_dir, args.alphabet);
    PatternConfig cfg{args.min_len, args.uniform_weights};
    SimilarityMatrix matrix = pattern_matrix(set.specs, cfg);
    if (args.cluster) matrix = matrix.reordered(cluster_order(matrix));
    atomic_write(args.out, to_csv(matrix));
    std::cout << matrix.size() << "x" << matrix.size() << " matrix -> " << args.out << "\n";
}

struct FuncsimArgs {
    std::string table, out, variant = "baseline";
    std::vector<std::string> exclude;
    bool diff = false;
    bool plain = false;
    bool cluster = false;
};

void run_funcsim(const FuncsimArgs& args) {
    PerfTable table = PerfTable::load(args.table);
    if (!args.exclude.empty()) table = table.without(args.exclude);
    const CosineMode mode = args.plain ? CosineMode::plain : CosineMode::centered;

    if (args.diff) {
        const SimilarityMatrix base = functional_similarity(table, Variant::baseline, mode);
        const SimilarityMatrix neur = functional_similarity(table, Variant::neurn, mode);
        const double base_mean = mean_offdiagonal(base);
        const double neur_mean = mean_offdiagonal(neur);
        atomic_write(args.out, to_csv(difference_matrix(neur, base)));
        std::cout << "baseline off-diagonal mean: " << format6(base_mean) << "\n"
                  << "neurn off-diagonal mean: " << format6(neur_mean) << "\n"
                  << "difference (neurn - baseline): " << format6(neur_mean - base_mean)
                  << "\n";
        return;
    }

    SimilarityMatrix matrix =
        functional_similarity(table, variant_from_string(args.variant), mode);
    const double mean = mean_offdiagonal(matrix);
    if (args.cluster) matrix = matrix.reordered(cluster_order(matrix));
    atomic_write(args.out, to_csv(matrix));
    std::cout << args.variant << " off-diagonal mean: " << format6(mean) << "\n";
}

struct BenchArgs {
    std::string config, out;
};

void run_bench(const BenchArgs& args) {
    const ExperimentConfig cfg = ExperimentConfig::from_json(read_file(args.config));
    const ExperimentReport report = run_experiment(cfg);
    const fs::path out_dir(args.out);
    fs::create_directories(out_dir);
    const std::string summary = report.summary_csv();
    atomic_write(out_dir / "summary.csv", summary);
    try {
        atomic_write(out_dir / "report.json", report.to_json());
    } catch (...) {
        // Either both artifacts land or neither does.
        std::error_code ec;
        fs::remove(out_dir / "summary.csv", ec);
        throw;
    }
    std::cout << summary;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"NeuRN image normalization and DNN architecture-similarity toolkit"};
    app.set_version_flag("--version", std::string("neurnkit ") + kVersion +
                                          " (fixtures " + kFixtureVersion + ")");
    app.require_subcommand(1);

    // neurn apply
    auto* neurn_cmd = app.add_subcommand("neurn", "Patch-deviation normalization");
    neurn_cmd->require_subcommand(1);
    NeurnApplyArgs neurn_args;
    auto* apply_cmd = neurn_cmd->add_subcommand("apply", "Transform a PGM or IDX file");
    apply_cmd->add_option("--input", neurn_args.input, "PGM or IDX input")->required();
    apply_cmd->add_option("--output", neurn_args.output, "output path")->required();
    apply_cmd->add_option("--k", neurn_args.k, "patch size (odd, >= 3)");
    apply_cmd->add_option("--padding", neurn_args.padding, "replicate|reflect");
    apply_cmd->add_flag("--global-max", neurn_args.global_max,
                        "normalize across channels instead of per channel");

    // align matrix
    auto* align_cmd = app.add_subcommand("align", "Layer-sequence alignment");
    align_cmd->require_subcommand(1);
    AlignMatrixArgs align_args;
    auto* matrix_cmd = align_cmd->add_subcommand("matrix", "Pairwise similarity matrix");
    matrix_cmd->add_option("--specs", align_args.specs_dir, "directory of spec files")
        ->required();
    matrix_cmd->add_option("--alphabet", align_args.alphabet, "alphabet file");
    matrix_cmd->add_option("--match", align_args.params.match, "match score");
    matrix_cmd->add_option("--mismatch", align_args.params.mismatch, "mismatch penalty");
    matrix_cmd->add_option("--gap", align_args.params.gap, "gap penalty");
    matrix_cmd->add_option("--out", align_args.out, "output CSV")->required();
    matrix_cmd->add_flag("--raw", align_args.raw, "unnormalized integer scores");
    matrix_cmd->add_flag("--cluster", align_args.cluster,
                         "order rows by clustering similar models together");

    // patterns top / patterns matrix
    auto* patterns_cmd = app.add_subcommand("patterns", "Layer-combination mining");
    patterns_cmd->require_subcommand(1);
    PatternsArgs patterns_args;
    auto* top_cmd = patterns_cmd->add_subcommand("top", "Most common combinations");
    top_cmd->add_option("--specs", patterns_args.specs_dir, "directory of spec files")
        ->required();
    top_cmd->add_option("--alphabet", patterns_args.alphabet, "alphabet file");
    top_cmd->add_option("--k", patterns_args.k, "number of combinations to report");
    top_cmd->add_option("--min-len", patterns_args.min_len, "minimum combination length");
    top_cmd->add_option("--out", patterns_args.out, "output CSV")->required();
    auto* pmatrix_cmd =
        patterns_cmd->add_subcommand("matrix", "Pairwise pattern-similarity matrix");
    pmatrix_cmd->add_option("--specs", patterns_args.specs_dir, "directory of spec files")
        ->required();
    pmatrix_cmd->add_option("--alphabet", patterns_args.alphabet, "alphabet file");
    pmatrix_cmd->add_option("--min-len", patterns_args.min_len, "minimum combination length");
    pmatrix_cmd->add_flag("--uniform-weights", patterns_args.uniform_weights,
                          "weight every pattern 1 instead of its length");
    pmatrix_cmd->add_option("--out", patterns_args.out, "output CSV")->required();
    pmatrix_cmd->add_flag("--cluster", patterns_args.cluster,
                          "order rows by clustering similar models together");

    // funcsim
    FuncsimArgs funcsim_args;
    auto* funcsim_cmd =
        app.add_subcommand("funcsim", "Cosine functional similarity over accuracy rows");
    funcsim_cmd->add_option("--table", funcsim_args.table, "accuracy table CSV")->required();
    funcsim_cmd->add_option("--variant", funcsim_args.variant, "baseline|neurn");
    funcsim_cmd->add_option("--out", funcsim_args.out, "output CSV")->required();
    funcsim_cmd->add_flag("--diff", funcsim_args.diff,
                          "export neurn-minus-baseline difference matrix");
    funcsim_cmd->add_flag("--plain", funcsim_args.plain,
                          "cosine of raw rows instead of mean-centered rows");
    funcsim_cmd
        ->add_option("--exclude", funcsim_args.exclude,
                     "comma-separated model names to drop")
        ->delimiter(',');
    funcsim_cmd->add_flag("--cluster", funcsim_args.cluster,
                          "order rows by clustering similar models together");

    // bench run
    auto* bench_cmd = app.add_subcommand("bench", "Domain-shift benchmark harness");
    bench_cmd->require_subcommand(1);
    BenchArgs bench_args;
    auto* run_cmd = bench_cmd->add_subcommand("run", "Run a benchmark config");
    run_cmd->add_option("--config", bench_args.config, "experiment config JSON")->required();
    run_cmd->add_option("--out", bench_args.out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (apply_cmd->parsed()) run_neurn_apply(neurn_args);
        if (matrix_cmd->parsed()) run_align_matrix(align_args);
        if (top_cmd->parsed()) run_patterns_top(patterns_args);
        if (pmatrix_cmd->parsed()) run_patterns_matrix(patterns_args);
        if (funcsim_cmd->parsed()) run_funcsim(funcsim_args);
        if (run_cmd->parsed()) run_bench(bench_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
