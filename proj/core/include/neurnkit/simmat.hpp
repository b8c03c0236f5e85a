#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neurnkit {

enum class MatrixKind {
    similarity, // symmetric, unit diagonal
    difference, // elementwise a - b of two similarity matrices
    raw,        // symmetric unnormalized scores (e.g. integer alignment scores)
};

/// Square labeled matrix. Similarity-kind matrices are checked for symmetry
/// (1e-9) and unit diagonal (1e-12) at construction.
class SimilarityMatrix {
public:
    SimilarityMatrix(std::vector<std::string> labels, std::vector<double> values,
                     MatrixKind kind);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    MatrixKind kind() const { return kind_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values_[i * size() + j]; }
    const std::vector<double>& values() const { return values_; }

    /// Rows/columns permuted to the given label order (same label set).
    SimilarityMatrix reordered(const std::vector<std::string>& order) const;

private:
    std::vector<std::string> labels_;
    std::vector<double> values_; // row-major, size n*n
    MatrixKind kind_;
};

/// dot(u,v) / (|u||v|). Throws on length mismatch, empty, or zero vectors.
double cosine(std::span<const double> u, std::span<const double> v);

enum class Variant { baseline, neurn };

Variant variant_from_string(std::string_view s);
std::string_view to_string(Variant v);

/// The 12 source->target transfer task column names, fixed order.
std::span<const std::string_view> task_columns();

/// Accuracy table: one (baseline, neurn) row pair per model across the 12
/// transfer tasks. Values are percentages in [0, 100].
class PerfTable {
public:
    static PerfTable parse_csv(std::string_view text);
    static PerfTable load(const std::filesystem::path& path);

    const std::vector<std::string>& models() const { return models_; }

    /// The 12 accuracies for (model, variant); throws naming the model if
    /// the variant row is missing.
    std::span<const double> row(std::string_view model, Variant v) const;

    /// Copy of the table restricted to models not in `exclude`.
    PerfTable without(std::span<const std::string> exclude) const;

private:
    std::vector<std::string> models_;            // order of first appearance
    std::vector<double> baseline_;               // models x 12, row-major
    std::vector<double> neurn_;
    std::vector<bool> has_baseline_, has_neurn_; // per model
};

enum class CosineMode {
    plain,    // cosine of the raw accuracy vectors
    centered, // cosine of mean-centered rows; reproduces the published
              // 0.7 -> 0.8 functional-similarity averages
};

/// Pairwise cosine matrix over the selected variant's rows.
SimilarityMatrix functional_similarity(const PerfTable& table, Variant variant,
                                       CosineMode mode = CosineMode::centered);

/// Elementwise a - b; labels must match exactly.
SimilarityMatrix difference_matrix(const SimilarityMatrix& a,
                                   const SimilarityMatrix& b);

/// Mean over the n(n-1) off-diagonal entries; requires n >= 2.
double mean_offdiagonal(const SimilarityMatrix& m);

/// Display ordering from average-linkage agglomerative clustering on
/// distance 1 - similarity. Deterministic: ties merge the pair with the
/// lowest original indices first, and merged clusters keep input order.
std::vector<std::string> cluster_order(const SimilarityMatrix& m);

/// CSV export: empty first cell, label header, one labeled row per model,
/// 6-decimal values, ',' delimiter, LF line endings.
std::string to_csv(const SimilarityMatrix& m);
void export_csv(const SimilarityMatrix& m, const std::filesystem::path& path);

/// Inverse of export_csv. Kind is inferred from the diagonal: unit diagonal
/// (within 1e-6) -> similarity, anything else -> raw. Parse failures carry
/// 1-based line (and column where that is meaningful) coordinates.
SimilarityMatrix parse_matrix_csv(std::string_view text);
SimilarityMatrix import_csv(const std::filesystem::path& path);

} // namespace neurnkit
