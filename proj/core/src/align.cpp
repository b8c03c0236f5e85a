#include "neurnkit/align.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "neurnkit/error.hpp"

namespace neurnkit {

void ScoreParams::validate() const {
    if (match <= 0) throw Error("score params: match must be > 0");
    if (mismatch >= match) throw Error("score params: mismatch must be < match");
    if (gap >= 0) throw Error("score params: gap must be < 0");
}

DpMatrix::DpMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), scores_(rows * cols, 0),
      moves_(rows * cols, Move::none) {}

void DpMatrix::set(std::size_t i, std::size_t j, int score, Move move) {
    scores_[i * cols_ + j] = score;
    moves_[i * cols_ + j] = move;
}

DpMatrix nw_matrix(std::string_view a, std::string_view b, const ScoreParams& params) {
    params.validate();
    if (a.empty() || b.empty()) {
        throw Error("alignment: sequences must be non-empty");
    }
    const std::size_t l = a.size();
    const std::size_t m = b.size();
    DpMatrix matrix(l + 1, m + 1);

    // Row 0 and column 0 stay zero: leading gaps are free under this
    // scoring, unlike the textbook cumulative-gap initialization.
    for (std::size_t i = 1; i <= l; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            const int s = a[i - 1] == b[j - 1] ? params.match : params.mismatch;
            const int diag = matrix.score(i - 1, j - 1) + s;
            const int up = matrix.score(i - 1, j) + params.gap;
            const int left = matrix.score(i, j - 1) + params.gap;

            int best = diag;
            Move move = Move::diagonal;
            if (up > best) {
                best = up;
                move = Move::up;
            }
            if (left > best) {
                best = left;
                move = Move::left;
            }
            matrix.set(i, j, best, move);
        }
    }
    return matrix;
}

int nw_score(std::string_view a, std::string_view b, const ScoreParams& params) {
    return nw_matrix(a, b, params).raw_score();
}

std::vector<PathStep> traceback(const DpMatrix& matrix) {
    std::vector<PathStep> path;
    std::size_t i = matrix.rows() - 1;
    std::size_t j = matrix.cols() - 1;
    while (i > 0 && j > 0) {
        const Move move = matrix.move(i, j);
        path.push_back({i, j, move});
        switch (move) {
        case Move::diagonal:
            --i;
            --j;
            break;
        case Move::up:
            --i;
            break;
        case Move::left:
            --j;
            break;
        case Move::none:
            throw Error("traceback: interior cell without a move");
        }
    }
    return path;
}

double similarity_index(std::string_view a, std::string_view b,
                        const ScoreParams& params) {
    const int score = nw_score(a, b, params);
    const double divisor =
        static_cast<double>(params.match) * static_cast<double>(std::min(a.size(), b.size()));
    return static_cast<double>(score) / divisor;
}

AlignmentResult align(std::string_view a, std::string_view b,
                      const ScoreParams& params) {
    const DpMatrix matrix = nw_matrix(a, b, params);
    const double divisor =
        static_cast<double>(params.match) * static_cast<double>(std::min(a.size(), b.size()));
    return AlignmentResult{
        matrix.raw_score(),
        static_cast<double>(matrix.raw_score()) / divisor,
        traceback(matrix),
    };
}

namespace {

void check_specs(std::span<const ArchSpec> specs) {
    if (specs.size() < 2) throw Error("pairwise: need at least 2 specs");
    std::unordered_set<std::string> names;
    for (const auto& spec : specs) {
        if (!names.insert(spec.name).second) {
            throw Error("pairwise: duplicate spec name \"" + spec.name + "\"");
        }
        if (spec.layers.empty()) {
            throw Error("pairwise: spec \"" + spec.name + "\" has no layers");
        }
    }
}

} // namespace

SimilarityMatrix pairwise_matrix(std::span<const ArchSpec> specs,
                                 const ScoreParams& params) {
    params.validate();
    check_specs(specs);
    const std::size_t n = specs.size();
    std::vector<std::string> labels;
    labels.reserve(n);
    for (const auto& spec : specs) labels.push_back(spec.name);

    std::vector<double> values(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = similarity_index(specs[i].layers, specs[j].layers, params);
            values[i * n + j] = s;
            values[j * n + i] = s;
        }
    }
    return SimilarityMatrix(std::move(labels), std::move(values),
                            MatrixKind::similarity);
}

SimilarityMatrix pairwise_raw_matrix(std::span<const ArchSpec> specs,
                                     const ScoreParams& params) {
    params.validate();
    check_specs(specs);
    const std::size_t n = specs.size();
    std::vector<std::string> labels;
    labels.reserve(n);
    for (const auto& spec : specs) labels.push_back(spec.name);

    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double s =
                static_cast<double>(nw_score(specs[i].layers, specs[j].layers, params));
            values[i * n + j] = s;
            values[j * n + i] = s;
        }
    }
    return SimilarityMatrix(std::move(labels), std::move(values), MatrixKind::raw);
}

} // namespace neurnkit
