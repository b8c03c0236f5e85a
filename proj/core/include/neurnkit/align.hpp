#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "neurnkit/archspec.hpp"
#include "neurnkit/simmat.hpp"

namespace neurnkit {

/// Scoring for layer alignment. Defaults: match 4, gap -1 (matrix
/// construction), mismatch -2. The gap penalty applies to vertical and
/// horizontal steps only; mismatches score through s(a_i, b_j).
struct ScoreParams {
    int match = 4;
    int mismatch = -2;
    int gap = -1;

    /// match > 0, mismatch < match, gap < 0.
    void validate() const;
};

enum class Move : std::uint8_t {
    none,     // boundary cell
    diagonal, // consume one symbol of each sequence
    up,       // gap: consume a symbol of `a` only
    left,     // gap: consume a symbol of `b` only
};

/// (l+1) x (m+1) score grid with per-cell back-pointers. Row 0 and column 0
/// are zero; interior cells hold the three-way maximum with ties resolved
/// diagonal > up > left.
class DpMatrix {
public:
    DpMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    int score(std::size_t i, std::size_t j) const { return scores_[i * cols_ + j]; }
    Move move(std::size_t i, std::size_t j) const { return moves_[i * cols_ + j]; }

    /// Bottom-right cell: the alignment score.
    int raw_score() const { return scores_.back(); }

    void set(std::size_t i, std::size_t j, int score, Move move);

private:
    std::size_t rows_, cols_;
    std::vector<int> scores_;
    std::vector<Move> moves_;
};

struct PathStep {
    std::size_t i, j; // cell the step leaves from
    Move move;
};

struct AlignmentResult {
    int raw_score;
    double similarity;
    std::vector<PathStep> path; // bottom-right first
};

/// Fills the alignment grid for two encoded layer sequences.
DpMatrix nw_matrix(std::string_view a, std::string_view b, const ScoreParams& params);

/// Bottom-right cell of nw_matrix.
int nw_score(std::string_view a, std::string_view b, const ScoreParams& params);

/// Follows back-pointers from the bottom-right cell until it reaches row 0
/// or column 0. Step scores along the path sum to raw_score.
std::vector<PathStep> traceback(const DpMatrix& matrix);

/// nw_score normalized by match * min(l, m); 1.0 for identical sequences.
double similarity_index(std::string_view a, std::string_view b,
                        const ScoreParams& params);

/// Score, similarity and traceback path in one pass.
AlignmentResult align(std::string_view a, std::string_view b,
                      const ScoreParams& params);

/// Symmetric unit-diagonal matrix of similarity_index over all spec pairs.
SimilarityMatrix pairwise_matrix(std::span<const ArchSpec> specs,
                                 const ScoreParams& params);

/// Same pairs, unnormalized integer scores (kind = raw).
SimilarityMatrix pairwise_raw_matrix(std::span<const ArchSpec> specs,
                                     const ScoreParams& params);

} // namespace neurnkit
