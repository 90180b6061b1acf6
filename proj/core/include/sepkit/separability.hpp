#pragma once

#include <vector>

#include "sepkit/heads.hpp"
#include "sepkit/pairs.hpp"

namespace sepkit {

// Boolean matrix: rows = pairs of the novel class set (lexicographic over
// (i,j), i<j), columns = bank heads in pair order.
struct SeparabilityMatrix {
    std::size_t novel_classes = 0;
    std::vector<PairId> row_pairs;
    std::vector<PairId> col_pairs;
    std::vector<std::uint8_t> bits;  // row-major

    bool at(std::size_t row, std::size_t col) const {
        return bits[row * col_pairs.size() + col] != 0;
    }
};

struct BestHead {
    PairId head{0, 1};
    double error = 0.0;
};

struct SeparabilityReport {
    double eps = 0.0;
    std::size_t score = 0;
    SeparabilityMatrix matrix;
    Matrix errors;               // oriented per-head error, same shape as matrix
    std::vector<BestHead> best;  // per novel pair
};

// Oriented error of every head on every novel pair. Orientation follows the
// sign of the mean decision on the pair's first class (mean exactly 0 -> +1);
// class-balanced error, which equals the pooled 2n error for equal counts.
Matrix head_error_matrix(const FeatureSet& novel, const HeadBank& bank);

SeparabilityMatrix separability_matrix(const FeatureSet& novel, const HeadBank& bank, double eps);

// Number of rows with at least one set bit.
std::size_t separability_score(const SeparabilityMatrix& s);

// Lowest-error head per novel pair; ties broken by smallest head pair.
std::vector<BestHead> best_head_per_pair(const FeatureSet& novel, const HeadBank& bank);

SeparabilityReport compute_separability(const FeatureSet& novel, const HeadBank& bank, double eps);

}  // namespace sepkit
