#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sepkit/pairs.hpp"

namespace sepkit {

// Dense row-major matrix; rows = samples, cols = feature dimensions.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data_.data() + r * cols_, cols_);
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Per-class sample matrices sharing one feature dimension.
struct FeatureSet {
    std::vector<Matrix> classes;       // indexed by ClassId
    std::vector<std::string> names;    // optional, parallel to classes
    bool standardized = false;

    std::size_t num_classes() const { return classes.size(); }
    std::size_t dim() const { return classes.empty() ? 0 : classes.front().cols(); }

    // Throws DataError on dimension mismatch, empty class, or non-finite value.
    void validate() const;
};

struct Hyperplane {
    std::vector<double> w;
    double b = 0.0;

    Hyperplane negated() const;
};

struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t iterations = 500;
    double l2 = 1e-4;
    std::uint64_t seed = 0;  // reserved; training is deterministic from zero init
};

// <w, x> + b. Sign >= 0 selects partition M1.
double decision(const Hyperplane& h, std::span<const double> x);

// Logistic-regression head: class i labeled 1, class j labeled 0,
// full-batch gradient descent from zero init, BCE + L2 on w.
Hyperplane train_head(const Matrix& xi, const Matrix& xj, const TrainConfig& cfg);

// Mean of the two class-wise error rates, each weighted 1/2.
// xi is the >=0 class; decision exactly 0 counts for xi.
double empirical_error(const Hyperplane& h, const Matrix& xi, const Matrix& xj);

// Returns h or its negation so the mean decision on xi is >= the mean on xj.
Hyperplane orient_for_pair(const Hyperplane& h, const Matrix& xi, const Matrix& xj);

// Strict: oriented empirical error < eps. Requires 0 < eps < 0.5.
bool epsilon_separates(const Hyperplane& h, const Matrix& xi, const Matrix& xj, double eps);

// Error of the 1-D threshold classifier on N(mu1,1) vs N(mu2,1), mu2 > mu1;
// minimal at threshold = (mu1 + mu2) / 2.
double gaussian_error(double mu1, double mu2, double threshold);

struct HeadBank {
    std::size_t dim = 0;
    std::vector<std::string> classes;  // training universe C, manifest order
    std::map<PairId, Hyperplane> heads;
};

// One head per pair of the feature set's classes. Deterministic; pair
// trainings are independent.
HeadBank train_bank(const FeatureSet& features, const TrainConfig& cfg);

}  // namespace sepkit
