#include "sepkit/separability.hpp"

#include "sepkit/errors.hpp"

namespace sepkit {

namespace {

void check_inputs(const FeatureSet& novel, const HeadBank& bank) {
    novel.validate();
    if (bank.heads.empty()) throw DomainError("separability: empty head bank");
    if (novel.dim() != bank.dim) throw DomainError("separability: feature dimension mismatch");
    for (const auto& [p, h] : bank.heads)
        if (h.w.size() != bank.dim) throw DomainError("separability: head dimension mismatch");
}

// Oriented class-balanced error of one head on one novel pair.
double oriented_error(const Hyperplane& h, const Matrix& xi, const Matrix& xj) {
    double mean_i = 0.0;
    for (std::size_t r = 0; r < xi.rows(); ++r) mean_i += decision(h, xi.row(r));
    mean_i /= static_cast<double>(xi.rows());
    // sign of the mean on class i; exactly 0 reads as +1
    if (mean_i >= 0.0) return empirical_error(h, xi, xj);
    return empirical_error(h.negated(), xi, xj);
}

}  // namespace

Matrix head_error_matrix(const FeatureSet& novel, const HeadBank& bank) {
    check_inputs(novel, bank);
    const auto rows = all_pairs(novel.num_classes());
    Matrix errors(rows.size(), bank.heads.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Matrix& xi = novel.classes[rows[r].lo];
        const Matrix& xj = novel.classes[rows[r].hi];
        std::size_t c = 0;
        for (const auto& [hp, h] : bank.heads) errors.at(r, c++) = oriented_error(h, xi, xj);
    }
    return errors;
}

namespace {

SeparabilityMatrix matrix_from_errors(const FeatureSet& novel, const HeadBank& bank,
                                      const Matrix& errors, double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw DomainError("separability: eps must be in (0, 0.5)");
    SeparabilityMatrix s;
    s.novel_classes = novel.num_classes();
    s.row_pairs = all_pairs(novel.num_classes());
    for (const auto& [p, h] : bank.heads) s.col_pairs.push_back(p);
    s.bits.assign(errors.rows() * errors.cols(), 0);
    for (std::size_t r = 0; r < errors.rows(); ++r)
        for (std::size_t c = 0; c < errors.cols(); ++c)
            s.bits[r * errors.cols() + c] = errors.at(r, c) < eps ? 1 : 0;
    return s;
}

}  // namespace

SeparabilityMatrix separability_matrix(const FeatureSet& novel, const HeadBank& bank, double eps) {
    return matrix_from_errors(novel, bank, head_error_matrix(novel, bank), eps);
}

std::size_t separability_score(const SeparabilityMatrix& s) {
    const std::size_t cols = s.col_pairs.size();
    std::size_t score = 0;
    for (std::size_t r = 0; r < s.row_pairs.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (s.bits[r * cols + c]) {
                ++score;
                break;
            }
    return score;
}

std::vector<BestHead> best_head_per_pair(const FeatureSet& novel, const HeadBank& bank) {
    const Matrix errors = head_error_matrix(novel, bank);
    std::vector<PairId> cols;
    for (const auto& [p, h] : bank.heads) cols.push_back(p);
    std::vector<BestHead> best;
    best.reserve(errors.rows());
    for (std::size_t r = 0; r < errors.rows(); ++r) {
        std::size_t arg = 0;
        for (std::size_t c = 1; c < errors.cols(); ++c)
            if (errors.at(r, c) < errors.at(r, arg)) arg = c;  // ties keep the smallest pair
        best.push_back({cols[arg], errors.at(r, arg)});
    }
    return best;
}

SeparabilityReport compute_separability(const FeatureSet& novel, const HeadBank& bank, double eps) {
    SeparabilityReport report;
    report.eps = eps;
    report.errors = head_error_matrix(novel, bank);
    report.matrix = matrix_from_errors(novel, bank, report.errors, eps);
    report.score = separability_score(report.matrix);
    std::vector<PairId> cols = report.matrix.col_pairs;
    report.best.reserve(report.errors.rows());
    for (std::size_t r = 0; r < report.errors.rows(); ++r) {
        std::size_t arg = 0;
        for (std::size_t c = 1; c < report.errors.cols(); ++c)
            if (report.errors.at(r, c) < report.errors.at(r, arg)) arg = c;
        report.best.push_back({cols[arg], report.errors.at(r, arg)});
    }
    return report;
}

}  // namespace sepkit
