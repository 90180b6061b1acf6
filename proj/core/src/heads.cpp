#include "sepkit/heads.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sepkit/errors.hpp"

namespace sepkit {

void FeatureSet::validate() const {
    if (classes.empty()) throw DataError("FeatureSet: no classes");
    const std::size_t d = classes.front().cols();
    if (d == 0) throw DomainError("FeatureSet: zero-dimensional features");
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const Matrix& m = classes[c];
        if (m.cols() != d) {
            std::ostringstream os;
            os << "FeatureSet: class " << c << " has dimension " << m.cols() << ", expected " << d;
            throw DataError(os.str());
        }
        if (m.rows() == 0) {
            std::ostringstream os;
            os << "FeatureSet: class " << c << " has no samples";
            throw DataError(os.str());
        }
        for (double v : m.data())
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "FeatureSet: non-finite value in class " << c;
                throw DataError(os.str());
            }
    }
    if (!names.empty() && names.size() != classes.size())
        throw DataError("FeatureSet: names do not match class count");
}

Hyperplane Hyperplane::negated() const {
    Hyperplane out;
    out.w.reserve(w.size());
    for (double v : w) out.w.push_back(-v);
    out.b = -b;
    return out;
}

double decision(const Hyperplane& h, std::span<const double> x) {
    if (x.size() != h.w.size()) throw DomainError("decision: dimension mismatch");
    double acc = h.b;
    for (std::size_t i = 0; i < x.size(); ++i) acc += h.w[i] * x[i];
    return acc;
}

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void check_pair_inputs(const Matrix& xi, const Matrix& xj) {
    if (xi.rows() == 0 || xj.rows() == 0) throw DomainError("head: empty class");
    if (xi.cols() == 0) throw DomainError("head: zero-dimensional features");
    if (xi.cols() != xj.cols()) throw DomainError("head: feature dimension mismatch");
    for (double v : xi.data())
        if (!std::isfinite(v)) throw DataError("head: non-finite feature value");
    for (double v : xj.data())
        if (!std::isfinite(v)) throw DataError("head: non-finite feature value");
}

}  // namespace

Hyperplane train_head(const Matrix& xi, const Matrix& xj, const TrainConfig& cfg) {
    check_pair_inputs(xi, xj);
    if (cfg.learning_rate <= 0) throw DomainError("train_head: learning rate must be positive");
    if (cfg.iterations == 0) throw DomainError("train_head: iterations must be positive");
    if (cfg.l2 < 0) throw DomainError("train_head: l2 must be non-negative");

    const std::size_t d = xi.cols();
    const std::size_t m = xi.rows() + xj.rows();
    Hyperplane h;
    h.w.assign(d, 0.0);
    h.b = 0.0;

    std::vector<double> grad_w(d);
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t r = 0; r < xi.rows(); ++r) {
            const auto x = xi.row(r);
            const double resid = sigmoid(decision(h, x)) - 1.0;  // label 1
            for (std::size_t k = 0; k < d; ++k) grad_w[k] += resid * x[k];
            grad_b += resid;
        }
        for (std::size_t r = 0; r < xj.rows(); ++r) {
            const auto x = xj.row(r);
            const double resid = sigmoid(decision(h, x));  // label 0
            for (std::size_t k = 0; k < d; ++k) grad_w[k] += resid * x[k];
            grad_b += resid;
        }
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t k = 0; k < d; ++k)
            h.w[k] -= cfg.learning_rate * (grad_w[k] * inv_m + cfg.l2 * h.w[k]);
        h.b -= cfg.learning_rate * grad_b * inv_m;
    }
    return h;
}

double empirical_error(const Hyperplane& h, const Matrix& xi, const Matrix& xj) {
    if (xi.rows() == 0 || xj.rows() == 0) throw DomainError("empirical_error: empty class");
    std::size_t wrong_i = 0;
    for (std::size_t r = 0; r < xi.rows(); ++r)
        if (decision(h, xi.row(r)) < 0) ++wrong_i;
    std::size_t wrong_j = 0;
    for (std::size_t r = 0; r < xj.rows(); ++r)
        if (decision(h, xj.row(r)) >= 0) ++wrong_j;
    // each class weighs 1/2 regardless of sample counts
    return 0.5 * (static_cast<double>(wrong_i) / static_cast<double>(xi.rows()) +
                  static_cast<double>(wrong_j) / static_cast<double>(xj.rows()));
}

Hyperplane orient_for_pair(const Hyperplane& h, const Matrix& xi, const Matrix& xj) {
    double mean_i = 0.0;
    for (std::size_t r = 0; r < xi.rows(); ++r) mean_i += decision(h, xi.row(r));
    mean_i /= static_cast<double>(xi.rows());
    double mean_j = 0.0;
    for (std::size_t r = 0; r < xj.rows(); ++r) mean_j += decision(h, xj.row(r));
    mean_j /= static_cast<double>(xj.rows());
    return mean_i >= mean_j ? h : h.negated();
}

bool epsilon_separates(const Hyperplane& h, const Matrix& xi, const Matrix& xj, double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw DomainError("epsilon_separates: eps must be in (0, 0.5)");
    return empirical_error(orient_for_pair(h, xi, xj), xi, xj) < eps;
}

double gaussian_error(double mu1, double mu2, double threshold) {
    // 1/2 [ P(N(mu1,1) >= t) + P(N(mu2,1) < t) ], Phi via erfc
    const auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    return 0.5 * (phi(mu1 - threshold) + phi(threshold - mu2));
}

HeadBank train_bank(const FeatureSet& features, const TrainConfig& cfg) {
    features.validate();
    HeadBank bank;
    bank.dim = features.dim();
    bank.classes = features.names;
    if (bank.classes.empty())
        for (std::size_t c = 0; c < features.num_classes(); ++c)
            bank.classes.push_back("class" + std::to_string(c));
    for (const PairId& p : all_pairs(features.num_classes()))
        bank.heads.emplace(p, train_head(features.classes[p.lo], features.classes[p.hi], cfg));
    return bank;
}

}  // namespace sepkit
