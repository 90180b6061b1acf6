#include <doctest.h>

#include <cmath>
#include <vector>

#include "sepkit/heads.hpp"
#include "sepkit/rng.hpp"
#include "sepkit/synth.hpp"

using namespace sepkit;

namespace {

Matrix matrix_1d(const std::vector<double>& values) {
    Matrix m(values.size(), 1);
    for (std::size_t r = 0; r < values.size(); ++r) m.at(r, 0) = values[r];
    return m;
}

Matrix gaussian_1d(double mean, std::size_t count, std::uint64_t seed, std::uint64_t stream) {
    Matrix m(count, 1);
    CounterRng rng(seed, stream);
    for (std::size_t r = 0; r < count; ++r) m.at(r, 0) = mean + rng.next_normal();
    return m;
}

// Test-side objective: mean BCE + (l2/2)||w||^2, independent of the trainer.
double bce_loss(const Hyperplane& h, const Matrix& xi, const Matrix& xj, double l2) {
    double loss = 0.0;
    const auto log_sigmoid = [](double z) {
        return z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
    };
    for (std::size_t r = 0; r < xi.rows(); ++r) loss -= log_sigmoid(decision(h, xi.row(r)));
    for (std::size_t r = 0; r < xj.rows(); ++r) loss -= log_sigmoid(-decision(h, xj.row(r)));
    loss /= static_cast<double>(xi.rows() + xj.rows());
    for (double w : h.w) loss += 0.5 * l2 * w * w;
    return loss;
}

}  // namespace

TEST_CASE("decision: dot product plus bias") {
    const Hyperplane h{{1.0, 0.0}, 0.0};
    const std::vector<double> x{2.0, 5.0};
    CHECK(decision(h, x) == doctest::Approx(2.0));
}

TEST_CASE("decision: boundary point sits in the >= partition") {
    const Hyperplane h{{1.0}, -2.0};
    const std::vector<double> x{2.0};
    CHECK(decision(h, x) == 0.0);
}

TEST_CASE("decision: negative side") {
    const Hyperplane h{{1.0}, -1.0};
    const std::vector<double> x{0.5};
    CHECK(decision(h, x) == doctest::Approx(-0.5));
}

TEST_CASE("decision: dimension mismatch") {
    const Hyperplane h{{1.0, 2.0}, 0.0};
    const std::vector<double> x{1.0};
    CHECK_THROWS_AS(decision(h, x), DomainError);
}

TEST_CASE("decision is linear in x") {
    CounterRng rng(5, 0);
    for (int trial = 0; trial < 20; ++trial) {
        Hyperplane h;
        for (int k = 0; k < 4; ++k) h.w.push_back(rng.next_normal());
        h.b = rng.next_normal();
        std::vector<double> x(4), y(4), sum(4);
        for (int k = 0; k < 4; ++k) {
            x[k] = rng.next_normal();
            y[k] = rng.next_normal();
            sum[k] = x[k] + y[k];
        }
        const double lhs = decision(h, sum);
        const double rhs = decision(h, x) + decision(h, y) - h.b;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("train_head: separable singleton classes") {
    const auto h = train_head(matrix_1d({2.0}), matrix_1d({-2.0}), {});
    CHECK(decision(h, std::vector<double>{2.0}) > 0);
    CHECK(decision(h, std::vector<double>{-2.0}) < 0);
}

TEST_CASE("train_head: identical classes give chance error") {
    const auto xi = matrix_1d({0.0, 1.0, 2.0});
    const auto h = train_head(xi, xi, {});
    CHECK(empirical_error(h, xi, xi) == doctest::Approx(0.5));
}

TEST_CASE("train_head: learned threshold near the Gaussian midpoint") {
    const auto xi = gaussian_1d(0.0, 10000, 99, 0);
    const auto xj = gaussian_1d(2.0, 10000, 99, 1);
    const auto h = train_head(xi, xj, {});
    REQUIRE(h.w[0] != 0.0);
    const double threshold = -h.b / h.w[0];
    CHECK(std::abs(threshold - 1.0) < 0.15);
}

TEST_CASE("train_head: loss is non-increasing over iterations") {
    const auto xi = gaussian_1d(0.0, 50, 4, 0);
    const auto xj = gaussian_1d(1.0, 50, 4, 1);
    TrainConfig cfg;
    double prev = bce_loss(Hyperplane{{0.0}, 0.0}, xi, xj, cfg.l2);
    for (std::size_t iters : {1, 2, 5, 10, 50, 200, 500}) {
        cfg.iterations = iters;
        const double loss = bce_loss(train_head(xi, xj, cfg), xi, xj, cfg.l2);
        CHECK(loss <= prev + 1e-12);
        prev = loss;
    }
}

TEST_CASE("train_head: first step matches finite-difference gradient at zero") {
    CounterRng rng(21, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = 1 + rng.next_u64() % 5;
        const std::size_t ni = 2 + rng.next_u64() % 9;
        const std::size_t nj = 2 + rng.next_u64() % 9;
        Matrix xi(ni, d), xj(nj, d);
        for (double& v : xi.data()) v = rng.next_normal();
        for (double& v : xj.data()) v = rng.next_normal();

        TrainConfig cfg;
        cfg.iterations = 1;
        cfg.learning_rate = 1.0;
        const auto h = train_head(xi, xj, cfg);
        // one unit step from zero: h = -gradient (l2 term vanishes at w = 0)

        const double eps = 1e-6;
        for (std::size_t k = 0; k < d; ++k) {
            Hyperplane plus{std::vector<double>(d, 0.0), 0.0};
            Hyperplane minus = plus;
            plus.w[k] = eps;
            minus.w[k] = -eps;
            const double fd =
                (bce_loss(plus, xi, xj, 0.0) - bce_loss(minus, xi, xj, 0.0)) / (2 * eps);
            CHECK(-h.w[k] == doctest::Approx(fd).epsilon(1e-5));
        }
        Hyperplane plus{std::vector<double>(d, 0.0), eps};
        Hyperplane minus{std::vector<double>(d, 0.0), -eps};
        const double fd = (bce_loss(plus, xi, xj, 0.0) - bce_loss(minus, xi, xj, 0.0)) / (2 * eps);
        CHECK(-h.b == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("empirical_error: perfectly separated and constant classifiers") {
    const auto xi = matrix_1d({1.0, 2.0});
    const auto xj = matrix_1d({-1.0, -2.0});
    CHECK(empirical_error(Hyperplane{{1.0}, 0.0}, xi, xj) == 0.0);
    // everything lands on the >= side: all of xj wrong, none of xi
    CHECK(empirical_error(Hyperplane{{0.0}, 1.0}, xi, xj) == doctest::Approx(0.5));
}

TEST_CASE("empirical_error: midpoint head on large Gaussian samples") {
    const auto xi = gaussian_1d(0.0, 100000, 123, 0);
    const auto xj = gaussian_1d(2.0, 100000, 123, 1);
    // oriented so xi is the >= class: w = -1 puts the mean-0 class above
    const Hyperplane h{{-1.0}, 1.0};
    CHECK(empirical_error(h, xi, xj) == doctest::Approx(0.1587).epsilon(0.04));
    CHECK(std::abs(empirical_error(h, xi, xj) - 0.15866) < 0.005);
}

TEST_CASE("empirical_error: unequal counts use class-balanced weighting") {
    const auto xi = matrix_1d({1.0});             // 1 sample, correct
    const auto xj = matrix_1d({1.0, 1.0, -1.0});  // 2 of 3 wrong
    const Hyperplane h{{1.0}, 0.0};
    CHECK(empirical_error(h, xi, xj) == doctest::Approx(0.5 * (0.0 + 2.0 / 3.0)));
}

TEST_CASE("empirical_error symmetry under negation with swapped classes") {
    CounterRng rng(8, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto xi = gaussian_1d(0.3, 17, 50 + trial, 0);
        const auto xj = gaussian_1d(-0.2, 23, 50 + trial, 1);
        Hyperplane h{{rng.next_normal()}, rng.next_normal()};
        CHECK(empirical_error(h, xi, xj) ==
              doctest::Approx(empirical_error(h.negated(), xj, xi)));
    }
}

TEST_CASE("orient_for_pair: unchanged, flipped, idempotent") {
    const auto xi = matrix_1d({1.0, 2.0});
    const auto xj = matrix_1d({-1.0, -2.0});
    const Hyperplane good{{1.0}, 0.0};
    const Hyperplane flipped{{-1.0}, 0.0};

    CHECK(orient_for_pair(good, xi, xj).w == good.w);
    const auto fixed = orient_for_pair(flipped, xi, xj);
    CHECK(fixed.w == std::vector<double>{1.0});

    const auto once = orient_for_pair(flipped, xi, xj);
    const auto twice = orient_for_pair(once, xi, xj);
    CHECK(once.w == twice.w);
    CHECK(once.b == twice.b);
}

TEST_CASE("epsilon_separates: basic outcomes and strict boundary") {
    const auto xi = matrix_1d({1.0, 2.0});
    const auto xj = matrix_1d({-1.0, -2.0});
    CHECK(epsilon_separates(Hyperplane{{1.0}, 0.0}, xi, xj, 0.025));

    // error 0.5 is never separable
    const auto same = matrix_1d({0.0, 1.0});
    CHECK_FALSE(epsilon_separates(Hyperplane{{0.0}, 1.0}, same, same, 0.49));

    // error exactly eps fails the strict inequality
    const auto a = matrix_1d({1.0, -1.0});  // one of two wrong -> rate 0.5
    const auto b = matrix_1d({-1.0, -2.0});
    const Hyperplane h{{1.0}, 0.0};
    CHECK(empirical_error(h, a, b) == doctest::Approx(0.25));
    CHECK_FALSE(epsilon_separates(h, a, b, 0.25));
    CHECK(epsilon_separates(h, a, b, 0.26));

    CHECK_THROWS_AS(epsilon_separates(h, a, b, 0.5), DomainError);
    CHECK_THROWS_AS(epsilon_separates(h, a, b, 0.0), DomainError);
}

TEST_CASE("epsilon_separates is monotone in eps") {
    const auto xi = gaussian_1d(0.0, 100, 31, 0);
    const auto xj = gaussian_1d(1.5, 100, 31, 1);
    const auto h = train_head(xi, xj, {});
    bool prev = false;
    for (double eps : {0.01, 0.05, 0.1, 0.2, 0.3, 0.45}) {
        const bool now = epsilon_separates(h, xi, xj, eps);
        if (prev) CHECK(now);
        prev = now;
    }
}

TEST_CASE("gaussian_error: closed form vs numerical integration") {
    // oracle: trapezoid integration of the two Gaussian tails
    const auto tail_integral = [](double mu, double lo, double hi) {
        const int steps = 200000;
        const double h = (hi - lo) / steps;
        double acc = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double x = lo + i * h;
            const double pdf =
                std::exp(-0.5 * (x - mu) * (x - mu)) / std::sqrt(2.0 * 3.14159265358979323846);
            acc += (i == 0 || i == steps) ? 0.5 * pdf : pdf;
        }
        return acc * h;
    };
    const double oracle = 0.5 * (tail_integral(0.0, 1.0, 12.0) + tail_integral(2.0, -10.0, 1.0));
    CHECK(gaussian_error(0.0, 2.0, 1.0) == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(gaussian_error(0.0, 2.0, 1.0) == doctest::Approx(0.15866).epsilon(1e-4));
}

TEST_CASE("gaussian_error: identical means give chance error") {
    for (double t : {-2.0, 0.0, 0.7, 3.0})
        CHECK(gaussian_error(1.0, 1.0, t) == doctest::Approx(0.5));
}

TEST_CASE("gaussian_error: midpoint minimizes over a threshold grid") {
    const double mu1 = 0.0, mu2 = 2.0;
    const double at_mid = gaussian_error(mu1, mu2, 1.0);
    double best_t = -3.0;
    double best = 1.0;
    for (int i = 0; i <= 100; ++i) {
        const double t = -3.0 + 8.0 * i / 100.0;
        const double e = gaussian_error(mu1, mu2, t);
        CHECK(at_mid <= e + 1e-15);
        if (e < best) {
            best = e;
            best_t = t;
        }
    }
    CHECK(std::abs(best_t - 1.0) <= 8.0 / 100.0 + 1e-12);
}

TEST_CASE("train_bank: one head per pair, deterministic") {
    GaussianSpec spec;
    spec.means = {{0.0}, {3.0}, {6.0}};
    spec.sigma = 1.0;
    spec.samples_per_class = 30;
    spec.seed = 5;
    const auto fs = generate(spec);
    const auto bank = train_bank(fs, {});
    CHECK(bank.heads.size() == 3);
    CHECK(bank.dim == 1);
    const auto bank2 = train_bank(fs, {});
    for (const auto& [p, h] : bank.heads) {
        CHECK(bank2.heads.at(p).w == h.w);
        CHECK(bank2.heads.at(p).b == h.b);
    }
}

TEST_CASE("train_head input validation") {
    CHECK_THROWS_AS(train_head(Matrix(0, 1), matrix_1d({1.0}), {}), DomainError);
    Matrix bad(1, 1);
    bad.at(0, 0) = std::nan("");
    CHECK_THROWS_AS(train_head(bad, matrix_1d({1.0}), {}), DataError);
}
