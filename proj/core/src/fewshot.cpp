#include "sepkit/fewshot.hpp"

#include <algorithm>
#include <cmath>

#include "sepkit/errors.hpp"
#include "sepkit/rng.hpp"
#include "sepkit/separability.hpp"

namespace sepkit {

std::size_t ncm_classify(const std::vector<std::vector<double>>& means,
                         std::span<const double> query) {
    if (means.empty()) throw DomainError("ncm_classify: no class means");
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < means.size(); ++c) {
        if (means[c].size() != query.size())
            throw DomainError("ncm_classify: dimension mismatch");
        double d2 = 0.0;
        for (std::size_t k = 0; k < query.size(); ++k) {
            const double delta = means[c][k] - query[k];
            d2 += delta * delta;
        }
        if (d2 < best_d2) {  // strict: ties keep the lowest index
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

namespace {

// Sample `count` distinct values from [0, n) in draw order.
std::vector<std::size_t> sample_without_replacement(CounterRng& rng, std::size_t n,
                                                    std::size_t count) {
    std::vector<std::size_t> picked;
    picked.reserve(count);
    while (picked.size() < count) {
        const std::size_t v = rng.next_u64() % n;
        if (std::find(picked.begin(), picked.end(), v) == picked.end()) picked.push_back(v);
    }
    return picked;
}

}  // namespace

EpisodeStats run_episodes(const FeatureSet& novel, const EpisodeConfig& cfg, std::size_t n_runs,
                          std::uint64_t seed, const std::vector<PairId>* class_pool) {
    novel.validate();
    if (n_runs == 0) throw DomainError("run_episodes: need at least one run");
    if (cfg.ways < 2) throw DomainError("run_episodes: need at least 2 ways");
    if (cfg.shots == 0 || cfg.queries == 0)
        throw DomainError("run_episodes: shots and queries must be positive");
    if (class_pool) {
        if (class_pool->empty()) throw DomainError("run_episodes: empty class pool");
        if (cfg.ways != 2) throw DomainError("run_episodes: pair pool requires 2-way episodes");
        for (const PairId& p : *class_pool)
            if (p.hi >= novel.num_classes())
                throw DomainError("run_episodes: pool class out of range");
    } else if (cfg.ways > novel.num_classes()) {
        throw DomainError("run_episodes: more ways than classes");
    }
    const std::size_t need = cfg.shots + cfg.queries;
    for (const Matrix& m : novel.classes)
        if (m.rows() < need) throw DomainError("run_episodes: class has too few samples");

    const std::size_t d = novel.dim();
    std::vector<double> accuracies(n_runs, 0.0);
    for (std::size_t e = 0; e < n_runs; ++e) {
        CounterRng rng(seed, e);

        std::vector<ClassId> episode_classes;
        if (class_pool) {
            const PairId& p = (*class_pool)[rng.next_u64() % class_pool->size()];
            episode_classes = {p.lo, p.hi};
        } else {
            for (std::size_t i : sample_without_replacement(rng, novel.num_classes(), cfg.ways))
                episode_classes.push_back(i);
        }

        std::vector<std::vector<double>> means(cfg.ways, std::vector<double>(d, 0.0));
        std::vector<std::vector<std::size_t>> query_rows(cfg.ways);
        for (std::size_t way = 0; way < cfg.ways; ++way) {
            const Matrix& cls = novel.classes[episode_classes[way]];
            const auto rows = sample_without_replacement(rng, cls.rows(), need);
            for (std::size_t s = 0; s < cfg.shots; ++s) {
                const auto x = cls.row(rows[s]);
                for (std::size_t k = 0; k < d; ++k) means[way][k] += x[k];
            }
            for (std::size_t k = 0; k < d; ++k) means[way][k] /= static_cast<double>(cfg.shots);
            query_rows[way].assign(rows.begin() + static_cast<std::ptrdiff_t>(cfg.shots),
                                   rows.end());
        }

        std::size_t correct = 0;
        for (std::size_t way = 0; way < cfg.ways; ++way) {
            const Matrix& cls = novel.classes[episode_classes[way]];
            for (std::size_t r : query_rows[way])
                if (ncm_classify(means, cls.row(r)) == way) ++correct;
        }
        accuracies[e] =
            static_cast<double>(correct) / static_cast<double>(cfg.ways * cfg.queries);
    }

    EpisodeStats stats;
    stats.runs = n_runs;
    double sum = 0.0;
    for (double a : accuracies) sum += a;
    stats.mean_accuracy = sum / static_cast<double>(n_runs);
    double var = 0.0;
    for (double a : accuracies) {
        const double dmean = a - stats.mean_accuracy;
        var += dmean * dmean;
    }
    const double sd = n_runs > 1 ? std::sqrt(var / static_cast<double>(n_runs - 1)) : 0.0;
    stats.ci_half_width = 1.96 * sd / std::sqrt(static_cast<double>(n_runs));
    return stats;
}

PairRanking best_worst_pair_sets(const HeadBank& bank, const FeatureSet& novel, double eps,
                                 std::size_t k) {
    if (!(eps > 0.0 && eps < 0.5))
        throw DomainError("best_worst_pair_sets: eps must be in (0, 0.5)");
    const auto best_heads = best_head_per_pair(novel, bank);
    const auto pairs = all_pairs(novel.num_classes());
    if (k == 0 || k > pairs.size())
        throw DomainError("best_worst_pair_sets: k out of range");

    PairRanking ranking;
    ranking.errors.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        ranking.errors.emplace_back(pairs[i], best_heads[i].error);
    std::stable_sort(ranking.errors.begin(), ranking.errors.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second < b.second;
                         return a.first < b.first;
                     });
    for (std::size_t i = 0; i < k; ++i) ranking.best.push_back(ranking.errors[i].first);
    // worst: highest error first, equal errors resolved by smallest pair
    auto desc = ranking.errors;
    std::stable_sort(desc.begin(), desc.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    for (std::size_t i = 0; i < k; ++i) ranking.worst.push_back(desc[i].first);
    ranking.degenerate =
        ranking.errors.front().second == ranking.errors.back().second;
    return ranking;
}

}  // namespace sepkit
