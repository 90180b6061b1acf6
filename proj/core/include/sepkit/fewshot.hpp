#pragma once

#include <cstdint>
#include <vector>

#include "sepkit/heads.hpp"
#include "sepkit/pairs.hpp"

namespace sepkit {

struct EpisodeConfig {
    std::size_t ways = 2;
    std::size_t shots = 1;
    std::size_t queries = 15;  // per class
};

struct EpisodeStats {
    double mean_accuracy = 0.0;
    double ci_half_width = 0.0;  // 1.96 * sd / sqrt(runs)
    std::size_t runs = 0;
};

// Index of the Euclidean-nearest mean; ties broken by lowest index.
std::size_t ncm_classify(const std::vector<std::vector<double>>& means,
                         std::span<const double> query);

// Nearest-class-mean episodes over the novel feature set. Episode e draws
// from an RNG stream keyed by (seed, e), so results do not depend on
// execution order. When a pool is given, ways must be 2 and each episode
// samples one pool pair uniformly.
EpisodeStats run_episodes(const FeatureSet& novel, const EpisodeConfig& cfg, std::size_t n_runs,
                          std::uint64_t seed, const std::vector<PairId>* class_pool = nullptr);

struct PairRanking {
    std::vector<PairId> best;    // k lowest best-head errors
    std::vector<PairId> worst;   // k highest
    std::vector<std::pair<PairId, double>> errors;  // all pairs, ranked ascending
    bool degenerate = false;     // no error spread; best and worst coincide
};

// Ranks novel pairs by the bank's best-head error. The bank is expected to
// be trained on base classes only.
PairRanking best_worst_pair_sets(const HeadBank& bank, const FeatureSet& novel, double eps,
                                 std::size_t k);

}  // namespace sepkit
