#pragma once

#include <cstdint>
#include <vector>

#include "sepkit/heads.hpp"

namespace sepkit {

// Isotropic Gaussian class layout with a shared sigma.
struct GaussianSpec {
    std::vector<std::vector<double>> means;  // one mean vector per class
    double sigma = 1.0;
    std::size_t samples_per_class = 0;
    std::uint64_t seed = 0;

    std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }
    void validate() const;
};

// Deterministic sampling: class c row r depends only on (seed, c, r).
FeatureSet generate(const GaussianSpec& spec);

// Optimal-threshold error of the 1-D projection onto the inter-mean axis:
// Phi(-|mu_i - mu_j| / (2 sigma)). Returns 0.5 when i == j.
double pairwise_bayes_error(const GaussianSpec& spec, std::size_t i, std::size_t j);

}  // namespace sepkit
