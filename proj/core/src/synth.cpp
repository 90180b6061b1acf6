#include "sepkit/synth.hpp"

#include <cmath>

#include "sepkit/errors.hpp"
#include "sepkit/rng.hpp"

namespace sepkit {

void GaussianSpec::validate() const {
    if (means.size() < 2) throw DomainError("GaussianSpec: need at least 2 classes");
    if (!(sigma > 0)) throw DomainError("GaussianSpec: sigma must be positive");
    if (samples_per_class == 0) throw DomainError("GaussianSpec: need samples per class");
    const std::size_t d = means.front().size();
    if (d == 0) throw DomainError("GaussianSpec: zero-dimensional means");
    for (const auto& mu : means) {
        if (mu.size() != d) throw DomainError("GaussianSpec: mean dimensions differ");
        for (double v : mu)
            if (!std::isfinite(v)) throw DomainError("GaussianSpec: non-finite mean");
    }
}

FeatureSet generate(const GaussianSpec& spec) {
    spec.validate();
    const std::size_t d = spec.dim();
    FeatureSet fs;
    fs.classes.reserve(spec.means.size());
    for (std::size_t c = 0; c < spec.means.size(); ++c) {
        Matrix m(spec.samples_per_class, d);
        for (std::size_t r = 0; r < spec.samples_per_class; ++r) {
            // one stream per (class, row)
            CounterRng rng(spec.seed, (static_cast<std::uint64_t>(c) << 32) | r);
            for (std::size_t k = 0; k < d; ++k)
                m.at(r, k) = spec.means[c][k] + spec.sigma * rng.next_normal();
        }
        fs.classes.push_back(std::move(m));
        fs.names.push_back("class" + std::to_string(c));
    }
    return fs;
}

double pairwise_bayes_error(const GaussianSpec& spec, std::size_t i, std::size_t j) {
    spec.validate();
    if (i >= spec.means.size() || j >= spec.means.size())
        throw DomainError("pairwise_bayes_error: class index out of range");
    if (i == j) return 0.5;
    double dist2 = 0.0;
    for (std::size_t k = 0; k < spec.dim(); ++k) {
        const double delta = spec.means[i][k] - spec.means[j][k];
        dist2 += delta * delta;
    }
    const double z = -std::sqrt(dist2) / (2.0 * spec.sigma);
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace sepkit
