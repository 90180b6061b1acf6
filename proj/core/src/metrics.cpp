#include "sepkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "sepkit/errors.hpp"

namespace sepkit {

namespace {

bool subset_contains(const RunRecord& run, ClassId c) {
    return std::find(run.subset.begin(), run.subset.end(), c) != run.subset.end();
}

}  // namespace

double class_separability(const std::vector<RunRecord>& runs, ClassId cls, double eps) {
    double total = 0.0;
    std::size_t qualifying = 0;
    for (const RunRecord& run : runs) {
        if (!subset_contains(run, cls)) continue;
        ++qualifying;
        std::size_t sum = 0;
        for (std::size_t r = 0; r < run.eval_pairs.size(); ++r) {
            double min_err = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < run.head_pairs.size(); ++c) {
                if (run.head_pairs[c].lo != cls && run.head_pairs[c].hi != cls) continue;
                min_err = std::min(min_err, run.errors.at(r, c));
            }
            if (!(min_err > eps)) ++sum;  // indicator 0 only when min error exceeds eps
        }
        total += static_cast<double>(sum);
    }
    if (qualifying == 0) throw DomainError("class_separability: no run contains the class");
    return total / static_cast<double>(qualifying);
}

double pair_separability(const std::vector<RunRecord>& runs, const PairId& pair, double eps) {
    double total = 0.0;
    std::size_t qualifying = 0;
    for (const RunRecord& run : runs) {
        if (!subset_contains(run, pair.lo) || !subset_contains(run, pair.hi)) continue;
        const auto it = std::find(run.head_pairs.begin(), run.head_pairs.end(), pair);
        if (it == run.head_pairs.end()) continue;
        const std::size_t col = static_cast<std::size_t>(it - run.head_pairs.begin());
        ++qualifying;
        std::size_t count = 0;
        for (std::size_t r = 0; r < run.eval_pairs.size(); ++r)
            if (run.errors.at(r, col) < eps) ++count;
        total += static_cast<double>(count);
    }
    if (qualifying == 0) throw DomainError("pair_separability: no run contains the pair");
    return total / static_cast<double>(qualifying);
}

LinearFit pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw DomainError("pearson: length mismatch");
    if (xs.size() < 2) throw DomainError("pearson: need at least 2 points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DomainError("pearson: degenerate variance");
    LinearFit fit;
    fit.r = sxy / std::sqrt(sxx * syy);
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

MetricTable build_metric_table(const std::vector<RunRecord>& runs, double eps) {
    if (runs.empty()) throw DomainError("build_metric_table: no runs");
    const auto& eval = runs.front().eval_pairs;
    for (const RunRecord& run : runs)
        if (run.eval_pairs != eval)
            throw DomainError("build_metric_table: runs have differing evaluation sets");

    std::vector<RunRecord> pre, post;
    for (const RunRecord& run : runs) {
        if (run.stage == "pre")
            pre.push_back(run);
        else if (run.stage == "post")
            post.push_back(run);
        else
            throw DomainError("build_metric_table: stage must be 'pre' or 'post'");
    }
    if (pre.empty() || post.empty())
        throw DomainError("build_metric_table: need runs in both stages");

    MetricTable table;
    table.eps = eps;

    std::set<ClassId> class_set;
    std::set<PairId> pair_set;
    for (const RunRecord& run : runs) {
        class_set.insert(run.subset.begin(), run.subset.end());
        pair_set.insert(run.head_pairs.begin(), run.head_pairs.end());
    }

    for (ClassId c : class_set) {
        table.class_ids.push_back(c);
        table.class_sep_pre.push_back(class_separability(pre, c, eps));
        table.class_sep_post.push_back(class_separability(post, c, eps));
    }
    for (const PairId& p : pair_set) {
        table.pair_ids.push_back(p);
        table.pair_sep_pre.push_back(pair_separability(pre, p, eps));
        table.pair_sep_post.push_back(pair_separability(post, p, eps));
    }
    table.class_fit = pearson(table.class_sep_pre, table.class_sep_post);
    table.pair_fit = pearson(table.pair_sep_pre, table.pair_sep_post);
    return table;
}

}  // namespace sepkit
