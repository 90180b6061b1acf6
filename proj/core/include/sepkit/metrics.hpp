#pragma once

#include <string>
#include <vector>

#include "sepkit/heads.hpp"
#include "sepkit/pairs.hpp"

namespace sepkit {

// One separability run: heads trained on a class subset C, evaluated on a
// fixed evaluation set C'. Pair ids refer to the shared class universe.
struct RunRecord {
    std::string id;
    std::vector<ClassId> subset;      // selected training classes C
    std::vector<PairId> head_pairs;   // error-matrix columns
    std::vector<PairId> eval_pairs;   // error-matrix rows
    Matrix errors;                    // oriented per-head error per eval pair
    std::string stage;                // "pre" or "post"
};

// Mean over qualifying runs of the number of evaluation pairs whose minimal
// error among heads involving class I stays within eps.
double class_separability(const std::vector<RunRecord>& runs, ClassId cls, double eps);

// Mean over qualifying runs of the number of evaluation pairs separated by
// the head assigned to pair P.
double pair_separability(const std::vector<RunRecord>& runs, const PairId& pair, double eps);

struct LinearFit {
    double r = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
};

// Sample Pearson correlation and least-squares line.
LinearFit pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct MetricTable {
    double eps = 0.0;
    std::vector<ClassId> class_ids;
    std::vector<double> class_sep_pre;
    std::vector<double> class_sep_post;
    std::vector<PairId> pair_ids;
    std::vector<double> pair_sep_pre;
    std::vector<double> pair_sep_post;
    LinearFit class_fit;  // post vs pre across classes
    LinearFit pair_fit;   // post vs pre across pairs
};

// Correlation summary between pre and post stage runs. All runs must share
// the same evaluation set; mixing evaluation sets is an error.
MetricTable build_metric_table(const std::vector<RunRecord>& runs, double eps);

}  // namespace sepkit
