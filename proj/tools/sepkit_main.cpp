#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sepkit/errors.hpp"
#include "sepkit/fewshot.hpp"
#include "sepkit/heads.hpp"
#include "sepkit/io.hpp"
#include "sepkit/metrics.hpp"
#include "sepkit/poset.hpp"
#include "sepkit/separability.hpp"
#include "sepkit/synth.hpp"

using nlohmann::json;

namespace {

struct GlobalFlags {
    bool json_errors = false;
    bool deterministic = false;
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sepkit::DataError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw sepkit::DataError(path + ": " + e.what());
    }
    return j;
}

json load_json_stdin() {
    json j;
    try {
        std::cin >> j;
    } catch (const json::exception& e) {
        throw sepkit::DataError(std::string("stdin: ") + e.what());
    }
    return j;
}

void stamp(json& j, const GlobalFlags& flags) {
    if (!flags.deterministic) {
        const auto now = std::chrono::system_clock::now();
        j["generated_at"] =
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    }
}

void emit(const json& j, const std::optional<std::string>& out_path) {
    if (out_path)
        sepkit::write_atomic(*out_path, j.dump(2) + "\n");
    else
        std::cout << j.dump(2) << "\n";
}

sepkit::SetBank sets_from_models(const std::vector<sepkit::AbstractModel>& models, std::size_t n,
                                 bool* complete_bank) {
    sepkit::SetBank bank;
    bool complete = models.size() == sepkit::pair_count(n);
    for (const auto& m : models) {
        if (!m.label) {
            complete = false;
            break;
        }
        if (!bank.emplace(*m.label, sepkit::separable_set(m, n)).second) {
            complete = false;
            break;
        }
    }
    *complete_bank = complete && bank.size() == sepkit::pair_count(n);
    return bank;
}

// --standardize: per-dimension zero mean, unit variance over all samples.
void standardize(sepkit::FeatureSet& fs) {
    const std::size_t d = fs.dim();
    std::vector<double> mean(d, 0.0), var(d, 0.0);
    std::size_t total = 0;
    for (const auto& m : fs.classes) {
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t k = 0; k < d; ++k) mean[k] += m.at(r, k);
        total += m.rows();
    }
    for (std::size_t k = 0; k < d; ++k) mean[k] /= static_cast<double>(total);
    for (const auto& m : fs.classes)
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t k = 0; k < d; ++k) {
                const double delta = m.at(r, k) - mean[k];
                var[k] += delta * delta;
            }
    for (auto& m : fs.classes)
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t k = 0; k < d; ++k) {
                const double sd = std::sqrt(var[k] / static_cast<double>(total));
                m.at(r, k) = sd > 0 ? (m.at(r, k) - mean[k]) / sd : 0.0;
            }
    fs.standardized = true;
}

int run(int argc, char** argv) {
    CLI::App app{"separability toolkit: pair heads, separability scores, poset analysis"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_flag("--json", flags.json_errors, "machine-readable errors on stderr");
    app.add_flag("--deterministic", flags.deterministic,
                 "omit timestamps so identical inputs give byte-identical outputs");

    // synth
    auto* synth = app.add_subcommand("synth", "generate Gaussian class features from a spec");
    std::string synth_spec;
    std::string synth_out;
    std::optional<std::uint64_t> synth_seed;
    synth->add_option("--spec", synth_spec, "Gaussian spec JSON")->required();
    synth->add_option("--out", synth_out, "output feature CSV path")->required();
    synth->add_option("--seed", synth_seed, "override the spec seed");

    // train-heads
    auto* train = app.add_subcommand("train-heads", "train one linear head per class pair");
    std::string train_features, train_out;
    sepkit::TrainConfig train_cfg;
    bool train_standardize = false;
    train->add_option("--features", train_features, "feature CSV")->required();
    train->add_option("--out", train_out, "output head bank JSON")->required();
    train->add_option("--lr", train_cfg.learning_rate, "learning rate")
        ->check(CLI::PositiveNumber);
    train->add_option("--iterations", train_cfg.iterations, "gradient iterations")
        ->check(CLI::PositiveNumber);
    train->add_option("--l2", train_cfg.l2, "L2 penalty")->check(CLI::NonNegativeNumber);
    train->add_flag("--standardize", train_standardize, "standardize features before training");

    // separability
    auto* sep = app.add_subcommand("separability", "score a head bank on a novel class set");
    std::string sep_features, sep_bank;
    std::optional<std::string> sep_out, sep_csv;
    double sep_eps = 0.025;
    sep->add_option("--features", sep_features, "novel-class feature CSV")->required();
    sep->add_option("--bank", sep_bank, "head bank JSON")->required();
    sep->add_option("--eps", sep_eps, "error tolerance, in (0, 0.5)")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(0.5, 0.0)));
    sep->add_option("--out", sep_out, "report JSON path");
    sep->add_option("--csv", sep_csv, "report CSV path");

    // poset
    auto* poset = app.add_subcommand("poset", "equivalence classes, Hasse diagram, bounds");
    std::optional<std::string> poset_models, poset_bank, poset_features;
    std::optional<std::string> poset_out, poset_dot;
    double poset_eps = 0.025;
    poset->add_option("--models", poset_models, "abstract model JSON");
    poset->add_option("--bank", poset_bank, "head bank JSON (with --features)");
    poset->add_option("--features", poset_features, "novel-class feature CSV (with --bank)");
    poset->add_option("--eps", poset_eps, "error tolerance for the bank route")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(0.5, 0.0)));
    poset->add_option("--out", poset_out, "report JSON path");
    poset->add_option("--dot", poset_dot, "Hasse diagram DOT path");

    // fundamental
    auto* fund = app.add_subcommand("fundamental", "minimum models covering all pairs");
    std::optional<std::string> fund_models;
    bool fund_exact = false, fund_greedy = false;
    fund->add_option("--models", fund_models, "abstract model JSON (default: stdin)");
    fund->add_flag("--exact", fund_exact, "exact branch-and-bound");
    fund->add_flag("--greedy", fund_greedy, "greedy upper bound");

    // metrics
    auto* metrics = app.add_subcommand("metrics", "class/pair separability and correlations");
    std::vector<std::string> metrics_runs;
    std::optional<std::string> metrics_out, metrics_csv;
    double metrics_eps = 0.025;
    metrics->add_option("--runs", metrics_runs, "run record JSON files")->required();
    metrics->add_option("--eps", metrics_eps, "error tolerance")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(0.5, 0.0)));
    metrics->add_option("--out", metrics_out, "table JSON path");
    metrics->add_option("--csv", metrics_csv, "table CSV path");

    // fewshot
    auto* fewshot = app.add_subcommand("fewshot", "nearest-class-mean episodes");
    std::string fs_features;
    std::optional<std::string> fs_bank, fs_out;
    sepkit::EpisodeConfig fs_cfg;
    std::size_t fs_runs = 1000, fs_k = 1;
    std::uint64_t fs_seed = 0;
    std::string fs_pool = "all";
    double fs_eps = 0.025;
    fewshot->add_option("--features", fs_features, "novel-class feature CSV")->required();
    fewshot->add_option("--bank", fs_bank, "head bank JSON (needed for best/worst pools)");
    fewshot->add_option("--ways", fs_cfg.ways, "classes per episode");
    fewshot->add_option("--shots", fs_cfg.shots, "supports per class");
    fewshot->add_option("--queries", fs_cfg.queries, "queries per class");
    fewshot->add_option("--runs", fs_runs, "episode count")->check(CLI::PositiveNumber);
    fewshot->add_option("--seed", fs_seed, "episode RNG seed");
    fewshot->add_option("--pool", fs_pool, "best|worst|all")
        ->check(CLI::IsMember({"best", "worst", "all"}));
    fewshot->add_option("--k", fs_k, "pairs in each of the best/worst sets");
    fewshot->add_option("--eps", fs_eps, "error tolerance for pool ranking")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(0.5, 0.0)));
    fewshot->add_option("--out", fs_out, "stats JSON path");

    // construct
    auto* construct = app.add_subcommand("construct", "bound-achieving model families");
    std::optional<std::size_t> c_hypercube, c_parity;
    std::optional<std::string> c_out;
    construct->add_option("--hypercube", c_hypercube, "k single-bit models over 2^k classes");
    construct->add_option("--parity", c_parity, "C(n,2) parity models over n classes");
    construct->add_option("--out", c_out, "output JSON path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors exit 1
    }

    if (*synth) {
        sepkit::GaussianSpec gspec = sepkit::gaussian_spec_from_json(load_json_file(synth_spec));
        if (synth_seed) gspec.seed = *synth_seed;
        const sepkit::FeatureSet fs = sepkit::generate(gspec);
        sepkit::save_features(fs, synth_out, "synth seed=" + std::to_string(gspec.seed));
        std::cout << "wrote " << synth_out << " (" << fs.num_classes() << " classes, d="
                  << fs.dim() << ", " << gspec.samples_per_class << " samples/class)\n";
    } else if (*train) {
        sepkit::FeatureSet fs = sepkit::load_features(train_features);
        if (train_standardize) standardize(fs);
        const sepkit::HeadBank bank = sepkit::train_bank(fs, train_cfg);
        json j = sepkit::to_json(bank);
        j["config"] = {{"learning_rate", train_cfg.learning_rate},
                       {"iterations", train_cfg.iterations},
                       {"l2", train_cfg.l2},
                       {"standardized", train_standardize}};
        stamp(j, flags);
        sepkit::write_atomic(train_out, j.dump(2) + "\n");
        std::cout << "trained " << bank.heads.size() << " heads (d=" << bank.dim << ")\n";
    } else if (*sep) {
        const sepkit::FeatureSet fs = sepkit::load_features(sep_features);
        const sepkit::HeadBank bank = sepkit::head_bank_from_json(load_json_file(sep_bank));
        const auto report = sepkit::compute_separability(fs, bank, sep_eps);
        json j = sepkit::to_json(report);
        stamp(j, flags);
        if (sep_out) sepkit::write_atomic(*sep_out, j.dump(2) + "\n");
        if (sep_csv) sepkit::write_atomic(*sep_csv, sepkit::separability_csv(report));
        std::cout << "separability " << report.score << " of "
                  << report.matrix.row_pairs.size() << " pairs (eps=" << sep_eps << ")\n";
    } else if (*poset) {
        sepkit::PosetReport report;
        sepkit::SetBank bank;
        std::vector<std::string> names;
        if (poset_models) {
            const auto [models, n] = sepkit::models_from_json(load_json_file(*poset_models));
            bool complete = false;
            bank = sets_from_models(models, n, &complete);
            if (complete) {
                report = sepkit::analyze_bank(bank, n);
            } else {
                std::vector<sepkit::SeparableSet> sets;
                for (const auto& m : models) sets.push_back(sepkit::separable_set(m, n));
                report = sepkit::analyze_sets(sets, n);
                bank.clear();
            }
        } else if (poset_bank && poset_features) {
            const sepkit::FeatureSet fs = sepkit::load_features(*poset_features);
            const sepkit::HeadBank hb = sepkit::head_bank_from_json(load_json_file(*poset_bank));
            const auto s = sepkit::separability_matrix(fs, hb, poset_eps);
            // each head's separable set over the novel pairs is its column
            const std::size_t width = s.row_pairs.size();
            for (std::size_t c = 0; c < s.col_pairs.size(); ++c) {
                sepkit::SeparableSet set(width);
                for (std::size_t r = 0; r < width; ++r)
                    if (s.at(r, c)) set.set(r);
                bank.emplace(s.col_pairs[c], std::move(set));
            }
            names = fs.names;
            report = sepkit::analyze_sets(
                [&] {
                    std::vector<sepkit::SeparableSet> sets;
                    for (const auto& [p, st] : bank) sets.push_back(st);
                    return sets;
                }(),
                s.novel_classes);
        } else {
            throw CLI::ValidationError("poset", "need --models or both --bank and --features");
        }
        json j = sepkit::to_json(report);
        stamp(j, flags);
        if (poset_dot) sepkit::write_atomic(*poset_dot, sepkit::to_dot(report, bank, names));
        emit(j, poset_out);
    } else if (*fund) {
        if (fund_exact == fund_greedy)
            throw CLI::ValidationError("fundamental", "choose exactly one of --exact, --greedy");
        const json j = fund_models ? load_json_file(*fund_models) : load_json_stdin();
        const auto [models, n] = sepkit::models_from_json(j);
        std::vector<sepkit::SeparableSet> sets;
        for (const auto& m : models) sets.push_back(sepkit::separable_set(m, n));
        const std::size_t value = fund_exact ? sepkit::fundamental_number_exact(sets, n)
                                             : sepkit::fundamental_number_greedy(sets, n);
        std::cout << value << "\n";
    } else if (*metrics) {
        std::vector<sepkit::RunRecord> runs;
        for (const std::string& path : metrics_runs)
            runs.push_back(sepkit::run_record_from_json(load_json_file(path)));
        const auto table = sepkit::build_metric_table(runs, metrics_eps);
        json j = sepkit::to_json(table);
        stamp(j, flags);
        if (metrics_out) sepkit::write_atomic(*metrics_out, j.dump(2) + "\n");
        if (metrics_csv) sepkit::write_atomic(*metrics_csv, sepkit::metric_table_csv(table));
        std::cout << "class separability: pearson " << table.class_fit.r << " slope "
                  << table.class_fit.slope << " intercept " << table.class_fit.intercept << "\n";
        std::cout << "pair separability:  pearson " << table.pair_fit.r << " slope "
                  << table.pair_fit.slope << " intercept " << table.pair_fit.intercept << "\n";
    } else if (*fewshot) {
        const sepkit::FeatureSet fs = sepkit::load_features(fs_features);
        std::optional<std::vector<sepkit::PairId>> pool;
        if (fs_pool != "all") {
            if (!fs_bank)
                throw CLI::ValidationError("fewshot", "--pool best|worst requires --bank");
            const sepkit::HeadBank bank = sepkit::head_bank_from_json(load_json_file(*fs_bank));
            const auto ranking = sepkit::best_worst_pair_sets(bank, fs, fs_eps, fs_k);
            pool = fs_pool == "best" ? ranking.best : ranking.worst;
        }
        const auto stats =
            sepkit::run_episodes(fs, fs_cfg, fs_runs, fs_seed, pool ? &*pool : nullptr);
        json j = sepkit::to_json(stats, fs_cfg, fs_seed);
        j["pool"] = fs_pool;
        stamp(j, flags);
        if (fs_out) sepkit::write_atomic(*fs_out, j.dump(2) + "\n");
        std::cout << "accuracy " << stats.mean_accuracy << " +/- " << stats.ci_half_width
                  << " over " << stats.runs << " episodes\n";
    } else if (*construct) {
        if (c_hypercube.has_value() == c_parity.has_value())
            throw CLI::ValidationError("construct", "choose exactly one of --hypercube, --parity");
        json j;
        if (c_hypercube) {
            const auto models = sepkit::construct_hypercube(*c_hypercube);
            j = sepkit::models_to_json(models, std::size_t{1} << *c_hypercube);
        } else {
            const auto bank = sepkit::construct_parity(*c_parity);
            j = sepkit::models_to_json(bank, *c_parity);
        }
        emit(j, c_out);
    }
    return 0;
}

void report_error(const GlobalFlags& flags, const char* kind, const std::string& what) {
    if (flags.json_errors) {
        json j;
        j["error"] = kind;
        j["message"] = what;
        std::cerr << j.dump() << "\n";
    } else {
        std::cerr << "error (" << kind << "): " << what << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    GlobalFlags flags;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--json") flags.json_errors = true;
    }
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        report_error(flags, "usage", e.what());
        return 1;
    } catch (const sepkit::DataError& e) {
        report_error(flags, "data", e.what());
        return 2;
    } catch (const sepkit::BudgetError& e) {
        report_error(flags, "budget", e.what());
        return 2;
    } catch (const sepkit::DomainError& e) {
        report_error(flags, "domain", e.what());
        return 2;
    } catch (const std::exception& e) {
        report_error(flags, "internal", e.what());
        return 2;
    }
}
