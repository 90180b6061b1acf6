#include "sepkit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sepkit/errors.hpp"

namespace sepkit {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        std::ostringstream os;
        os << "line " << line_no << ": cannot parse value '" << s << "'";
        throw DataError(os.str());
    }
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "line " << line_no << ": non-finite value";
        throw DataError(os.str());
    }
    return v;
}

json pair_to_json(const PairId& p) { return json::array({p.lo, p.hi}); }

PairId pair_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw DataError("expected a [lo, hi] pair");
    return PairId(j[0].get<ClassId>(), j[1].get<ClassId>());
}

}  // namespace

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".json");
    return p;
}

FeatureSet load_features(const std::filesystem::path& csv_path) {
    std::ifstream manifest_in(manifest_path_for(csv_path));
    if (!manifest_in)
        throw DataError("cannot open manifest " + manifest_path_for(csv_path).string());
    json manifest;
    try {
        manifest_in >> manifest;
    } catch (const json::exception& e) {
        throw DataError("manifest parse error: " + std::string(e.what()));
    }
    const std::size_t d = manifest.at("d").get<std::size_t>();
    const std::vector<std::string> names = manifest.at("classes").get<std::vector<std::string>>();
    if (names.empty()) throw DataError("manifest lists no classes");

    std::ifstream in(csv_path);
    if (!in) throw DataError("cannot open " + csv_path.string());

    FeatureSet fs;
    fs.names = names;
    fs.standardized = manifest.value("standardized", false);
    std::vector<std::vector<double>> rows_per_class(names.size());

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw DataError("empty feature file");
    ++line_no;
    const auto header = split_csv_line(line);
    if (header.size() != d + 1 || header[0] != "class") {
        std::ostringstream os;
        os << "line 1: bad header, expected class,f0,...,f" << (d - 1);
        throw DataError(os.str());
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != d + 1) {
            std::ostringstream os;
            os << "line " << line_no << ": expected " << d + 1 << " fields, got " << fields.size();
            throw DataError(os.str());
        }
        const auto it = std::find(names.begin(), names.end(), fields[0]);
        if (it == names.end()) {
            std::ostringstream os;
            os << "line " << line_no << ": unknown class label '" << fields[0] << "'";
            throw DataError(os.str());
        }
        auto& rows = rows_per_class[static_cast<std::size_t>(it - names.begin())];
        for (std::size_t k = 0; k < d; ++k) rows.push_back(parse_double(fields[k + 1], line_no));
    }

    for (std::size_t c = 0; c < names.size(); ++c) {
        const std::size_t n_rows = rows_per_class[c].size() / d;
        Matrix m(n_rows, d);
        m.data() = std::move(rows_per_class[c]);
        fs.classes.push_back(std::move(m));
    }
    fs.validate();
    return fs;
}

void save_features(const FeatureSet& fs, const std::filesystem::path& csv_path,
                   const std::string& source) {
    fs.validate();
    const std::size_t d = fs.dim();
    std::ostringstream csv;
    csv << "class";
    for (std::size_t k = 0; k < d; ++k) csv << ",f" << k;
    csv << "\n";
    std::vector<std::string> names = fs.names;
    if (names.empty())
        for (std::size_t c = 0; c < fs.num_classes(); ++c)
            names.push_back("class" + std::to_string(c));
    for (std::size_t c = 0; c < fs.num_classes(); ++c) {
        const Matrix& m = fs.classes[c];
        for (std::size_t r = 0; r < m.rows(); ++r) {
            csv << names[c];
            for (std::size_t k = 0; k < d; ++k) csv << "," << format_double(m.at(r, k));
            csv << "\n";
        }
    }
    write_atomic(csv_path, csv.str());

    json manifest;
    manifest["d"] = d;
    manifest["classes"] = names;
    std::vector<std::size_t> counts;
    for (const Matrix& m : fs.classes) counts.push_back(m.rows());
    manifest["counts"] = counts;
    manifest["standardized"] = fs.standardized;
    manifest["source"] = source;
    write_atomic(manifest_path_for(csv_path), manifest.dump(2) + "\n");
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

json to_json(const Hyperplane& h) {
    json j;
    j["w"] = h.w;
    j["b"] = h.b;
    return j;
}

json to_json(const HeadBank& bank) {
    json j;
    j["version"] = kToolkitVersion;
    j["d"] = bank.dim;
    j["classes"] = bank.classes;
    json heads = json::array();
    for (const auto& [p, h] : bank.heads) {
        json e = to_json(h);
        e["pair"] = pair_to_json(p);
        heads.push_back(std::move(e));
    }
    j["heads"] = std::move(heads);
    return j;
}

HeadBank head_bank_from_json(const json& j) {
    HeadBank bank;
    try {
        bank.dim = j.at("d").get<std::size_t>();
        bank.classes = j.at("classes").get<std::vector<std::string>>();
        for (const auto& e : j.at("heads")) {
            Hyperplane h;
            h.w = e.at("w").get<std::vector<double>>();
            h.b = e.at("b").get<double>();
            if (h.w.size() != bank.dim) throw DataError("head dimension mismatch in bank file");
            bank.heads.emplace(pair_from_json(e.at("pair")), std::move(h));
        }
    } catch (const json::exception& e) {
        throw DataError("head bank parse error: " + std::string(e.what()));
    }
    return bank;
}

json to_json(const AbstractModel& m) {
    json j;
    j["side_a"] = m.side_a;
    j["side_b"] = m.side_b;
    if (m.label) j["label"] = pair_to_json(*m.label);
    return j;
}

namespace {

json models_to_json_impl(const std::vector<AbstractModel>& models, std::size_t n) {
    json j;
    j["version"] = kToolkitVersion;
    j["n"] = n;
    json arr = json::array();
    for (const auto& m : models) arr.push_back(to_json(m));
    j["models"] = std::move(arr);
    return j;
}

}  // namespace

json models_to_json(const std::vector<AbstractModel>& models, std::size_t n) {
    return models_to_json_impl(models, n);
}

json models_to_json(const ModelBank& bank, std::size_t n) {
    std::vector<AbstractModel> models;
    models.reserve(bank.size());
    for (const auto& [p, m] : bank) models.push_back(m);
    return models_to_json_impl(models, n);
}

std::pair<std::vector<AbstractModel>, std::size_t> models_from_json(const json& j) {
    std::vector<AbstractModel> models;
    std::size_t n = 0;
    try {
        n = j.at("n").get<std::size_t>();
        for (const auto& e : j.at("models")) {
            std::optional<PairId> label;
            if (e.contains("label")) label = pair_from_json(e.at("label"));
            models.push_back(AbstractModel::make(e.at("side_a").get<std::vector<ClassId>>(),
                                                 e.at("side_b").get<std::vector<ClassId>>(),
                                                 label));
        }
    } catch (const json::exception& e) {
        throw DataError("model file parse error: " + std::string(e.what()));
    }
    return {std::move(models), n};
}

json to_json(const PosetReport& report) {
    json j;
    j["version"] = kToolkitVersion;
    j["n"] = report.n;
    j["equivalence_classes"] = report.equivalence_classes;
    json edges = json::array();
    for (const auto& [u, v] : report.hasse_edges) edges.push_back(json::array({u, v}));
    j["hasse_edges"] = std::move(edges);
    j["maximal"] = report.maximal;
    json fp = json::array();
    for (const PairId& p : report.fundamental_pairs) fp.push_back(pair_to_json(p));
    j["fundamental_pairs"] = std::move(fp);
    if (report.fundamental_number)
        j["fundamental_number"] = *report.fundamental_number;
    else
        j["fundamental_number"] = nullptr;
    j["lower_bound"] = report.lower_bound;
    j["upper_bound"] = report.upper_bound;
    return j;
}

json to_json(const SeparabilityReport& report) {
    json j;
    j["version"] = kToolkitVersion;
    j["eps"] = report.eps;
    j["score"] = report.score;
    j["novel_classes"] = report.matrix.novel_classes;
    json rows = json::array();
    for (const PairId& p : report.matrix.row_pairs) rows.push_back(pair_to_json(p));
    j["row_pairs"] = std::move(rows);
    json cols = json::array();
    for (const PairId& p : report.matrix.col_pairs) cols.push_back(pair_to_json(p));
    j["col_pairs"] = std::move(cols);
    const std::size_t ncols = report.matrix.col_pairs.size();
    json bits = json::array();
    json errors = json::array();
    for (std::size_t r = 0; r < report.matrix.row_pairs.size(); ++r) {
        json brow = json::array();
        json erow = json::array();
        for (std::size_t c = 0; c < ncols; ++c) {
            brow.push_back(static_cast<int>(report.matrix.bits[r * ncols + c]));
            erow.push_back(report.errors.at(r, c));
        }
        bits.push_back(std::move(brow));
        errors.push_back(std::move(erow));
    }
    j["bits"] = std::move(bits);
    j["errors"] = std::move(errors);
    json best = json::array();
    for (std::size_t r = 0; r < report.best.size(); ++r) {
        json e;
        e["pair"] = pair_to_json(report.matrix.row_pairs[r]);
        e["head"] = pair_to_json(report.best[r].head);
        e["error"] = report.best[r].error;
        best.push_back(std::move(e));
    }
    j["best"] = std::move(best);
    return j;
}

std::string separability_csv(const SeparabilityReport& report) {
    std::ostringstream os;
    os << "i,j,best_head_i,best_head_j,best_error,separated\n";
    const std::size_t ncols = report.matrix.col_pairs.size();
    for (std::size_t r = 0; r < report.matrix.row_pairs.size(); ++r) {
        const PairId& p = report.matrix.row_pairs[r];
        bool separated = false;
        for (std::size_t c = 0; c < ncols && !separated; ++c)
            separated = report.matrix.bits[r * ncols + c] != 0;
        os << p.lo << "," << p.hi << "," << report.best[r].head.lo << ","
           << report.best[r].head.hi << "," << format_double(report.best[r].error) << ","
           << (separated ? 1 : 0) << "\n";
    }
    return os.str();
}

json to_json(const EpisodeStats& stats, const EpisodeConfig& cfg, std::uint64_t seed) {
    json j;
    j["version"] = kToolkitVersion;
    j["mean_accuracy"] = stats.mean_accuracy;
    j["ci_half_width"] = stats.ci_half_width;
    j["runs"] = stats.runs;
    j["config"] = {{"ways", cfg.ways}, {"shots", cfg.shots}, {"queries", cfg.queries}};
    j["seed"] = seed;
    return j;
}

json to_json(const PairRanking& ranking) {
    json j;
    j["version"] = kToolkitVersion;
    json best = json::array();
    for (const PairId& p : ranking.best) best.push_back(pair_to_json(p));
    j["best"] = std::move(best);
    json worst = json::array();
    for (const PairId& p : ranking.worst) worst.push_back(pair_to_json(p));
    j["worst"] = std::move(worst);
    json errors = json::array();
    for (const auto& [p, e] : ranking.errors)
        errors.push_back({{"pair", pair_to_json(p)}, {"error", e}});
    j["errors"] = std::move(errors);
    j["degenerate"] = ranking.degenerate;
    return j;
}

json to_json(const RunRecord& run) {
    json j;
    j["id"] = run.id;
    j["stage"] = run.stage;
    j["subset"] = run.subset;
    json hp = json::array();
    for (const PairId& p : run.head_pairs) hp.push_back(pair_to_json(p));
    j["head_pairs"] = std::move(hp);
    json ep = json::array();
    for (const PairId& p : run.eval_pairs) ep.push_back(pair_to_json(p));
    j["eval_pairs"] = std::move(ep);
    json errors = json::array();
    for (std::size_t r = 0; r < run.errors.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < run.errors.cols(); ++c) row.push_back(run.errors.at(r, c));
        errors.push_back(std::move(row));
    }
    j["errors"] = std::move(errors);
    return j;
}

RunRecord run_record_from_json(const json& j) {
    RunRecord run;
    try {
        run.id = j.at("id").get<std::string>();
        run.stage = j.at("stage").get<std::string>();
        run.subset = j.at("subset").get<std::vector<ClassId>>();
        for (const auto& e : j.at("head_pairs")) run.head_pairs.push_back(pair_from_json(e));
        for (const auto& e : j.at("eval_pairs")) run.eval_pairs.push_back(pair_from_json(e));
        const auto& errors = j.at("errors");
        run.errors = Matrix(run.eval_pairs.size(), run.head_pairs.size());
        if (errors.size() != run.eval_pairs.size())
            throw DataError("run record: error row count mismatch");
        for (std::size_t r = 0; r < run.eval_pairs.size(); ++r) {
            if (errors[r].size() != run.head_pairs.size())
                throw DataError("run record: error column count mismatch");
            for (std::size_t c = 0; c < run.head_pairs.size(); ++c)
                run.errors.at(r, c) = errors[r][c].get<double>();
        }
    } catch (const json::exception& e) {
        throw DataError("run record parse error: " + std::string(e.what()));
    }
    return run;
}

json to_json(const MetricTable& table) {
    json j;
    j["version"] = kToolkitVersion;
    j["eps"] = table.eps;
    json classes = json::array();
    for (std::size_t i = 0; i < table.class_ids.size(); ++i)
        classes.push_back({{"class", table.class_ids[i]},
                           {"pre", table.class_sep_pre[i]},
                           {"post", table.class_sep_post[i]}});
    j["class_separability"] = std::move(classes);
    json pairs = json::array();
    for (std::size_t i = 0; i < table.pair_ids.size(); ++i)
        pairs.push_back({{"pair", pair_to_json(table.pair_ids[i])},
                         {"pre", table.pair_sep_pre[i]},
                         {"post", table.pair_sep_post[i]}});
    j["pair_separability"] = std::move(pairs);
    j["class_fit"] = {{"pearson", table.class_fit.r},
                      {"slope", table.class_fit.slope},
                      {"intercept", table.class_fit.intercept}};
    j["pair_fit"] = {{"pearson", table.pair_fit.r},
                     {"slope", table.pair_fit.slope},
                     {"intercept", table.pair_fit.intercept}};
    return j;
}

std::string metric_table_csv(const MetricTable& table) {
    std::ostringstream os;
    os << "kind,id,pre,post\n";
    for (std::size_t i = 0; i < table.class_ids.size(); ++i)
        os << "class," << table.class_ids[i] << "," << format_double(table.class_sep_pre[i])
           << "," << format_double(table.class_sep_post[i]) << "\n";
    for (std::size_t i = 0; i < table.pair_ids.size(); ++i)
        os << "pair," << table.pair_ids[i].lo << "-" << table.pair_ids[i].hi << ","
           << format_double(table.pair_sep_pre[i]) << ","
           << format_double(table.pair_sep_post[i]) << "\n";
    os << "fit,class," << format_double(table.class_fit.r) << ","
       << format_double(table.class_fit.slope) << "\n";
    os << "fit,pair," << format_double(table.pair_fit.r) << ","
       << format_double(table.pair_fit.slope) << "\n";
    return os.str();
}

json to_json(const GaussianSpec& spec) {
    json j;
    j["means"] = spec.means;
    j["sigma"] = spec.sigma;
    j["samples_per_class"] = spec.samples_per_class;
    j["seed"] = spec.seed;
    return j;
}

GaussianSpec gaussian_spec_from_json(const json& j) {
    GaussianSpec spec;
    try {
        spec.means = j.at("means").get<std::vector<std::vector<double>>>();
        spec.sigma = j.at("sigma").get<double>();
        spec.samples_per_class = j.at("samples_per_class").get<std::size_t>();
        spec.seed = j.value("seed", std::uint64_t{0});
    } catch (const json::exception& e) {
        throw DataError("gaussian spec parse error: " + std::string(e.what()));
    }
    spec.validate();
    return spec;
}

}  // namespace sepkit
