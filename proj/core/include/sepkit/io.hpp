#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sepkit/fewshot.hpp"
#include "sepkit/heads.hpp"
#include "sepkit/metrics.hpp"
#include "sepkit/poset.hpp"
#include "sepkit/separability.hpp"
#include "sepkit/synth.hpp"

namespace sepkit {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Feature CSV: header `class,f0,...,f{d-1}`, one row per sample, plus a
// companion manifest at the same path with a .json extension.
FeatureSet load_features(const std::filesystem::path& csv_path);
void save_features(const FeatureSet& fs, const std::filesystem::path& csv_path,
                   const std::string& source = "");

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path);

// Write-temp-then-rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

nlohmann::json to_json(const Hyperplane& h);
nlohmann::json to_json(const HeadBank& bank);
HeadBank head_bank_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AbstractModel& m);
nlohmann::json models_to_json(const std::vector<AbstractModel>& models, std::size_t n);
nlohmann::json models_to_json(const ModelBank& bank, std::size_t n);
std::pair<std::vector<AbstractModel>, std::size_t> models_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PosetReport& report);
nlohmann::json to_json(const SeparabilityReport& report);
std::string separability_csv(const SeparabilityReport& report);

nlohmann::json to_json(const EpisodeStats& stats, const EpisodeConfig& cfg, std::uint64_t seed);
nlohmann::json to_json(const PairRanking& ranking);

nlohmann::json to_json(const RunRecord& run);
RunRecord run_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MetricTable& table);
std::string metric_table_csv(const MetricTable& table);

nlohmann::json to_json(const GaussianSpec& spec);
GaussianSpec gaussian_spec_from_json(const nlohmann::json& j);

}  // namespace sepkit
