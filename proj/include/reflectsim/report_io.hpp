#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "reflectsim/experiments.hpp"

namespace reflectsim {

using Json = nlohmann::json;

std::string code_version();

/// Shortest round-trip decimal form of `x`.
std::string format_double(double x);

Json model_to_json(const LevyModel& model);
LevyModel model_from_json(const Json& j);

Json sampler_to_json(const VSamplerSpec& spec);
VSamplerSpec sampler_from_json(const Json& j);

/// Missing keys keep their ExperimentConfig defaults.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& config);

/// FNV-1a over the canonical config JSON with `workers` removed, since the
/// worker count never changes results.
std::string config_hash(const ExperimentConfig& config);

Json report_to_json(const ExperimentReport& report);

void write_records_csv(std::ostream& out, std::span<const ReplicationRecord> records);

struct OutcomeRow {
    std::size_t replication = 0;
    ReflectionOutcome outcome;
};

/// Reads terminal outcomes from CSV with header columns n, y, rho_L, rho_U
/// (and optionally replication, N, L, U). Extra columns are ignored.
std::vector<OutcomeRow> read_outcomes_csv(std::istream& in);

void write_density_csv(std::ostream& out, const DensityGrid& density);

VStudyConfig v_study_config_from_json(const Json& j);
Json v_study_to_json(const VStudyReport& report);

}  // namespace reflectsim
