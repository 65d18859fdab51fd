#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reflectsim/models.hpp"
#include "reflectsim/rectify.hpp"
#include "reflectsim/reflection.hpp"
#include "reflectsim/stats.hpp"
#include "reflectsim/vlimit.hpp"

namespace reflectsim {

struct ExperimentConfig {
    LevyModel model = Brownian{-0.5, 2.0};
    double x0 = 0.3;
    std::size_t n = 100;          ///< coarse resolution
    std::size_t n_fine = 50000;   ///< reference resolution, a multiple of n
    std::size_t replications = 20000;
    std::uint64_t seed = 1;
    std::optional<VSamplerSpec> v_sampler;  ///< defaults to default_sampler(model)
    RectifyPolicy policy;
    std::size_t workers = 1;
    bool mean_shift_reference = true;
    std::size_t v_reference_draws = 20000;
    double boundary_band = 0.05;   ///< sign census excludes y_fine within this of a barrier
    std::size_t max_switch_class = 5;
};

void validate(const ExperimentConfig& config);
VSamplerSpec effective_sampler(const ExperimentConfig& config);

struct ReplicationRecord {
    std::size_t replication = 0;
    ReflectionOutcome coarse;
    ReflectionOutcome fine;
    double x_sum = 0.0;        ///< coarse terminal X_n (block sums added)
    double x_sum_fine = 0.0;   ///< fine terminal X_1 (fine increments added)
    double y_reference = 0.0;  ///< fine terminal value after the mean shift
    double lower_reference = 0.0;
    double upper_reference = 0.0;
    double delta = 0.0;        ///< y_reference - coarse.y
    double rectified = 0.0;
};

/// A conditional sample of rescaled errors compared by KS against V draws.
struct ConditionalLaw {
    std::size_t count = 0;
    std::optional<McSummary> summary;
    double ks_vs_v = 1.0;
    double ks_critical = 1.0;  ///< asymptotic 1% critical value for these sizes
};

struct RegulatorClass {
    std::size_t switches = 0;
    bool lower_last = true;
    std::size_t count = 0;
    double mean_lower_error = 0.0;  ///< mean of (L_ref - L_n)/a_{1/n}
    double mean_upper_error = 0.0;
    double se_lower_error = 0.0;
    double se_upper_error = 0.0;
    double expected_lower = 0.0;    ///< k E V or (k - 1) E V
    double expected_upper = 0.0;
    /// Same means restricted to replications whose fine path has the same
    /// switch count and last barrier.
    std::size_t count_agreeing = 0;
    double mean_lower_error_agreeing = 0.0;
    double mean_upper_error_agreeing = 0.0;
};

struct SignCensus {
    std::size_t eligible = 0;
    std::size_t matching = 0;
    double fraction = 0.0;
};

struct ExperimentAggregates {
    double scaling = 0.0;          ///< a_{1/n}
    double shift_constant = 0.0;   ///< a_{1/n_fine} E V, 0 when disabled
    std::optional<double> expected_v;
    double frac_coarse_lower_last = 0.0;
    double frac_coarse_upper_last = 0.0;
    double frac_fine_lower_last = 0.0;
    double frac_fine_upper_last = 0.0;
    double frac_last_barrier_disagreement = 0.0;
    ConditionalLaw lower_last;           ///< Delta/a | coarse L last
    ConditionalLaw upper_last;           ///< -Delta/a | coarse U last
    ConditionalLaw lower_last_adjusted;  ///< additionally fine L last
    ConditionalLaw upper_last_adjusted;
    McSummary v_reference;
    double ks_raw_vs_reference = 1.0;
    double ks_rectified_vs_reference = 1.0;
    std::size_t rectified_adjusted = 0;
    std::size_t rectified_boundary_skipped = 0;
    double rectified_out_of_range_fraction = 0.0;
    std::vector<RegulatorClass> regulator_classes;
    SignCensus sign_census;
    double max_terminal_sum_mismatch = 0.0;  ///< max |x_sum - x_sum_fine| / max(1, |x_sum_fine|)
};

struct Provenance {
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string code_version;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<ReplicationRecord> records;
    ExperimentAggregates aggregates;
    Provenance provenance;
};

/// Fills a block of fine increments for one replication.
using IncrementSource = std::function<void(std::span<double>)>;

/// One replication: a fine path generated block by block, reflected at both
/// resolutions, with the reference value and the rectified coarse value.
ReplicationRecord simulate_replication(const ExperimentConfig& config, std::size_t replication,
                                       const IncrementSource& source);

/// Same, with increments drawn from the model on the replication's path stream.
ReplicationRecord simulate_replication(const ExperimentConfig& config, std::size_t replication);

ExperimentAggregates aggregate(const ExperimentConfig& config,
                               std::span<const ReplicationRecord> records,
                               std::span<const double> v_reference);

ExperimentReport run_error_experiment(const ExperimentConfig& config);

/// Draws `count` V samples from streams (seed, first_index + i, purpose).
std::vector<double> draw_v_samples(const VSamplerSpec& sampler, std::size_t count,
                                   std::uint64_t seed, StreamPurpose purpose,
                                   std::size_t workers = 1, std::uint64_t first_index = 0);

struct VStudyCell {
    double alpha = 1.5;
    double beta = 0.0;
};

struct VStudyConfig {
    std::vector<VStudyCell> cells;
    std::size_t replications = 50000;
    std::size_t fine_subdivisions = 100;
    std::size_t coarse_steps = 100;
    std::size_t bessel_locations = 150;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::size_t density_points = 512;
    double trim_low = 0.01;   ///< density grid spans these sample quantiles
    double trim_high = 0.99;
};

struct VStudyCellResult {
    VStudyCell cell;
    VSamplerSpec sampler;
    McSummary summary;
    DensityGrid density;
    std::optional<double> expected_v;
    std::optional<double> expected_vn;          ///< at the coarse step count
    std::optional<double> expected_nested_gap;  ///< exact mean of the nested statistic
};

struct VStudyReport {
    VStudyConfig config;
    std::vector<VStudyCellResult> cells;
};

/// Unit-scale sampler for a study cell: Bessel at alpha = 2, |X_Upsilon| for
/// monotone laws, nested grid otherwise.
VSamplerSpec study_sampler(const VStudyConfig& config, const VStudyCell& cell);

VStudyReport run_v_study(const VStudyConfig& config);

}  // namespace reflectsim
