#include "reflectsim/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "reflectsim/error.hpp"
#include "reflectsim/moments.hpp"
#include "reflectsim/parallel.hpp"
#include "reflectsim/report_io.hpp"

namespace reflectsim {

namespace {

std::optional<double> unit_expected_v(const LevyModel& model) {
    const double alpha = index_alpha(model);
    if (alpha <= 1.0) return std::nullopt;
    const auto* stable = std::get_if<StrictlyStable>(&model);
    return expected_v(alpha, stable ? stable->beta : 0.0);
}

struct ReplicationContext {
    const ExperimentConfig& config;
    VSamplerSpec sampler;
    double shift = 0.0;

    explicit ReplicationContext(const ExperimentConfig& c)
        : config(c), sampler(effective_sampler(c)) {
        if (c.mean_shift_reference) {
            shift = mean_shift_constant(c.model, c.n_fine);
        }
    }
};

// Number of V terms in the fine regulator error (k for the last barrier, k - 1 otherwise).
double error_terms(const ReflectionOutcome& fine, bool lower) {
    if (fine.switches == 0) return 0.0;
    const bool last = lower ? fine.lower_last() : fine.upper_last();
    return static_cast<double>(last ? fine.switches : fine.switches - 1);
}

ReplicationRecord simulate(const ReplicationContext& ctx, std::size_t replication,
                           const IncrementSource& source) {
    const auto& cfg = ctx.config;
    const std::size_t block = cfg.n_fine / cfg.n;
    thread_local std::vector<double> buffer;
    buffer.resize(block);

    Reflector fine(cfg.x0);
    Reflector coarse(cfg.x0);
    double x_sum = 0.0;
    double x_sum_fine = 0.0;
    for (std::size_t b = 0; b < cfg.n; ++b) {
        source(buffer);
        double block_sum = 0.0;
        for (double xi : buffer) {
            fine.step(xi);
            x_sum_fine += xi;
            block_sum += xi;
        }
        coarse.step(block_sum);
        x_sum += block_sum;
    }

    ReplicationRecord r;
    r.replication = replication;
    r.coarse = std::move(coarse).finish();
    r.fine = std::move(fine).finish();
    r.x_sum = x_sum;
    r.x_sum_fine = x_sum_fine;
    r.y_reference = rectify_value(r.fine.y, r.fine.rho_lower, r.fine.rho_upper, 1.0, ctx.shift);
    r.lower_reference = r.fine.lower + ctx.shift * error_terms(r.fine, true);
    r.upper_reference = r.fine.upper + ctx.shift * error_terms(r.fine, false);
    r.delta = r.y_reference - r.coarse.y;
    r.rectified = rectify_samples(std::span(&r.coarse, 1), cfg.model, cfg.n, ctx.sampler,
                                  cfg.policy, cfg.seed, replication)
                      .values.front();
    return r;
}

IncrementSource model_source(const ExperimentConfig& config, DeviateStream& stream) {
    const double dt = 1.0 / static_cast<double>(config.n_fine);
    return [&config, &stream, dt](std::span<double> out) {
        sample_increments(config.model, dt, stream, out);
    };
}

ReplicationRecord simulate_from_model(const ReplicationContext& ctx, std::size_t replication) {
    DeviateStream stream({ctx.config.seed, replication, StreamPurpose::Path});
    return simulate(ctx, replication, model_source(ctx.config, stream));
}

ConditionalLaw compare_to_v(std::vector<double> errors, std::span<const double> v) {
    ConditionalLaw law;
    law.count = errors.size();
    if (errors.empty() || v.empty()) return law;
    law.summary = mc_summary(errors);
    law.ks_vs_v = ks_two_sample(errors, v);
    law.ks_critical = ks_critical_value(errors.size(), v.size());
    return law;
}

double fraction(std::size_t part, std::size_t whole) {
    return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

void validate(const ExperimentConfig& config) {
    validate(config.model);
    require(config.x0 >= 0.0 && config.x0 <= 1.0, "x0 must lie in [0, 1]");
    require(config.n >= 1, "coarse resolution must be positive");
    require(config.n_fine >= config.n && config.n_fine % config.n == 0,
            "n_fine must be a positive multiple of n");
    require(config.replications >= 1, "need at least one replication");
    require(config.workers >= 1, "need at least one worker");
    require(config.boundary_band >= 0.0 && config.boundary_band < 0.5,
            "boundary band must lie in [0, 0.5)");
    if (config.v_sampler) validate(*config.v_sampler);
    if (config.mean_shift_reference) {
        require(index_alpha(config.model) > 1.0,
                "mean-shift reference needs a finite E V (alpha > 1); disable it for this model");
    }
}

VSamplerSpec effective_sampler(const ExperimentConfig& config) {
    return config.v_sampler ? *config.v_sampler : default_sampler(config.model);
}

ReplicationRecord simulate_replication(const ExperimentConfig& config, std::size_t replication,
                                       const IncrementSource& source) {
    validate(config);
    const ReplicationContext ctx(config);
    return simulate(ctx, replication, source);
}

ReplicationRecord simulate_replication(const ExperimentConfig& config, std::size_t replication) {
    validate(config);
    const ReplicationContext ctx(config);
    return simulate_from_model(ctx, replication);
}

std::vector<double> draw_v_samples(const VSamplerSpec& sampler, std::size_t count,
                                   std::uint64_t seed, StreamPurpose purpose, std::size_t workers,
                                   std::uint64_t first_index) {
    validate(sampler);
    std::vector<double> out(count);
    parallel_for(count, workers, [&](std::size_t i) {
        DeviateStream stream({seed, first_index + i, purpose});
        out[i] = sample_v(sampler, stream);
    });
    return out;
}

ExperimentAggregates aggregate(const ExperimentConfig& config,
                               std::span<const ReplicationRecord> records,
                               std::span<const double> v_reference) {
    validate(config);
    ExperimentAggregates agg;
    agg.scaling = scaling_a(config.model, 1.0 / static_cast<double>(config.n));
    agg.shift_constant = config.mean_shift_reference ? mean_shift_constant(config.model, config.n_fine)
                                                     : 0.0;
    agg.expected_v = unit_expected_v(config.model);
    if (!v_reference.empty()) agg.v_reference = mc_summary(v_reference);

    const double a = agg.scaling;
    std::size_t coarse_lower = 0, coarse_upper = 0, fine_lower = 0, fine_upper = 0, disagree = 0;
    std::vector<double> lower_errors, upper_errors, lower_adjusted, upper_adjusted;
    std::vector<double> raw, rectified, reference;
    raw.reserve(records.size());
    rectified.reserve(records.size());
    reference.reserve(records.size());

    const std::size_t classes = config.max_switch_class;
    // Per (k, last barrier): count, sums and sums of squares of both errors.
    struct Accumulator {
        std::size_t count = 0;
        double sl = 0.0, sll = 0.0, su = 0.0, suu = 0.0;
    };
    std::vector<Accumulator> acc(2 * (classes + 1));
    std::vector<Accumulator> agreeing(2 * (classes + 1));

    for (const auto& r : records) {
        const bool cl = r.coarse.lower_last();
        const bool cu = r.coarse.upper_last();
        const bool fl = r.fine.lower_last();
        const bool fu = r.fine.upper_last();
        coarse_lower += cl;
        coarse_upper += cu;
        fine_lower += fl;
        fine_upper += fu;
        disagree += (cl != fl);
        if (cl) lower_errors.push_back(r.delta / a);
        if (cu) upper_errors.push_back(-r.delta / a);
        if (cl && fl) lower_adjusted.push_back(r.delta / a);
        if (cu && fu) upper_adjusted.push_back(-r.delta / a);

        raw.push_back(r.coarse.y);
        rectified.push_back(r.rectified);
        reference.push_back(r.y_reference);

        const std::size_t k = r.coarse.switches;
        if (k >= 1 && k <= classes) {
            auto& slot = acc[2 * k + (cl ? 0 : 1)];
            const double le = (r.lower_reference - r.coarse.lower) / a;
            const double ue = (r.upper_reference - r.coarse.upper) / a;
            ++slot.count;
            slot.sl += le;
            slot.sll += le * le;
            slot.su += ue;
            slot.suu += ue * ue;
            if (r.fine.switches == k && cl == fl) {
                auto& same = agreeing[2 * k + (cl ? 0 : 1)];
                ++same.count;
                same.sl += le;
                same.su += ue;
            }
        }

        if (r.coarse.switches > 0 && cl == fl && cu == fu) {
            const double band = config.boundary_band;
            if (r.fine.y > band && r.fine.y < 1.0 - band) {
                ++agg.sign_census.eligible;
                if ((cl && r.delta > 0.0) || (cu && r.delta < 0.0)) ++agg.sign_census.matching;
            }
        }

        const double scale = std::max(1.0, std::abs(r.x_sum_fine));
        agg.max_terminal_sum_mismatch =
            std::max(agg.max_terminal_sum_mismatch, std::abs(r.x_sum - r.x_sum_fine) / scale);
    }

    const std::size_t total = records.size();
    agg.frac_coarse_lower_last = fraction(coarse_lower, total);
    agg.frac_coarse_upper_last = fraction(coarse_upper, total);
    agg.frac_fine_lower_last = fraction(fine_lower, total);
    agg.frac_fine_upper_last = fraction(fine_upper, total);
    agg.frac_last_barrier_disagreement = fraction(disagree, total);
    agg.lower_last = compare_to_v(std::move(lower_errors), v_reference);
    agg.upper_last = compare_to_v(std::move(upper_errors), v_reference);
    agg.lower_last_adjusted = compare_to_v(std::move(lower_adjusted), v_reference);
    agg.upper_last_adjusted = compare_to_v(std::move(upper_adjusted), v_reference);
    if (total > 0) {
        agg.ks_raw_vs_reference = ks_two_sample(raw, reference);
        agg.ks_rectified_vs_reference = ks_two_sample(rectified, reference);
    }
    const auto out_of_range = static_cast<std::size_t>(std::count_if(
        rectified.begin(), rectified.end(), [](double v) { return v < 0.0 || v > 1.0; }));
    agg.rectified_out_of_range_fraction = fraction(out_of_range, total);
    for (const auto& r : records) {
        if (r.coarse.lower_last() || r.coarse.upper_last()) {
            const bool boundary = r.coarse.y == 0.0 || r.coarse.y == 1.0;
            if (config.policy.skip_boundary_samples && boundary) {
                ++agg.rectified_boundary_skipped;
            } else {
                ++agg.rectified_adjusted;
            }
        }
    }

    const double ev = agg.expected_v.value_or(0.0);
    for (std::size_t k = 1; k <= classes; ++k) {
        for (int side = 0; side < 2; ++side) {
            const auto& slot = acc[2 * k + side];
            RegulatorClass rc;
            rc.switches = k;
            rc.lower_last = side == 0;
            rc.count = slot.count;
            const double kk = static_cast<double>(k);
            rc.expected_lower = (rc.lower_last ? kk : kk - 1.0) * ev;
            rc.expected_upper = (rc.lower_last ? kk - 1.0 : kk) * ev;
            if (slot.count > 0) {
                const double c = static_cast<double>(slot.count);
                rc.mean_lower_error = slot.sl / c;
                rc.mean_upper_error = slot.su / c;
                if (slot.count > 1) {
                    const double vl = (slot.sll - c * rc.mean_lower_error * rc.mean_lower_error) / (c - 1.0);
                    const double vu = (slot.suu - c * rc.mean_upper_error * rc.mean_upper_error) / (c - 1.0);
                    rc.se_lower_error = std::sqrt(std::max(0.0, vl) / c);
                    rc.se_upper_error = std::sqrt(std::max(0.0, vu) / c);
                }
            }
            const auto& same = agreeing[2 * k + side];
            rc.count_agreeing = same.count;
            if (same.count > 0) {
                rc.mean_lower_error_agreeing = same.sl / static_cast<double>(same.count);
                rc.mean_upper_error_agreeing = same.su / static_cast<double>(same.count);
            }
            agg.regulator_classes.push_back(rc);
        }
    }
    agg.sign_census.fraction = fraction(agg.sign_census.matching, agg.sign_census.eligible);
    return agg;
}

ExperimentReport run_error_experiment(const ExperimentConfig& config) {
    validate(config);
    const ReplicationContext ctx(config);

    ExperimentReport report;
    report.config = config;
    report.records.resize(config.replications);
    parallel_for(config.replications, config.workers, [&](std::size_t i) {
        report.records[i] = simulate_from_model(ctx, i);
    });
    const auto v_reference = draw_v_samples(ctx.sampler, config.v_reference_draws, config.seed,
                                            StreamPurpose::VReference, config.workers);
    report.aggregates = aggregate(config, report.records, v_reference);
    report.provenance = {config.seed, config_hash(config), code_version()};
    return report;
}

VSamplerSpec study_sampler(const VStudyConfig& config, const VStudyCell& cell) {
    if (cell.alpha == 2.0) {
        return BesselBrownian{config.bessel_locations};
    }
    const LevyModel hat = StrictlyStable{cell.alpha, cell.beta, 1.0};
    validate(hat);
    if (is_monotone(hat)) {
        return Monotone{hat};
    }
    return StableNested{cell.alpha, cell.beta, 1.0, config.fine_subdivisions, config.coarse_steps};
}

VStudyReport run_v_study(const VStudyConfig& config) {
    require(config.replications >= 2, "a V study needs at least two replications per cell");
    require(config.trim_low >= 0.0 && config.trim_low < config.trim_high && config.trim_high <= 1.0,
            "trim quantiles must satisfy 0 <= low < high <= 1");
    VStudyReport report;
    report.config = config;
    for (std::size_t c = 0; c < config.cells.size(); ++c) {
        const auto& cell = config.cells[c];
        VStudyCellResult result{cell, study_sampler(config, cell), {}, {}, {}, {}, {}};
        // Cells draw from disjoint index ranges of the study stream.
        const auto samples = draw_v_samples(result.sampler, config.replications, config.seed,
                                            StreamPurpose::VStudy, config.workers,
                                            static_cast<std::uint64_t>(c) << 40);
        result.summary = mc_summary(samples);
        const double lo = quantile(samples, config.trim_low);
        const double hi = quantile(samples, config.trim_high);
        std::optional<std::vector<double>> grid;
        if (hi > lo) grid = linear_grid(lo, hi, config.density_points);
        result.density = kde_gaussian(samples, std::nullopt, std::move(grid));
        if (cell.alpha > 1.0) {
            result.expected_v = expected_v(cell.alpha, cell.beta);
            result.expected_vn = expected_vn(cell.alpha, cell.beta, config.coarse_steps);
            if (std::holds_alternative<StableNested>(result.sampler)) {
                result.expected_nested_gap = expected_nested_gap(
                    cell.alpha, cell.beta, config.fine_subdivisions, config.coarse_steps);
            }
        }
        report.cells.push_back(std::move(result));
    }
    return report;
}

}  // namespace reflectsim
