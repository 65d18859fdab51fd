#include "reflectsim/rectify.hpp"

#include <algorithm>

#include "reflectsim/error.hpp"
#include "reflectsim/moments.hpp"

namespace reflectsim {

namespace {

double model_expected_v(const LevyModel& model) {
    validate(model);
    if (const auto* stable = std::get_if<StrictlyStable>(&model)) {
        return expected_v(stable->alpha, stable->beta);
    }
    return expected_v(index_alpha(model), 0.0);
}

}  // namespace

double rectify_value(double y, std::size_t rho_lower, std::size_t rho_upper, double a, double v) {
    if (rho_lower > rho_upper) return y + a * v;
    if (rho_upper > rho_lower) return y - a * v;
    return y;
}

RectifyResult rectify_samples(std::span<const ReflectionOutcome> outcomes, const LevyModel& model,
                              std::size_t n, const VSamplerSpec& sampler,
                              const RectifyPolicy& policy, std::uint64_t seed,
                              std::uint64_t first_index) {
    require(n >= 1, "resolution must be positive");
    validate(sampler);
    const double a = scaling_a(model, 1.0 / static_cast<double>(n));

    RectifyResult result;
    result.values.reserve(outcomes.size());
    for (std::size_t j = 0; j < outcomes.size(); ++j) {
        const auto& o = outcomes[j];
        require(o.n == n, "outcome resolution does not match the rectification resolution");
        double value = o.y;
        const bool on_boundary = o.y == 0.0 || o.y == 1.0;
        if (policy.skip_boundary_samples && on_boundary) {
            ++result.boundary_skipped;
        } else if (o.rho_lower != o.rho_upper) {
            DeviateStream stream({seed, first_index + j, StreamPurpose::Rectify});
            value = rectify_value(o.y, o.rho_lower, o.rho_upper, a, sample_v(sampler, stream));
            ++result.adjusted;
        }
        if (value < 0.0 || value > 1.0) {
            ++result.out_of_range;
        }
        if (policy.clamp_to_unit) {
            value = std::clamp(value, 0.0, 1.0);
        }
        result.values.push_back(value);
    }
    return result;
}

double mean_shift_constant(const LevyModel& model, std::size_t n_fine) {
    require(n_fine >= 1, "resolution must be positive");
    return scaling_a(model, 1.0 / static_cast<double>(n_fine)) * model_expected_v(model);
}

std::vector<double> mean_shift_reference(std::span<const ReflectionOutcome> outcomes,
                                         const LevyModel& model, std::size_t n_fine) {
    const double shift = mean_shift_constant(model, n_fine);
    std::vector<double> out;
    out.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        require(o.n == n_fine, "outcome resolution does not match the reference resolution");
        out.push_back(rectify_value(o.y, o.rho_lower, o.rho_upper, 1.0, shift));
    }
    return out;
}

}  // namespace reflectsim
