#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "reflectsim/models.hpp"
#include "reflectsim/reflection.hpp"
#include "reflectsim/vlimit.hpp"

namespace reflectsim {

struct RectifyPolicy {
    bool clamp_to_unit = false;
    /// Leave terminal values sitting on a barrier untouched (irregular models).
    bool skip_boundary_samples = false;
};

struct RectifyResult {
    std::vector<double> values;
    std::size_t adjusted = 0;          ///< samples that received a V draw
    std::size_t boundary_skipped = 0;  ///< samples passed through by skip_boundary_samples
    std::size_t out_of_range = 0;      ///< results outside [0, 1] before any clamping
};

/// Single-sample rule: y + a v if L was last, y - a v if U was last, else y.
double rectify_value(double y, std::size_t rho_lower, std::size_t rho_upper, double a, double v);

/// Rectifies coarse terminal values with independent draws of a_{1/n} V.
/// Sample j takes its V draw from the stream keyed (seed, first_index + j,
/// Rectify), so splitting a batch and passing matching offsets reproduces
/// the unsplit result exactly.
RectifyResult rectify_samples(std::span<const ReflectionOutcome> outcomes, const LevyModel& model,
                              std::size_t n, const VSamplerSpec& sampler,
                              const RectifyPolicy& policy, std::uint64_t seed,
                              std::uint64_t first_index = 0);

/// Shift applied to a fine-resolution terminal value: a_{1/n_fine} E V.
double mean_shift_constant(const LevyModel& model, std::size_t n_fine);

/// Adds +a E V when L was last and -a E V when U was last.
std::vector<double> mean_shift_reference(std::span<const ReflectionOutcome> outcomes,
                                         const LevyModel& model, std::size_t n_fine);

}  // namespace reflectsim
