#pragma once

#include <cstddef>
#include <variant>

#include "reflectsim/models.hpp"
#include "reflectsim/random.hpp"

namespace reflectsim {

/// V for Brownian zoom-in: minimum of a two-sided Bessel(3) process sampled
/// at Upsilon + i, with `locations_per_side` offsets on each side.
struct BesselBrownian {
    std::size_t locations_per_side = 150;
};

/// Nested-grid approximation of V for a strictly stable zoom-in.
struct StableNested {
    double alpha = 1.5;
    double beta = 0.0;
    double scale = 1.0;
    std::size_t fine_subdivisions = 100;  ///< m
    std::size_t coarse_steps = 100;       ///< n
};

/// V = |X_Upsilon| for a monotone zoom-in (drift, or one-sided alpha < 1).
struct Monotone {
    LevyModel model_hat = Drift{1.0};
};

using VSamplerSpec = std::variant<BesselBrownian, StableNested, Monotone>;

void validate(const VSamplerSpec& spec);

/// The unit-scale sampler matching the zoomed-in limit of `model`.
VSamplerSpec default_sampler(const LevyModel& model);

double sample_v_brownian(std::size_t locations_per_side, DeviateStream& stream);

double sample_v_stable(double alpha, double beta, double scale, std::size_t fine_subdivisions,
                       std::size_t coarse_steps, DeviateStream& stream);

double sample_v_monotone(const LevyModel& model_hat, DeviateStream& stream);

/// |X_upsilon| from explicit deviates: the drift case ignores (u, w); the
/// stable case uses them for the CMS draw of X_1.
double monotone_v_from_deviates(const LevyModel& model_hat, double upsilon, double u, double w);

double sample_v(const VSamplerSpec& spec, DeviateStream& stream);

}  // namespace reflectsim
