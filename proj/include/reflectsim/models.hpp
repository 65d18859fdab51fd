#pragma once

#include <span>
#include <variant>

#include "reflectsim/random.hpp"

namespace reflectsim {

/// Brownian motion with drift `mu` and variance `sigma2` per unit time.
struct Brownian {
    double mu = 0.0;
    double sigma2 = 1.0;
};

/// Strictly alpha-stable process with log E exp(i t X_1) =
/// -scale^alpha |t|^alpha (1 - i beta tan(pi alpha / 2) sgn t).
struct StrictlyStable {
    double alpha = 1.5;
    double beta = 0.0;
    double scale = 1.0;
};

/// Deterministic linear path X_t = slope * t.
struct Drift {
    double slope = 1.0;
};

using LevyModel = std::variant<Brownian, StrictlyStable, Drift>;

struct RegularityFlags {
    bool regular_up = true;    ///< enters (0, inf) immediately
    bool regular_down = true;  ///< enters (-inf, 0) immediately

    friend bool operator==(const RegularityFlags&, const RegularityFlags&) = default;
};

/// Throws ParameterError when the model violates its variant's invariants.
void validate(const LevyModel& model);

/// Stable model for alpha in (0, 2), or Brownian{0, 2 scale^2} at alpha == 2.
LevyModel stable_or_brownian(double alpha, double beta, double scale = 1.0);

/// Self-similarity index alpha of the small-time limit (2 for Brownian, 1 for drift).
double index_alpha(const LevyModel& model);

/// True when the zoomed-in limit process has monotone paths.
bool is_monotone(const LevyModel& model);

double sample_brownian_increment(double mu, double sigma2, double dt, double z);

/// Chambers-Mallows-Stuck transform of a uniform `u` in (0,1) and a standard
/// exponential `w` into a strictly stable variate over a time step `dt`
/// (unit scale). Equals dt^(1/alpha) times the dt = 1 value bit-for-bit.
double sample_stable_increment(double alpha, double beta, double dt, double u, double w);

/// Batched CMS for unit time and unit scale; `out[i]` corresponds to
/// `(u[i], w[i])`. Built with vectorized math, so results agree with the
/// scalar transform to rounding, not bit-for-bit.
void stable_variates(double alpha, double beta, std::span<const double> u,
                     std::span<const double> w, std::span<double> out);

/// out[i] = -log(u[i]); batched companion of stable_variates.
void exponentials_from_uniforms(std::span<const double> u, std::span<double> out);

/// Fills `out` with increments of `model` over steps of length `dt`.
void sample_increments(const LevyModel& model, double dt, DeviateStream& stream,
                       std::span<double> out);

/// Small-time normalisation a_eps: sigma sqrt(eps), scale eps^(1/alpha), |slope| eps.
double scaling_a(const LevyModel& model, double eps);

RegularityFlags classify_regularity(const LevyModel& model);

}  // namespace reflectsim
