#pragma once

#include <cstdint>

namespace reflectsim {

/// Stable parameters entering Zolotarev's positive-part mean; rho = P(X_1 > 0).
struct StableMomentInputs {
    double alpha = 2.0;
    double beta = 0.0;
    double rho = 0.5;
};

/// Builds the inputs for alpha in (1, 2]; rho = 1/2 at alpha = 2 or beta = 0.
StableMomentInputs stable_moment_inputs(double alpha, double beta);

/// Gamma function (Lanczos, g = 7, with reflection below 1/2).
double gamma_function(double x);

/// Dirichlet eta on (0, 1) by the Borwein-accelerated alternating series.
double dirichlet_eta(double s);

/// Riemann zeta on (0, 1) through zeta(s) = eta(s) / (1 - 2^(1-s)).
double riemann_zeta_unit_interval(double s);

/// E max(X_1, 0) for the unit-scale strictly stable law, alpha in (1, 2].
/// At alpha = 2 this is the standard-normal value 1/sqrt(2 pi).
double expected_positive_part(double alpha, double beta);

/// E V = -zeta((alpha - 1)/alpha) E X_1^+.
double expected_v(double alpha, double beta);

/// E V_n = (alpha n^(1/alpha) - sum_{k<=n} k^(1/alpha - 1)) E X_1^+:
/// continuous supremum over [0, n] minus the maximum over integer times.
double expected_vn(double alpha, double beta, std::uint64_t n);

/// Exact mean of the nested-grid statistic max_{i<=mn} X_{i/m} - max_{i<=n} X_i,
/// i.e. expected_vn with the finite fine grid accounted for.
double expected_nested_gap(double alpha, double beta, std::uint64_t m, std::uint64_t n);

}  // namespace reflectsim
