#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace reflectsim {

class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::span<const double> samples);

    /// Fraction of samples <= x.
    double operator()(double x) const;
    std::size_t size() const { return sorted_.size(); }
    std::span<const double> sorted() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

/// Sup-norm distance between the two empirical CDFs (merge scan).
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample KS critical value sqrt(-ln(level/2)/2) sqrt((n1+n2)/(n1 n2)).
double ks_critical_value(std::size_t n1, std::size_t n2, double level = 0.01);

/// Nearest-rank quantile: the ceil(q n)-th smallest sample.
double quantile(std::span<const double> samples, double q);

struct McSummary {
    double mean = 0.0;
    double sd = 0.0;
    double standard_error = 0.0;
    std::size_t count = 0;
    double q01 = 0.0;
    double q50 = 0.0;
    double q99 = 0.0;
};

McSummary mc_summary(std::span<const double> samples);

struct DensityGrid {
    std::vector<double> points;
    std::vector<double> values;
};

/// 0.9 min(sd, IQR / 1.34) n^(-1/5); falls back to sd when the IQR vanishes.
double silverman_bandwidth(std::span<const double> samples);

/// Equispaced grid of `count` points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

/// Gaussian kernel density estimate. Defaults: Silverman bandwidth and 512
/// points spanning the sample range extended by four bandwidths.
DensityGrid kde_gaussian(std::span<const double> samples, std::optional<double> bandwidth = {},
                         std::optional<std::vector<double>> grid = {});

/// Trapezoid-rule integral of a density grid.
double trapezoid(const DensityGrid& density);

}  // namespace reflectsim
