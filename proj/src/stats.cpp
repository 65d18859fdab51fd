#include "reflectsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reflectsim/error.hpp"

namespace reflectsim {

EmpiricalCdf::EmpiricalCdf(std::span<const double> samples)
    : sorted_(samples.begin(), samples.end()) {
    require(!sorted_.empty(), "ECDF needs at least one sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    require(!a.empty() && !b.empty(), "KS statistic needs two non-empty samples");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());

    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double sup = 0.0;
    // Step over each distinct value, consuming its ties in both samples.
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == t) ++i;
        while (j < y.size() && y[j] == t) ++j;
        sup = std::max(sup, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return sup;
}

double ks_critical_value(std::size_t n1, std::size_t n2, double level) {
    require(n1 > 0 && n2 > 0, "sample sizes must be positive");
    require(level > 0.0 && level < 1.0, "significance level must lie in (0, 1)");
    const double c = std::sqrt(-std::log(level / 2.0) / 2.0);
    const double a = static_cast<double>(n1);
    const double b = static_cast<double>(n2);
    return c * std::sqrt((a + b) / (a * b));
}

double quantile(std::span<const double> samples, double q) {
    require(!samples.empty(), "quantile needs at least one sample");
    require(q >= 0.0 && q <= 1.0, "quantile level must lie in [0, 1]");
    std::vector<double> sorted(samples.begin(), samples.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    const std::size_t index = rank == 0 ? 0 : rank - 1;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(index), sorted.end());
    return sorted[index];
}

McSummary mc_summary(std::span<const double> samples) {
    require(!samples.empty(), "summary needs at least one sample");
    McSummary s;
    s.count = samples.size();
    const double n = static_cast<double>(s.count);
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    s.mean = mean;
    s.sd = s.count > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.standard_error = s.sd / std::sqrt(n);
    s.q01 = quantile(samples, 0.01);
    s.q50 = quantile(samples, 0.50);
    s.q99 = quantile(samples, 0.99);
    return s;
}

double silverman_bandwidth(std::span<const double> samples) {
    require(samples.size() >= 2, "automatic bandwidth needs at least two samples");
    const auto summary = mc_summary(samples);
    const double iqr = quantile(samples, 0.75) - quantile(samples, 0.25);
    double spread = summary.sd;
    if (iqr > 0.0) {
        spread = std::min(spread, iqr / 1.34);
    }
    require(spread > 0.0, "samples have zero spread; pass an explicit bandwidth");
    return 0.9 * spread * std::pow(static_cast<double>(samples.size()), -0.2);
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    require(count >= 2 && hi > lo, "grid needs at least two points on a non-empty interval");
    std::vector<double> grid(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = lo + step * static_cast<double>(i);
    }
    grid.back() = hi;
    return grid;
}

DensityGrid kde_gaussian(std::span<const double> samples, std::optional<double> bandwidth,
                         std::optional<std::vector<double>> grid) {
    require(!samples.empty(), "KDE needs at least one sample");
    const double h = bandwidth ? *bandwidth : silverman_bandwidth(samples);
    require(h > 0.0, "bandwidth must be positive");

    DensityGrid out;
    if (grid) {
        out.points = std::move(*grid);
        require(std::is_sorted(out.points.begin(), out.points.end()), "grid must be ascending");
    } else {
        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
        out.points = linear_grid(*lo - 4.0 * h, *hi + 4.0 * h, 512);
    }

    const double norm = 1.0 / (static_cast<double>(samples.size()) * h *
                               std::sqrt(2.0 * std::numbers::pi));
    out.values.assign(out.points.size(), 0.0);
    for (std::size_t k = 0; k < out.points.size(); ++k) {
        const double t = out.points[k];
        double acc = 0.0;
        for (double x : samples) {
            const double z = (t - x) / h;
            acc += std::exp(-0.5 * z * z);
        }
        out.values[k] = acc * norm;
    }
    return out;
}

double trapezoid(const DensityGrid& density) {
    require(density.points.size() == density.values.size(), "grid and values differ in length");
    double area = 0.0;
    for (std::size_t i = 1; i < density.points.size(); ++i) {
        area += 0.5 * (density.values[i] + density.values[i - 1]) *
                (density.points[i] - density.points[i - 1]);
    }
    return area;
}

}  // namespace reflectsim
