#pragma once

#include "../core/errors.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace magnon::fit {

/// (N, value) samples of one state family, N strictly increasing.
class ScalingSeries {
public:
    ScalingSeries() = default;
    explicit ScalingSeries(std::string label) : label_(std::move(label)) {}

    void add(int n, double value)
    {
        if (!n_.empty() && n <= n_.back()) {
            throw InputError("scaling series abscissae must be strictly increasing");
        }
        n_.push_back(n);
        values_.push_back(value);
    }

    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return n_.size(); }
    const std::vector<int>& sizes() const noexcept { return n_; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::string label_;
    std::vector<int> n_;
    std::vector<double> values_;
};

/// y = slope * x + intercept with OLS standard errors (residual variance on n-2 dof).
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_error = 0.0;
    double intercept_error = 0.0;
    double residual_norm = 0.0;
    std::size_t points = 0;
};

inline FitResult least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) {
        throw InsufficientData("a line fit needs at least 3 points, got " + std::to_string(n));
    }
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
    }
    if (!(sxx > 0.0)) {
        throw DegenerateAbscissa("all abscissae are equal");
    }
    FitResult r;
    r.points = n;
    r.slope = sxy / sxx;
    r.intercept = mean_y - r.slope * mean_x;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (r.slope * x[i] + r.intercept);
        rss += e * e;
    }
    r.residual_norm = std::sqrt(rss);
    const double sigma2 = rss / static_cast<double>(n - 2);
    r.slope_error = std::sqrt(sigma2 / sxx);
    r.intercept_error = std::sqrt(sigma2 * (1.0 / static_cast<double>(n) + mean_x * mean_x / sxx));
    return r;
}

/// Ordinary least squares of value against N.
inline FitResult linear_fit(const ScalingSeries& series)
{
    std::vector<double> x(series.sizes().begin(), series.sizes().end());
    return least_squares(x, series.values());
}

/// Line fit of log(value) against log(N); the slope estimates the growth exponent.
inline FitResult loglog_fit(const ScalingSeries& series)
{
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double v = series.values()[i];
        if (!(v > 0.0)) {
            throw NonpositiveValue("log-log fit needs positive values, got " + std::to_string(v) +
                                         " at N=" + std::to_string(series.sizes()[i]));
        }
        x.push_back(std::log(static_cast<double>(series.sizes()[i])));
        y.push_back(std::log(v));
    }
    return least_squares(x, y);
}

} // namespace magnon::fit
