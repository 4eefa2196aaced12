#pragma once

#include "../core/errors.hpp"
#include "../fit/scaling_fits.hpp"

#include <cmath>
#include <string>

namespace magnon::vcm {

enum class Verdict { p1, p2, indeterminate };

/// Slope window around 0 (p=1) and 1 (p=2).
inline constexpr double kVerdictWindow = 0.2;
inline constexpr std::size_t kMinSeriesPoints = 4;

inline const char* verdict_name(Verdict v) noexcept
{
    switch (v) {
    case Verdict::p1:
        return "p=1";
    case Verdict::p2:
        return "p=2";
    default:
        return "indeterminate";
    }
}

struct PClassification {
    double slope = 0.0;       // d log e_max / d log N
    double slope_error = 0.0;
    double p = 0.0;           // slope + 1
    Verdict verdict = Verdict::indeterminate;
};

inline Verdict classify_slope(double slope) noexcept
{
    if (std::abs(slope - 1.0) <= kVerdictWindow) {
        return Verdict::p2;
    }
    if (std::abs(slope) <= kVerdictWindow) {
        return Verdict::p1;
    }
    return Verdict::indeterminate;
}

/// Index p from a series of (N, e_max).
inline PClassification estimate_p(const fit::ScalingSeries& series)
{
    if (series.size() < kMinSeriesPoints) {
        throw InsufficientData("estimating p needs at least 4 sizes, got " +
                                     std::to_string(series.size()));
    }
    const fit::FitResult fit = fit::loglog_fit(series);
    return {fit.slope, fit.slope_error, fit.slope + 1.0, classify_slope(fit.slope)};
}

} // namespace magnon::vcm
