#include "assaylens/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace assaylens {

void validate(const MeasurementSeries& series) {
    if (series.unit.empty())
        throw ValidationError("measurement series: concentration unit must be named");
    if (series.points.empty())
        throw ValidationError("measurement series: no points");
    double prev = 0.0;
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const SeriesPoint& p = series.points[i];
        if (!(p.concentration > 0.0))
            throw ValidationError("measurement series: concentration at point " +
                                  std::to_string(i) + " must be positive");
        if (i > 0 && !(p.concentration > prev))
            throw ValidationError("measurement series: concentrations must be strictly "
                                  "increasing (point " + std::to_string(i) + ")");
        if (p.replicates.empty())
            throw ValidationError("measurement series: point " + std::to_string(i) +
                                  " has no replicate readings");
        prev = p.concentration;
    }
}

namespace {

double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values)
        sum += v;
    return sum / static_cast<double>(values.size());
}

// OLS on already-transformed (x, y) pairs, two-pass centered form.
LinearFit fit_xy(std::span<const std::pair<double, double>> pts) {
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : pts) {
        const double dx = x - mx;
        const double dy = y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0))
        throw ValidationError("fit requires at least two distinct concentrations");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy > 0.0) {
        const double ss_res = std::max(0.0, syy - fit.slope * sxy);
        fit.r_squared = 1.0 - ss_res / syy;
    } else {
        fit.r_squared = 1.0; // constant readings, fit is exact
    }
    return fit;
}

std::vector<double> point_means(const MeasurementSeries& series) {
    std::vector<double> means;
    means.reserve(series.points.size());
    for (const SeriesPoint& p : series.points)
        means.push_back(mean_of(p.replicates));
    return means;
}

LinearFit fit_window(const MeasurementSeries& series, const std::vector<double>& means,
                     std::size_t first, std::size_t last) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(last - first + 1);
    for (std::size_t i = first; i <= last; ++i)
        pts.emplace_back(std::log10(series.points[i].concentration), means[i]);
    return fit_xy(pts);
}

} // namespace

LinearFit fit_log_linear(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2)
        throw ValidationError("fit requires at least 2 points, got " +
                              std::to_string(points.size()));
    std::vector<std::pair<double, double>> pts;
    pts.reserve(points.size());
    for (const auto& [c, reading] : points) {
        if (!(c > 0.0))
            throw ValidationError("fit requires positive concentrations");
        pts.emplace_back(std::log10(c), reading);
    }
    return fit_xy(pts);
}

SensitiveRange find_sensitive_range(const MeasurementSeries& series, double min_r_squared) {
    validate(series);
    const std::size_t n = series.points.size();
    if (n < 3)
        throw ValidationError("sensitive range needs at least 3 points, got " +
                              std::to_string(n));

    const std::vector<double> means = point_means(series);

    // For each start index, the furthest index reachable while staying
    // strictly monotone in one direction.
    std::vector<std::size_t> inc_end(n), dec_end(n);
    inc_end[n - 1] = dec_end[n - 1] = n - 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        inc_end[i] = means[i + 1] > means[i] ? inc_end[i + 1] : i;
        dec_end[i] = means[i + 1] < means[i] ? dec_end[i + 1] : i;
    }

    bool found = false;
    SensitiveRange best;
    for (std::size_t first = 0; first + 2 < n; ++first) {
        const std::size_t reach = std::max(inc_end[first], dec_end[first]);
        for (std::size_t last = first + 2; last <= reach; ++last) {
            LinearFit fit = fit_window(series, means, first, last);
            if (fit.r_squared < min_r_squared)
                continue;
            SensitiveRange candidate;
            candidate.first = first;
            candidate.last = last;
            candidate.fit = fit;
            candidate.direction = means[last] > means[first] ? MonotoneDirection::Increasing
                                                             : MonotoneDirection::Decreasing;
            const bool better =
                !found || candidate.length() > best.length() ||
                (candidate.length() == best.length() && fit.r_squared > best.fit.r_squared);
            if (better) {
                best = candidate;
                found = true;
            }
        }
    }
    if (!found)
        throw NoSensitiveRangeError(
            "no contiguous run of >= 3 strictly monotone points reaches R^2 >= " +
            std::to_string(min_r_squared) + "; assay is not quantifiable under these settings");
    return best;
}

double detection_limit(const MeasurementSeries& series, const SensitiveRange& range,
                       double plateau_slope_ratio) {
    validate(series);
    if (range.last >= series.points.size() || range.first > range.last)
        throw ValidationError("sensitive range indices out of bounds");

    const std::vector<double> means = point_means(series);
    const double slope_floor = plateau_slope_ratio * std::abs(range.fit.slope);

    // Walk off the low plateau: leading segments much flatter than the
    // fitted slope belong to it. Keep at least two points in the range.
    std::size_t i = range.first;
    while (i + 1 < range.last) {
        const double dx = std::log10(series.points[i + 1].concentration) -
                          std::log10(series.points[i].concentration);
        const double segment_slope = (means[i + 1] - means[i]) / dx;
        if (std::abs(segment_slope) >= slope_floor)
            break;
        ++i;
    }
    return series.points[i].concentration;
}

double repeating_error(std::span<const double> replicates) {
    if (replicates.size() < 2)
        throw ValidationError("repeating error requires at least 2 replicates");
    const double mean = mean_of(replicates);
    if (mean == 0.0)
        throw ValidationError("repeating error undefined: replicate mean is zero");
    const auto [lo, hi] = std::minmax_element(replicates.begin(), replicates.end());
    return (*hi - *lo) / mean * 100.0;
}

double CalibrationCurve::sensitivity_per_efold() const {
    return slope / std::log(10.0);
}

CalibrationCurve build_curve(const MeasurementSeries& series, double dilution_factor,
                             const BuildOptions& options) {
    validate(series);
    if (!(dilution_factor > 1.0))
        throw ValidationError("dilution factor must be greater than 1");

    CalibrationCurve curve;
    curve.approach = series.approach;
    curve.unit = series.unit;
    curve.dilution_factor = dilution_factor;

    for (std::size_t i = 0; i + 1 < series.points.size(); ++i) {
        const double ratio = series.points[i + 1].concentration / series.points[i].concentration;
        if (std::abs(ratio - dilution_factor) > options.spacing_tolerance * dilution_factor) {
            curve.warnings.push_back("series spacing is not geometric with factor " +
                                     std::to_string(dilution_factor) + " between points " +
                                     std::to_string(i) + " and " + std::to_string(i + 1));
            break;
        }
    }

    const SensitiveRange range = find_sensitive_range(series, options.min_r_squared);

    curve.slope = range.fit.slope;
    curve.intercept = range.fit.intercept;
    curve.r_squared = range.fit.r_squared;
    curve.monotone_direction = range.direction;
    curve.c_lo = series.points[range.first].concentration;
    curve.c_hi = series.points[range.last].concentration;

    const double r_at_lo = curve.intercept + curve.slope * std::log10(curve.c_lo);
    const double r_at_hi = curve.intercept + curve.slope * std::log10(curve.c_hi);
    curve.reading_lo = std::min(r_at_lo, r_at_hi);
    curve.reading_hi = std::max(r_at_lo, r_at_hi);

    curve.detection_limit = detection_limit(series, range, options.plateau_slope_ratio);
    curve.sensitivity_per_step = curve.slope * std::log10(dilution_factor);

    double sum_in = 0.0, max_in = 0.0;
    double sum_full = 0.0, max_full = 0.0;
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const SeriesPoint& p = series.points[i];
        CurvePoint cp;
        cp.concentration = p.concentration;
        cp.mean_reading = mean_of(p.replicates);
        cp.repeating_error_pct = p.replicates.size() >= 2 ? repeating_error(p.replicates) : 0.0;
        curve.per_point.push_back(cp);

        sum_full += cp.repeating_error_pct;
        max_full = std::max(max_full, cp.repeating_error_pct);
        if (i >= range.first && i <= range.last) {
            sum_in += cp.repeating_error_pct;
            max_in = std::max(max_in, cp.repeating_error_pct);
        }
    }
    curve.max_repeating_error_pct = max_in;
    curve.avg_repeating_error_pct = sum_in / static_cast<double>(range.length());
    curve.max_repeating_error_full_pct = max_full;
    curve.avg_repeating_error_full_pct = sum_full / static_cast<double>(series.points.size());
    return curve;
}

double curve_reading_at(const CalibrationCurve& curve, double concentration) {
    if (!(concentration > 0.0))
        throw ValidationError("concentration must be positive");
    return curve.intercept + curve.slope * std::log10(concentration);
}

double invert_curve(const CalibrationCurve& curve, double reading) {
    if (curve.slope == 0.0)
        throw ValidationError("curve has zero slope; cannot invert");
    if (reading < curve.reading_lo || reading > curve.reading_hi)
        throw OutOfRangeError("reading " + std::to_string(reading) +
                              " is outside the calibrated span [" +
                              std::to_string(curve.reading_lo) + ", " +
                              std::to_string(curve.reading_hi) +
                              "]; refusing to extrapolate");
    return std::pow(10.0, (reading - curve.intercept) / curve.slope);
}

ConcentrationEstimate measuring_error(const CalibrationCurve& curve, double reading,
                                      double reading_spread) {
    if (reading_spread < 0.0)
        throw ValidationError("reading spread must be non-negative");
    ConcentrationEstimate est;
    est.unit = curve.unit;
    est.value = invert_curve(curve, reading);
    const double c_a = invert_curve(curve, reading - reading_spread);
    const double c_b = invert_curve(curve, reading + reading_spread);
    est.lower = std::min(c_a, c_b);
    est.upper = std::max(c_a, c_b);
    est.measuring_error_pct = std::abs(est.upper - est.lower) / est.value * 100.0;
    return est;
}

std::vector<std::pair<double, double>>
normalize_curve(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2)
        throw ValidationError("normalization requires at least 2 points");
    double lo = points[0].second, hi = points[0].second;
    for (const auto& [x, r] : points) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    if (!(hi > lo))
        throw ValidationError("normalization undefined: all readings are equal");
    std::vector<std::pair<double, double>> out;
    out.reserve(points.size());
    for (const auto& [x, r] : points)
        out.emplace_back(x, (r - lo) / (hi - lo));
    return out;
}

CalibrationCurve curve_from_exponential(const ExponentialParams& params, std::string unit,
                                        const Approach& approach, double c_lo, double c_hi) {
    if (!(params.coefficient > 0.0))
        throw ValidationError("exponential coefficient must be positive");
    if (params.rate == 0.0)
        throw ValidationError("exponential rate must be nonzero");
    if (!(c_lo > 0.0) || !(c_hi > c_lo))
        throw ValidationError("sensitive range must satisfy 0 < c_lo < c_hi");

    // c = A * exp(B * x)  <=>  x = (ln c - ln A) / B
    //                       =  -ln(A)/B + (ln 10 / B) * log10(c)
    CalibrationCurve curve;
    curve.approach = approach;
    curve.unit = std::move(unit);
    curve.slope = std::log(10.0) / params.rate;
    curve.intercept = -std::log(params.coefficient) / params.rate;
    curve.r_squared = 1.0;
    curve.c_lo = c_lo;
    curve.c_hi = c_hi;
    const double r_at_lo = curve.intercept + curve.slope * std::log10(c_lo);
    const double r_at_hi = curve.intercept + curve.slope * std::log10(c_hi);
    curve.reading_lo = std::min(r_at_lo, r_at_hi);
    curve.reading_hi = std::max(r_at_lo, r_at_hi);
    curve.detection_limit = c_lo;
    curve.monotone_direction = curve.slope > 0.0 ? MonotoneDirection::Increasing
                                                 : MonotoneDirection::Decreasing;
    return curve;
}

ExponentialParams exponential_params(const CalibrationCurve& curve) {
    if (curve.slope == 0.0)
        throw ValidationError("curve has zero slope; no exponential form");
    ExponentialParams params;
    params.rate = std::log(10.0) / curve.slope;
    params.coefficient = std::exp(-params.rate * curve.intercept);
    return params;
}

} // namespace assaylens
