#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "assaylens/colorimetry.hpp"

namespace assaylens {

struct SeriesPoint {
    double concentration = 0.0;
    std::vector<double> replicates;
};

// A dilution series of readings: one point per concentration, each with
// one reading per replicate frame stack.
struct MeasurementSeries {
    std::string unit;
    Approach approach;
    CaptureContext context;
    std::vector<SeriesPoint> points;
};

// Strictly increasing positive concentrations, at least one replicate each.
void validate(const MeasurementSeries& series);

struct LinearFit {
    double slope = 0.0;     // reading units per decade of concentration
    double intercept = 0.0; // reading at 1 unit of concentration
    double r_squared = 0.0;
};

// Ordinary least squares of reading against log10(concentration).
LinearFit fit_log_linear(std::span<const std::pair<double, double>> points);

enum class MonotoneDirection { Increasing, Decreasing };

// Contiguous point run (inclusive indices) where the response is strictly
// monotone and well fit by a log-linear model.
struct SensitiveRange {
    std::size_t first = 0;
    std::size_t last = 0;
    LinearFit fit;
    MonotoneDirection direction = MonotoneDirection::Increasing;

    std::size_t length() const { return last - first + 1; }
};

inline constexpr double kMinFitRSquared = 0.95;

// Longest run of >= 3 strictly monotone points whose fit reaches the R^2
// gate. Ties go to the higher R^2, then the lower starting index. Throws
// NoSensitiveRangeError when no run qualifies.
SensitiveRange find_sensitive_range(const MeasurementSeries& series,
                                    double min_r_squared = kMinFitRSquared);

inline constexpr double kPlateauSlopeRatio = 0.2;

// Lowest quantifiable concentration: the start of the sensitive range after
// trimming leading segments flatter than plateau_slope_ratio times the
// fitted slope (the knee where the curve leaves the low plateau).
double detection_limit(const MeasurementSeries& series, const SensitiveRange& range,
                       double plateau_slope_ratio = kPlateauSlopeRatio);

// Replicate spread relative to level: (max - min) / mean * 100. With two
// replicates this is the classic |I2 - I1| / Ix form.
double repeating_error(std::span<const double> replicates);

struct CurvePoint {
    double concentration = 0.0;
    double mean_reading = 0.0;
    double repeating_error_pct = 0.0;
};

struct CalibrationCurve {
    Approach approach;
    std::string unit;
    double slope = 0.0;     // per decade of concentration
    double intercept = 0.0;
    double r_squared = 0.0;
    double c_lo = 0.0, c_hi = 0.0;             // sensitive range, concentration units
    double reading_lo = 0.0, reading_hi = 0.0; // fitted reading span over [c_lo, c_hi]
    double detection_limit = 0.0;
    double dilution_factor = 0.0;
    double sensitivity_per_step = 0.0; // slope * log10(dilution factor)
    MonotoneDirection monotone_direction = MonotoneDirection::Increasing;
    std::vector<CurvePoint> per_point; // full series, ascending concentration
    double max_repeating_error_pct = 0.0; // over the sensitive range
    double avg_repeating_error_pct = 0.0;
    double max_repeating_error_full_pct = 0.0; // over the full series
    double avg_repeating_error_full_pct = 0.0;
    std::vector<std::string> warnings;

    // Reading change per e-fold of concentration; equals 1/B of the
    // equivalent exponential form c = A * exp(B * reading).
    double sensitivity_per_efold() const;
};

struct BuildOptions {
    double min_r_squared = kMinFitRSquared;
    double plateau_slope_ratio = kPlateauSlopeRatio;
    double spacing_tolerance = 0.01; // relative, for the geometric-series check
};

// Full characterization of a dilution series: sensitive range, fit,
// detection limit, per-point repeating errors and sensitivity. A series
// whose spacing deviates from the stated dilution factor gets a warning,
// not an error.
CalibrationCurve build_curve(const MeasurementSeries& series, double dilution_factor,
                             const BuildOptions& options = {});

// Model reading at a concentration: intercept + slope * log10(c).
double curve_reading_at(const CalibrationCurve& curve, double concentration);

// Inverse of the fitted model, c = 10^((reading - intercept) / slope).
// Readings outside [reading_lo, reading_hi] are refused: beyond the
// calibrated span one reading may correspond to two concentrations.
double invert_curve(const CalibrationCurve& curve, double reading);

struct ConcentrationEstimate {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double measuring_error_pct = 0.0; // |upper - lower| / value * 100
    std::string unit;
};

// Maps a reading +/- spread through the inverse curve; the concentration
// interval width relative to the center is the measuring error.
ConcentrationEstimate measuring_error(const CalibrationCurve& curve, double reading,
                                      double reading_spread);

// Min-max normalization of readings to [0, 1].
std::vector<std::pair<double, double>>
normalize_curve(std::span<const std::pair<double, double>> points);

// Exponential form c = coefficient * exp(rate * reading) of a log-linear
// curve; the two parameterizations convert losslessly.
struct ExponentialParams {
    double coefficient = 0.0; // A
    double rate = 0.0;        // B
};

CalibrationCurve curve_from_exponential(const ExponentialParams& params, std::string unit,
                                        const Approach& approach, double c_lo, double c_hi);
ExponentialParams exponential_params(const CalibrationCurve& curve);

} // namespace assaylens
