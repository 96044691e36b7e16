#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "assaylens/imaging.hpp"

namespace assaylens {

enum class Channel { Red, Green, Blue };

char channel_letter(Channel c);
Channel channel_from_letter(char letter);

// How ROI color is turned into a scalar reading: a two-channel ratio or the
// mean grey level. Ratios cancel exposure scaling; grey tracks intensity.
struct Approach {
    enum class Kind { ChannelRatio, GreyScale };

    Kind kind = Kind::GreyScale;
    Channel numerator = Channel::Green;
    Channel denominator = Channel::Blue;

    static Approach grey() { return Approach{Kind::GreyScale, Channel::Green, Channel::Blue}; }
    static Approach ratio(Channel num = Channel::Green, Channel den = Channel::Blue) {
        return Approach{Kind::ChannelRatio, num, den};
    }

    // "grey" or "ratio:<num>/<den>", e.g. "ratio:g/b".
    std::string label() const;
    static Approach from_label(std::string_view label);

    // Channel fields only matter for ratios.
    bool operator==(const Approach& other) const {
        if (kind != other.kind)
            return false;
        if (kind == Kind::GreyScale)
            return true;
        return numerator == other.numerator && denominator == other.denominator;
    }
};

// Acquisition conditions a reading depends on. Exposure time, ISO and
// aperture govern the sensor response; assay, temperature and hardware
// labels key the calibration database.
struct CaptureContext {
    std::string assay;
    double temperature_c = 22.0;
    std::string phone;
    std::string led_power;
    double exposure_s = 0.0;
    double iso = 0.0;
    double aperture_f = 0.0;
    std::optional<double> calibration_constant;

    bool operator==(const CaptureContext&) const = default;
};

// Throws ValidationError unless exposure, ISO and aperture are positive.
void validate(const CaptureContext& context);

struct RoiStats {
    std::size_t pixel_count = 0;
    double sum_r = 0.0, sum_g = 0.0, sum_b = 0.0;
    double mean_r = 0.0, mean_g = 0.0, mean_b = 0.0;

    double sum(Channel c) const;
    double mean(Channel c) const;
};

struct Reading {
    Approach approach;
    double value = 0.0;
    CaptureContext context;
    double saturation = 0.0;
};

RoiStats roi_channel_stats(const RgbImage& image, const Roi& roi);
RoiStats roi_channel_stats(const MeanImage& image, const Roi& roi);
// From a stack: sums over the unrounded per-pixel means.
RoiStats roi_channel_stats(const FrameStack& stack, const Roi& roi);

// Sum of the numerator channel over the ROI divided by the sum of the
// denominator channel. Zero denominator sum is a degenerate-input error.
double channel_ratio(const RoiStats& stats, Channel numerator = Channel::Green,
                     Channel denominator = Channel::Blue);

// Mean of the three channel means, real-valued.
double grey_scale(const RoiStats& stats);

// Scalar reading for the given approach.
double reading_value(const RoiStats& stats, const Approach& approach);

struct ExposureReference {
    double exposure_s = 0.0;
    double iso = 0.0;
};

// Readings above this saturated-pixel fraction are outside the sensor's
// linear response and may not be exposure-normalized.
inline constexpr double kSaturationLimit = 0.01;

// Rescales a grey-scale reading to the reference exposure-time/ISO product;
// the context is rewritten to the reference settings. Channel-ratio readings
// pass through unchanged since the exposure factor cancels in the ratio.
Reading exposure_normalize(const Reading& reading, const ExposureReference& reference,
                           double saturation_limit = kSaturationLimit);

} // namespace assaylens
