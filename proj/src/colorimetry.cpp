#include "assaylens/colorimetry.hpp"

#include <cmath>

namespace assaylens {

char channel_letter(Channel c) {
    switch (c) {
    case Channel::Red: return 'r';
    case Channel::Green: return 'g';
    case Channel::Blue: return 'b';
    }
    return '?';
}

Channel channel_from_letter(char letter) {
    switch (letter) {
    case 'r': case 'R': return Channel::Red;
    case 'g': case 'G': return Channel::Green;
    case 'b': case 'B': return Channel::Blue;
    default:
        throw ValidationError(std::string("unknown channel letter: ") + letter);
    }
}

std::string Approach::label() const {
    if (kind == Kind::GreyScale)
        return "grey";
    return std::string("ratio:") + channel_letter(numerator) + "/" + channel_letter(denominator);
}

Approach Approach::from_label(std::string_view label) {
    if (label == "grey" || label == "grey_scale")
        return grey();
    constexpr std::string_view prefix = "ratio:";
    if (label.size() == prefix.size() + 3 && label.substr(0, prefix.size()) == prefix &&
        label[prefix.size() + 1] == '/') {
        return ratio(channel_from_letter(label[prefix.size()]),
                     channel_from_letter(label[prefix.size() + 2]));
    }
    throw ValidationError("unknown approach label: \"" + std::string(label) +
                          "\" (expected \"grey\" or \"ratio:<c>/<c>\")");
}

void validate(const CaptureContext& context) {
    if (!(context.exposure_s > 0.0))
        throw ValidationError("capture context: exposure time must be positive");
    if (!(context.iso > 0.0))
        throw ValidationError("capture context: ISO must be positive");
    if (!(context.aperture_f > 0.0))
        throw ValidationError("capture context: aperture must be positive");
}

double RoiStats::sum(Channel c) const {
    switch (c) {
    case Channel::Red: return sum_r;
    case Channel::Green: return sum_g;
    case Channel::Blue: return sum_b;
    }
    return 0.0;
}

double RoiStats::mean(Channel c) const {
    switch (c) {
    case Channel::Red: return mean_r;
    case Channel::Green: return mean_g;
    case Channel::Blue: return mean_b;
    }
    return 0.0;
}

RoiStats roi_channel_stats(const RgbImage& image, const Roi& roi) {
    validate_roi(roi, image.width(), image.height());
    RoiStats stats;
    stats.pixel_count = static_cast<std::size_t>(roi.w) * roi.h;
    for (int y = roi.y; y < roi.y + roi.h; ++y) {
        for (int x = roi.x; x < roi.x + roi.w; ++x) {
            const Rgb8& p = image.at(x, y);
            stats.sum_r += p.r;
            stats.sum_g += p.g;
            stats.sum_b += p.b;
        }
    }
    const double n = static_cast<double>(stats.pixel_count);
    stats.mean_r = stats.sum_r / n;
    stats.mean_g = stats.sum_g / n;
    stats.mean_b = stats.sum_b / n;
    return stats;
}

RoiStats roi_channel_stats(const MeanImage& image, const Roi& roi) {
    validate_roi(roi, image.width, image.height);
    RoiStats stats;
    stats.pixel_count = static_cast<std::size_t>(roi.w) * roi.h;
    for (int y = roi.y; y < roi.y + roi.h; ++y) {
        for (int x = roi.x; x < roi.x + roi.w; ++x) {
            const auto& p = image.pixels[static_cast<std::size_t>(y) * image.width + x];
            stats.sum_r += p[0];
            stats.sum_g += p[1];
            stats.sum_b += p[2];
        }
    }
    const double n = static_cast<double>(stats.pixel_count);
    stats.mean_r = stats.sum_r / n;
    stats.mean_g = stats.sum_g / n;
    stats.mean_b = stats.sum_b / n;
    return stats;
}

RoiStats roi_channel_stats(const FrameStack& stack, const Roi& roi) {
    return roi_channel_stats(mean_frames(stack), roi);
}

double channel_ratio(const RoiStats& stats, Channel numerator, Channel denominator) {
    const double den = stats.sum(denominator);
    if (den <= 0.0)
        throw ValidationError("channel ratio undefined: denominator channel sum is zero");
    return stats.sum(numerator) / den;
}

double grey_scale(const RoiStats& stats) {
    if (stats.pixel_count < 1)
        throw ValidationError("grey scale requires at least one pixel");
    return (stats.mean_r + stats.mean_g + stats.mean_b) / 3.0;
}

double reading_value(const RoiStats& stats, const Approach& approach) {
    if (approach.kind == Approach::Kind::GreyScale)
        return grey_scale(stats);
    return channel_ratio(stats, approach.numerator, approach.denominator);
}

Reading exposure_normalize(const Reading& reading, const ExposureReference& reference,
                           double saturation_limit) {
    if (!(reference.exposure_s > 0.0) || !(reference.iso > 0.0))
        throw ValidationError("exposure normalization: reference settings must be positive");

    if (reading.approach.kind == Approach::Kind::ChannelRatio)
        return reading; // the t*S factor cancels in the ratio

    if (reading.saturation > saturation_limit)
        throw ValidationError("reading is saturated (" + std::to_string(reading.saturation * 100) +
                              "% of pixels clipped); sensor response is not linear");
    if (!(reading.context.exposure_s > 0.0) || !(reading.context.iso > 0.0))
        throw ValidationError("exposure normalization: reading settings must be positive");

    Reading out = reading;
    const double factor = (reference.exposure_s * reference.iso) /
                          (reading.context.exposure_s * reading.context.iso);
    out.value = reading.value * factor;
    out.context.exposure_s = reference.exposure_s;
    out.context.iso = reference.iso;
    return out;
}

} // namespace assaylens
