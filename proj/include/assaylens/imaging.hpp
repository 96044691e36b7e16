#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "assaylens/errors.hpp"

namespace assaylens {

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb8&) const = default;
};

// 8-bit, 3-channel raster stored row-major.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb8 fill = {});
    RgbImage(int width, int height, std::vector<Rgb8> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return pixels_.size(); }

    Rgb8& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    const Rgb8& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<const Rgb8> pixels() const { return pixels_; }
    std::span<Rgb8> pixels() { return pixels_; }

    bool operator==(const RgbImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<Rgb8> pixels_;
};

// Unquantized per-pixel channel means of a frame stack. Feeding these to the
// ROI statistics avoids quantizing twice (once per frame, once in the mean).
struct MeanImage {
    int width = 0;
    int height = 0;
    std::vector<std::array<double, 3>> pixels; // row-major (r, g, b)
};

struct Roi {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool operator==(const Roi&) const = default;
};

// Throws ValidationError unless the ROI has positive size and lies inside
// the given image dimensions.
void validate_roi(const Roi& roi, int image_width, int image_height);

// Ordered frames, all required to share dimensions when consumed.
struct FrameStack {
    std::vector<RgbImage> frames;
};

// Per-pixel, per-channel arithmetic mean, rounded half-up to 8 bits.
RgbImage average_frames(const FrameStack& stack);

// Same mean without the final quantization.
MeanImage mean_frames(const FrameStack& stack);

RgbImage extract_roi(const RgbImage& image, const Roi& roi);

// Fraction of pixels with any channel at full scale (255).
double saturation_fraction(const RgbImage& image);

// Fraction over all (frame, pixel) samples of the stack.
double saturation_fraction(const FrameStack& stack);

} // namespace assaylens
