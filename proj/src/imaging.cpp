#include "assaylens/imaging.hpp"

#include <cmath>
#include <string>

namespace assaylens {

namespace {

void check_dims(int width, int height) {
    if (width < 1 || height < 1)
        throw ValidationError("image dimensions must be at least 1x1, got " +
                              std::to_string(width) + "x" + std::to_string(height));
}

std::uint8_t round_half_up_u8(double v) {
    double r = std::floor(v + 0.5);
    if (r < 0.0) r = 0.0;
    if (r > 255.0) r = 255.0;
    return static_cast<std::uint8_t>(r);
}

} // namespace

RgbImage::RgbImage(int width, int height, Rgb8 fill)
    : width_(width), height_(height) {
    check_dims(width, height);
    pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

RgbImage::RgbImage(int width, int height, std::vector<Rgb8> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height);
    if (pixels_.size() != static_cast<std::size_t>(width) * height)
        throw ValidationError("pixel array length " + std::to_string(pixels_.size()) +
                              " does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
}

void validate_roi(const Roi& roi, int image_width, int image_height) {
    if (roi.w < 1 || roi.h < 1)
        throw ValidationError("ROI out of bounds: size must be at least 1x1");
    if (roi.x < 0 || roi.y < 0 || roi.x + roi.w > image_width || roi.y + roi.h > image_height)
        throw ValidationError("ROI out of bounds: " + std::to_string(roi.x) + "," +
                              std::to_string(roi.y) + " " + std::to_string(roi.w) + "x" +
                              std::to_string(roi.h) + " does not fit in " +
                              std::to_string(image_width) + "x" + std::to_string(image_height));
}

namespace {

void check_stack(const FrameStack& stack) {
    if (stack.frames.empty())
        throw ValidationError("frame stack is empty");
    const RgbImage& first = stack.frames.front();
    for (const RgbImage& frame : stack.frames) {
        if (frame.width() != first.width() || frame.height() != first.height())
            throw ValidationError("frame dimensions differ: " + std::to_string(first.width()) +
                                  "x" + std::to_string(first.height()) + " vs " +
                                  std::to_string(frame.width()) + "x" +
                                  std::to_string(frame.height()));
    }
}

} // namespace

MeanImage mean_frames(const FrameStack& stack) {
    check_stack(stack);
    const RgbImage& first = stack.frames.front();
    MeanImage out;
    out.width = first.width();
    out.height = first.height();
    out.pixels.assign(first.pixel_count(), {0.0, 0.0, 0.0});

    for (const RgbImage& frame : stack.frames) {
        auto px = frame.pixels();
        for (std::size_t i = 0; i < px.size(); ++i) {
            out.pixels[i][0] += px[i].r;
            out.pixels[i][1] += px[i].g;
            out.pixels[i][2] += px[i].b;
        }
    }
    const double n = static_cast<double>(stack.frames.size());
    for (auto& p : out.pixels) {
        p[0] /= n;
        p[1] /= n;
        p[2] /= n;
    }
    return out;
}

RgbImage average_frames(const FrameStack& stack) {
    MeanImage mean = mean_frames(stack);
    std::vector<Rgb8> pixels(mean.pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        pixels[i].r = round_half_up_u8(mean.pixels[i][0]);
        pixels[i].g = round_half_up_u8(mean.pixels[i][1]);
        pixels[i].b = round_half_up_u8(mean.pixels[i][2]);
    }
    return RgbImage(mean.width, mean.height, std::move(pixels));
}

RgbImage extract_roi(const RgbImage& image, const Roi& roi) {
    validate_roi(roi, image.width(), image.height());
    std::vector<Rgb8> pixels;
    pixels.reserve(static_cast<std::size_t>(roi.w) * roi.h);
    for (int y = roi.y; y < roi.y + roi.h; ++y)
        for (int x = roi.x; x < roi.x + roi.w; ++x)
            pixels.push_back(image.at(x, y));
    return RgbImage(roi.w, roi.h, std::move(pixels));
}

double saturation_fraction(const RgbImage& image) {
    if (image.pixel_count() == 0)
        return 0.0;
    std::size_t saturated = 0;
    for (const Rgb8& p : image.pixels())
        if (p.r == 255 || p.g == 255 || p.b == 255)
            ++saturated;
    return static_cast<double>(saturated) / static_cast<double>(image.pixel_count());
}

double saturation_fraction(const FrameStack& stack) {
    check_stack(stack);
    std::size_t saturated = 0;
    std::size_t total = 0;
    for (const RgbImage& frame : stack.frames) {
        for (const Rgb8& p : frame.pixels())
            if (p.r == 255 || p.g == 255 || p.b == 255)
                ++saturated;
        total += frame.pixel_count();
    }
    return static_cast<double>(saturated) / static_cast<double>(total);
}

} // namespace assaylens
