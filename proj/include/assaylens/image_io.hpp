#pragma once

#include <filesystem>
#include <vector>

#include "assaylens/imaging.hpp"

namespace assaylens {

enum class ImageFormat { Png, Jpeg };

struct LoadedImage {
    RgbImage image;
    ImageFormat format = ImageFormat::Png;
};

// Decodes a PNG or JPEG file, identified by magic bytes. Alpha is dropped;
// 16-bit PNG samples are rescaled to 8 bits by integer division by 257.
// Grey-scale sources are rejected (the pipeline needs three channels).
LoadedImage load_image(const std::filesystem::path& path);

RgbImage decode_image(const std::filesystem::path& path);

// Lossless 8-bit RGB PNG. Fixed encoder settings so identical images
// produce identical bytes.
void encode_png(const RgbImage& image, const std::filesystem::path& path);

std::vector<unsigned char> encode_png_bytes(const RgbImage& image);

RgbImage decode_image_bytes(const std::vector<unsigned char>& bytes);

} // namespace assaylens
