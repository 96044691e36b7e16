#include "assaylens/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include <jpeglib.h>
#include <png.h>

namespace assaylens {

namespace {

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open file: " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("read failure: " + path.string());
    return bytes;
}

bool looks_like_png(const std::vector<unsigned char>& bytes) {
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return bytes.size() >= 8 && std::memcmp(bytes.data(), sig, 8) == 0;
}

bool looks_like_jpeg(const std::vector<unsigned char>& bytes) {
    return bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff;
}

struct PngReadState {
    const unsigned char* data = nullptr;
    std::size_t size = 0;
    std::size_t offset = 0;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
    auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (state->offset + count > state->size)
        png_error(png, "unexpected end of PNG data");
    std::memcpy(out, state->data + state->offset, count);
    state->offset += count;
}

void png_on_error(png_structp png, png_const_charp msg) {
    // Collected by the caller through the error pointer; longjmp back out.
    auto* err = static_cast<std::string*>(png_get_error_ptr(png));
    if (err)
        *err = msg;
    png_longjmp(png, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

RgbImage decode_png(const std::vector<unsigned char>& bytes) {
    std::string error_msg;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error_msg,
                                             png_on_error, png_on_warning);
    if (!png)
        throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng init failed");
    }

    std::vector<png_byte> raw;
    std::vector<png_bytep> rows;
    PngReadState state{bytes.data(), bytes.size(), 0};

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ValidationError("malformed PNG: " + (error_msg.empty() ? "decode error" : error_msg));
    }

    png_set_read_fn(png, &state, png_read_from_memory);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (width == 0 || height == 0) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ValidationError("zero-dimension image");
    }
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ValidationError("unsupported format: image has fewer than 3 channels");
    }

    if (color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (bit_depth < 8)
        png_set_packing(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int out_depth = png_get_bit_depth(png, info);
    const std::size_t row_bytes = png_get_rowbytes(png, info);
    raw.assign(row_bytes * height, 0);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = raw.data() + y * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    std::vector<Rgb8> pixels(static_cast<std::size_t>(width) * height);
    if (out_depth == 16) {
        // PNG stores 16-bit samples big-endian; 8-bit value = sample / 257.
        for (std::size_t i = 0; i < pixels.size(); ++i) {
            const png_byte* p = raw.data() + i * 6;
            auto scale = [](unsigned hi, unsigned lo) {
                return static_cast<std::uint8_t>(((hi << 8) | lo) / 257u);
            };
            pixels[i] = {scale(p[0], p[1]), scale(p[2], p[3]), scale(p[4], p[5])};
        }
    } else {
        for (std::size_t i = 0; i < pixels.size(); ++i) {
            const png_byte* p = raw.data() + i * 3;
            pixels[i] = {p[0], p[1], p[2]};
        }
    }
    return RgbImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

struct JpegErrorMgr {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    std::string message;
};

void jpeg_on_error(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    char buf[JMSG_LENGTH_MAX];
    (*cinfo->err->format_message)(cinfo, buf);
    err->message = buf;
    std::longjmp(err->jump, 1);
}

RgbImage decode_jpeg(const std::vector<unsigned char>& bytes) {
    jpeg_decompress_struct cinfo{};
    JpegErrorMgr err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_on_error;

    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw ValidationError("malformed JPEG: " + err.message);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, const_cast<unsigned char*>(bytes.data()),
                 static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const int width = static_cast<int>(cinfo.output_width);
    const int height = static_cast<int>(cinfo.output_height);
    if (width == 0 || height == 0) {
        jpeg_destroy_decompress(&cinfo);
        throw ValidationError("zero-dimension image");
    }

    std::vector<Rgb8> pixels(static_cast<std::size_t>(width) * height);
    std::vector<unsigned char> row(static_cast<std::size_t>(width) * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        unsigned char* rowp = row.data();
        const int y = static_cast<int>(cinfo.output_scanline);
        jpeg_read_scanlines(&cinfo, &rowp, 1);
        for (int x = 0; x < width; ++x)
            pixels[static_cast<std::size_t>(y) * width + x] = {row[x * 3], row[x * 3 + 1],
                                                               row[x * 3 + 2]};
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return RgbImage(width, height, std::move(pixels));
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + count);
}

void png_flush_noop(png_structp) {}

} // namespace

RgbImage decode_image_bytes(const std::vector<unsigned char>& bytes) {
    if (looks_like_png(bytes))
        return decode_png(bytes);
    if (looks_like_jpeg(bytes))
        return decode_jpeg(bytes);
    throw ValidationError("unsupported format: not a PNG or JPEG file");
}

LoadedImage load_image(const std::filesystem::path& path) {
    std::vector<unsigned char> bytes = read_file(path);
    if (looks_like_png(bytes))
        return {decode_png(bytes), ImageFormat::Png};
    if (looks_like_jpeg(bytes))
        return {decode_jpeg(bytes), ImageFormat::Jpeg};
    throw ValidationError("unsupported format: " + path.string() + " is not a PNG or JPEG file");
}

RgbImage decode_image(const std::filesystem::path& path) {
    return load_image(path).image;
}

std::vector<unsigned char> encode_png_bytes(const RgbImage& image) {
    if (image.width() < 1 || image.height() < 1)
        throw ValidationError("cannot encode empty image");

    std::string error_msg;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error_msg,
                                              png_on_error, png_on_warning);
    if (!png)
        throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed");
    }

    std::vector<unsigned char> out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed: " + (error_msg.empty() ? "unknown" : error_msg));
    }

    png_set_write_fn(png, &out, png_write_to_vector, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
                 static_cast<png_uint_32>(image.height()), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    // Pin encoder choices so output bytes are reproducible.
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<std::size_t>(image.width()) * 3);
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            const Rgb8& p = image.at(x, y);
            row[x * 3] = p.r;
            row[x * 3 + 1] = p.g;
            row[x * 3 + 2] = p.b;
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

void encode_png(const RgbImage& image, const std::filesystem::path& path) {
    std::vector<unsigned char> bytes = encode_png_bytes(image);
    std::ofstream outf(path, std::ios::binary | std::ios::trunc);
    if (!outf)
        throw IoError("cannot open for writing: " + path.string());
    outf.write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
    if (!outf)
        throw IoError("write failure: " + path.string());
}

} // namespace assaylens
