#include "assaylens/synthgen.hpp"

#include <cmath>
#include <string>

#include "assaylens/format.hpp"
#include "assaylens/image_io.hpp"

namespace assaylens {

namespace {

// splitmix64; fixed algorithm so generated bytes never depend on the
// standard library's distribution implementations.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1].
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Box-Muller, one variate per call (the sine twin is discarded so the
    // stream stays easy to reason about).
    double next_gaussian() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643 * u2);
    }
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt, std::uint64_t frame) {
    Rng mixer(seed ^ (salt * 0x9e3779b97f4a7c15ull) ^ (frame * 0xd1b54a32d192ed03ull));
    return mixer.next_u64();
}

std::uint8_t quantize(double v) {
    double r = std::floor(v + 0.5);
    if (r < 0.0) r = 0.0;
    if (r > 255.0) r = 255.0;
    return static_cast<std::uint8_t>(r);
}

} // namespace

double SyntheticModel::grey_level(double concentration) const {
    if (!(concentration > 0.0))
        throw ValidationError("synthetic model: concentration must be positive");
    const double grey_base = (base_r + base_g + base_b) / 3.0;
    if (concentration <= c_lo)
        return grey_base;
    const double top = grey_base + beta * (std::log10(c_hi) - std::log10(c_lo));
    if (concentration <= c_hi)
        return grey_base + beta * (std::log10(concentration) - std::log10(c_lo));
    if (downturn_slope > 0.0)
        return top - downturn_slope * (std::log10(concentration) - std::log10(c_hi));
    return top;
}

std::array<double, 3> SyntheticModel::channel_means(double concentration) const {
    const double grey_base = (base_r + base_g + base_b) / 3.0;
    const double delta = grey_level(concentration) - grey_base;
    // Only green moves; a grey shift of d needs a green shift of 3d.
    return {base_r, base_g + 3.0 * delta, base_b};
}

std::array<double, 3> SyntheticModel::channel_means(double concentration,
                                                    const CaptureContext& context) const {
    validate(context);
    const double factor =
        (context.exposure_s * context.iso) / (reference_exposure_s * reference_iso);
    auto means = channel_means(concentration);
    for (double& m : means)
        m *= factor;
    return means;
}

RenderResult render_stack(const SyntheticModel& model, double concentration,
                          const CaptureContext& context, int frames, int width, int height,
                          std::uint64_t salt) {
    if (frames < 1)
        throw ValidationError("render_stack: need at least 1 frame");
    if (width < 1 || height < 1)
        throw ValidationError("render_stack: dimensions must be at least 1x1");

    const auto means = model.channel_means(concentration, context);

    RenderResult result;
    std::size_t clamped = 0;
    const std::size_t pixels_per_frame = static_cast<std::size_t>(width) * height;
    for (int f = 0; f < frames; ++f) {
        Rng rng(mix_seed(model.seed, salt, static_cast<std::uint64_t>(f)));
        std::vector<Rgb8> pixels(pixels_per_frame);
        for (auto& px : pixels) {
            std::array<double, 3> v = means;
            if (model.noise_sigma > 0.0)
                for (double& c : v)
                    c += model.noise_sigma * rng.next_gaussian();
            px = {quantize(v[0]), quantize(v[1]), quantize(v[2])};
            if (px.r == 255 || px.g == 255 || px.b == 255)
                ++clamped;
        }
        result.stack.frames.emplace_back(width, height, std::move(pixels));
    }
    result.clamp_fraction =
        static_cast<double>(clamped) / static_cast<double>(pixels_per_frame * frames);
    return result;
}

std::filesystem::path generate_dataset(const SyntheticModel& model,
                                       std::span<const double> concentrations,
                                       const CaptureContext& context,
                                       const DatasetOptions& options,
                                       const std::filesystem::path& out_dir) {
    if (concentrations.empty())
        throw ValidationError("generate_dataset: concentration list is empty");
    for (double c : concentrations)
        if (!(c > 0.0))
            throw ValidationError("generate_dataset: concentrations must be positive");
    if (options.replicate_groups < 1)
        throw ValidationError("generate_dataset: need at least 1 replicate group");
    validate_roi(options.roi, options.image_width, options.image_height);

    std::error_code ec;
    std::filesystem::create_directories(out_dir / "images", ec);
    if (ec)
        throw IoError("cannot create output directory " + (out_dir / "images").string() + ": " +
                      ec.message());

    Manifest manifest;
    manifest.context = context;
    manifest.unit = options.unit;
    manifest.roi = options.roi;
    manifest.approach = options.approach;

    std::uint64_t salt = 0;
    for (std::size_t ci = 0; ci < concentrations.size(); ++ci) {
        ManifestSample sample;
        sample.concentration = concentrations[ci];
        for (int g = 0; g < options.replicate_groups; ++g) {
            ++salt;
            RenderResult rendered =
                render_stack(model, concentrations[ci], context, options.frames_per_group,
                             options.image_width, options.image_height, salt);
            std::vector<std::filesystem::path> group;
            for (std::size_t f = 0; f < rendered.stack.frames.size(); ++f) {
                const std::string name = "c" + std::to_string(ci) + "_g" + std::to_string(g) +
                                         "_f" + std::to_string(f) + ".png";
                const std::filesystem::path img_path = out_dir / "images" / name;
                encode_png(rendered.stack.frames[f], img_path);
                group.push_back(img_path);
            }
            sample.replicate_groups.push_back(std::move(group));
        }
        manifest.samples.push_back(std::move(sample));
    }

    const std::filesystem::path manifest_path = out_dir / "manifest.json";
    save_manifest(manifest, manifest_path);
    log_line("wrote dataset with " + std::to_string(concentrations.size()) + " samples to " +
             out_dir.string());
    return manifest_path;
}

} // namespace assaylens
