#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>

#include "assaylens/manifest.hpp"

namespace assaylens {

// Ground-truth forward model for synthetic cuvette images. The grey-scale
// response is log-linear over [c_lo, c_hi] with a plateau below c_lo and,
// when downturn_slope > 0, a drop above c_hi (the inner-filter shape). The
// green channel carries the whole signal; red and blue stay at their base
// levels, so the G/B ratio responds log-linearly as well.
struct SyntheticModel {
    double base_r = 30.0; // channel means on the low plateau, at reference exposure
    double base_g = 40.0;
    double base_b = 80.0;
    double beta = 12.0; // grey-reading slope, units per decade of concentration
    double c_lo = 1e-8;
    double c_hi = 1e-3;
    double downturn_slope = 0.0; // grey units per decade above c_hi; 0 = flat top
    double noise_sigma = 0.0;    // grey levels, per pixel per channel
    std::uint64_t seed = 0;
    double reference_exposure_s = 0.1;
    double reference_iso = 100.0;

    // Grey-scale reading at the reference exposure.
    double grey_level(double concentration) const;

    // Per-channel means at the reference exposure.
    std::array<double, 3> channel_means(double concentration) const;

    // Means scaled by (t*S) / (t_ref*S_ref) for the given capture settings.
    std::array<double, 3> channel_means(double concentration, const CaptureContext& context) const;
};

struct RenderResult {
    FrameStack stack;
    // Fraction of rendered pixels with a channel at full scale; equals the
    // saturation fraction measured on the output.
    double clamp_fraction = 0.0;
};

// Renders a stack of uniform-field frames with independent Gaussian pixel
// noise, quantized half-up and clamped to [0, 255]. Deterministic for a
// given (model.seed, salt, frame index); distinct salts give independent
// replicate stacks.
RenderResult render_stack(const SyntheticModel& model, double concentration,
                          const CaptureContext& context, int frames, int width, int height,
                          std::uint64_t salt = 0);

struct DatasetOptions {
    int frames_per_group = 8;
    int replicate_groups = 3;
    int image_width = 64;
    int image_height = 48;
    Roi roi{16, 12, 32, 24};
    Approach approach = Approach::grey();
    std::string unit = "mol/L";
};

// Writes PNG frames plus a manifest under out_dir and returns the manifest
// path. Re-running with the same model and options reproduces every byte.
std::filesystem::path generate_dataset(const SyntheticModel& model,
                                       std::span<const double> concentrations,
                                       const CaptureContext& context,
                                       const DatasetOptions& options,
                                       const std::filesystem::path& out_dir);

} // namespace assaylens
