#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "assaylens/colorimetry.hpp"

namespace assaylens {

// One sample of the acquisition tree: a concentration with its replicate
// frame stacks. Each inner path list is one stack producing one reading;
// the list length makes the frame count per reading explicit.
struct ManifestSample {
    double concentration = 0.0;
    std::vector<std::vector<std::filesystem::path>> replicate_groups;
};

struct Manifest {
    CaptureContext context; // includes assay and temperature
    std::string unit;
    Roi roi;
    Approach approach;
    std::vector<ManifestSample> samples;
};

void validate(const Manifest& manifest);

// Reads a manifest JSON file. Relative image paths are resolved against the
// manifest's directory.
Manifest load_manifest(const std::filesystem::path& path);

// Writes the manifest; image paths under the manifest's directory are
// stored relative to it.
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

} // namespace assaylens
