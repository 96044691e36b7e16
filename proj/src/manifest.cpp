#include "assaylens/manifest.hpp"

#include <fstream>

#include <json.hpp>

namespace assaylens {

using nlohmann::json;

void validate(const Manifest& manifest) {
    if (manifest.unit.empty())
        throw ValidationError("manifest: unit must be named");
    if (manifest.samples.empty())
        throw ValidationError("manifest: no samples");
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
        const ManifestSample& s = manifest.samples[i];
        if (!(s.concentration > 0.0))
            throw ValidationError("manifest: samples[" + std::to_string(i) +
                                  "].concentration must be positive");
        if (s.replicate_groups.empty())
            throw ValidationError("manifest: samples[" + std::to_string(i) +
                                  "] has no replicate groups");
        for (std::size_t g = 0; g < s.replicate_groups.size(); ++g)
            if (s.replicate_groups[g].empty())
                throw ValidationError("manifest: samples[" + std::to_string(i) +
                                      "].replicate_groups[" + std::to_string(g) + "] is empty");
    }
}

namespace {

const json& need(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object())
        throw ValidationError("malformed manifest: " + path + " should be an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError("malformed manifest: missing field " + path + "." + key);
    return *it;
}

double need_number(const json& obj, const char* key, const std::string& path) {
    const json& v = need(obj, key, path);
    if (!v.is_number())
        throw ValidationError("malformed manifest: " + path + "." + key + " should be a number");
    return v.get<double>();
}

std::string need_string(const json& obj, const char* key, const std::string& path) {
    const json& v = need(obj, key, path);
    if (!v.is_string())
        throw ValidationError("malformed manifest: " + path + "." + key + " should be a string");
    return v.get<std::string>();
}

} // namespace

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open manifest: " + path.string());

    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed manifest " + path.string() + " at byte " +
                              std::to_string(e.byte) + ": " + e.what());
    }

    Manifest m;
    m.context.assay = need_string(root, "assay", "$");
    m.context.temperature_c = need_number(root, "temperature_c", "$");
    const json& ctx = need(root, "context", "$");
    m.context.phone = need_string(ctx, "phone", "$.context");
    m.context.led_power = need_string(ctx, "led_power", "$.context");
    m.context.exposure_s = need_number(ctx, "exposure_s", "$.context");
    m.context.iso = need_number(ctx, "iso", "$.context");
    m.context.aperture_f = need_number(ctx, "aperture_f", "$.context");
    m.unit = need_string(root, "unit", "$");
    const json& roi = need(root, "roi", "$");
    m.roi.x = static_cast<int>(need_number(roi, "x", "$.roi"));
    m.roi.y = static_cast<int>(need_number(roi, "y", "$.roi"));
    m.roi.w = static_cast<int>(need_number(roi, "w", "$.roi"));
    m.roi.h = static_cast<int>(need_number(roi, "h", "$.roi"));
    m.approach = Approach::from_label(need_string(root, "approach", "$"));

    const json& samples = need(root, "samples", "$");
    if (!samples.is_array())
        throw ValidationError("malformed manifest: $.samples should be an array");
    const std::filesystem::path base = path.parent_path();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::string spath = "$.samples[" + std::to_string(i) + "]";
        ManifestSample sample;
        sample.concentration = need_number(samples[i], "concentration", spath);
        const json& groups = need(samples[i], "replicate_groups", spath);
        if (!groups.is_array())
            throw ValidationError("malformed manifest: " + spath +
                                  ".replicate_groups should be an array");
        for (const json& group : groups) {
            if (!group.is_array())
                throw ValidationError("malformed manifest: " + spath +
                                      ".replicate_groups entries should be arrays of paths");
            std::vector<std::filesystem::path> paths;
            for (const json& p : group) {
                if (!p.is_string())
                    throw ValidationError("malformed manifest: image paths in " + spath +
                                          " should be strings");
                std::filesystem::path img = p.get<std::string>();
                paths.push_back(img.is_absolute() ? img : base / img);
            }
            sample.replicate_groups.push_back(std::move(paths));
        }
        m.samples.push_back(std::move(sample));
    }
    validate(m);
    return m;
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& path) {
    validate(manifest);
    const std::filesystem::path base = path.parent_path();

    json samples = json::array();
    for (const ManifestSample& sample : manifest.samples) {
        json groups = json::array();
        for (const auto& group : sample.replicate_groups) {
            json paths = json::array();
            for (const std::filesystem::path& img : group) {
                std::filesystem::path stored = img;
                if (!base.empty()) {
                    const auto rel = img.lexically_relative(base);
                    if (!rel.empty() && rel.native().rfind("..", 0) != 0)
                        stored = rel;
                }
                paths.push_back(stored.generic_string());
            }
            groups.push_back(std::move(paths));
        }
        samples.push_back(
            {{"concentration", sample.concentration}, {"replicate_groups", std::move(groups)}});
    }

    const json root{{"assay", manifest.context.assay},
                    {"temperature_c", manifest.context.temperature_c},
                    {"context",
                     {{"phone", manifest.context.phone},
                      {"led_power", manifest.context.led_power},
                      {"exposure_s", manifest.context.exposure_s},
                      {"iso", manifest.context.iso},
                      {"aperture_f", manifest.context.aperture_f}}},
                    {"unit", manifest.unit},
                    {"roi",
                     {{"x", manifest.roi.x}, {"y", manifest.roi.y}, {"w", manifest.roi.w},
                      {"h", manifest.roi.h}}},
                    {"approach", manifest.approach.label()},
                    {"samples", std::move(samples)}};

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    out << root.dump(2) << "\n";
    if (!out)
        throw IoError("write failure: " + path.string());
}

} // namespace assaylens
