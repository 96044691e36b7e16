#include "assaylens/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "assaylens/database.hpp"
#include "assaylens/format.hpp"
#include "assaylens/image_io.hpp"
#include "assaylens/manifest.hpp"
#include "assaylens/synthgen.hpp"

namespace assaylens::cli {

namespace {

namespace fs = std::filesystem;

Roi parse_roi(const std::string& text) {
    Roi roi;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream in(text);
    if (!(in >> roi.x >> c1 >> roi.y >> c2 >> roi.w >> c3 >> roi.h) || c1 != ',' || c2 != ',' ||
        c3 != ',' || !(in >> std::ws).eof())
        throw ValidationError("ROI must be given as x,y,w,h, got \"" + text + "\"");
    return roi;
}

struct StackReading {
    RoiStats stats;
    double saturation = 0.0; // mean per-frame saturated fraction over the ROI
    bool any_jpeg = false;
    std::size_t frames = 0;
};

StackReading analyze_stack(const std::vector<fs::path>& paths, std::optional<Roi> roi) {
    if (paths.empty())
        throw ValidationError("no input images given");

    FrameStack stack;
    bool any_jpeg = false;
    for (const fs::path& p : paths) {
        LoadedImage loaded = load_image(p);
        any_jpeg = any_jpeg || loaded.format == ImageFormat::Jpeg;
        log_line("loaded " + p.string() + " (" + std::to_string(loaded.image.width()) + "x" +
                 std::to_string(loaded.image.height()) + ")");
        stack.frames.push_back(std::move(loaded.image));
    }

    const Roi effective = roi.value_or(
        Roi{0, 0, stack.frames.front().width(), stack.frames.front().height()});

    StackReading result;
    result.frames = stack.frames.size();
    result.any_jpeg = any_jpeg;
    result.stats = roi_channel_stats(stack, effective);
    double saturated = 0.0;
    for (const RgbImage& frame : stack.frames)
        saturated += saturation_fraction(extract_roi(frame, effective));
    result.saturation = saturated / static_cast<double>(stack.frames.size());
    return result;
}

std::string now_utc_iso8601() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%08x", static_cast<unsigned>(h & 0xffffffffu));
    return buf;
}

std::string sanitize_for_id(std::string text) {
    for (char& c : text)
        if (!std::isalnum(static_cast<unsigned char>(c)))
            c = '-';
    return text;
}

std::string default_record_id(const CaptureContext& ctx, const Approach& approach,
                              const std::string& unit) {
    const std::string key = ctx.assay + "|" + approach.label() + "|" + unit + "|" + ctx.phone +
                            "|" + ctx.led_power + "|" + format_double(ctx.exposure_s) + "|" +
                            format_double(ctx.iso) + "|" + format_double(ctx.temperature_c);
    return sanitize_for_id(ctx.assay) + "-" + sanitize_for_id(approach.label()) + "-" +
           fnv1a_hex(key);
}

std::string format_metric(double v, bool machine) {
    return machine ? format_double(v) : format_general(v, 6);
}

void print_kv(std::ostream& out, bool csv, const std::string& key, const std::string& value) {
    if (csv)
        out << key << "," << value << "\n";
    else
        out << key << ": " << value << "\n";
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::vector<std::string> images;
    std::string roi_text;
    std::string approach_label = "grey";
    std::string format = "human";
};

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
    const Approach approach = Approach::from_label(args.approach_label);
    std::optional<Roi> roi;
    if (!args.roi_text.empty())
        roi = parse_roi(args.roi_text);

    std::vector<fs::path> paths(args.images.begin(), args.images.end());
    const StackReading reading = analyze_stack(paths, roi);

    const bool csv = args.format == "csv";
    const Channel num =
        approach.kind == Approach::Kind::ChannelRatio ? approach.numerator : Channel::Green;
    const Channel den =
        approach.kind == Approach::Kind::ChannelRatio ? approach.denominator : Channel::Blue;

    if (csv)
        out << "metric,value\n";
    print_kv(out, csv, "frames", std::to_string(reading.frames));
    print_kv(out, csv, "pixels", std::to_string(reading.stats.pixel_count));
    print_kv(out, csv, "mean_r", format_metric(reading.stats.mean_r, csv));
    print_kv(out, csv, "mean_g", format_metric(reading.stats.mean_g, csv));
    print_kv(out, csv, "mean_b", format_metric(reading.stats.mean_b, csv));
    const std::string ratio_key = std::string("ratio_") + channel_letter(num) + "_" +
                                  channel_letter(den);
    print_kv(out, csv, ratio_key, format_metric(channel_ratio(reading.stats, num, den), csv));
    print_kv(out, csv, "grey", format_metric(grey_scale(reading.stats), csv));
    print_kv(out, csv, "saturation", format_metric(reading.saturation, csv));

    if (reading.any_jpeg)
        err << "warning: JPEG input; lossy compression may bias channel statistics\n";
    if (reading.saturation > kSaturationLimit)
        err << "warning: " << format_fixed(reading.saturation * 100.0, 2)
            << "% of ROI pixels are saturated; readings are outside the sensor's linear range\n";
    return kExitOk;
}

// -------------------------------------------------------------- calibrate

struct CalibrateArgs {
    std::string manifest_path;
    double dilution_factor = 10.0;
    std::string out_path;
    std::string base_db_path;
    std::string id;
    std::string created_at;
    std::string format = "human";
    double r2_min = kMinFitRSquared;
    double plateau_theta = kPlateauSlopeRatio;
    double spacing_tol = 0.01;
};

struct SeriesFromManifest {
    MeasurementSeries series;
    std::vector<std::string> warnings;
};

SeriesFromManifest series_from_manifest(const Manifest& manifest) {
    SeriesFromManifest result;
    result.series.unit = manifest.unit;
    result.series.approach = manifest.approach;
    result.series.context = manifest.context;

    bool any_jpeg = false;
    std::vector<double> saturated_at;
    std::vector<ManifestSample> samples = manifest.samples;
    std::sort(samples.begin(), samples.end(),
              [](const ManifestSample& a, const ManifestSample& b) {
                  return a.concentration < b.concentration;
              });

    for (const ManifestSample& sample : samples) {
        SeriesPoint point;
        point.concentration = sample.concentration;
        for (const auto& group : sample.replicate_groups) {
            const StackReading reading = analyze_stack(group, manifest.roi);
            any_jpeg = any_jpeg || reading.any_jpeg;
            if (reading.saturation > kSaturationLimit)
                saturated_at.push_back(sample.concentration);
            point.replicates.push_back(reading_value(reading.stats, manifest.approach));
        }
        result.series.points.push_back(std::move(point));
    }

    if (any_jpeg)
        result.warnings.push_back("JPEG source images; lossy compression may bias readings");
    for (double c : saturated_at)
        result.warnings.push_back("saturated reading at concentration " + format_double(c) +
                                  "; sensor response is not linear there");
    return result;
}

int cmd_calibrate(const CalibrateArgs& args, std::ostream& out, std::ostream& err) {
    const Manifest manifest = load_manifest(args.manifest_path);
    if (manifest.samples.size() < 2)
        throw ValidationError("fewer than 2 points: manifest has " +
                              std::to_string(manifest.samples.size()) +
                              " sample(s), calibration needs at least 2");

    SeriesFromManifest built = series_from_manifest(manifest);

    BuildOptions options;
    options.min_r_squared = args.r2_min;
    options.plateau_slope_ratio = args.plateau_theta;
    options.spacing_tolerance = args.spacing_tol;
    CalibrationCurve curve = build_curve(built.series, args.dilution_factor, options);
    curve.warnings.insert(curve.warnings.end(), built.warnings.begin(), built.warnings.end());

    CalibrationDatabase db;
    const fs::path base = !args.base_db_path.empty() ? fs::path(args.base_db_path)
                                                     : fs::path(args.out_path);
    if (fs::exists(base))
        db = load_database(base);

    CalibrationRecord record;
    record.id = !args.id.empty()
                    ? args.id
                    : default_record_id(manifest.context, manifest.approach, manifest.unit);
    record.context = manifest.context;
    record.curve = std::move(curve);
    record.series = std::move(built.series);
    record.created_at = !args.created_at.empty() ? args.created_at : now_utc_iso8601();

    db = add_record(std::move(db), std::move(record));
    save_database(db, args.out_path);

    const CalibrationRecord& saved = db.records.back();
    const bool csv = args.format == "csv";
    if (csv)
        out << "metric,value\n";
    print_kv(out, csv, "record_id", saved.id);
    print_kv(out, csv, "approach", saved.curve.approach.label());
    print_kv(out, csv, "unit", saved.curve.unit);
    print_kv(out, csv, "points", std::to_string(saved.curve.per_point.size()));
    print_kv(out, csv, "detection_limit", format_metric(saved.curve.detection_limit, csv));
    print_kv(out, csv, "sensitive_range_lo", format_metric(saved.curve.c_lo, csv));
    print_kv(out, csv, "sensitive_range_hi", format_metric(saved.curve.c_hi, csv));
    print_kv(out, csv, "max_repeating_error_pct",
             format_metric(saved.curve.max_repeating_error_pct, csv));
    print_kv(out, csv, "avg_repeating_error_pct",
             format_metric(saved.curve.avg_repeating_error_pct, csv));
    print_kv(out, csv, "sensitivity_per_step",
             format_metric(saved.curve.sensitivity_per_step, csv));
    print_kv(out, csv, "slope_per_decade", format_metric(saved.curve.slope, csv));
    print_kv(out, csv, "sensitivity_per_efold",
             format_metric(saved.curve.sensitivity_per_efold(), csv));
    print_kv(out, csv, "r_squared", format_metric(saved.curve.r_squared, csv));
    print_kv(out, csv, "database", args.out_path);

    for (const std::string& w : saved.curve.warnings)
        err << "warning: " << w << "\n";
    return kExitOk;
}

// --------------------------------------------------------------- estimate

struct EstimateArgs {
    std::string db_path;
    std::vector<std::string> images;
    std::string manifest_path;
    std::string roi_text;
    std::string approach_label;
    double spread = 0.0;
    std::string format = "human";
    double temp_window = 2.0;
    // context overrides
    std::optional<std::string> assay, phone, led_power;
    std::optional<double> temperature, exposure, iso, aperture;
};

int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
    CaptureContext context;
    std::optional<Roi> roi;
    std::optional<Approach> approach;

    if (!args.manifest_path.empty()) {
        const Manifest manifest = load_manifest(args.manifest_path);
        context = manifest.context;
        roi = manifest.roi;
        approach = manifest.approach;
    }
    if (args.assay) context.assay = *args.assay;
    if (args.phone) context.phone = *args.phone;
    if (args.led_power) context.led_power = *args.led_power;
    if (args.temperature) context.temperature_c = *args.temperature;
    if (args.exposure) context.exposure_s = *args.exposure;
    if (args.iso) context.iso = *args.iso;
    if (args.aperture) context.aperture_f = *args.aperture;
    if (!args.roi_text.empty())
        roi = parse_roi(args.roi_text);
    if (!args.approach_label.empty())
        approach = Approach::from_label(args.approach_label);
    if (!approach)
        throw ValidationError("no approach given: pass --approach or --manifest");
    validate(context);

    const CalibrationDatabase db = load_database(args.db_path);

    std::vector<fs::path> paths(args.images.begin(), args.images.end());
    const StackReading stack_reading = analyze_stack(paths, roi);
    if (stack_reading.any_jpeg)
        err << "warning: JPEG input; lossy compression may bias channel statistics\n";

    Reading reading;
    reading.approach = *approach;
    reading.value = reading_value(stack_reading.stats, *approach);
    reading.context = context;
    reading.saturation = stack_reading.saturation;

    MatchOptions match_options;
    match_options.temperature_window_c = args.temp_window;
    const EstimateResult result =
        estimate_concentration(db, context, reading, args.spread, match_options);

    const bool csv = args.format == "csv";
    if (csv)
        out << "metric,value\n";
    print_kv(out, csv, "record_id", result.record_id);
    print_kv(out, csv, "reading", format_metric(reading.value, csv));
    print_kv(out, csv, "value", format_metric(result.estimate.value, csv));
    print_kv(out, csv, "lower", format_metric(result.estimate.lower, csv));
    print_kv(out, csv, "upper", format_metric(result.estimate.upper, csv));
    print_kv(out, csv, "measuring_error_pct",
             format_metric(result.estimate.measuring_error_pct, csv));
    print_kv(out, csv, "unit", result.estimate.unit);

    for (const std::string& w : result.warnings)
        err << "warning: " << w << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- report

struct ReportArgs {
    std::string db_path;
    std::string record_id;
    std::string external_csv;
    std::string format = "csv";
};

std::vector<std::pair<double, double>> read_external_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open external CSV: " + path.string());

    std::vector<std::pair<double, double>> points;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string c_text, r_text;
        if (!std::getline(ls, c_text, ',') || !std::getline(ls, r_text, ','))
            throw ValidationError("external CSV row " + std::to_string(row) +
                                  ": expected \"concentration,reading\"");
        if (row == 1 && c_text == "concentration")
            continue; // optional header
        try {
            std::size_t used = 0;
            const double c = std::stod(c_text, &used);
            if (used != c_text.size())
                throw std::invalid_argument(c_text);
            used = 0;
            const double r = std::stod(r_text, &used);
            if (used != r_text.size())
                throw std::invalid_argument(r_text);
            points.emplace_back(c, r);
        } catch (const std::exception&) {
            throw ValidationError("external CSV row " + std::to_string(row) +
                                  ": non-numeric value in \"" + line + "\"");
        }
    }
    if (points.size() < 2)
        throw ValidationError("external CSV needs at least 2 data rows");
    return points;
}

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream&) {
    const CalibrationDatabase db = load_database(args.db_path);
    const CalibrationRecord* record = find_record(db, args.record_id);
    if (!record)
        throw NoMatchError("no record with id \"" + args.record_id + "\" in " + args.db_path);

    std::vector<std::pair<double, double>> own;
    own.reserve(record->curve.per_point.size());
    for (const CurvePoint& p : record->curve.per_point)
        own.emplace_back(p.concentration, p.mean_reading);
    const auto own_normalized = normalize_curve(own);

    std::vector<std::pair<double, double>> external_normalized;
    if (!args.external_csv.empty())
        external_normalized = normalize_curve(read_external_csv(args.external_csv));

    const bool csv = args.format != "human";
    if (csv) {
        out << "concentration,reading_normalized,source\n";
        for (const auto& [c, r] : own_normalized)
            out << format_double(c) << "," << format_double(r) << "," << record->id << "\n";
        for (const auto& [c, r] : external_normalized)
            out << format_double(c) << "," << format_double(r) << ",external\n";
    } else {
        out << "normalized response curve for " << record->id << " (" << record->curve.unit
            << ")\n";
        for (const auto& [c, r] : own_normalized)
            out << "  " << format_double(c) << "  " << format_fixed(r, 4) << "\n";
        if (!external_normalized.empty()) {
            out << "external curve\n";
            for (const auto& [c, r] : external_normalized)
                out << "  " << format_double(c) << "  " << format_fixed(r, 4) << "\n";
        }
    }
    return kExitOk;
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
    std::string out_dir;
    std::uint64_t seed = 0;
    double sigma = 1.0;
    int frames = 8;
    int groups = 3;
    int points = 6;
    double c_start = 1e-8;
    double dilution_factor = 10.0;
    double beta = 12.0;
    double base_r = 30.0, base_g = 40.0, base_b = 80.0;
    std::optional<double> c_lo, c_hi;
    double downturn_slope = 0.0;
    int width = 64, height = 48;
    std::string roi_text = "16,12,32,24";
    std::string approach_label = "grey";
    std::string unit = "mol/L";
    std::string assay = "synthetic";
    std::string phone = "synth-phone";
    std::string led_power = "50";
    double exposure = 0.1;
    double iso = 100.0;
    double aperture = 1.8;
    double temperature = 22.0;
};

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream&) {
    if (args.points < 1)
        throw ValidationError("need at least 1 concentration point");
    if (!(args.c_start > 0.0))
        throw ValidationError("start concentration must be positive");
    if (!(args.dilution_factor > 1.0))
        throw ValidationError("dilution factor must be greater than 1");

    std::vector<double> concentrations;
    double c = args.c_start;
    for (int i = 0; i < args.points; ++i) {
        concentrations.push_back(c);
        c *= args.dilution_factor;
    }

    SyntheticModel model;
    model.base_r = args.base_r;
    model.base_g = args.base_g;
    model.base_b = args.base_b;
    model.beta = args.beta;
    model.c_lo = args.c_lo.value_or(concentrations.front());
    model.c_hi = args.c_hi.value_or(concentrations.back());
    model.downturn_slope = args.downturn_slope;
    model.noise_sigma = args.sigma;
    model.seed = args.seed;
    model.reference_exposure_s = args.exposure;
    model.reference_iso = args.iso;

    CaptureContext context;
    context.assay = args.assay;
    context.temperature_c = args.temperature;
    context.phone = args.phone;
    context.led_power = args.led_power;
    context.exposure_s = args.exposure;
    context.iso = args.iso;
    context.aperture_f = args.aperture;

    DatasetOptions options;
    options.frames_per_group = args.frames;
    options.replicate_groups = args.groups;
    options.image_width = args.width;
    options.image_height = args.height;
    options.roi = parse_roi(args.roi_text);
    options.approach = Approach::from_label(args.approach_label);
    options.unit = args.unit;

    const fs::path manifest_path =
        generate_dataset(model, concentrations, context, options, args.out_dir);
    out << manifest_path.string() << "\n";
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"assaylens: concentration estimation from cuvette photographs"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Average a frame stack and print ROI color statistics");
    analyze->add_option("images", analyze_args.images, "image files forming one frame stack")
        ->required();
    analyze->add_option("--roi", analyze_args.roi_text, "region of interest as x,y,w,h");
    analyze->add_option("--approach", analyze_args.approach_label,
                        "reading approach: grey or ratio:<c>/<c>");
    analyze->add_option("--format", analyze_args.format, "output format: human or csv")
        ->check(CLI::IsMember({"human", "csv"}));

    CalibrateArgs calibrate_args;
    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "Fit a calibration curve from a manifest and store it");
    calibrate->add_option("--manifest", calibrate_args.manifest_path, "manifest JSON file")
        ->required();
    calibrate
        ->add_option("--dilution-factor", calibrate_args.dilution_factor,
                     "dilution step between consecutive concentrations")
        ->required();
    calibrate->add_option("--out", calibrate_args.out_path, "database file to write")->required();
    calibrate->add_option("--db", calibrate_args.base_db_path,
                          "existing database to extend (defaults to --out when present)");
    calibrate->add_option("--id", calibrate_args.id, "record id (default: derived from context)");
    calibrate->add_option("--created-at", calibrate_args.created_at,
                          "record timestamp, ISO-8601 (default: now; pin for reproducible runs)");
    calibrate->add_option("--format", calibrate_args.format, "output format: human or csv")
        ->check(CLI::IsMember({"human", "csv"}));
    calibrate->add_option("--r2-min", calibrate_args.r2_min, "minimum fit R^2 gate");
    calibrate->add_option("--plateau-theta", calibrate_args.plateau_theta,
                          "plateau slope threshold for the detection limit");
    calibrate->add_option("--spacing-tol", calibrate_args.spacing_tol,
                          "relative tolerance for the geometric spacing check");

    EstimateArgs estimate_args;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "Map a reading from images to a concentration via the database");
    estimate->add_option("--db", estimate_args.db_path, "calibration database")->required();
    estimate->add_option("images", estimate_args.images, "image files forming one frame stack")
        ->required();
    estimate->add_option("--manifest", estimate_args.manifest_path,
                         "manifest providing context/roi/approach defaults");
    estimate->add_option("--roi", estimate_args.roi_text, "region of interest as x,y,w,h");
    estimate->add_option("--approach", estimate_args.approach_label,
                         "reading approach: grey or ratio:<c>/<c>");
    estimate->add_option("--spread", estimate_args.spread,
                         "reading spread (+/-) mapped to concentration bounds");
    estimate->add_option("--format", estimate_args.format, "output format: human or csv")
        ->check(CLI::IsMember({"human", "csv"}));
    estimate->add_option("--temp-window", estimate_args.temp_window,
                         "temperature matching window in degrees C");
    estimate->add_option("--assay", estimate_args.assay, "assay label");
    estimate->add_option("--temperature", estimate_args.temperature, "temperature in degrees C");
    estimate->add_option("--phone", estimate_args.phone, "phone label");
    estimate->add_option("--led-power", estimate_args.led_power, "LED power label");
    estimate->add_option("--exposure", estimate_args.exposure, "exposure time in seconds");
    estimate->add_option("--iso", estimate_args.iso, "ISO setting");
    estimate->add_option("--aperture", estimate_args.aperture, "aperture f-number");

    ReportArgs report_args;
    CLI::App* report = app.add_subcommand(
        "report", "Emit normalized response curves for side-by-side plotting");
    report->add_option("--db", report_args.db_path, "calibration database")->required();
    report->add_option("--record", report_args.record_id, "record id")->required();
    report->add_option("--external", report_args.external_csv,
                       "external instrument CSV with concentration,reading columns");
    report->add_option("--format", report_args.format, "output format: human or csv")
        ->check(CLI::IsMember({"human", "csv"}));

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a synthetic dilution-series dataset with known ground truth");
    synth->add_option("--out", synth_args.out_dir, "output directory")->required();
    synth->add_option("--seed", synth_args.seed, "random seed");
    synth->add_option("--sigma", synth_args.sigma, "pixel noise sigma in grey levels");
    synth->add_option("--frames", synth_args.frames, "frames per replicate group");
    synth->add_option("--groups", synth_args.groups, "replicate groups per concentration");
    synth->add_option("--points", synth_args.points, "number of concentrations");
    synth->add_option("--c-start", synth_args.c_start, "lowest concentration");
    synth->add_option("--dilution-factor", synth_args.dilution_factor, "step between points");
    synth->add_option("--beta", synth_args.beta, "grey response slope per decade");
    synth->add_option("--base-r", synth_args.base_r, "red plateau level");
    synth->add_option("--base-g", synth_args.base_g, "green plateau level");
    synth->add_option("--base-b", synth_args.base_b, "blue plateau level");
    synth->add_option("--c-lo", synth_args.c_lo, "lower edge of the linear band");
    synth->add_option("--c-hi", synth_args.c_hi, "upper edge of the linear band");
    synth->add_option("--downturn-slope", synth_args.downturn_slope,
                      "response drop per decade above c-hi (inner-filter shape)");
    synth->add_option("--width", synth_args.width, "image width");
    synth->add_option("--height", synth_args.height, "image height");
    synth->add_option("--roi", synth_args.roi_text, "manifest ROI as x,y,w,h");
    synth->add_option("--approach", synth_args.approach_label, "manifest approach");
    synth->add_option("--unit", synth_args.unit, "concentration unit label");
    synth->add_option("--assay", synth_args.assay, "assay label");
    synth->add_option("--phone", synth_args.phone, "phone label");
    synth->add_option("--led-power", synth_args.led_power, "LED power label");
    synth->add_option("--exposure", synth_args.exposure, "exposure time in seconds");
    synth->add_option("--iso", synth_args.iso, "ISO setting");
    synth->add_option("--aperture", synth_args.aperture, "aperture f-number");
    synth->add_option("--temperature", synth_args.temperature, "temperature in degrees C");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitValidation;
    }

    try {
        if (analyze->parsed())
            return cmd_analyze(analyze_args, out, err);
        if (calibrate->parsed())
            return cmd_calibrate(calibrate_args, out, err);
        if (estimate->parsed())
            return cmd_estimate(estimate_args, out, err);
        if (report->parsed())
            return cmd_report(report_args, out, err);
        if (synth->parsed())
            return cmd_synth(synth_args, out, err);
        err << "error: no subcommand given\n";
        return kExitValidation;
    } catch (const NoMatchError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNoMatch;
    } catch (const OutOfRangeError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNoMatch;
    } catch (const NoSensitiveRangeError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNoMatch;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run(args, out, err);
}

} // namespace assaylens::cli
