#include "assaylens/database.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace assaylens {

using nlohmann::json;

void validate(const CalibrationRecord& record) {
    if (record.id.empty())
        throw ValidationError("calibration record: id must not be empty");
    if (record.curve.unit != record.series.unit)
        throw ValidationError("calibration record \"" + record.id +
                              "\": curve unit \"" + record.curve.unit +
                              "\" differs from series unit \"" + record.series.unit + "\"");
}

CalibrationDatabase add_record(CalibrationDatabase db, CalibrationRecord record) {
    validate(record);
    for (const CalibrationRecord& existing : db.records)
        if (existing.id == record.id)
            throw ValidationError("duplicate record id: \"" + record.id + "\"");
    db.records.push_back(std::move(record));
    return db;
}

const CalibrationRecord* find_record(const CalibrationDatabase& db, const std::string& id) {
    for (const CalibrationRecord& record : db.records)
        if (record.id == id)
            return &record;
    return nullptr;
}

std::vector<const CalibrationRecord*> match_context(const CalibrationDatabase& db,
                                                    const CaptureContext& query,
                                                    const Approach& approach,
                                                    const MatchOptions& options) {
    std::vector<const CalibrationRecord*> matches;
    for (const CalibrationRecord& record : db.records) {
        if (record.context.assay != query.assay || record.context.phone != query.phone ||
            record.context.led_power != query.led_power)
            continue;
        if (record.curve.approach != approach)
            continue;
        if (std::abs(record.context.temperature_c - query.temperature_c) >
            options.temperature_window_c)
            continue;
        matches.push_back(&record);
    }
    std::stable_sort(matches.begin(), matches.end(),
                     [&](const CalibrationRecord* a, const CalibrationRecord* b) {
                         const double da = std::abs(a->context.temperature_c - query.temperature_c);
                         const double db_ = std::abs(b->context.temperature_c - query.temperature_c);
                         if (da != db_)
                             return da < db_;
                         return a->created_at > b->created_at;
                     });
    return matches;
}

EstimateResult estimate_concentration(const CalibrationDatabase& db, const CaptureContext& query,
                                      const Reading& reading, double reading_spread,
                                      const MatchOptions& options) {
    const auto matches = match_context(db, query, reading.approach, options);
    if (matches.empty())
        throw NoMatchError("no calibration record matches assay \"" + query.assay +
                           "\", phone \"" + query.phone + "\", LED \"" + query.led_power +
                           "\", approach " + reading.approach.label() + ", temperature " +
                           std::to_string(query.temperature_c) + " C");
    const CalibrationRecord& best = *matches.front();

    if (reading.saturation > kSaturationLimit)
        throw ValidationError("reading is saturated (" +
                              std::to_string(reading.saturation * 100) +
                              "% of pixels clipped); refusing to estimate");

    EstimateResult result;
    result.record_id = best.id;

    double value = reading.value;
    double spread = reading_spread;
    const bool grey = reading.approach.kind == Approach::Kind::GreyScale;
    const bool settings_differ =
        reading.context.exposure_s != best.context.exposure_s ||
        reading.context.iso != best.context.iso;
    if (grey && settings_differ) {
        const ExposureReference ref{best.context.exposure_s, best.context.iso};
        const Reading normalized = exposure_normalize(reading, ref);
        result.normalization_factor = (ref.exposure_s * ref.iso) /
                                      (reading.context.exposure_s * reading.context.iso);
        value = normalized.value;
        spread = reading_spread * result.normalization_factor;
        result.warnings.push_back("reading normalized from exposure " +
                                  std::to_string(reading.context.exposure_s) + "s/ISO " +
                                  std::to_string(reading.context.iso) + " to record settings");
    }
    if (grey && reading.context.aperture_f != best.context.aperture_f)
        result.warnings.push_back(
            "aperture differs from the calibration record (" +
            std::to_string(reading.context.aperture_f) + " vs " +
            std::to_string(best.context.aperture_f) +
            "); grey normalization assumes a fixed aperture");

    result.estimate = measuring_error(best.curve, value, std::abs(spread));
    return result;
}

namespace {

std::string describe_type(const json& j) {
    return j.type_name();
}

const json& require_field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object())
        throw ValidationError("malformed database: " + path + " should be an object, got " +
                              describe_type(obj));
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError("malformed database: missing field " + path + "." + key);
    return *it;
}

double require_number(const json& obj, const char* key, const std::string& path) {
    const json& v = require_field(obj, key, path);
    if (!v.is_number())
        throw ValidationError("malformed database: " + path + "." + key +
                              " should be a number, got " + describe_type(v));
    return v.get<double>();
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
    const json& v = require_field(obj, key, path);
    if (!v.is_string())
        throw ValidationError("malformed database: " + path + "." + key +
                              " should be a string, got " + describe_type(v));
    return v.get<std::string>();
}

const json& require_array(const json& obj, const char* key, const std::string& path) {
    const json& v = require_field(obj, key, path);
    if (!v.is_array())
        throw ValidationError("malformed database: " + path + "." + key +
                              " should be an array, got " + describe_type(v));
    return v;
}

json context_to_json(const CaptureContext& c) {
    json j{{"assay", c.assay},
           {"temperature_c", c.temperature_c},
           {"phone", c.phone},
           {"led_power", c.led_power},
           {"exposure_s", c.exposure_s},
           {"iso", c.iso},
           {"aperture_f", c.aperture_f}};
    if (c.calibration_constant)
        j["calibration_constant"] = *c.calibration_constant;
    else
        j["calibration_constant"] = nullptr;
    return j;
}

CaptureContext context_from_json(const json& j, const std::string& path) {
    CaptureContext c;
    c.assay = require_string(j, "assay", path);
    c.temperature_c = require_number(j, "temperature_c", path);
    c.phone = require_string(j, "phone", path);
    c.led_power = require_string(j, "led_power", path);
    c.exposure_s = require_number(j, "exposure_s", path);
    c.iso = require_number(j, "iso", path);
    c.aperture_f = require_number(j, "aperture_f", path);
    const json& kc = require_field(j, "calibration_constant", path);
    if (!kc.is_null()) {
        if (!kc.is_number())
            throw ValidationError("malformed database: " + path +
                                  ".calibration_constant should be a number or null");
        c.calibration_constant = kc.get<double>();
    }
    return c;
}

json curve_to_json(const CalibrationCurve& c) {
    json points = json::array();
    for (const CurvePoint& p : c.per_point)
        points.push_back({{"concentration", p.concentration},
                          {"mean_reading", p.mean_reading},
                          {"repeating_error_pct", p.repeating_error_pct}});
    return json{{"approach", c.approach.label()},
                {"unit", c.unit},
                {"slope_per_decade", c.slope},
                {"intercept", c.intercept},
                {"r_squared", c.r_squared},
                {"c_lo", c.c_lo},
                {"c_hi", c.c_hi},
                {"reading_lo", c.reading_lo},
                {"reading_hi", c.reading_hi},
                {"detection_limit", c.detection_limit},
                {"dilution_factor", c.dilution_factor},
                {"sensitivity_per_step", c.sensitivity_per_step},
                {"monotone_direction",
                 c.monotone_direction == MonotoneDirection::Increasing ? "increasing"
                                                                       : "decreasing"},
                {"per_point", points},
                {"max_repeating_error_pct", c.max_repeating_error_pct},
                {"avg_repeating_error_pct", c.avg_repeating_error_pct},
                {"max_repeating_error_full_pct", c.max_repeating_error_full_pct},
                {"avg_repeating_error_full_pct", c.avg_repeating_error_full_pct},
                {"warnings", c.warnings}};
}

CalibrationCurve curve_from_json(const json& j, const std::string& path) {
    CalibrationCurve c;
    c.approach = Approach::from_label(require_string(j, "approach", path));
    c.unit = require_string(j, "unit", path);
    c.slope = require_number(j, "slope_per_decade", path);
    c.intercept = require_number(j, "intercept", path);
    c.r_squared = require_number(j, "r_squared", path);
    c.c_lo = require_number(j, "c_lo", path);
    c.c_hi = require_number(j, "c_hi", path);
    c.reading_lo = require_number(j, "reading_lo", path);
    c.reading_hi = require_number(j, "reading_hi", path);
    c.detection_limit = require_number(j, "detection_limit", path);
    c.dilution_factor = require_number(j, "dilution_factor", path);
    c.sensitivity_per_step = require_number(j, "sensitivity_per_step", path);
    const std::string direction = require_string(j, "monotone_direction", path);
    if (direction == "increasing")
        c.monotone_direction = MonotoneDirection::Increasing;
    else if (direction == "decreasing")
        c.monotone_direction = MonotoneDirection::Decreasing;
    else
        throw ValidationError("malformed database: " + path +
                              ".monotone_direction has unknown value \"" + direction + "\"");
    const json& points = require_array(j, "per_point", path);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string ppath = path + ".per_point[" + std::to_string(i) + "]";
        CurvePoint p;
        p.concentration = require_number(points[i], "concentration", ppath);
        p.mean_reading = require_number(points[i], "mean_reading", ppath);
        p.repeating_error_pct = require_number(points[i], "repeating_error_pct", ppath);
        c.per_point.push_back(p);
    }
    c.max_repeating_error_pct = require_number(j, "max_repeating_error_pct", path);
    c.avg_repeating_error_pct = require_number(j, "avg_repeating_error_pct", path);
    c.max_repeating_error_full_pct = require_number(j, "max_repeating_error_full_pct", path);
    c.avg_repeating_error_full_pct = require_number(j, "avg_repeating_error_full_pct", path);
    const json& warnings = require_array(j, "warnings", path);
    for (const json& w : warnings) {
        if (!w.is_string())
            throw ValidationError("malformed database: " + path +
                                  ".warnings entries should be strings");
        c.warnings.push_back(w.get<std::string>());
    }
    return c;
}

json series_to_json(const MeasurementSeries& s) {
    json points = json::array();
    for (const SeriesPoint& p : s.points)
        points.push_back({{"concentration", p.concentration}, {"replicates", p.replicates}});
    return json{{"unit", s.unit},
                {"approach", s.approach.label()},
                {"context", context_to_json(s.context)},
                {"points", points}};
}

MeasurementSeries series_from_json(const json& j, const std::string& path) {
    MeasurementSeries s;
    s.unit = require_string(j, "unit", path);
    s.approach = Approach::from_label(require_string(j, "approach", path));
    s.context = context_from_json(require_field(j, "context", path), path + ".context");
    const json& points = require_array(j, "points", path);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string ppath = path + ".points[" + std::to_string(i) + "]";
        SeriesPoint p;
        p.concentration = require_number(points[i], "concentration", ppath);
        const json& reps = require_array(points[i], "replicates", ppath);
        for (const json& r : reps) {
            if (!r.is_number())
                throw ValidationError("malformed database: " + ppath +
                                      ".replicates entries should be numbers");
            p.replicates.push_back(r.get<double>());
        }
        s.points.push_back(std::move(p));
    }
    return s;
}

} // namespace

void save_database(const CalibrationDatabase& db, const std::filesystem::path& path) {
    if (db.format_version != kDatabaseFormatVersion)
        throw ValidationError("unsupported database format_version " +
                              std::to_string(db.format_version));
    json records = json::array();
    for (const CalibrationRecord& record : db.records) {
        validate(record);
        records.push_back({{"id", record.id},
                           {"created_at", record.created_at},
                           {"context", context_to_json(record.context)},
                           {"curve", curve_to_json(record.curve)},
                           {"series", series_to_json(record.series)}});
    }
    const json root{{"format_version", db.format_version}, {"records", records}};

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open for writing: " + tmp.string());
        out << root.dump(2) << "\n";
        if (!out)
            throw IoError("write failure: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

CalibrationDatabase load_database(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open database: " + path.string());

    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed database " + path.string() + " at byte " +
                              std::to_string(e.byte) + ": " + e.what());
    }

    if (!root.is_object())
        throw ValidationError("malformed database: top level should be an object");
    const json& version = require_field(root, "format_version", "$");
    if (!version.is_number_integer())
        throw ValidationError("malformed database: format_version should be an integer");
    const int file_version = version.get<int>();
    if (file_version != kDatabaseFormatVersion)
        throw ValidationError("unsupported database format_version " +
                              std::to_string(file_version) + " (supported: " +
                              std::to_string(kDatabaseFormatVersion) + ")");

    CalibrationDatabase db;
    db.format_version = file_version;
    const json& records = require_array(root, "records", "$");
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::string path_i = "records[" + std::to_string(i) + "]";
        CalibrationRecord record;
        record.id = require_string(records[i], "id", path_i);
        record.created_at = require_string(records[i], "created_at", path_i);
        record.context =
            context_from_json(require_field(records[i], "context", path_i), path_i + ".context");
        record.curve =
            curve_from_json(require_field(records[i], "curve", path_i), path_i + ".curve");
        record.series =
            series_from_json(require_field(records[i], "series", path_i), path_i + ".series");
        validate(record);
        for (const CalibrationRecord& existing : db.records)
            if (existing.id == record.id)
                throw ValidationError("malformed database: duplicate record id \"" + record.id +
                                      "\" at " + path_i);
        db.records.push_back(std::move(record));
    }
    return db;
}

} // namespace assaylens
