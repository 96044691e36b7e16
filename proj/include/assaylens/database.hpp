#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "assaylens/calibration.hpp"

namespace assaylens {

// One calibrated assay: the fitted curve plus the raw series it came from,
// keyed by the capture context it is valid for.
struct CalibrationRecord {
    std::string id;
    CaptureContext context;
    CalibrationCurve curve;
    MeasurementSeries series;
    std::string created_at; // ISO-8601 UTC, e.g. "2026-08-08T12:00:00Z"
};

void validate(const CalibrationRecord& record);

inline constexpr int kDatabaseFormatVersion = 1;

struct CalibrationDatabase {
    int format_version = kDatabaseFormatVersion;
    std::vector<CalibrationRecord> records;
};

// Returns a copy of the database with the record appended. Duplicate ids are
// rejected and the input database is left untouched.
CalibrationDatabase add_record(CalibrationDatabase db, CalibrationRecord record);

const CalibrationRecord* find_record(const CalibrationDatabase& db, const std::string& id);

struct MatchOptions {
    double temperature_window_c = 2.0;
};

// Records usable for a query: assay, phone, LED power and approach must
// match exactly and the temperature must fall within the window. Exposure
// time and ISO never exclude a record: grey-scale readings are bridged by
// exposure normalization and channel ratios cancel the exposure factor.
// Ranked by |temperature delta| ascending, then created_at descending.
std::vector<const CalibrationRecord*> match_context(const CalibrationDatabase& db,
                                                    const CaptureContext& query,
                                                    const Approach& approach,
                                                    const MatchOptions& options = {});

struct EstimateResult {
    ConcentrationEstimate estimate;
    std::string record_id;
    double normalization_factor = 1.0; // applied to the reading before inversion
    std::vector<std::string> warnings;
};

// Reverse mapping: pick the best-ranked record for the query, normalize the
// reading to the record's exposure settings when needed, and map it through
// the inverse calibration curve with its error interval.
EstimateResult estimate_concentration(const CalibrationDatabase& db, const CaptureContext& query,
                                      const Reading& reading, double reading_spread,
                                      const MatchOptions& options = {});

// JSON file with a format_version field; numbers keep full round-trip
// precision. Writing replaces the file atomically (temp file + rename).
void save_database(const CalibrationDatabase& db, const std::filesystem::path& path);
CalibrationDatabase load_database(const std::filesystem::path& path);

} // namespace assaylens
