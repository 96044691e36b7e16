#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "assaylens/database.hpp"

#include "support/testutil.hpp"

using namespace assaylens;

namespace {

CaptureContext base_context() {
    CaptureContext ctx;
    ctx.assay = "fluorescein";
    ctx.temperature_c = 22.0;
    ctx.phone = "phone-a";
    ctx.led_power = "50";
    ctx.exposure_s = 0.1;
    ctx.iso = 100.0;
    ctx.aperture_f = 1.8;
    return ctx;
}

// Exact log-linear grey series so the fitted curve equals the model.
MeasurementSeries exact_series(const CaptureContext& ctx, double slope = 15.0,
                               double intercept = 200.0) {
    MeasurementSeries series;
    series.unit = "mol/L";
    series.approach = Approach::grey();
    series.context = ctx;
    double c = 1e-8;
    for (int i = 0; i < 5; ++i) {
        SeriesPoint p;
        p.concentration = c;
        const double mean = intercept + slope * std::log10(c);
        p.replicates = {mean - 0.5, mean + 0.5};
        series.points.push_back(std::move(p));
        c *= 10.0;
    }
    return series;
}

CalibrationRecord make_record(const std::string& id, const CaptureContext& ctx,
                              const std::string& created_at = "2026-08-01T00:00:00Z") {
    CalibrationRecord record;
    record.id = id;
    record.context = ctx;
    record.series = exact_series(ctx);
    record.curve = build_curve(record.series, 10.0);
    record.created_at = created_at;
    return record;
}

Reading grey_reading(double value, const CaptureContext& ctx, double saturation = 0.0) {
    Reading r;
    r.approach = Approach::grey();
    r.value = value;
    r.context = ctx;
    r.saturation = saturation;
    return r;
}

} // namespace

TEST_CASE("add_record: append, fetch, duplicate rejection") {
    CalibrationDatabase db;
    db = add_record(std::move(db), make_record("rec-1", base_context()));
    CHECK(db.records.size() == 1);

    const CalibrationRecord* fetched = find_record(db, "rec-1");
    REQUIRE(fetched != nullptr);
    CHECK(fetched->context.assay == "fluorescein");
    CHECK(fetched->curve.slope == doctest::Approx(15.0).epsilon(1e-9));

    CalibrationDatabase before = db;
    CHECK_THROWS_AS(add_record(db, make_record("rec-1", base_context())), ValidationError);
    CHECK(db.records.size() == before.records.size());
}

TEST_CASE("record validation: unit mismatch between curve and series") {
    CalibrationRecord record = make_record("rec-x", base_context());
    record.curve.unit = "mg/L";
    CHECK_THROWS_AS(validate(record), ValidationError);
}

TEST_CASE("match_context: exact match ranks first") {
    CalibrationDatabase db;
    CaptureContext warm = base_context();
    warm.temperature_c = 23.5;
    db = add_record(std::move(db), make_record("warm", warm));
    db = add_record(std::move(db), make_record("exact", base_context()));

    auto matches = match_context(db, base_context(), Approach::grey());
    REQUIRE(matches.size() == 2);
    CHECK(matches[0]->id == "exact");
    CHECK(matches[1]->id == "warm");
}

TEST_CASE("match_context: temperature window of +/- 2 C") {
    CalibrationDatabase db;
    CaptureContext t21 = base_context();
    t21.temperature_c = 21.0;
    CaptureContext t25 = base_context();
    t25.temperature_c = 25.0;
    db = add_record(std::move(db), make_record("t21", t21));
    db = add_record(std::move(db), make_record("t25", t25));

    CaptureContext query = base_context();
    query.temperature_c = 22.0;
    auto matches = match_context(db, query, Approach::grey());
    REQUIRE(matches.size() == 1); // 25 C exceeds the +/- 2 C window
    CHECK(matches[0]->id == "t21");
}

TEST_CASE("match_context: assay, phone, LED and approach are exact filters") {
    CalibrationDatabase db;
    db = add_record(std::move(db), make_record("rec", base_context()));

    CaptureContext other_assay = base_context();
    other_assay.assay = "milk";
    CHECK(match_context(db, other_assay, Approach::grey()).empty());

    CaptureContext other_phone = base_context();
    other_phone.phone = "phone-b";
    CHECK(match_context(db, other_phone, Approach::grey()).empty());

    CHECK(match_context(db, base_context(), Approach::ratio()).empty());
}

TEST_CASE("match_context: exposure and ISO differences do not exclude records") {
    CalibrationDatabase db;
    db = add_record(std::move(db), make_record("rec", base_context()));

    CaptureContext query = base_context();
    query.exposure_s = 0.2; // bridged by normalization at estimate time
    query.iso = 400.0;
    CHECK(match_context(db, query, Approach::grey()).size() == 1);
}

TEST_CASE("match_context: created_at breaks temperature ties, newest first") {
    CalibrationDatabase db;
    db = add_record(std::move(db),
                    make_record("older", base_context(), "2026-01-01T00:00:00Z"));
    db = add_record(std::move(db),
                    make_record("newer", base_context(), "2026-06-01T00:00:00Z"));

    auto matches = match_context(db, base_context(), Approach::grey());
    REQUIRE(matches.size() == 2);
    CHECK(matches[0]->id == "newer");

    // insertion order must not matter
    CalibrationDatabase reversed;
    reversed = add_record(std::move(reversed),
                          make_record("newer", base_context(), "2026-06-01T00:00:00Z"));
    reversed = add_record(std::move(reversed),
                          make_record("older", base_context(), "2026-01-01T00:00:00Z"));
    auto again = match_context(reversed, base_context(), Approach::grey());
    CHECK(again[0]->id == "newer");
}

TEST_CASE("estimate_concentration: forward-model reading recovers the concentration") {
    CalibrationDatabase db;
    db = add_record(std::move(db), make_record("rec", base_context()));
    const CalibrationCurve& curve = db.records.front().curve;

    const double truth = 3e-7;
    Reading reading = grey_reading(curve_reading_at(curve, truth), base_context());
    EstimateResult result = estimate_concentration(db, base_context(), reading, 0.0);
    CHECK(result.record_id == "rec");
    CHECK(result.estimate.value == doctest::Approx(truth).epsilon(1e-6));
    CHECK(result.normalization_factor == 1.0);
}

TEST_CASE("estimate_concentration: grey reading at 2x exposure matches the 1x estimate") {
    CalibrationDatabase db;
    db = add_record(std::move(db), make_record("rec", base_context()));
    const CalibrationCurve& curve = db.records.front().curve;

    const double truth = 3e-7;
    const double value_1x = curve_reading_at(curve, truth);

    Reading at_1x = grey_reading(value_1x, base_context());
    CaptureContext doubled = base_context();
    doubled.exposure_s = 0.2;
    Reading at_2x = grey_reading(2.0 * value_1x, doubled); // sensor sees twice the light

    EstimateResult est_1x = estimate_concentration(db, base_context(), at_1x, 0.0);
    EstimateResult est_2x = estimate_concentration(db, doubled, at_2x, 0.0);
    CHECK(est_2x.estimate.value == doctest::Approx(est_1x.estimate.value).epsilon(1e-6));
    CHECK(est_2x.normalization_factor == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(!est_2x.warnings.empty());
}

TEST_CASE("estimate_concentration: spread scales with the normalization factor") {
    CalibrationDatabase db;
    db = add_record(std::move(db), make_record("rec", base_context()));
    const CalibrationCurve& curve = db.records.front().curve;

    const double truth = 3e-7;
    const double value_1x = curve_reading_at(curve, truth);
    CaptureContext doubled = base_context();
    doubled.exposure_s = 0.2;

    EstimateResult est_1x =
        estimate_concentration(db, base_context(), grey_reading(value_1x, base_context()), 1.0);
    EstimateResult est_2x =
        estimate_concentration(db, doubled, grey_reading(2.0 * value_1x, doubled), 2.0);
    CHECK(est_2x.estimate.lower == doctest::Approx(est_1x.estimate.lower).epsilon(1e-9));
    CHECK(est_2x.estimate.upper == doctest::Approx(est_1x.estimate.upper).epsilon(1e-9));
    CHECK(est_2x.estimate.measuring_error_pct ==
          doctest::Approx(est_1x.estimate.measuring_error_pct).epsilon(1e-9));
}

TEST_CASE("estimate_concentration: differing aperture is flagged for grey readings") {
    CalibrationDatabase db;
    db = add_record(std::move(db), make_record("rec", base_context()));
    const CalibrationCurve& curve = db.records.front().curve;

    CaptureContext wide = base_context();
    wide.aperture_f = 1.4;
    Reading reading = grey_reading(curve_reading_at(curve, 3e-7), wide);
    EstimateResult result = estimate_concentration(db, wide, reading, 0.0);
    bool flagged = false;
    for (const std::string& w : result.warnings)
        flagged = flagged || w.find("aperture") != std::string::npos;
    CHECK(flagged);
}

TEST_CASE("estimate_concentration: error paths") {
    CalibrationDatabase db;
    db = add_record(std::move(db), make_record("rec", base_context()));
    const CalibrationCurve& curve = db.records.front().curve;

    CaptureContext missing = base_context();
    missing.assay = "unknown-assay";
    CHECK_THROWS_AS(
        estimate_concentration(db, missing, grey_reading(100.0, missing), 0.0),
        NoMatchError);

    Reading above = grey_reading(curve.reading_hi + 10.0, base_context());
    CHECK_THROWS_AS(estimate_concentration(db, base_context(), above, 0.0), OutOfRangeError);

    Reading saturated = grey_reading(curve.reading_lo + 1.0, base_context(), 0.05);
    CHECK_THROWS_AS(estimate_concentration(db, base_context(), saturated, 0.0),
                    ValidationError);
}

TEST_CASE("save/load: empty database round-trips") {
    TempDir dir("db_empty");
    CalibrationDatabase db;
    save_database(db, dir.file("db.json"));
    CalibrationDatabase loaded = load_database(dir.file("db.json"));
    CHECK(loaded.format_version == kDatabaseFormatVersion);
    CHECK(loaded.records.empty());
}

namespace {

bool records_identical(const CalibrationRecord& a, const CalibrationRecord& b) {
    bool same = a.id == b.id && a.created_at == b.created_at && a.context == b.context;
    same = same && a.curve.approach == b.curve.approach && a.curve.unit == b.curve.unit &&
           a.curve.slope == b.curve.slope && a.curve.intercept == b.curve.intercept &&
           a.curve.r_squared == b.curve.r_squared && a.curve.c_lo == b.curve.c_lo &&
           a.curve.c_hi == b.curve.c_hi && a.curve.reading_lo == b.curve.reading_lo &&
           a.curve.reading_hi == b.curve.reading_hi &&
           a.curve.detection_limit == b.curve.detection_limit &&
           a.curve.dilution_factor == b.curve.dilution_factor &&
           a.curve.sensitivity_per_step == b.curve.sensitivity_per_step &&
           a.curve.monotone_direction == b.curve.monotone_direction &&
           a.curve.max_repeating_error_pct == b.curve.max_repeating_error_pct &&
           a.curve.avg_repeating_error_pct == b.curve.avg_repeating_error_pct &&
           a.curve.max_repeating_error_full_pct == b.curve.max_repeating_error_full_pct &&
           a.curve.avg_repeating_error_full_pct == b.curve.avg_repeating_error_full_pct &&
           a.curve.warnings == b.curve.warnings;
    if (!same || a.curve.per_point.size() != b.curve.per_point.size())
        return false;
    for (std::size_t i = 0; i < a.curve.per_point.size(); ++i) {
        const CurvePoint& pa = a.curve.per_point[i];
        const CurvePoint& pb = b.curve.per_point[i];
        if (pa.concentration != pb.concentration || pa.mean_reading != pb.mean_reading ||
            pa.repeating_error_pct != pb.repeating_error_pct)
            return false;
    }
    if (a.series.unit != b.series.unit || !(a.series.approach == b.series.approach) ||
        !(a.series.context == b.series.context) ||
        a.series.points.size() != b.series.points.size())
        return false;
    for (std::size_t i = 0; i < a.series.points.size(); ++i)
        if (a.series.points[i].concentration != b.series.points[i].concentration ||
            a.series.points[i].replicates != b.series.points[i].replicates)
            return false;
    return true;
}

// Record with awkward doubles in every numeric field, to stress the
// decimal round-trip.
CalibrationRecord random_record(TestRng& rng, const std::string& id) {
    auto awkward = [&rng] {
        const double mantissa = rng.uniform(-1.0, 1.0);
        const int exponent = rng.uniform_int(-200, 200);
        return mantissa * std::pow(10.0, exponent);
    };

    CalibrationRecord record = make_record(id, base_context());
    record.curve.slope = awkward();
    record.curve.intercept = awkward();
    record.curve.r_squared = rng.next_unit();
    record.curve.c_lo = std::abs(awkward());
    record.curve.c_hi = std::abs(awkward());
    record.curve.reading_lo = awkward();
    record.curve.reading_hi = awkward();
    record.curve.detection_limit = std::abs(awkward());
    record.curve.sensitivity_per_step = awkward();
    record.curve.max_repeating_error_pct = std::abs(awkward());
    record.curve.avg_repeating_error_pct = std::abs(awkward());
    for (CurvePoint& p : record.curve.per_point) {
        p.mean_reading = awkward();
        p.repeating_error_pct = std::abs(awkward());
    }
    for (SeriesPoint& p : record.series.points)
        for (double& r : p.replicates)
            r = awkward();
    record.context.temperature_c = rng.uniform(-40.0, 60.0);
    record.context.calibration_constant = awkward();
    record.curve.warnings = {"series spacing is not geometric", "JPEG source images"};
    return record;
}

} // namespace

TEST_CASE("save/load: multi-record database is bit-exact after a round-trip") {
    TempDir dir("db_roundtrip");
    TestRng rng(73);
    CalibrationDatabase db;
    for (int i = 0; i < 3; ++i)
        db = add_record(std::move(db), random_record(rng, "rec-" + std::to_string(i)));

    save_database(db, dir.file("db.json"));
    CalibrationDatabase loaded = load_database(dir.file("db.json"));
    REQUIRE(loaded.records.size() == db.records.size());
    for (std::size_t i = 0; i < db.records.size(); ++i)
        CHECK(records_identical(db.records[i], loaded.records[i]));

    // a second save must produce the same bytes
    save_database(loaded, dir.file("db2.json"));
    CHECK(read_text(dir.file("db.json")) == read_text(dir.file("db2.json")));
}

TEST_CASE("load: truncated file reports the byte offset") {
    TempDir dir("db_truncated");
    write_text(dir.file("bad.json"), R"({"format_version": 1, "rec)");
    try {
        load_database(dir.file("bad.json"));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("load: unsupported format_version is rejected") {
    TempDir dir("db_version");
    write_text(dir.file("v2.json"), R"({"format_version": 2, "records": []})");
    try {
        load_database(dir.file("v2.json"));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("format_version") != std::string::npos);
    }
}

TEST_CASE("load: field errors name the offending path") {
    TempDir dir("db_field");
    write_text(dir.file("bad.json"),
               R"({"format_version": 1, "records": [{"id": 5}]})");
    try {
        load_database(dir.file("bad.json"));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("records[0].id") != std::string::npos);
    }
}

TEST_CASE("load: missing file is an IoError") {
    CHECK_THROWS_AS(load_database("/does/not/exist/db.json"), IoError);
}

TEST_CASE("load: any truncation of a valid file fails with a diagnostic") {
    TempDir dir("db_truncation_sweep");
    CalibrationDatabase db;
    db = add_record(std::move(db), make_record("rec-a", base_context()));
    save_database(db, dir.file("db.json"));
    const std::string full = read_text(dir.file("db.json"));

    TestRng rng(97);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t cut = 1 + rng.next_u64() % (full.size() - 2);
        write_text(dir.file("cut.json"), full.substr(0, cut));
        CHECK_THROWS_AS(load_database(dir.file("cut.json")), ValidationError);
    }
}
