#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "meterkit/calendar.hpp"
#include "meterkit/csv.hpp"

namespace meterkit {

enum class ReadType { Import, Export };

inline std::string_view read_type_name(ReadType t) {
    return t == ReadType::Import ? "Import" : "Export";
}

/// One half-hourly record from an HDF export. `value_kw` is the average
/// power over the half hour; `timestamp` marks the END of the interval
/// (interval start = timestamp - 30 min).
struct RawReading {
    std::string mprn;
    double value_kw = 0.0;
    ReadType read_type = ReadType::Import;
    LocalMinute timestamp{};

    friend bool operator==(const RawReading&, const RawReading&) = default;
};

inline double interval_energy(const RawReading& r) { return r.value_kw * 0.5; }

struct RowDiagnostic {
    std::size_t line = 0;
    std::string message;
};

struct ParseResult {
    std::vector<RawReading> readings;
    std::vector<RowDiagnostic> diagnostics;
};

inline constexpr std::string_view kHdfHeader = "MPRN,Value,Read Type,Read Date and Time";
inline constexpr std::string_view kImportLiteral = "Import (kW)";
inline constexpr std::string_view kExportLiteral = "Export (kW)";

/// Parses an HDF CSV export. Malformed rows become diagnostics with their
/// line number; a missing or wrong header is fatal.
inline ParseResult parse_hdf(std::string_view text) {
    ParseResult result;
    bool header_seen = false;
    csv::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (!header_seen) {
            if (line != kHdfHeader)
                throw FormatError("missing HDF header \"" + std::string(kHdfHeader) +
                                  "\" on line 1");
            header_seen = true;
            return;
        }
        if (line.empty()) return;
        const auto fields = csv::split_fields(line);
        if (fields.size() != 4) {
            result.diagnostics.push_back({line_no, "expected 4 fields, got " +
                                                       std::to_string(fields.size())});
            return;
        }
        RawReading r;
        if (!csv::all_digits(fields[0])) {
            result.diagnostics.push_back({line_no, "bad mprn: \"" + std::string(fields[0]) + "\""});
            return;
        }
        r.mprn = std::string(fields[0]);
        const auto value = csv::parse_double(fields[1]);
        if (!value || *value < 0) {
            result.diagnostics.push_back({line_no, "bad value: \"" + std::string(fields[1]) + "\""});
            return;
        }
        r.value_kw = *value;
        if (fields[2] == kImportLiteral) {
            r.read_type = ReadType::Import;
        } else if (fields[2] == kExportLiteral) {
            r.read_type = ReadType::Export;
        } else {
            result.diagnostics.push_back(
                {line_no, "bad read type: \"" + std::string(fields[2]) + "\""});
            return;
        }
        const auto ts = parse_hdf_timestamp(fields[3]);
        if (!ts || minute_of_day(*ts) % 30 != 0) {
            result.diagnostics.push_back(
                {line_no, "bad timestamp: \"" + std::string(fields[3]) + "\""});
            return;
        }
        r.timestamp = *ts;
        result.readings.push_back(std::move(r));
    });
    if (!header_seen)
        throw FormatError("missing HDF header \"" + std::string(kHdfHeader) + "\": empty file");
    return result;
}

/// Serializes readings back to the HDF CSV format, in the given order.
inline std::string write_hdf(std::span<const RawReading> readings) {
    std::string out;
    out += kHdfHeader;
    out += '\n';
    for (const auto& r : readings) {
        out += r.mprn;
        out += ',';
        out += csv::fmt_double(r.value_kw);
        out += ',';
        out += r.read_type == ReadType::Import ? kImportLiteral : kExportLiteral;
        out += ',';
        out += format_hdf_timestamp(r.timestamp);
        out += '\n';
    }
    return out;
}

/// Readings of one meter, strictly ordered by (timestamp, read_type) with
/// no duplicate keys.
struct ReadingSeries {
    std::string mprn;
    std::vector<RawReading> readings;
};

struct MergeResult {
    ReadingSeries series;
    std::vector<std::string> notes;  // one entry per duplicate key resolved
};

/// Combines several uploads of the same meter. Duplicate (timestamp,
/// read_type) keys keep the last-provided value; later parts are assumed to
/// be fresher uploads.
inline MergeResult merge_series(const std::vector<std::vector<RawReading>>& parts) {
    MergeResult out;
    std::map<std::pair<LocalMinute, ReadType>, double> merged;
    for (const auto& part : parts) {
        for (const auto& r : part) {
            if (out.series.mprn.empty()) {
                out.series.mprn = r.mprn;
            } else if (r.mprn != out.series.mprn) {
                throw std::invalid_argument("merge_series: mixed mprns " + out.series.mprn +
                                            " and " + r.mprn);
            }
            const auto key = std::make_pair(r.timestamp, r.read_type);
            auto [it, inserted] = merged.insert_or_assign(key, r.value_kw);
            if (!inserted)
                out.notes.push_back("duplicate reading at " + format_iso_timestamp(r.timestamp) +
                                    " (" + std::string(read_type_name(r.read_type)) +
                                    "), keeping last value");
        }
    }
    out.series.readings.reserve(merged.size());
    for (const auto& [key, value] : merged)
        out.series.readings.push_back(
            {out.series.mprn, value, key.second, key.first});
    return out;
}

/// Keeps readings with window.start <= timestamp < window.end.
inline ReadingSeries trim_window(const ReadingSeries& series, const AnalysisWindow& window) {
    ReadingSeries out;
    out.mprn = series.mprn;
    std::copy_if(series.readings.begin(), series.readings.end(),
                 std::back_inserter(out.readings),
                 [&](const RawReading& r) { return window.contains(r.timestamp); });
    return out;
}

// ---------------------------------------------------------------------------
// Canonical readings CSV (the ingest output format)

inline constexpr std::string_view kReadingsCsvHeader = "mprn,timestamp_iso8601,read_type,value_kw";

inline std::string write_readings_csv(std::span<const ReadingSeries> meters) {
    std::string out;
    out += kReadingsCsvHeader;
    out += '\n';
    for (const auto& series : meters) {
        for (const auto& r : series.readings) {
            out += r.mprn;
            out += ',';
            out += format_iso_timestamp(r.timestamp);
            out += ',';
            out += read_type_name(r.read_type);
            out += ',';
            out += csv::fmt_double(r.value_kw);
            out += '\n';
        }
    }
    return out;
}

/// Reads a canonical readings CSV back, grouped by mprn (sorted).
inline std::vector<ReadingSeries> read_readings_csv(std::string_view text) {
    std::map<std::string, ReadingSeries, std::less<>> by_mprn;
    bool header_seen = false;
    csv::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (!header_seen) {
            if (line != kReadingsCsvHeader)
                throw FormatError("bad readings CSV header on line 1");
            header_seen = true;
            return;
        }
        if (line.empty()) return;
        const auto fields = csv::split_fields(line);
        if (fields.size() != 4)
            throw FormatError("readings CSV line " + std::to_string(line_no) +
                              ": expected 4 fields");
        RawReading r;
        r.mprn = std::string(fields[0]);
        const auto ts = parse_iso_timestamp(fields[1]);
        const auto value = csv::parse_double(fields[3]);
        if (!ts || !value)
            throw FormatError("readings CSV line " + std::to_string(line_no) + ": bad row");
        r.timestamp = *ts;
        r.value_kw = *value;
        if (fields[2] == "Import") {
            r.read_type = ReadType::Import;
        } else if (fields[2] == "Export") {
            r.read_type = ReadType::Export;
        } else {
            throw FormatError("readings CSV line " + std::to_string(line_no) +
                              ": bad read type");
        }
        auto it = by_mprn.find(r.mprn);
        if (it == by_mprn.end()) it = by_mprn.emplace(r.mprn, ReadingSeries{r.mprn, {}}).first;
        it->second.readings.push_back(std::move(r));
    });
    if (!header_seen) throw FormatError("bad readings CSV header: empty file");
    std::vector<ReadingSeries> out;
    out.reserve(by_mprn.size());
    for (auto& [mprn, series] : by_mprn) {
        std::sort(series.readings.begin(), series.readings.end(),
                  [](const RawReading& a, const RawReading& b) {
                      return std::tie(a.timestamp, a.read_type) <
                             std::tie(b.timestamp, b.read_type);
                  });
        out.push_back(std::move(series));
    }
    return out;
}

}  // namespace meterkit
