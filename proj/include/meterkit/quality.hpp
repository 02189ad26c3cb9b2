#pragma once

#include <array>
#include <span>
#include <string>

#include "meterkit/readings.hpp"

namespace meterkit {

/// Per-month completeness of Import readings within the analysis window.
struct MonthQuality {
    int month_index = 0;
    long expected_count = 0;  // days in month * 48
    long observed_count = 0;
    double missing_fraction = 0.0;
    bool excluded = false;
};

/// Counts Import readings per calendar month of the window (by timestamp)
/// and applies the strict >10% missing-data exclusion rule. The exclusion
/// comparison is done in exact integer arithmetic: a month is excluded iff
/// 10 * (expected - observed) > expected.
inline std::array<MonthQuality, 12> assess_months(const ReadingSeries& series,
                                                  const AnalysisWindow& window) {
    std::array<MonthQuality, 12> out{};
    for (int m = 0; m < AnalysisWindow::kMonths; ++m) {
        out[m].month_index = m;
        out[m].expected_count = 48L * window.days_in_month(m);
    }
    for (const auto& r : series.readings) {
        if (r.read_type != ReadType::Import) continue;
        if (!window.contains(r.timestamp)) continue;
        const int m = window.month_index(r.timestamp);
        ++out[m].observed_count;
    }
    for (auto& q : out) {
        q.missing_fraction =
            1.0 - double(q.observed_count) / double(q.expected_count);
        q.excluded = 10 * (q.expected_count - q.observed_count) > q.expected_count;
    }
    return out;
}

inline constexpr std::string_view kQualityCsvHeader =
    "mprn,month_index,expected_count,observed_count,missing_fraction,excluded";

struct MeterQuality {
    std::string mprn;
    std::array<MonthQuality, 12> months{};
};

inline std::string write_quality_csv(std::span<const MeterQuality> meters) {
    std::string out;
    out += kQualityCsvHeader;
    out += '\n';
    for (const auto& meter : meters) {
        for (const auto& q : meter.months) {
            out += meter.mprn;
            out += ',';
            out += std::to_string(q.month_index);
            out += ',';
            out += std::to_string(q.expected_count);
            out += ',';
            out += std::to_string(q.observed_count);
            out += ',';
            out += csv::fmt_double(q.missing_fraction);
            out += ',';
            out += q.excluded ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

}  // namespace meterkit
