#pragma once

#include <array>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "meterkit/quality.hpp"
#include "meterkit/readings.hpp"
#include "meterkit/slots.hpp"

namespace meterkit {

/// kWh totals of one calendar month split across the three daily slots.
struct SlotUsage {
    int month_index = 0;
    double day_kwh = 0.0;
    double night_kwh = 0.0;
    double peak_kwh = 0.0;

    double kwh(Slot s) const {
        switch (s) {
            case Slot::Day: return day_kwh;
            case Slot::Night: return night_kwh;
            case Slot::Peak: return peak_kwh;
        }
        return 0.0;
    }
    double& kwh(Slot s) {
        switch (s) {
            case Slot::Day: return day_kwh;
            case Slot::Night: return night_kwh;
            case Slot::Peak: return peak_kwh;
        }
        return day_kwh;
    }
    double total() const { return day_kwh + night_kwh + peak_kwh; }

    friend bool operator==(const SlotUsage&, const SlotUsage&) = default;
};

/// 36 monthly-slot consumption ratios, laid out (m0 day, m0 night, m0 peak,
/// m1 day, ...). Entries of unobserved months are zero; the entries over
/// observed months sum to 1.
struct ProfileVector {
    std::array<double, 36> entries{};
    std::array<bool, 12> observed{};

    static constexpr std::size_t index(int month, Slot s) {
        return std::size_t(month) * 3 + std::size_t(slot_index(s));
    }

    int observed_months() const {
        int n = 0;
        for (bool b : observed) n += b;
        return n;
    }
    bool fully_observed() const { return observed_months() == 12; }

    /// Entries of the observed months only, packed in month order.
    std::vector<double> packed() const {
        std::vector<double> out;
        out.reserve(std::size_t(observed_months()) * 3);
        for (int m = 0; m < 12; ++m) {
            if (!observed[m]) continue;
            for (Slot s : kAllSlots) out.push_back(entries[index(m, s)]);
        }
        return out;
    }
};

/// Sums interval energy per (month, slot). Month and slot membership are
/// both decided by the interval START (timestamp - 30 min); only Import
/// readings count, and months flagged excluded contribute nothing. Emits
/// one SlotUsage per non-excluded month, in month order.
inline std::vector<SlotUsage> aggregate_monthly(const ReadingSeries& series,
                                                const AnalysisWindow& window,
                                                std::span<const MonthQuality> quality) {
    std::array<SlotUsage, 12> bins{};
    for (int m = 0; m < 12; ++m) bins[m].month_index = m;
    for (const auto& r : series.readings) {
        if (r.read_type != ReadType::Import) continue;
        if (!window.contains(r.timestamp)) continue;
        const LocalMinute interval_start = r.timestamp - std::chrono::minutes{30};
        if (interval_start < window.start()) continue;
        const int m = window.month_index(interval_start);
        if (quality[m].excluded) continue;
        bins[m].kwh(slot_of(minute_of_day(interval_start))) += interval_energy(r);
    }
    std::vector<SlotUsage> out;
    for (int m = 0; m < 12; ++m)
        if (!quality[m].excluded) out.push_back(bins[m]);
    return out;
}

/// Normalizes monthly slot usage by the total consumption over the months
/// present, yielding ratios that sum to 1 across observed entries.
inline ProfileVector ratio_vector(std::span<const SlotUsage> usages) {
    if (usages.empty())
        throw std::invalid_argument("ratio_vector: no months present");
    ProfileVector out;
    double total = 0.0;
    for (const auto& u : usages) {
        if (u.month_index < 0 || u.month_index >= 12)
            throw std::invalid_argument("ratio_vector: month_index out of range");
        if (out.observed[u.month_index])
            throw std::invalid_argument("ratio_vector: duplicate month " +
                                        std::to_string(u.month_index));
        out.observed[u.month_index] = true;
        total += u.total();
    }
    if (!(total > 0.0))
        throw std::invalid_argument("degenerate profile: total consumption is zero");
    for (const auto& u : usages)
        for (Slot s : kAllSlots)
            out.entries[ProfileVector::index(u.month_index, s)] = u.kwh(s) / total;
    return out;
}

// ---------------------------------------------------------------------------
// Feature CSV

inline constexpr std::string_view kFeatureCsvHeader = "mprn,month_index,slot,kwh,ratio,observed";

struct MeterFeatures {
    std::string mprn;
    std::vector<SlotUsage> usage;  // observed (non-excluded) months only
    ProfileVector profile;
};

/// Writes the full 12x3 grid per meter; unobserved months carry zeros with
/// observed=0.
inline std::string write_features_csv(std::span<const MeterFeatures> meters) {
    std::string out;
    out += kFeatureCsvHeader;
    out += '\n';
    for (const auto& meter : meters) {
        std::array<const SlotUsage*, 12> by_month{};
        for (const auto& u : meter.usage) by_month[u.month_index] = &u;
        for (int m = 0; m < 12; ++m) {
            for (Slot s : kAllSlots) {
                const bool obs = meter.profile.observed[m];
                out += meter.mprn;
                out += ',';
                out += std::to_string(m);
                out += ',';
                out += slot_name(s);
                out += ',';
                out += csv::fmt_double(obs && by_month[m] ? by_month[m]->kwh(s) : 0.0);
                out += ',';
                out += csv::fmt_double(meter.profile.entries[ProfileVector::index(m, s)]);
                out += ',';
                out += obs ? '1' : '0';
                out += '\n';
            }
        }
    }
    return out;
}

inline std::vector<MeterFeatures> read_features_csv(std::string_view text) {
    std::map<std::string, MeterFeatures, std::less<>> by_mprn;
    bool header_seen = false;
    csv::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (!header_seen) {
            if (line != kFeatureCsvHeader)
                throw FormatError("bad features CSV header on line 1");
            header_seen = true;
            return;
        }
        if (line.empty()) return;
        const auto fields = csv::split_fields(line);
        if (fields.size() != 6)
            throw FormatError("features CSV line " + std::to_string(line_no) +
                              ": expected 6 fields");
        const auto month = csv::parse_long(fields[1]);
        const auto slot = parse_slot(fields[2]);
        const auto kwh = csv::parse_double(fields[3]);
        const auto ratio = csv::parse_double(fields[4]);
        const auto obs = csv::parse_long(fields[5]);
        if (!month || *month < 0 || *month >= 12 || !slot || !kwh || !ratio || !obs)
            throw FormatError("features CSV line " + std::to_string(line_no) + ": bad row");
        auto it = by_mprn.find(fields[0]);
        if (it == by_mprn.end())
            it = by_mprn.emplace(std::string(fields[0]),
                                 MeterFeatures{std::string(fields[0]), {}, {}}).first;
        MeterFeatures& meter = it->second;
        meter.profile.entries[ProfileVector::index(int(*month), *slot)] = *ratio;
        if (*obs != 0) {
            meter.profile.observed[*month] = true;
            if (meter.usage.empty() || meter.usage.back().month_index != int(*month)) {
                SlotUsage u;
                u.month_index = int(*month);
                meter.usage.push_back(u);
            }
            meter.usage.back().kwh(*slot) = *kwh;
        }
    });
    if (!header_seen) throw FormatError("bad features CSV header: empty file");
    std::vector<MeterFeatures> out;
    out.reserve(by_mprn.size());
    for (auto& [mprn, meter] : by_mprn) {
        std::sort(meter.usage.begin(), meter.usage.end(),
                  [](const SlotUsage& a, const SlotUsage& b) {
                      return a.month_index < b.month_index;
                  });
        out.push_back(std::move(meter));
    }
    return out;
}

}  // namespace meterkit
