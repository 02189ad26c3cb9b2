#pragma once

#include <array>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "meterkit/features.hpp"
#include "meterkit/kmeans.hpp"

namespace meterkit {

/// How imputed months are scaled to the user's observed consumption.
/// JointTotal uses a single annual-total estimate over all observed
/// (month, slot) cells; PerSlot scales day/night/peak independently.
enum class ScaleMode { JointTotal, PerSlot };

struct BackfillResult {
    std::array<SlotUsage, 12> completed{};
    std::array<bool, 12> filled{};  // true = imputed from the profile
    int cluster_id = 0;
    double scale_kwh = 0.0;  // estimated annual total
};

namespace detail {

inline std::array<bool, 12> observed_mask(std::span<const SlotUsage> observed) {
    if (observed.empty()) throw std::invalid_argument("backfill: no observed months");
    std::array<bool, 12> mask{};
    for (const auto& u : observed) {
        if (u.month_index < 0 || u.month_index >= 12)
            throw std::invalid_argument("backfill: month_index out of range");
        if (mask[u.month_index])
            throw std::invalid_argument("backfill: duplicate month " +
                                        std::to_string(u.month_index));
        mask[u.month_index] = true;
    }
    return mask;
}

}  // namespace detail

/// Back-fills the missing months from the given profile: observed months
/// pass through untouched; each missing (month, slot) cell becomes the
/// centroid ratio scaled to the user's observed consumption.
inline BackfillResult backfill_with_profile(std::span<const SlotUsage> observed,
                                            const ClusterModel& model, int cluster_id,
                                            ScaleMode mode = ScaleMode::JointTotal) {
    const std::array<bool, 12> mask = detail::observed_mask(observed);
    if (cluster_id < 0 || std::size_t(cluster_id) >= model.centroids.size())
        throw std::invalid_argument("backfill: cluster_id out of range");
    const Point& centroid = model.centroids[std::size_t(cluster_id)];
    if (centroid.size() != 36)
        throw std::invalid_argument("backfill: model is not a 12-month profile model");

    double observed_total = 0.0;
    for (const auto& u : observed) observed_total += u.total();
    if (!(observed_total > 0.0))
        throw std::invalid_argument("backfill: zero observed consumption");

    BackfillResult out;
    out.cluster_id = cluster_id;
    for (int m = 0; m < 12; ++m) out.completed[m].month_index = m;
    for (const auto& u : observed) out.completed[u.month_index] = u;

    if (mode == ScaleMode::JointTotal) {
        const double mass = centroid_mass(centroid, mask);
        if (mass < 1e-9)
            throw std::domain_error(
                "backfill: profile has no mass on the observed months");
        const double annual_estimate = observed_total / mass;
        for (int m = 0; m < 12; ++m) {
            if (mask[m]) continue;
            out.filled[m] = true;
            for (Slot s : kAllSlots)
                out.completed[m].kwh(s) =
                    centroid[ProfileVector::index(m, s)] * annual_estimate;
        }
        out.scale_kwh = annual_estimate;
    } else {
        std::array<double, 3> scale{};
        for (Slot s : kAllSlots) {
            double slot_observed = 0.0, slot_mass = 0.0;
            for (const auto& u : observed) slot_observed += u.kwh(s);
            for (int m = 0; m < 12; ++m)
                if (mask[m]) slot_mass += centroid[ProfileVector::index(m, s)];
            if (slot_mass < 1e-9) {
                if (slot_observed > 0.0)
                    throw std::domain_error(
                        "backfill: profile has no mass on the observed months for slot " +
                        std::string(slot_name(s)));
                scale[std::size_t(slot_index(s))] = 0.0;
            } else {
                scale[std::size_t(slot_index(s))] = slot_observed / slot_mass;
            }
        }
        double annual_estimate = 0.0;
        for (Slot s : kAllSlots) {
            double full_mass = 0.0;
            for (int m = 0; m < 12; ++m) full_mass += centroid[ProfileVector::index(m, s)];
            annual_estimate += scale[std::size_t(slot_index(s))] * full_mass;
        }
        for (int m = 0; m < 12; ++m) {
            if (mask[m]) continue;
            out.filled[m] = true;
            for (Slot s : kAllSlots)
                out.completed[m].kwh(s) = centroid[ProfileVector::index(m, s)] *
                                          scale[std::size_t(slot_index(s))];
        }
        out.scale_kwh = annual_estimate;
    }
    return out;
}

/// Three-step back-fill: match the partial user to the closest profile,
/// take the missing months' ratios from that profile, and scale them by the
/// user's observed consumption.
inline BackfillResult backfill(std::span<const SlotUsage> observed, const ClusterModel& model,
                               ScaleMode mode = ScaleMode::JointTotal) {
    const ProfileVector profile = ratio_vector(observed);
    return backfill_with_profile(observed, model, assign_partial(profile, model), mode);
}

// ---------------------------------------------------------------------------
// Completed-usage CSV

inline constexpr std::string_view kCompletedCsvHeader =
    "mprn,month_index,slot,kwh,imputed,cluster_id,scale_kwh";

struct CompletedMeter {
    std::string mprn;
    BackfillResult result;
};

inline std::string write_completed_csv(std::span<const CompletedMeter> meters) {
    std::string out;
    out += kCompletedCsvHeader;
    out += '\n';
    for (const auto& meter : meters) {
        for (int m = 0; m < 12; ++m) {
            for (Slot s : kAllSlots) {
                out += meter.mprn;
                out += ',';
                out += std::to_string(m);
                out += ',';
                out += slot_name(s);
                out += ',';
                out += csv::fmt_double(meter.result.completed[m].kwh(s));
                out += ',';
                out += meter.result.filled[m] ? '1' : '0';
                out += ',';
                out += std::to_string(meter.result.cluster_id);
                out += ',';
                out += csv::fmt_double(meter.result.scale_kwh);
                out += '\n';
            }
        }
    }
    return out;
}

inline std::vector<CompletedMeter> read_completed_csv(std::string_view text) {
    std::map<std::string, CompletedMeter, std::less<>> by_mprn;
    bool header_seen = false;
    csv::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (!header_seen) {
            if (line != kCompletedCsvHeader)
                throw FormatError("bad completed CSV header on line 1");
            header_seen = true;
            return;
        }
        if (line.empty()) return;
        const auto fields = csv::split_fields(line);
        if (fields.size() != 7)
            throw FormatError("completed CSV line " + std::to_string(line_no) +
                              ": expected 7 fields");
        const auto month = csv::parse_long(fields[1]);
        const auto slot = parse_slot(fields[2]);
        const auto kwh = csv::parse_double(fields[3]);
        const auto imputed = csv::parse_long(fields[4]);
        const auto cluster = csv::parse_long(fields[5]);
        const auto scale = csv::parse_double(fields[6]);
        if (!month || *month < 0 || *month >= 12 || !slot || !kwh || !imputed || !cluster ||
            !scale)
            throw FormatError("completed CSV line " + std::to_string(line_no) + ": bad row");
        auto it = by_mprn.find(fields[0]);
        if (it == by_mprn.end()) {
            it = by_mprn.emplace(std::string(fields[0]),
                                 CompletedMeter{std::string(fields[0]), {}}).first;
            for (int m = 0; m < 12; ++m) it->second.result.completed[m].month_index = m;
        }
        CompletedMeter& meter = it->second;
        meter.result.completed[*month].kwh(*slot) = *kwh;
        meter.result.filled[*month] = *imputed != 0;
        meter.result.cluster_id = int(*cluster);
        meter.result.scale_kwh = *scale;
    });
    if (!header_seen) throw FormatError("bad completed CSV header: empty file");
    std::vector<CompletedMeter> out;
    out.reserve(by_mprn.size());
    for (auto& [mprn, meter] : by_mprn) out.push_back(std::move(meter));
    return out;
}

}  // namespace meterkit
