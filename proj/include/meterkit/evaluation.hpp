#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "meterkit/backfill.hpp"
#include "meterkit/features.hpp"
#include "meterkit/slots.hpp"

namespace meterkit {

/// Symmetric mean absolute percentage error in percent:
/// (100/n) * sum |F_i - A_i| / (|A_i| + |F_i|), with a 0/0 term counting as
/// a perfect prediction (0). The denominator is |A|+|F| (no factor 2), so
/// the result lies in [0, 100].
inline double smape(std::span<const double> forecast, std::span<const double> actual) {
    if (forecast.size() != actual.size())
        throw std::invalid_argument("smape: sequence lengths differ");
    if (forecast.empty()) throw std::invalid_argument("smape: empty sequences");
    double sum = 0.0;
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        const double denom = std::abs(actual[i]) + std::abs(forecast[i]);
        if (denom > 0.0) sum += std::abs(forecast[i] - actual[i]) / denom;
    }
    return 100.0 * sum / double(forecast.size());
}

/// Combines per-slot SMAPEs with the slots' durations within the 24-hour
/// day: 13 h day, 9 h night, 2 h peak.
inline double weighted_smape(double day_pct, double night_pct, double peak_pct) {
    return (13.0 * day_pct + 9.0 * night_pct + 2.0 * peak_pct) / 24.0;
}

struct SmapeReport {
    std::array<double, 3> per_slot{};  // indexed by slot_index
    double weighted = 0.0;
    std::array<int, 3> n_points{};
};

/// Scores a back-fill against the true usage on the imputed months only,
/// per (month, slot) cell. Observed months pass through the back-fill
/// unchanged and would dilute the score.
inline SmapeReport imputed_smape(const BackfillResult& result,
                                 std::span<const SlotUsage> actual) {
    if (actual.size() != 12)
        throw std::invalid_argument("imputed_smape: need all 12 actual months");
    SmapeReport report;
    for (Slot s : kAllSlots) {
        std::vector<double> forecast, truth;
        for (int m = 0; m < 12; ++m) {
            if (!result.filled[m]) continue;
            forecast.push_back(result.completed[m].kwh(s));
            truth.push_back(actual[m].kwh(s));
        }
        report.n_points[std::size_t(slot_index(s))] = int(forecast.size());
        report.per_slot[std::size_t(slot_index(s))] = smape(forecast, truth);
    }
    report.weighted = weighted_smape(report.per_slot[0], report.per_slot[1], report.per_slot[2]);
    return report;
}

/// Sequential month-removal evaluation: drop the d oldest months of a full
/// 12-month user for d = 1..max_removed, back-fill against every profile,
/// and score each against the held-out actuals.
struct HoldoutMatrix {
    int k = 0;
    int max_removed = 0;
    std::vector<double> cells;  // k rows x max_removed columns, weighted SMAPE %
    std::vector<int> assigned;  // freely assigned profile per duration

    double cell(int profile, int removed_months) const {
        return cells[std::size_t(profile) * std::size_t(max_removed) +
                     std::size_t(removed_months - 1)];
    }
    double& cell(int profile, int removed_months) {
        return cells[std::size_t(profile) * std::size_t(max_removed) +
                     std::size_t(removed_months - 1)];
    }
};

inline HoldoutMatrix holdout_eval(std::span<const SlotUsage> full_user,
                                  const ClusterModel& model, int max_removed = 6,
                                  ScaleMode mode = ScaleMode::JointTotal) {
    if (full_user.size() != 12)
        throw std::invalid_argument("holdout_eval: user must be fully observed");
    std::array<const SlotUsage*, 12> by_month{};
    for (const auto& u : full_user) {
        if (u.month_index < 0 || u.month_index >= 12 || by_month[u.month_index])
            throw std::invalid_argument("holdout_eval: user must be fully observed");
        by_month[u.month_index] = &u;
    }
    if (max_removed < 1 || max_removed > 6)
        throw std::invalid_argument("holdout_eval: removed-month duration must be in 1..6");

    std::vector<SlotUsage> ordered(12);
    for (int m = 0; m < 12; ++m) ordered[m] = *by_month[m];

    HoldoutMatrix matrix;
    matrix.k = model.k;
    matrix.max_removed = max_removed;
    matrix.cells.assign(std::size_t(model.k) * std::size_t(max_removed), 0.0);
    matrix.assigned.resize(std::size_t(max_removed));
    for (int d = 1; d <= max_removed; ++d) {
        const std::span<const SlotUsage> observed(ordered.data() + d, std::size_t(12 - d));
        matrix.assigned[std::size_t(d - 1)] =
            assign_partial(ratio_vector(observed), model);
        for (int c = 0; c < model.k; ++c) {
            const BackfillResult filled = backfill_with_profile(observed, model, c, mode);
            matrix.cell(c, d) = imputed_smape(filled, ordered).weighted;
        }
    }
    return matrix;
}

// ---------------------------------------------------------------------------
// Holdout CSV (Table-4 layout: one row per user, profile and duration)

inline constexpr std::string_view kHoldoutCsvHeader =
    "user,profile_id,removed_months,weighted_smape_pct,assigned";

struct UserHoldout {
    std::string user;
    HoldoutMatrix matrix;
};

/// profile_id is 1-based in the CSV, matching the usual profile numbering.
inline std::string write_holdout_csv(std::span<const UserHoldout> users) {
    std::string out;
    out += kHoldoutCsvHeader;
    out += '\n';
    for (const auto& [user, matrix] : users) {
        for (int c = 0; c < matrix.k; ++c) {
            for (int d = 1; d <= matrix.max_removed; ++d) {
                out += user;
                out += ',';
                out += std::to_string(c + 1);
                out += ',';
                out += std::to_string(d);
                out += ',';
                out += csv::fmt_double(matrix.cell(c, d));
                out += ',';
                out += matrix.assigned[std::size_t(d - 1)] == c ? '1' : '0';
                out += '\n';
            }
        }
    }
    return out;
}

}  // namespace meterkit
