#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "meterkit/csv.hpp"
#include "meterkit/features.hpp"

namespace meterkit {

enum class TariffKind { Fixed, DayNight, SmartToU };
enum class Locality { Urban, Rural };

inline std::string_view tariff_kind_name(TariffKind k) {
    switch (k) {
        case TariffKind::Fixed: return "Fixed";
        case TariffKind::DayNight: return "DayNight";
        case TariffKind::SmartToU: return "SmartToU";
    }
    return "";
}

inline std::optional<TariffKind> parse_tariff_kind(std::string_view name) {
    if (name == "Fixed") return TariffKind::Fixed;
    if (name == "DayNight") return TariffKind::DayNight;
    if (name == "SmartToU") return TariffKind::SmartToU;
    return std::nullopt;
}

inline std::string_view locality_name(Locality l) {
    return l == Locality::Urban ? "Urban" : "Rural";
}

inline std::optional<Locality> parse_locality(std::string_view name) {
    if (name == "Urban" || name == "urban") return Locality::Urban;
    if (name == "Rural" || name == "rural") return Locality::Rural;
    return std::nullopt;
}

/// One supplier plan. Rates are effective tax-inclusive EUR/kWh; standing
/// charges are EUR/year and differ by locality. Fixed plans bill every slot
/// at one rate; DayNight plans bill peak at the day rate.
struct TariffPlan {
    std::string supplier;
    std::string plan_name;
    TariffKind kind = TariffKind::Fixed;
    double rate_day = 0.0;
    double rate_night = 0.0;
    double rate_peak = 0.0;
    double standing_urban = 0.0;
    double standing_rural = 0.0;

    double rate(Slot s) const {
        switch (s) {
            case Slot::Day: return rate_day;
            case Slot::Night: return rate_night;
            case Slot::Peak: return rate_peak;
        }
        return 0.0;
    }
    double standing(Locality l) const {
        return l == Locality::Urban ? standing_urban : standing_rural;
    }
};

inline constexpr std::string_view kTariffCsvHeader =
    "supplier,plan_name,kind,rate_day,rate_night,rate_peak,standing_urban,standing_rural";

struct TariffParseResult {
    std::vector<TariffPlan> plans;
    std::vector<RowDiagnostic> diagnostics;
};

inline TariffParseResult parse_tariffs(std::string_view text) {
    TariffParseResult result;
    bool header_seen = false;
    csv::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (!header_seen) {
            if (line != kTariffCsvHeader)
                throw FormatError("missing tariff header \"" + std::string(kTariffCsvHeader) +
                                  "\" on line 1");
            header_seen = true;
            return;
        }
        if (line.empty()) return;
        const auto fields = csv::split_fields(line);
        if (fields.size() != 8) {
            result.diagnostics.push_back({line_no, "expected 8 fields, got " +
                                                       std::to_string(fields.size())});
            return;
        }
        TariffPlan plan;
        plan.supplier = std::string(fields[0]);
        plan.plan_name = std::string(fields[1]);
        const auto kind = parse_tariff_kind(fields[2]);
        if (!kind) {
            result.diagnostics.push_back({line_no, "bad kind: \"" + std::string(fields[2]) + "\""});
            return;
        }
        plan.kind = *kind;
        std::array<double, 5> numbers{};
        for (int i = 0; i < 5; ++i) {
            const auto v = csv::parse_double(fields[std::size_t(3 + i)]);
            if (!v) {
                result.diagnostics.push_back(
                    {line_no, "bad number: \"" + std::string(fields[std::size_t(3 + i)]) + "\""});
                return;
            }
            numbers[std::size_t(i)] = *v;
        }
        plan.rate_day = numbers[0];
        plan.rate_night = numbers[1];
        plan.rate_peak = numbers[2];
        plan.standing_urban = numbers[3];
        plan.standing_rural = numbers[4];
        if (!(plan.rate_day > 0) || !(plan.rate_night > 0) || !(plan.rate_peak > 0)) {
            result.diagnostics.push_back({line_no, "rates must be positive"});
            return;
        }
        if (plan.standing_urban < 0 || plan.standing_rural < 0) {
            result.diagnostics.push_back({line_no, "standing charges must be non-negative"});
            return;
        }
        if (plan.kind == TariffKind::Fixed &&
            (plan.rate_day != plan.rate_night || plan.rate_day != plan.rate_peak)) {
            result.diagnostics.push_back({line_no, "Fixed plan must have equal rates"});
            return;
        }
        if (plan.kind == TariffKind::DayNight && plan.rate_day != plan.rate_peak) {
            result.diagnostics.push_back(
                {line_no, "DayNight plan must bill peak at the day rate"});
            return;
        }
        result.plans.push_back(std::move(plan));
    });
    if (!header_seen)
        throw FormatError("missing tariff header \"" + std::string(kTariffCsvHeader) +
                          "\": empty file");
    return result;
}

/// Half-up rounding to whole cents.
inline double round_cents(double eur) {
    return std::floor(eur * 100.0 + 0.5) / 100.0;
}

struct BillEstimate {
    TariffPlan plan;
    Locality locality = Locality::Urban;
    double energy_eur = 0.0;    // unrounded
    double standing_eur = 0.0;  // unrounded
    double total_eur = 0.0;     // rounded half-up to cents
    std::array<double, 3> per_slot_kwh{};
};

/// Annual bill for a completed 12-month record. Money is carried in cents
/// and rounded half-up only at the final total.
inline BillEstimate annual_bill(std::span<const SlotUsage> completed, const TariffPlan& plan,
                                Locality locality) {
    if (completed.size() != 12)
        throw std::invalid_argument("annual_bill: need 12 complete months");
    BillEstimate bill;
    bill.plan = plan;
    bill.locality = locality;
    for (const auto& u : completed)
        for (Slot s : kAllSlots) bill.per_slot_kwh[std::size_t(slot_index(s))] += u.kwh(s);
    double energy_cents = 0.0;
    for (Slot s : kAllSlots)
        energy_cents += plan.rate(s) * 100.0 * bill.per_slot_kwh[std::size_t(slot_index(s))];
    const double standing_cents = plan.standing(locality) * 100.0;
    bill.energy_eur = energy_cents / 100.0;
    bill.standing_eur = standing_cents / 100.0;
    bill.total_eur = std::floor(energy_cents + standing_cents + 0.5) / 100.0;
    return bill;
}

/// All plans priced and sorted ascending by total; ties break by
/// (supplier, plan_name).
inline std::vector<BillEstimate> rank_plans(std::span<const SlotUsage> completed,
                                            std::span<const TariffPlan> plans,
                                            Locality locality) {
    if (plans.empty()) throw std::invalid_argument("rank_plans: no plans");
    std::vector<BillEstimate> bills;
    bills.reserve(plans.size());
    for (const auto& plan : plans) bills.push_back(annual_bill(completed, plan, locality));
    std::sort(bills.begin(), bills.end(), [](const BillEstimate& a, const BillEstimate& b) {
        if (a.total_eur != b.total_eur) return a.total_eur < b.total_eur;
        if (a.plan.supplier != b.plan.supplier) return a.plan.supplier < b.plan.supplier;
        return a.plan.plan_name < b.plan.plan_name;
    });
    return bills;
}

inline constexpr std::string_view kBillCsvHeader =
    "supplier,plan_name,kind,locality,energy_eur,standing_eur,total_eur";

inline std::string write_bill_csv(std::span<const BillEstimate> bills) {
    std::string out;
    out += kBillCsvHeader;
    out += '\n';
    for (const auto& bill : bills) {
        out += bill.plan.supplier;
        out += ',';
        out += bill.plan.plan_name;
        out += ',';
        out += tariff_kind_name(bill.plan.kind);
        out += ',';
        out += locality_name(bill.locality);
        out += ',';
        out += csv::fmt_double(bill.energy_eur);
        out += ',';
        out += csv::fmt_double(bill.standing_eur);
        out += ',';
        out += csv::fmt_fixed2(bill.total_eur);
        out += '\n';
    }
    return out;
}

}  // namespace meterkit
