#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace meterkit {

/// Daily Time-of-Use slots. Day = 08:00-17:00 and 19:00-23:00 (13 h),
/// Night = 23:00-08:00 (9 h), Peak = 17:00-19:00 (2 h). The three windows
/// partition the 24-hour day; membership is by half-open interval, so
/// half-hour intervals never straddle a boundary.
enum class Slot : int { Day = 0, Night = 1, Peak = 2 };

inline constexpr std::array<Slot, 3> kAllSlots{Slot::Day, Slot::Night, Slot::Peak};

constexpr int slot_index(Slot s) { return static_cast<int>(s); }

constexpr int slot_duration_hours(Slot s) {
    switch (s) {
        case Slot::Day: return 13;
        case Slot::Night: return 9;
        case Slot::Peak: return 2;
    }
    return 0;
}

constexpr std::string_view slot_name(Slot s) {
    switch (s) {
        case Slot::Day: return "day";
        case Slot::Night: return "night";
        case Slot::Peak: return "peak";
    }
    return "";
}

inline std::optional<Slot> parse_slot(std::string_view name) {
    if (name == "day") return Slot::Day;
    if (name == "night") return Slot::Night;
    if (name == "peak") return Slot::Peak;
    return std::nullopt;
}

/// Slot owning the half-hour interval that STARTS at the given minute of
/// day. Readings are stamped at interval end, so callers pass
/// minute_of_day(timestamp - 30min).
constexpr Slot slot_of(int minute_of_day) {
    if (minute_of_day >= 8 * 60 && minute_of_day < 17 * 60) return Slot::Day;
    if (minute_of_day >= 19 * 60 && minute_of_day < 23 * 60) return Slot::Day;
    if (minute_of_day >= 17 * 60 && minute_of_day < 19 * 60) return Slot::Peak;
    return Slot::Night;
}

}  // namespace meterkit
