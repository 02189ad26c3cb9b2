#pragma once

#include <chrono>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace meterkit {

// Naive local wall-clock time at minute resolution. HDF exports carry no
// timezone marker and the analysis ignores the two DST shift days, so plain
// local_time arithmetic is all that is needed.
using LocalMinute = std::chrono::local_time<std::chrono::minutes>;

inline LocalMinute make_local(int year, unsigned month, unsigned day,
                              int hour = 0, int minute = 0) {
    const std::chrono::year_month_day ymd{std::chrono::year{year},
                                          std::chrono::month{month},
                                          std::chrono::day{day}};
    return std::chrono::local_days{ymd} + std::chrono::hours{hour} +
           std::chrono::minutes{minute};
}

inline std::chrono::year_month_day civil_date(LocalMinute t) {
    return std::chrono::year_month_day{std::chrono::floor<std::chrono::days>(t)};
}

/// Minutes elapsed since local midnight, in [0, 1440).
inline int minute_of_day(LocalMinute t) {
    const auto midnight = std::chrono::floor<std::chrono::days>(t);
    return static_cast<int>((t - midnight).count());
}

namespace detail {

inline bool parse_digits(std::string_view s, std::size_t pos, int n, int& out) {
    int v = 0;
    for (int i = 0; i < n; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

inline std::optional<LocalMinute> assemble(int y, int mo, int d, int h, int mi) {
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{unsigned(mo)},
                                          std::chrono::day{unsigned(d)}};
    if (!ymd.ok() || h > 23 || mi > 59) return std::nullopt;
    return std::chrono::local_days{ymd} + std::chrono::hours{h} +
           std::chrono::minutes{mi};
}

}  // namespace detail

/// Parses the HDF export timestamp format "DD-MM-YYYY HH:MM".
inline std::optional<LocalMinute> parse_hdf_timestamp(std::string_view s) {
    int d, mo, y, h, mi;
    if (s.size() != 16 || s[2] != '-' || s[5] != '-' || s[10] != ' ' || s[13] != ':')
        return std::nullopt;
    if (!detail::parse_digits(s, 0, 2, d) || !detail::parse_digits(s, 3, 2, mo) ||
        !detail::parse_digits(s, 6, 4, y) || !detail::parse_digits(s, 11, 2, h) ||
        !detail::parse_digits(s, 14, 2, mi))
        return std::nullopt;
    return detail::assemble(y, mo, d, h, mi);
}

inline std::string format_hdf_timestamp(LocalMinute t) {
    const auto ymd = civil_date(t);
    const int mod = minute_of_day(t);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%02u-%02u-%04d %02d:%02d",
                  unsigned(ymd.day()), unsigned(ymd.month()), int(ymd.year()),
                  mod / 60, mod % 60);
    return buf;
}

/// Parses "YYYY-MM-DDTHH:MM" (the canonical CSV timestamp format).
inline std::optional<LocalMinute> parse_iso_timestamp(std::string_view s) {
    int y, mo, d, h, mi;
    if (s.size() != 16 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':')
        return std::nullopt;
    if (!detail::parse_digits(s, 0, 4, y) || !detail::parse_digits(s, 5, 2, mo) ||
        !detail::parse_digits(s, 8, 2, d) || !detail::parse_digits(s, 11, 2, h) ||
        !detail::parse_digits(s, 14, 2, mi))
        return std::nullopt;
    return detail::assemble(y, mo, d, h, mi);
}

inline std::string format_iso_timestamp(LocalMinute t) {
    const auto ymd = civil_date(t);
    const int mod = minute_of_day(t);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d",
                  int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()),
                  mod / 60, mod % 60);
    return buf;
}

inline std::optional<std::chrono::year_month_day> parse_iso_date(std::string_view s) {
    int y, mo, d;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!detail::parse_digits(s, 0, 4, y) || !detail::parse_digits(s, 5, 2, mo) ||
        !detail::parse_digits(s, 8, 2, d))
        return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{unsigned(mo)},
                                          std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) return std::nullopt;
    return ymd;
}

/// A half-open 12-calendar-month window [start, end) anchored at a local
/// midnight on the first of a month.
class AnalysisWindow {
public:
    static constexpr int kMonths = 12;

    static AnalysisWindow starting(std::chrono::year_month_day first_day) {
        if (!first_day.ok() || first_day.day() != std::chrono::day{1})
            throw std::invalid_argument(
                "analysis window must start at midnight on the first of a month");
        return AnalysisWindow(first_day);
    }

    LocalMinute start() const { return start_; }
    LocalMinute end() const { return end_; }

    bool contains(LocalMinute t) const { return start_ <= t && t < end_; }

    /// Calendar-month offset of t relative to the window start. Values
    /// outside [0, 12) mean t falls outside the window's months.
    int month_index(LocalMinute t) const {
        const auto ymd = civil_date(t);
        return (int(ymd.year()) - int(first_.year())) * 12 +
               (int(unsigned(ymd.month())) - int(unsigned(first_.month())));
    }

    std::chrono::year_month month(int index) const {
        return std::chrono::year_month{first_.year(), first_.month()} +
               std::chrono::months{index};
    }

    int days_in_month(int index) const {
        const auto ym = month(index);
        const std::chrono::year_month_day_last last{ym.year(),
                                                    std::chrono::month_day_last{ym.month()}};
        return int(unsigned(last.day()));
    }

private:
    explicit AnalysisWindow(std::chrono::year_month_day first) : first_(first) {
        start_ = LocalMinute{std::chrono::local_days{first}};
        const auto end_ym =
            std::chrono::year_month{first.year(), first.month()} + std::chrono::months{kMonths};
        end_ = LocalMinute{std::chrono::local_days{
            std::chrono::year_month_day{end_ym.year(), end_ym.month(), std::chrono::day{1}}}};
    }

    std::chrono::year_month_day first_;
    LocalMinute start_;
    LocalMinute end_;
};

}  // namespace meterkit
