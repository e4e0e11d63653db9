#pragma once

// Shared vocabulary: errors, member identities, rosters, exact fractions and
// UTC timestamps.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace teamlens {

inline constexpr std::string_view kToolVersion = "0.3.0";

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the line-oriented parsers; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

using MemberId = std::string;

class TeamRoster {
 public:
  TeamRoster() = default;

  TeamRoster(std::string team_id, std::vector<MemberId> members)
      : team_id_(std::move(team_id)), members_(std::move(members)) {
    if (members_.size() < 2) {
      throw Error("roster '" + team_id_ + "' needs at least 2 members");
    }
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (members_[i].empty()) throw Error("roster '" + team_id_ + "' has an empty member id");
      if (!index_.emplace(members_[i], i).second) {
        throw Error("roster '" + team_id_ + "' lists member '" + members_[i] + "' twice");
      }
    }
  }

  const std::string& team_id() const noexcept { return team_id_; }
  const std::vector<MemberId>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  const MemberId& operator[](std::size_t i) const { return members_[i]; }

  bool contains(const MemberId& id) const { return index_.contains(id); }

  std::optional<std::size_t> find(const MemberId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const MemberId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
      throw Error("member '" + id + "' is not in roster '" + team_id_ + "'");
    }
    return it->second;
  }

  friend bool operator==(const TeamRoster& a, const TeamRoster& b) {
    return a.team_id_ == b.team_id_ && a.members_ == b.members_;
  }

 private:
  std::string team_id_;
  std::vector<MemberId> members_;
  std::unordered_map<MemberId, std::size_t> index_;
};

// Unordered member pair stored as roster indices with first < second.
struct MemberPair {
  std::size_t first = 0;
  std::size_t second = 0;

  static MemberPair of(std::size_t a, std::size_t b) { return a < b ? MemberPair{a, b} : MemberPair{b, a}; }

  friend auto operator<=>(const MemberPair&, const MemberPair&) = default;
};

// Exact non-negative ratio, always kept in lowest terms.
class Fraction {
 public:
  constexpr Fraction() = default;
  Fraction(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error("fraction with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    num_ = num / (g == 0 ? 1 : g);
    den_ = den / (g == 0 ? 1 : g);
  }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }
  constexpr double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  friend constexpr bool operator==(const Fraction&, const Fraction&) = default;
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

namespace detail {

inline bool read_digits(std::string_view s, std::size_t& pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int value = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const char c = s[pos + k];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  pos += count;
  return true;
}

inline bool expect_char(std::string_view s, std::size_t& pos, char c) {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

}  // namespace detail

// Accepts "YYYY-MM-DD(T| )HH:MM:SS[.fff][ ](Z|±HH:MM|±HHMM)". A zone designator
// is mandatory; the result is normalized to UTC with millisecond resolution.
inline std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  std::size_t pos = 0;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!detail::read_digits(text, pos, 4, y) || !detail::expect_char(text, pos, '-') ||
      !detail::read_digits(text, pos, 2, mo) || !detail::expect_char(text, pos, '-') ||
      !detail::read_digits(text, pos, 2, d)) {
    return std::nullopt;
  }
  if (!detail::expect_char(text, pos, 'T') && !detail::expect_char(text, pos, ' ')) return std::nullopt;
  if (!detail::read_digits(text, pos, 2, h) || !detail::expect_char(text, pos, ':') ||
      !detail::read_digits(text, pos, 2, mi) || !detail::expect_char(text, pos, ':') ||
      !detail::read_digits(text, pos, 2, s)) {
    return std::nullopt;
  }
  int millis = 0;
  if (detail::expect_char(text, pos, '.')) {
    int scale = 100;
    std::size_t digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      millis += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
      ++digits;
    }
    if (digits == 0) return std::nullopt;
  }
  detail::expect_char(text, pos, ' ');
  int offset_minutes = 0;
  if (detail::expect_char(text, pos, 'Z') || detail::expect_char(text, pos, 'z')) {
    offset_minutes = 0;
  } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    const int sign = text[pos] == '-' ? -1 : 1;
    ++pos;
    int oh = 0, om = 0;
    if (!detail::read_digits(text, pos, 2, oh)) return std::nullopt;
    detail::expect_char(text, pos, ':');
    if (!detail::read_digits(text, pos, 2, om)) return std::nullopt;
    if (oh > 23 || om > 59) return std::nullopt;
    offset_minutes = sign * (oh * 60 + om);
  } else {
    return std::nullopt;
  }
  if (pos != text.size()) return std::nullopt;

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  return Timestamp{sys_days{ymd}} + hours{h} + minutes{mi} + seconds{s} + milliseconds{millis} -
         minutes{offset_minutes};
}

// Canonical UTC rendering; the fractional part appears only when non-zero.
inline std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss<milliseconds> tod{t - day_point};
  char buf[40];
  const int ms = static_cast<int>(tod.subseconds().count());
  int len = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                          static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                          static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                          static_cast<int>(tod.seconds().count()));
  if (ms != 0) len += std::snprintf(buf + len, sizeof buf - len, ".%03d", ms);
  std::snprintf(buf + len, sizeof buf - len, "Z");
  return buf;
}

// Round to 12 significant digits; locale-independent.
inline double round_significant(double value) {
  if (value == 0.0) return 0.0;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  double out = 0.0;
  std::from_chars(buf, res.ptr, out);
  return out;
}

inline std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, round_significant(value), std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

}  // namespace teamlens
