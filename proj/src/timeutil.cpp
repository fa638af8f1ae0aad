#include "tdebt/timeutil.hpp"

#include <cstdio>

#include "tdebt/error.hpp"
#include "tdebt/text.hpp"

namespace tdebt {

namespace {

// Howard Hinnant's civil-date algorithms; exact for the proleptic Gregorian
// calendar over the full int range.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

unsigned field(std::string_view s) {
  unsigned v = 0;
  for (char c : s) v = v * 10 + static_cast<unsigned>(c - '0');
  return v;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorKind::Row, "invalid timestamp '" + std::string(text) +
                                  "' (expected YYYY-MM-DDThh:mm:ssZ or YYYY-MM-DD)");
}

}  // namespace

Instant parse_instant(std::string_view text) {
  std::string_view date = text;
  unsigned hh = 0, mm = 0, ss = 0;
  if (text.size() == 20) {
    if (text[10] != 'T' || text[13] != ':' || text[16] != ':' || text[19] != 'Z')
      bad(text);
    auto h = text.substr(11, 2), mi = text.substr(14, 2), se = text.substr(17, 2);
    if (!all_digits(h) || !all_digits(mi) || !all_digits(se)) bad(text);
    hh = field(h);
    mm = field(mi);
    ss = field(se);
    date = text.substr(0, 10);
  } else if (text.size() != 10) {
    bad(text);
  }
  if (date[4] != '-' || date[7] != '-') bad(text);
  auto ys = date.substr(0, 4), ms = date.substr(5, 2), ds = date.substr(8, 2);
  if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds)) bad(text);
  unsigned month = field(ms), day = field(ds);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 || ss > 59)
    bad(text);
  std::int64_t days = days_from_civil(field(ys), month, day);
  return days * kSecondsPerDay + hh * 3600 + mm * 60 + ss;
}

std::string format_instant(Instant t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    days -= 1;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

}  // namespace tdebt
