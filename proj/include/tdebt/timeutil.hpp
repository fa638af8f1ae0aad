#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tdebt {

/// Seconds since the Unix epoch, always UTC.
using Instant = std::int64_t;

inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Accepts "YYYY-MM-DDThh:mm:ssZ" or the date-only short form "YYYY-MM-DD"
/// (midnight UTC). Throws Error{Row} on anything else.
Instant parse_instant(std::string_view text);

/// Canonical "YYYY-MM-DDThh:mm:ssZ".
std::string format_instant(Instant t);

}  // namespace tdebt
