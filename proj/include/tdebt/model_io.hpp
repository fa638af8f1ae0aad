#pragma once

#include <string>

#include "tdebt/regress.hpp"

namespace tdebt {

/// Versioned self-describing text form of a fitted model (JSON). Bytes are
/// stable across runs for equal models; see README for the layout.
std::string serialize_model(const FittedModel& model);

/// Inverse of serialize_model. Throws Error{Schema} on version or layout
/// mismatches.
FittedModel deserialize_model(const std::string& text);

}  // namespace tdebt
