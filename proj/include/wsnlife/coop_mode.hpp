#pragma once

#include <string>
#include <string_view>

#include "wsnlife/errors.hpp"

namespace wsnlife {

// Which cooperative technique extends a link.
enum class CoopMode { CB, CT };

inline std::string to_string(CoopMode m) { return m == CoopMode::CB ? "cb" : "ct"; }

inline CoopMode parse_coop_mode(std::string_view s) {
  if (s == "cb" || s == "CB") return CoopMode::CB;
  if (s == "ct" || s == "CT") return CoopMode::CT;
  throw DomainError("unknown cooperation mode '" + std::string(s) + "' (expected cb or ct)");
}

}  // namespace wsnlife
