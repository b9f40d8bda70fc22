// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/session_model.hpp"

namespace egoskill {

std::string_view to_string(Ordinal o) { return o == Ordinal::earlier ? "earlier" : "later"; }

Ordinal parse_ordinal(std::string_view s) {
  if (s == "earlier") return Ordinal::earlier;
  if (s == "later") return Ordinal::later;
  throw InputError("ordinal must be \"earlier\" or \"later\", got \"" + std::string(s) + "\"");
}

std::string_view to_string(DistanceKind k) {
  switch (k) {
    case DistanceKind::AO: return "AO";
    case DistanceKind::HO: return "HO";
    case DistanceKind::AH: return "AH";
  }
  return "?";
}

std::string_view to_string(GazePattern p) { return p == GazePattern::search ? "search" : "shift"; }

std::string_view to_string(ShiftKind k) {
  switch (k) {
    case ShiftKind::early: return "early";
    case ShiftKind::non_early: return "non-early";
    case ShiftKind::undefined: return "undefined";
  }
  return "?";
}

std::string_view to_string(RaterRole r) { return r == RaterRole::expert ? "expert" : "beginner"; }

RaterRole parse_rater_role(std::string_view s) {
  if (s == "expert") return RaterRole::expert;
  if (s == "beginner") return RaterRole::beginner;
  throw InputError("rater role must be \"expert\" or \"beginner\", got \"" + std::string(s) + "\"");
}

}  // namespace egoskill
