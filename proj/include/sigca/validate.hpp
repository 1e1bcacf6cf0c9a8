#pragma once

#include <string>
#include <vector>

#include "sigca/configuration.hpp"
#include "sigca/core_model.hpp"

namespace sigca {

enum class ViolationKind {
  V1,  // '#' outside the left-infinite # prefix
  V2,  // main track not in the order # * w | pairs
  V3,  // c-track pattern (c=0)(c=1)
  V4,  // arrows inconsistent with a unique head
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::V1: return "V1";
    case ViolationKind::V2: return "V2";
    case ViolationKind::V3: return "V3";
    case ViolationKind::V4: return "V4";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  Position position;  // left cell of the offending pair

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Which forbidden two-cell patterns are enforced. The counter construction
/// lets the c-track hold any binary word, so it drops V3.
struct ConstraintSet {
  bool c_track_monotone = true;
};

/// Appends every violation of the two-cell pattern (left, right) at `pos`.
inline void check_adjacent(const TrackedCell& l, const TrackedCell& r, Position pos,
                           ConstraintSet constraints, std::vector<Violation>& out) {
  if (l.spread || r.spread) return;
  using K = MainSymbol::Kind;
  const K a = l.main.kind;
  const K b = r.main.kind;
  const bool main_ok = (a == K::Hash && (b == K::Hash || b == K::Input || b == K::Sep)) ||
                       (a == K::Input && (b == K::Input || b == K::Sep)) ||
                       (a == K::Sep && b == K::Pair) || (a == K::Pair && b == K::Pair);
  if (!main_ok) {
    out.push_back({(a == K::Hash || b == K::Hash) ? ViolationKind::V1 : ViolationKind::V2, pos});
  }
  if (constraints.c_track_monotone && a == K::Pair && b == K::Pair && l.main.c == 0 &&
      r.main.c == 1) {
    out.push_back({ViolationKind::V3, pos});
  }
  using H = HeadMark::Kind;
  const H x = l.head.kind;
  const H y = r.head.kind;
  const bool head_ok = (x == H::ArrowRight && (y == H::ArrowRight || y == H::Head)) ||
                       (x == H::Head && y == H::ArrowLeft) ||
                       (x == H::ArrowLeft && y == H::ArrowLeft);
  if (!head_ok) out.push_back({ViolationKind::V4, pos});
}

inline bool adjacent_valid(const TrackedCell& l, const TrackedCell& r, ConstraintSet cs) {
  if (l.spread || r.spread) return true;
  using K = MainSymbol::Kind;
  const K a = l.main.kind;
  const K b = r.main.kind;
  const bool main_ok = (a == K::Hash && (b == K::Hash || b == K::Input || b == K::Sep)) ||
                       (a == K::Input && (b == K::Input || b == K::Sep)) ||
                       (a == K::Sep && b == K::Pair) || (a == K::Pair && b == K::Pair);
  if (!main_ok) return false;
  if (cs.c_track_monotone && a == K::Pair && l.main.c == 0 && r.main.c == 1) return false;
  using H = HeadMark::Kind;
  const H x = l.head.kind;
  const H y = r.head.kind;
  return (x == H::ArrowRight && (y == H::ArrowRight || y == H::Head)) ||
         (x == H::Head && y == H::ArrowLeft) || (x == H::ArrowLeft && y == H::ArrowLeft);
}

/// Every local violation of the structured subshift inside [from, to].
/// Spread cells are exempt. An empty result means the window is locally valid.
inline std::vector<Violation> validate_local(Configuration& config, const CellCodec& codec,
                                             Position from, Position to,
                                             ConstraintSet constraints = {}) {
  std::vector<Violation> out;
  for (Position i = from; i < to; ++i) {
    check_adjacent(codec.decode(config.at(i)), codec.decode(config.at(i + 1)), i, constraints,
                   out);
  }
  return out;
}

}  // namespace sigca
