#pragma once

#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sigca/bitstream.hpp"
#include "sigca/checker.hpp"
#include "sigca/configuration.hpp"
#include "sigca/core_model.hpp"
#include "sigca/local_rule.hpp"
#include "sigca/turing.hpp"
#include "sigca/validate.hpp"

namespace sigca {

inline constexpr int kEmbeddingRadius = 2;

/// Codec for the cells of a CA simulating `tm`. `work_size` is the helper
/// alphabet size when the tape symbols follow the main x helper layout.
inline CellCodec codec_for(const TMSpec& tm, std::uint32_t work_size = 0) {
  return CellCodec{tm.num_symbols(), tm.num_states(), work_size};
}

/// Radius-2 CA in which the head cell applies the transition and hands the
/// head over to its neighbour; cells two or more away from the head keep their value.
inline LocalRule embed_tm(std::shared_ptr<const TMSpec> tm) {
  for (StateId q = 0; q < tm->num_states(); ++q) {
    if (tm->halting(q)) continue;
    for (Symbol s = 0; s < tm->num_symbols(); ++s) {
      if (!tm->lookup(q, s))
        throw IllFormedMachine("state '" + tm->name(q) + "' has no transition on symbol " +
                               std::to_string(s));
    }
  }
  const CellCodec codec = codec_for(*tm);
  return LocalRule(codec.alphabet_size(), kEmbeddingRadius, [tm, codec](std::span<const Cell> nb) {
    const Cell self = nb[2];
    if (self == kSpreadCell) return self;
    auto moving = [&](Cell c) -> const Transition* {
      if (c == kSpreadCell) return nullptr;
      const HeadMark h = codec.head_of(c);
      if (!h.is_head() || tm->halting(h.state)) return nullptr;
      return tm->lookup(h.state, codec.symbol_of(c));
    };
    const Symbol sym = codec.symbol_of(self);
    if (codec.head_of(self).is_head()) {
      const Transition* t = moving(self);
      if (!t) return self;
      const HeadMark mark = t->move == Move::Stay    ? HeadMark::head(t->next)
                            : t->move == Move::Right ? HeadMark::right()
                                                     : HeadMark::left();
      return codec.encode(t->written(sym), mark);
    }
    if (const Transition* t = moving(nb[1]); t && t->move == Move::Right)
      return codec.encode(sym, HeadMark::head(t->next));
    if (const Transition* t = moving(nb[3]); t && t->move == Move::Left)
      return codec.encode(sym, HeadMark::head(t->next));
    return self;
  });
}

/// A forbidden pattern: `matches` sees exactly `width` consecutive cells.
struct ForbiddenPattern {
  std::string name;
  std::size_t width = 1;
  std::function<bool(std::span<const Cell>)> matches;
};

/// Spread is absorbing and moves one cell per step; any forbidden pattern
/// inside the neighbourhood also yields Spread. Otherwise defers to `rule`.
inline LocalRule add_spreading(const LocalRule& rule, std::vector<ForbiddenPattern> patterns) {
  for (const auto& p : patterns) {
    if (p.width == 0 || p.width > rule.width())
      throw PatternWidth("pattern '" + p.name + "' has width " + std::to_string(p.width) +
                         ", the rule sees " + std::to_string(rule.width()) + " cells");
  }
  auto shared = std::make_shared<const std::vector<ForbiddenPattern>>(std::move(patterns));
  const std::size_t r = std::size_t(rule.radius());
  return LocalRule(rule.alphabet_size(), rule.radius(), [rule, shared, r](std::span<const Cell> nb) {
    if (nb[r] == kSpreadCell || (r > 0 && (nb[r - 1] == kSpreadCell || nb[r + 1] == kSpreadCell)))
      return kSpreadCell;
    for (const auto& p : *shared) {
      for (std::size_t off = 0; off + p.width <= nb.size(); ++off) {
        if (p.matches(nb.subspan(off, p.width))) return kSpreadCell;
      }
    }
    return rule(nb);
  });
}

/// The constraints of the structured subshift plus the spread-trigger head state.
inline std::vector<ForbiddenPattern> checker_patterns(const CellCodec& codec, ConstraintSet cs,
                                                      StateId trigger) {
  std::vector<ForbiddenPattern> out;
  out.push_back({"adjacent", 2, [codec, cs](std::span<const Cell> p) {
                   if (p[0] == kSpreadCell || p[1] == kSpreadCell) return false;
                   return !adjacent_valid(codec.decode(p[0]), codec.decode(p[1]), cs);
                 }});
  out.push_back({"spread-trigger", 1, [codec, trigger](std::span<const Cell> p) {
                   return codec.state_of(p[0]) == trigger;
                 }});
  return out;
}

/// Output of the compilation pipeline for one predicate and variant.
struct ReductionSystem {
  PredicateProgram predicate;
  CheckerVariant variant = CheckerVariant::Unary;
  std::shared_ptr<const CheckerMachine> checker;
  CellCodec codec;
  LocalRule embedding;  // embed_tm alone, without spreading
  LocalRule rule;       // the full CA
  ConstraintSet constraints;

  StateId q0() const { return checker->q0; }
  StateId dead() const { return checker->dead; }
  std::uint32_t helper_size() const { return codec.work_size; }
};

/// build_checker, embed_tm and add_spreading in sequence.
inline ReductionSystem build_reduction_ca(const PredicateProgram& pred, CheckerVariant variant) {
  ReductionSystem sys;
  sys.predicate = pred;
  sys.variant = variant;
  sys.checker = std::make_shared<const CheckerMachine>(build_checker(pred, variant));
  auto tm = std::shared_ptr<const TMSpec>(sys.checker, &sys.checker->tm);
  sys.codec = codec_for(*tm, sys.checker->layout.work_size());
  sys.embedding = embed_tm(tm);
  sys.constraints = ConstraintSet{variant == CheckerVariant::Unary};
  sys.rule = add_spreading(sys.embedding,
                           checker_patterns(sys.codec, sys.constraints, sys.checker->spread_trigger));
  return sys;
}

/// Parses a word over {0,1}; anything else is rejected.
inline std::vector<int> parse_word(const std::string& w) {
  std::vector<int> out;
  for (char ch : w) {
    if (ch != '0' && ch != '1') throw Error("word may only contain 0 and 1: '" + w + "'");
    out.push_back(ch - '0');
  }
  return out;
}

/// phi with an explicit right tail of pair cells (arrows pointing left, blank work).
inline Configuration phi_with_tail(const ReductionSystem& sys, const std::string& word,
                                   TailGenerator pairs) {
  const auto w = parse_word(word);
  const CellCodec& codec = sys.codec;
  const Cell hash = codec.encode(TrackedCell::of(MainSymbol::hash(), HeadMark::right()));
  std::vector<Cell> cells{hash};
  for (std::size_t i = 0; i < w.size(); ++i) {
    const HeadMark h = i == 0 ? HeadMark::head(sys.q0()) : HeadMark::left();
    cells.push_back(codec.encode(TrackedCell::of(MainSymbol::input(w[i]), h)));
  }
  const HeadMark sep_head = w.empty() ? HeadMark::head(sys.q0()) : HeadMark::left();
  cells.push_back(codec.encode(TrackedCell::of(MainSymbol::sep(), sep_head)));
  return Configuration(-1, std::move(cells), TailGenerator::constant(hash), std::move(pairs));
}

inline Cell pair_cell(const CellCodec& codec, bool b, bool c) {
  return codec.encode(TrackedCell::of(MainSymbol::pair(b, c), HeadMark::left()));
}

/// The b-track at pair j: chi_C(j/2) for even j, Skolem bit (j-1)/2 for odd j.
inline BitStream interleave(BitStream c_set, BitStream skolem) {
  return BitStream(
      [c_set, skolem](std::uint64_t j) { return j % 2 == 0 ? c_set(j / 2) : skolem((j - 1) / 2); },
      "interleave(" + c_set.description() + ", " + skolem.description() + ")");
}

/// phi with the b- and c-tracks given as raw streams over pair indices.
inline Configuration phi_tracks(const ReductionSystem& sys, const std::string& word, BitStream b_track,
                                BitStream c_track = BitStream::constant(false)) {
  const CellCodec codec = sys.codec;
  return phi_with_tail(sys, word,
                       TailGenerator::program([codec, b_track, c_track](std::uint64_t j, Fuel& fuel) {
                         fuel.charge();
                         return pair_cell(codec, b_track(j), c_track(j));
                       }));
}

/// phi with periodic b- and c-tracks; the tail is periodic with the lcm period.
inline Configuration phi_periodic(const ReductionSystem& sys, const std::string& word,
                                  const std::string& b_word, const std::string& c_word = "0") {
  const auto b = BitStream::parse_bits(b_word);
  const auto c = BitStream::parse_bits(c_word);
  if (b.empty() || c.empty()) throw Error("periodic tracks need nonempty words");
  const std::size_t n = std::lcm(b.size(), c.size());
  std::vector<Cell> tail(n);
  for (std::size_t j = 0; j < n; ++j) tail[j] = pair_cell(sys.codec, b[j % b.size()], c[j % c.size()]);
  return phi_with_tail(sys, word, TailGenerator::periodic(std::move(tail)));
}

/// The reduction map: w -> (# w |) x (-> q0 <-^{|w|}) at the origin, with the
/// b-track interleaving chi_C (even pair indices) and the Skolem stream (odd ones).
/// `c_track` defaults to all zeros.
inline Configuration phi(const ReductionSystem& sys, const std::string& word, BitStream c_set,
                         BitStream skolem, BitStream c_track = BitStream::constant(false)) {
  return phi_tracks(sys, word, interleave(std::move(c_set), std::move(skolem)), std::move(c_track));
}

}  // namespace sigca
