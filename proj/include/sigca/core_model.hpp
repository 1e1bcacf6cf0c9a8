#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sigca/errors.hpp"

namespace sigca {

/// Alphabet index of a CA cell. Index 0 is always the spreading state.
using Cell = std::uint32_t;
/// Signed cell coordinate; 0 is the first letter of the input word.
using Position = std::int64_t;
/// Tape-symbol index of a guest Turing machine.
using Symbol = std::uint32_t;
using StateId = std::uint32_t;

inline constexpr Cell kSpreadCell = 0;

// Main track of the structured subshift: # ... # a_0 .. a_j | (b_0,c_0) (b_1,c_1) ...
struct MainSymbol {
  enum class Kind : std::uint8_t { Hash, Sep, Input, Pair };

  Kind kind = Kind::Hash;
  std::uint8_t a = 0;
  std::uint8_t b = 0;
  std::uint8_t c = 0;

  static constexpr MainSymbol hash() { return {Kind::Hash, 0, 0, 0}; }
  static constexpr MainSymbol sep() { return {Kind::Sep, 0, 0, 0}; }
  static constexpr MainSymbol input(int bit) { return {Kind::Input, std::uint8_t(bit & 1), 0, 0}; }
  static constexpr MainSymbol pair(int b, int c) {
    return {Kind::Pair, 0, std::uint8_t(b & 1), std::uint8_t(c & 1)};
  }

  bool is_hash() const { return kind == Kind::Hash; }
  bool is_sep() const { return kind == Kind::Sep; }
  bool is_input() const { return kind == Kind::Input; }
  bool is_pair() const { return kind == Kind::Pair; }

  static constexpr std::uint32_t kCount = 8;

  /// Dense index: # = 0, | = 1, input a = 2 + a, pair (b,c) = 4 + 2b + c.
  constexpr std::uint32_t index() const {
    switch (kind) {
      case Kind::Hash: return 0;
      case Kind::Sep: return 1;
      case Kind::Input: return 2u + a;
      case Kind::Pair: return 4u + 2u * b + c;
    }
    return 0;
  }

  static constexpr MainSymbol from_index(std::uint32_t i) {
    if (i == 0) return hash();
    if (i == 1) return sep();
    if (i < 4) return input(int(i - 2));
    return pair(int((i - 4) >> 1), int((i - 4) & 1));
  }

  friend constexpr bool operator==(const MainSymbol& x, const MainSymbol& y) {
    return x.index() == y.index();
  }
};

struct HeadMark {
  enum class Kind : std::uint8_t { ArrowRight, ArrowLeft, Head };

  Kind kind = Kind::ArrowRight;
  StateId state = 0;

  static constexpr HeadMark right() { return {Kind::ArrowRight, 0}; }
  static constexpr HeadMark left() { return {Kind::ArrowLeft, 0}; }
  static constexpr HeadMark head(StateId q) { return {Kind::Head, q}; }

  bool is_head() const { return kind == Kind::Head; }

  constexpr std::uint32_t index() const {
    switch (kind) {
      case Kind::ArrowRight: return 0;
      case Kind::ArrowLeft: return 1;
      case Kind::Head: return 2u + state;
    }
    return 0;
  }
  static constexpr HeadMark from_index(std::uint32_t i) {
    if (i == 0) return right();
    if (i == 1) return left();
    return head(i - 2);
  }

  friend constexpr bool operator==(const HeadMark& x, const HeadMark& y) {
    return x.index() == y.index();
  }
};

/// One cell of the product subshift, or the spreading state.
struct TrackedCell {
  bool spread = false;
  MainSymbol main{};
  HeadMark head{};
  std::uint32_t work = 0;  // helper symbol, 0 is blank

  static TrackedCell spreading() { return TrackedCell{true, {}, {}, 0}; }
  static TrackedCell of(MainSymbol m, HeadMark h, std::uint32_t w = 0) { return {false, m, h, w}; }

  friend bool operator==(const TrackedCell& x, const TrackedCell& y) {
    if (x.spread || y.spread) return x.spread == y.spread;
    return x.main == y.main && x.head == y.head && x.work == y.work;
  }
};

/// Bijection between cell indices and (tape symbol, head mark) pairs.
///
/// A non-spread cell is `1 + symbol * (num_states + 2) + head.index()`. When
/// `work_size` is nonzero the tape symbol further splits as
/// `main.index() * work_size + work`, which is the layout every compiled
/// reduction system uses.
struct CellCodec {
  std::uint32_t num_symbols = 0;
  std::uint32_t num_states = 0;
  std::uint32_t work_size = 0;

  std::uint32_t head_marks() const { return num_states + 2; }
  std::uint64_t alphabet_size() const {
    return 1 + std::uint64_t(num_symbols) * head_marks();
  }

  Cell encode(Symbol s, HeadMark h) const {
    return Cell(1 + std::uint64_t(s) * head_marks() + h.index());
  }
  Symbol symbol_of(Cell c) const { return Symbol((c - 1) / head_marks()); }
  HeadMark head_of(Cell c) const { return HeadMark::from_index((c - 1) % head_marks()); }
  std::optional<StateId> state_of(Cell c) const {
    if (c == kSpreadCell) return std::nullopt;
    auto h = head_of(c);
    if (!h.is_head()) return std::nullopt;
    return h.state;
  }
  Cell with_head(Cell c, HeadMark h) const { return encode(symbol_of(c), h); }

  Symbol tape_symbol(MainSymbol m, std::uint32_t work) const {
    return m.index() * work_size + work;
  }
  MainSymbol main_of_symbol(Symbol s) const { return MainSymbol::from_index(s / work_size); }
  std::uint32_t work_of_symbol(Symbol s) const { return s % work_size; }

  Cell encode(const TrackedCell& t) const {
    if (t.spread) return kSpreadCell;
    return encode(tape_symbol(t.main, t.work), t.head);
  }
  TrackedCell decode(Cell c) const {
    if (c == kSpreadCell) return TrackedCell::spreading();
    Symbol s = symbol_of(c);
    return TrackedCell::of(main_of_symbol(s), head_of(c), work_of_symbol(s));
  }
  MainSymbol main_of(Cell c) const { return main_of_symbol(symbol_of(c)); }
  std::uint32_t work_of(Cell c) const { return work_of_symbol(symbol_of(c)); }
};

}  // namespace sigca
