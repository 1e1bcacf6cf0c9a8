#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sigca/core_model.hpp"

namespace sigca {

inline constexpr std::uint64_t kDefaultEmitFuel = 1'000'000;

/// Step budget handed to a generator program for a single emit.
class Fuel {
 public:
  explicit Fuel(std::uint64_t budget) : remaining_(budget) {}

  void charge(std::uint64_t steps = 1) {
    if (steps > remaining_) {
      remaining_ = 0;
      throw GeneratorStuck("generator program exceeded its fuel budget");
    }
    remaining_ -= steps;
  }
  std::uint64_t remaining() const { return remaining_; }

 private:
  std::uint64_t remaining_;
};

/// Semi-infinite stream of cells addressed by offset 0, 1, 2, ...
class TailGenerator {
 public:
  using Program = std::function<Cell(std::uint64_t, Fuel&)>;

  struct Constant {
    Cell cell;
  };
  struct Periodic {
    std::vector<Cell> word;
  };
  struct Stream {
    std::shared_ptr<const Program> program;
    std::uint64_t emit_fuel;
  };

  TailGenerator() : kind_(Constant{kSpreadCell}) {}

  static TailGenerator constant(Cell c) { return TailGenerator(Constant{c}); }
  static TailGenerator periodic(std::vector<Cell> word) {
    if (word.empty()) throw Error("periodic tail needs a nonempty word");
    return TailGenerator(Periodic{std::move(word)});
  }
  /// `program` must be deterministic; it charges `Fuel` for its work.
  static TailGenerator program(Program program, std::uint64_t emit_fuel = kDefaultEmitFuel) {
    return TailGenerator(Stream{std::make_shared<const Program>(std::move(program)), emit_fuel});
  }

  Cell at(std::uint64_t offset) const {
    if (auto* c = std::get_if<Constant>(&kind_)) return c->cell;
    if (auto* p = std::get_if<Periodic>(&kind_)) return p->word[offset % p->word.size()];
    const auto& s = std::get<Stream>(kind_);
    Fuel fuel(s.emit_fuel);
    return (*s.program)(offset, fuel);
  }

  bool is_program() const { return std::holds_alternative<Stream>(kind_); }
  /// Period of a constant or periodic tail; 0 for programs.
  std::size_t period() const {
    if (std::holds_alternative<Constant>(kind_)) return 1;
    if (auto* p = std::get_if<Periodic>(&kind_)) return p->word.size();
    return 0;
  }
  const std::variant<Constant, Periodic, Stream>& kind() const { return kind_; }

  /// Tail that starts `skip` cells later than this one.
  TailGenerator dropped(std::uint64_t skip) const {
    if (skip == 0 || std::holds_alternative<Constant>(kind_)) return *this;
    if (auto* p = std::get_if<Periodic>(&kind_)) {
      std::vector<Cell> w(p->word.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = p->word[(i + skip) % w.size()];
      return periodic(std::move(w));
    }
    auto base = std::get<Stream>(kind_);
    auto prog = base.program;
    return program([prog, skip](std::uint64_t i, Fuel& f) { return (*prog)(i + skip, f); },
                   base.emit_fuel);
  }

 private:
  explicit TailGenerator(std::variant<Constant, Periodic, Stream> k) : kind_(std::move(k)) {}
  std::variant<Constant, Periodic, Stream> kind_;
};

/// Bi-infinite configuration: a materialized window [lo, hi] plus lazy tails.
///
/// The left tail emits position `left_base - k` at offset k and the right tail
/// emits `right_base + k`. Bases are fixed at construction, so widening the
/// window never changes an already observed cell.
class Configuration {
 public:
  Configuration() = default;
  Configuration(Position lo, std::vector<Cell> cells, TailGenerator left, TailGenerator right)
      : lo_(lo), cells_(cells.begin(), cells.end()), left_(std::move(left)),
        right_(std::move(right)), left_base_(lo - 1),
        right_base_(lo + Position(cells_.size())) {}

  Position lo() const { return lo_; }
  Position hi() const { return lo_ + Position(cells_.size()) - 1; }
  std::size_t size() const { return cells_.size(); }
  bool in_window(Position i) const { return i >= lo_ && i <= hi(); }

  /// Cell at `i`, materializing and widening the window when needed.
  Cell at(Position i) {
    widen_to(i);
    return cells_[std::size_t(i - lo_)];
  }
  /// Cell at `i` if already materialized.
  const Cell* peek(Position i) const {
    return in_window(i) ? &cells_[std::size_t(i - lo_)] : nullptr;
  }
  /// Cell at `i` without materializing it.
  Cell original_at(Position i) const {
    if (in_window(i)) return cells_[std::size_t(i - lo_)];
    if (i <= left_base_) return left_.at(std::uint64_t(left_base_ - i));
    return right_.at(std::uint64_t(i - right_base_));
  }

  void set(Position i, Cell c) {
    widen_to(i);
    cells_[std::size_t(i - lo_)] = c;
  }

  void widen_to(Position i) {
    while (i < lo_) {
      --lo_;
      cells_.push_front(left_.at(std::uint64_t(left_base_ - lo_)));
    }
    while (i > hi()) cells_.push_back(right_.at(std::uint64_t(hi() + 1 - right_base_)));
  }

  std::vector<Cell> window(Position from, Position to) {
    std::vector<Cell> out;
    for (Position i = from; i <= to; ++i) out.push_back(at(i));
    return out;
  }

  const TailGenerator& left_tail() const { return left_; }
  const TailGenerator& right_tail() const { return right_; }
  Position left_base() const { return left_base_; }
  Position right_base() const { return right_base_; }

  /// Left tail re-based to emit from `lo() - 1` leftward.
  TailGenerator current_left_tail() const {
    return left_.dropped(std::uint64_t(left_base_ - (lo_ - 1)));
  }
  TailGenerator current_right_tail() const {
    return right_.dropped(std::uint64_t(hi() + 1 - right_base_));
  }

 private:
  Position lo_ = 0;
  std::deque<Cell> cells_;
  TailGenerator left_;
  TailGenerator right_;
  Position left_base_ = -1;
  Position right_base_ = 0;
};

/// Lookup of a cell by absolute position; materializes from tails as needed.
inline Cell cell_at(Configuration& config, Position i) { return config.at(i); }

}  // namespace sigca
