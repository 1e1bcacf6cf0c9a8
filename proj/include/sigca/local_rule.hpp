#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "sigca/core_model.hpp"

namespace sigca {

/// A cellular automaton local rule of fixed radius, total on all neighborhoods.
///
/// The transition is held as an executable description; `from_table` builds
/// one from an explicit lookup table for small alphabets.
class LocalRule {
 public:
  using Fn = std::function<Cell(std::span<const Cell>)>;

  LocalRule() = default;
  LocalRule(std::uint64_t alphabet_size, int radius, Fn fn)
      : alphabet_size_(alphabet_size), radius_(radius),
        fn_(std::make_shared<const Fn>(std::move(fn))) {}

  std::uint64_t alphabet_size() const { return alphabet_size_; }
  int radius() const { return radius_; }
  std::size_t width() const { return std::size_t(2 * radius_ + 1); }

  /// `nbhd` has exactly `width()` cells, center at index `radius()`.
  Cell operator()(std::span<const Cell> nbhd) const { return (*fn_)(nbhd); }

  /// Table indexed by the neighborhood read as a base-n number, leftmost digit most significant.
  static LocalRule from_table(std::uint64_t alphabet_size, int radius, std::vector<Cell> table) {
    auto shared = std::make_shared<const std::vector<Cell>>(std::move(table));
    return LocalRule(alphabet_size, radius, [shared, alphabet_size](std::span<const Cell> nb) {
      std::uint64_t key = 0;
      for (Cell c : nb) key = key * alphabet_size + c;
      return (*shared)[key];
    });
  }

  /// Elementary CA (two symbols, radius 1) by Wolfram number.
  static LocalRule elementary(unsigned number) {
    std::vector<Cell> table(8);
    for (unsigned k = 0; k < 8; ++k) table[k] = (number >> k) & 1u;
    return from_table(2, 1, std::move(table));
  }

  static LocalRule identity(std::uint64_t alphabet_size, int radius) {
    return LocalRule(alphabet_size, radius,
                     [radius](std::span<const Cell> nb) { return nb[std::size_t(radius)]; });
  }

  /// Number of neighborhoods, saturating at 2^63.
  std::uint64_t neighborhood_count() const {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < width(); ++i) {
      if (alphabet_size_ != 0 && total > (std::uint64_t(1) << 63) / alphabet_size_)
        return std::uint64_t(1) << 63;
      total *= alphabet_size_;
    }
    return total;
  }

  /// Writes "alphabet n", "radius r" and one "i1 .. ik -> j" line per
  /// neighborhood in lexicographic order. Throws TableTooLarge above `max_rows`.
  void export_table(std::ostream& out, std::uint64_t max_rows = std::uint64_t(1) << 20) const {
    const std::uint64_t rows = neighborhood_count();
    if (rows > max_rows) {
      throw TableTooLarge("rule table has " + std::to_string(alphabet_size_) + "^" +
                          std::to_string(width()) + " rows, above the bound of " +
                          std::to_string(max_rows));
    }
    out << "alphabet " << alphabet_size_ << "\n" << "radius " << radius_ << "\n";
    std::vector<Cell> nb(width(), 0);
    for (std::uint64_t row = 0; row < rows; ++row) {
      for (std::size_t i = 0; i < nb.size(); ++i) out << nb[i] << ' ';
      out << "-> " << (*this)(nb) << "\n";
      for (std::size_t i = nb.size(); i-- > 0;) {
        if (++nb[i] < alphabet_size_) break;
        nb[i] = 0;
      }
    }
  }

 private:
  std::uint64_t alphabet_size_ = 0;
  int radius_ = 0;
  std::shared_ptr<const Fn> fn_;
};

}  // namespace sigca
