#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sigca/errors.hpp"

namespace sigca {

/// Infinite, deterministic, index-addressable bit sequence. Used for the
/// guessed set C (chi_C) and the Skolem stream on the b-track.
class BitStream {
 public:
  using Fn = std::function<bool(std::uint64_t)>;

  BitStream() : BitStream(constant(false)) {}
  BitStream(Fn fn, std::string description)
      : fn_(std::make_shared<const Fn>(std::move(fn))), description_(std::move(description)) {}

  bool operator()(std::uint64_t i) const { return (*fn_)(i); }
  const std::string& description() const { return description_; }

  static BitStream constant(bool bit) {
    return BitStream([bit](std::uint64_t) { return bit; }, bit ? "ones" : "zeros");
  }

  /// `word` over {'0','1'}, repeated forever.
  static BitStream periodic(const std::string& word) {
    auto bits = parse_bits(word);
    if (bits.empty()) throw Error("periodic bit stream needs a nonempty word");
    return BitStream([bits](std::uint64_t i) { return bits[i % bits.size()] != 0; },
                     "periodic(" + word + ")");
  }

  /// `word` followed by `rest`.
  static BitStream prefix(const std::string& word, BitStream rest) {
    auto bits = parse_bits(word);
    std::string desc = "prefix(" + word + ", " + rest.description() + ")";
    return BitStream(
        [bits, rest](std::uint64_t i) {
          return i < bits.size() ? bits[std::size_t(i)] != 0 : rest(i - bits.size());
        },
        desc);
  }

  /// Concatenated unary codes 1^{l_1} 0 1^{l_2} 0 ... with l_i = slope * i + offset, i >= 1.
  static BitStream unary_codes(std::uint64_t slope, std::uint64_t offset) {
    // Code i starts at  slope * (i-1) i / 2 + (offset + 1)(i-1).
    auto start = [slope, offset](std::uint64_t i) {
      return slope * ((i - 1) * i / 2) + (offset + 1) * (i - 1);
    };
    return BitStream(
        [slope, offset, start](std::uint64_t n) {
          std::uint64_t lo = 1, hi = 2;
          while (start(hi) <= n) hi *= 2;
          while (hi - lo > 1) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            (start(mid) <= n ? lo : hi) = mid;
          }
          const std::uint64_t len = slope * lo + offset;
          return n - start(lo) < len;
        },
        "unary(" + std::to_string(slope) + "*i+" + std::to_string(offset) + ")");
  }

  static std::vector<std::uint8_t> parse_bits(const std::string& word) {
    std::vector<std::uint8_t> bits;
    for (char ch : word) {
      if (ch != '0' && ch != '1') throw Error("bit word may only contain 0 and 1: '" + word + "'");
      bits.push_back(std::uint8_t(ch - '0'));
    }
    return bits;
  }

 private:
  std::shared_ptr<const Fn> fn_;
  std::string description_;
};

}  // namespace sigca
