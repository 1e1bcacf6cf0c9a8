#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sigca/compiler.hpp"
#include "sigca/configuration.hpp"
#include "sigca/errors.hpp"
#include "sigca/local_rule.hpp"

namespace sigca {

/// Constant-length binary code: symbol s -> 1110 d1 0 d2 0 ... dk 0, where
/// d1..dk are the bits of s, most significant first.
class SubstitutionCode {
 public:
  SubstitutionCode() = default;
  explicit SubstitutionCode(std::uint64_t alphabet_size) : n_(alphabet_size) {
    if (alphabet_size < 2) throw Error("binary recoding needs at least two symbols");
    while ((std::uint64_t(1) << k_) < alphabet_size) ++k_;
  }

  std::uint64_t alphabet_size() const { return n_; }
  unsigned digits() const { return k_; }
  std::size_t length() const { return 4 + 2 * std::size_t(k_); }

  std::uint8_t bit(Cell s, std::size_t i) const {
    if (i < 3) return 1;
    if (i == 3) return 0;
    const std::size_t j = i - 4;
    if (j % 2 == 1) return 0;
    return std::uint8_t((s >> (k_ - 1 - j / 2)) & 1u);
  }

  std::vector<std::uint8_t> codeword(Cell s) const {
    std::vector<std::uint8_t> out(length());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = bit(s, i);
    return out;
  }

  /// Inverse of `codeword` on exactly `length()` bits; nullopt if not a codeword.
  std::optional<Cell> decode(std::span<const std::uint8_t> bits) const {
    if (bits.size() != length() || bits[0] != 1 || bits[1] != 1 || bits[2] != 1 || bits[3] != 0)
      return std::nullopt;
    std::uint64_t s = 0;
    for (unsigned j = 0; j < k_; ++j) {
      if (bits[4 + 2 * j + 1] != 0 || bits[4 + 2 * j] > 1) return std::nullopt;
      s = (s << 1) | bits[4 + 2 * j];
    }
    if (s >= n_) return std::nullopt;
    return Cell(s);
  }

  std::string codeword_string(Cell s) const {
    std::string out;
    for (auto b : codeword(s)) out.push_back(char('0' + b));
    return out;
  }

 private:
  std::uint64_t n_ = 2;
  unsigned k_ = 0;
};

inline bool has_run_of_three(std::span<const std::uint8_t> bits, std::size_t at) {
  return at + 2 < bits.size() && bits[at] && bits[at + 1] && bits[at + 2];
}

/// True iff every concatenation of two codewords contains 111 only at
/// offsets 0 and L. Small alphabets are enumerated pairwise; the general
/// check splits each occurrence into "inside one codeword" and "straddling".
inline bool sync_marker_unique(const SubstitutionCode& code, std::uint64_t enumerate_limit = 256) {
  const std::size_t L = code.length();
  const std::uint64_t n = code.alphabet_size();
  if (n <= enumerate_limit) {
    for (Cell u = 0; u < n; ++u) {
      for (Cell v = 0; v < n; ++v) {
        auto bits = code.codeword(u);
        auto cv = code.codeword(v);
        bits.insert(bits.end(), cv.begin(), cv.end());
        for (std::size_t i = 0; i + 2 < bits.size(); ++i)
          if (has_run_of_three(bits, i) && i != 0 && i != L) return false;
      }
    }
  }
  std::set<std::pair<int, int>> suffixes, prefixes;
  for (Cell s = 0; s < n; ++s) {
    const auto w = code.codeword(s);
    for (std::size_t i = 1; i + 2 < L; ++i)
      if (has_run_of_three(w, i)) return false;
    suffixes.insert({w[L - 2], w[L - 1]});
    prefixes.insert({w[0], w[1]});
  }
  for (auto [s0, s1] : suffixes) {
    for (auto [p0, p1] : prefixes) {
      if (s0 && s1 && p0) return false;  // 111 at L-2
      if (s1 && p0 && p1) return false;  // 111 at L-1
    }
  }
  return true;
}

/// Binary rule simulating one step of `rule` per step on encoded configurations
/// and writing 0 wherever the code cannot be read. The result has radius L(r+1).
inline LocalRule binary_rule(const LocalRule& rule, const SubstitutionCode& code) {
  const std::size_t L = code.length();
  const std::size_t r = std::size_t(rule.radius());
  const std::size_t R = L * (r + 1);
  return LocalRule(2, int(R), [rule, code, L, r, R](std::span<const Cell> nb) -> Cell {
    // nb[R] is the output bit; try every alignment that puts it inside a codeword.
    std::optional<std::size_t> start;
    for (std::size_t s = R + 1 - L; s <= R; ++s) {
      if (nb[s] == 1 && nb[s + 1] == 1 && nb[s + 2] == 1 && nb[s + 3] == 0) {
        if (start) return 0;
        start = s;
      }
    }
    if (!start) return 0;
    std::vector<Cell> cells(2 * r + 1);
    std::vector<std::uint8_t> word(L);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::size_t base = *start + j * L - r * L;
      for (std::size_t i = 0; i < L; ++i) {
        if (nb[base + i] > 1) return 0;
        word[i] = std::uint8_t(nb[base + i]);
      }
      auto c = code.decode(word);
      if (!c) return 0;
      cells[j] = *c;
    }
    return code.bit(rule(cells), R - *start);
  });
}

struct BinarySystem {
  LocalRule rule;
  SubstitutionCode code;
};

inline BinarySystem recode_binary(const LocalRule& rule) {
  SubstitutionCode code(rule.alphabet_size());
  return {binary_rule(rule, code), code};
}

inline BinarySystem recode_binary(const ReductionSystem& sys) { return recode_binary(sys.rule); }

namespace detail {

inline TailGenerator encode_tail(const TailGenerator& tail, const SubstitutionCode& code,
                                 bool leftward) {
  const std::size_t L = code.length();
  auto bit_of = [code, L, leftward](Cell c, std::uint64_t k) {
    return Cell(code.bit(c, leftward ? L - 1 - k % L : k % L));
  };
  if (auto* c = std::get_if<TailGenerator::Constant>(&tail.kind())) {
    std::vector<Cell> word(L);
    for (std::size_t k = 0; k < L; ++k) word[k] = bit_of(c->cell, k);
    return TailGenerator::periodic(std::move(word));
  }
  if (auto* p = std::get_if<TailGenerator::Periodic>(&tail.kind())) {
    std::vector<Cell> word(p->word.size() * L);
    for (std::size_t k = 0; k < word.size(); ++k) word[k] = bit_of(p->word[k / L], k);
    return TailGenerator::periodic(std::move(word));
  }
  const auto& s = std::get<TailGenerator::Stream>(tail.kind());
  auto prog = s.program;
  return TailGenerator::program(
      [prog, bit_of, L](std::uint64_t k, Fuel& fuel) { return bit_of((*prog)(k / L, fuel), k); },
      s.emit_fuel);
}

}  // namespace detail

/// Cell-wise substitution; cell x occupies bits [x*L, x*L + L).
inline Configuration encode_config(const Configuration& config, const SubstitutionCode& code) {
  const std::size_t L = code.length();
  std::vector<Cell> bits;
  bits.reserve(config.size() * L);
  for (Position i = config.lo(); i <= config.hi(); ++i) {
    const Cell c = *config.peek(i);
    for (std::size_t b = 0; b < L; ++b) bits.push_back(code.bit(c, b));
  }
  return Configuration(config.lo() * Position(L), std::move(bits),
                       detail::encode_tail(config.current_left_tail(), code, true),
                       detail::encode_tail(config.current_right_tail(), code, false));
}

struct DecodedWindow {
  std::size_t first_bit = 0;  // offset of the first decoded codeword in the input
  std::vector<Cell> cells;
};

/// Decodes every whole codeword after the first sync marker.
inline DecodedWindow decode_window_at(std::span<const Cell> bits, const SubstitutionCode& code) {
  const std::size_t L = code.length();
  std::size_t s = 0;
  while (s + 3 < bits.size() && !(bits[s] == 1 && bits[s + 1] == 1 && bits[s + 2] == 1))
    ++s;
  if (s + 3 >= bits.size()) throw DecodeError("no sync marker in bit window");
  DecodedWindow out{s, {}};
  std::vector<std::uint8_t> word(L);
  for (; s + L <= bits.size(); s += L) {
    for (std::size_t i = 0; i < L; ++i) word[i] = std::uint8_t(bits[s + i] > 1 ? 2 : bits[s + i]);
    auto c = code.decode(word);
    if (!c) throw DecodeError("bits at offset " + std::to_string(s) + " are not a codeword");
    out.cells.push_back(*c);
  }
  return out;
}

inline std::vector<Cell> decode_window(std::span<const Cell> bits, const SubstitutionCode& code) {
  return decode_window_at(bits, code).cells;
}

inline std::vector<Cell> decode_window(const std::string& bits, const SubstitutionCode& code) {
  std::vector<Cell> v;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw DecodeError("bit string may only contain 0 and 1");
    v.push_back(Cell(ch - '0'));
  }
  return decode_window(v, code);
}

}  // namespace sigca
