#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "sigca/bitstream.hpp"
#include "sigca/compiler.hpp"
#include "sigca/predicate_library.hpp"
#include "sigca/simulator.hpp"

namespace sigca {

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;
inline constexpr std::size_t kDefaultMinRecurrences = 3;

/// Generators for the guessed set C, the Skolem stream and the c-track.
struct Witness {
  BitStream c_set = BitStream::constant(false);
  BitStream skolem = BitStream::unary_codes(1, 0);
  BitStream c_track = BitStream::constant(false);

  std::string describe() const {
    return "C=" + c_set.description() + " skolem=" + skolem.description() +
           (c_track.description() == "zeros" ? "" : " c=" + c_track.description());
  }
};

/// chi_C(j) = bit j of w, and 0 beyond |w|.
inline BitStream bits_of_word(const std::string& word) {
  auto bits = parse_word(word);
  return BitStream([bits](std::uint64_t j) { return j < bits.size() && bits[std::size_t(j)] != 0; },
                   "word(" + word + ")");
}

/// The witness under which a true instance of a bundled family signals forever.
inline Witness default_witness(const std::string& family, const std::string& word) {
  Witness w;
  if (family == "HALT-SEARCH") w.skolem = BitStream::unary_codes(1, 8);
  if (family == "MEMBER") w.c_set = bits_of_word(word);
  return w;
}

using WitnessFn = std::function<Witness(const std::string&)>;

struct WitnessMode {
  WitnessFn witness;  // empty: the family default
};
/// Every periodic b-track of period <= max_period with an all-zero c-track.
/// Bounded and incomplete by nature.
struct SearchPeriodicMode {
  std::size_t max_period = 3;
};
using ClassifyMode = std::variant<WitnessMode, SearchPeriodicMode>;

enum class Verdict { Recurrent, Dead, Spread, Undetermined };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Recurrent: return "Recurrent";
    case Verdict::Dead: return "Dead";
    case Verdict::Spread: return "Spread";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

struct Classification {
  Verdict verdict = Verdict::Undetermined;
  std::size_t count = 0;           // signaling times seen, t = 0 included
  std::optional<std::uint64_t> at;  // step of the Dead or Spread event
  std::uint64_t fuel_used = 0;
  std::string witness;
  std::vector<std::uint64_t> signaling_times;

  std::string label() const {
    switch (verdict) {
      case Verdict::Recurrent: return "Recurrent(" + std::to_string(count) + ")";
      case Verdict::Dead: return "Dead@" + std::to_string(*at);
      case Verdict::Spread: return "Spread@" + std::to_string(*at);
      case Verdict::Undetermined: return "Undetermined";
    }
    return "?";
  }
};

/// Runs phi(w) until `min_recurrences` signaling times, the head reaching
/// dead, Spread reaching the probe window, or the fuel running out.
inline Classification classify_configuration(const ReductionSystem& sys, const std::string& word,
                                             const Configuration& start, std::uint64_t fuel,
                                             std::size_t min_recurrences) {
  Probes probes;
  probes.signal = signal_probe(sys, word);
  probes.spread_cell = kSpreadCell;
  probes.stop_at_spread = true;
  probes.stop_after_signals = min_recurrences;
  const CellCodec codec = sys.codec;
  const StateId dead = sys.dead();
  probes.stop_on_cell = [codec, dead](Position, Cell c) { return codec.state_of(c) == dead; };
  const TraceReport rep = run_trace(sys.rule, start, fuel, probes);

  Classification out;
  out.count = rep.signaling_times.size();
  out.signaling_times = rep.signaling_times;
  out.fuel_used = rep.steps_executed;
  if (out.count >= min_recurrences) {
    out.verdict = Verdict::Recurrent;
  } else if (rep.stop == StopReason::Cell) {
    out.verdict = Verdict::Dead;
    out.at = rep.steps_executed;
  } else if (rep.spread_detected_at) {
    out.verdict = Verdict::Spread;
    out.at = rep.spread_detected_at;
  }
  return out;
}

inline int verdict_rank(Verdict v) {
  switch (v) {
    case Verdict::Recurrent: return 0;
    case Verdict::Dead: return 1;
    case Verdict::Spread: return 2;
    case Verdict::Undetermined: return 3;
  }
  return 4;
}

inline Classification classify_word(const ReductionSystem& sys, const std::string& word,
                                     const ClassifyMode& mode, std::uint64_t fuel = kDefaultFuel,
                                     std::size_t min_recurrences = kDefaultMinRecurrences) {
  parse_word(word);
  if (auto* wm = std::get_if<WitnessMode>(&mode)) {
    const Witness w = wm->witness ? wm->witness(word) : default_witness(sys.predicate.name, word);
    Classification c = classify_configuration(sys, word, phi(sys, word, w.c_set, w.skolem, w.c_track),
                                              fuel, min_recurrences);
    c.witness = w.describe();
    return c;
  }
  const auto& sp = std::get<SearchPeriodicMode>(mode);
  if (sp.max_period < 1) throw Error("max-period must be at least 1");
  std::optional<Classification> best;
  for (std::size_t len = 1; len <= sp.max_period; ++len) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << len); ++bits) {
      std::string b;
      for (std::size_t i = 0; i < len; ++i) b.push_back((bits >> i) & 1 ? '1' : '0');
      Classification c = classify_configuration(sys, word, phi_periodic(sys, word, b), fuel, min_recurrences);
      c.witness = "b=periodic(" + b + ")";
      if (!best || verdict_rank(c.verdict) < verdict_rank(best->verdict)) best = c;
      if (best->verdict == Verdict::Recurrent) return *best;
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Brute-force oracle for the bundled families.

enum class OracleAnswer { True, False, Unknown };

inline const char* to_string(OracleAnswer a) {
  switch (a) {
    case OracleAnswer::True: return "True";
    case OracleAnswer::False: return "False";
    case OracleAnswer::Unknown: return "Unknown";
  }
  return "?";
}

struct OracleBounds {
  std::uint64_t m_max = 6;
  std::uint64_t l_max = 24;
  std::size_t c_prefix_max = 8;
  std::uint64_t fuel = 100'000;  // per direct evaluation and for the guest machine
};

inline bool is_bundled_family(const std::string& family) {
  static const std::set<std::string> names{"PARITY", "MEMBER", "HALT-SEARCH", "ACCEPT_ALL", "REJECT_ALL"};
  return names.count(family) > 0;
}

namespace detail {

/// Per m in 1..m_max: Accept for some l <= l_max, all Reject, or neither.
enum class MResult { Accepts, Rejects, Unclear };

inline MResult some_l_accepts(const PredicateProgram& pred, const BitOracle& c, std::uint64_t m,
                              const std::vector<int>& w, const OracleBounds& b) {
  bool all_reject = true;
  for (std::uint64_t l = 0; l <= b.l_max; ++l) {
    const auto r = eval_predicate_direct(pred, c, m, l, w, b.fuel);
    if (r == PredicateResult::Accept) return MResult::Accepts;
    if (r != PredicateResult::Reject) all_reject = false;
  }
  return all_reject ? MResult::Rejects : MResult::Unclear;
}

inline bool all_m_accept(const PredicateProgram& pred, const BitOracle& c, const std::vector<int>& w,
                         const OracleBounds& b) {
  for (std::uint64_t m = 1; m <= b.m_max; ++m)
    if (some_l_accepts(pred, c, m, w, b) != MResult::Accepts) return false;
  return true;
}

enum class GuestOutcome { Halts, Loops, Unknown };

/// Runs the HALT-SEARCH guest on w, detecting repeated configurations.
inline GuestOutcome run_guest(const std::vector<int>& w, std::uint64_t fuel) {
  const TMSpec guest = halt_search_guest();
  TmConfig cfg{guest.q0, 0, Tape([w](Position p) {
                 return p >= 0 && p < Position(w.size()) ? Symbol(w[std::size_t(p)] + 1) : Symbol(0);
               })};
  std::set<std::tuple<StateId, Position, std::map<Position, Symbol>>> seen;
  for (std::uint64_t step = 0; step <= fuel; ++step) {
    if (guest.halting(cfg.state)) return guest.role(cfg.state) == StateRole::Accept ? GuestOutcome::Halts
                                                                                   : GuestOutcome::Loops;
    std::map<Position, Symbol> tape(cfg.tape.writes().begin(), cfg.tape.writes().end());
    if (!seen.emplace(cfg.state, cfg.head, std::move(tape)).second) return GuestOutcome::Loops;
    tm_step(guest, cfg);
  }
  return GuestOutcome::Unknown;
}

}  // namespace detail

/// Decides (exists C)(forall m)(exists l) R(C, m, l, w) for the bundled
/// families by bounded search with the direct evaluator.
inline OracleAnswer brute_force_oracle(const std::string& family, const std::string& word,
                                       const OracleBounds& b = {}) {
  if (!is_bundled_family(family)) throw Error("no brute-force oracle for family '" + family + "'");
  const PredicateProgram pred = bundled_predicate(family);
  const auto w = parse_word(word);
  const BitOracle empty = [](std::uint64_t) { return false; };
  using detail::MResult;

  if (family == "MEMBER") {
    // C only matters on 1..|w|; try every prefix, the rest empty.
    const std::size_t n = std::min(b.c_prefix_max, std::size_t(63));
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << n); ++bits) {
      const BitOracle c = [bits, n](std::uint64_t j) { return j < n && ((bits >> j) & 1); };
      if (detail::all_m_accept(pred, c, w, b)) return OracleAnswer::True;
    }
    return OracleAnswer::Unknown;
  }
  if (family == "HALT-SEARCH") {
    switch (detail::run_guest(w, b.fuel)) {
      case detail::GuestOutcome::Halts:
        return detail::all_m_accept(pred, empty, w, b) ? OracleAnswer::True : OracleAnswer::Unknown;
      case detail::GuestOutcome::Loops:
        return detail::some_l_accepts(pred, empty, 1, w, b) == MResult::Rejects ? OracleAnswer::False
                                                                                 : OracleAnswer::Unknown;
      case detail::GuestOutcome::Unknown: return OracleAnswer::Unknown;
    }
  }
  // PARITY and the constant predicates ignore C; an m rejected for every l >= m is a refutation.
  for (std::uint64_t m = 1; m <= b.m_max; ++m) {
    switch (detail::some_l_accepts(pred, empty, m, w, b)) {
      case MResult::Accepts: break;
      case MResult::Rejects: return b.l_max >= m ? OracleAnswer::False : OracleAnswer::Unknown;
      case MResult::Unclear: return OracleAnswer::Unknown;
    }
  }
  return OracleAnswer::True;
}

// ---------------------------------------------------------------------------
// Batch runs.

struct SampleRow {
  std::string word;
  Classification classification;
  std::optional<OracleAnswer> oracle;
  std::optional<bool> agree;
};

inline std::optional<bool> agrees(OracleAnswer o, Verdict v) {
  if (o == OracleAnswer::Unknown) return std::nullopt;
  return o == OracleAnswer::True ? v == Verdict::Recurrent : v == Verdict::Dead;
}

/// Every word over {0,1} of length <= n, shortest first, then lexicographic.
inline std::vector<std::string> all_words_up_to(std::size_t n) {
  std::vector<std::string> out{""};
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << len); ++bits) {
      std::string w;
      for (std::size_t i = len; i-- > 0;) w.push_back((bits >> i) & 1 ? '1' : '0');
      out.push_back(w);
    }
  }
  return out;
}

/// Classifies each word (concurrently) and compares with the oracle when the
/// predicate is a bundled family. Rows follow the input order.
inline std::vector<SampleRow> sample_language(const ReductionSystem& sys, const std::vector<std::string>& words,
                                              const ClassifyMode& mode, std::uint64_t fuel = kDefaultFuel,
                                              std::size_t min_recurrences = kDefaultMinRecurrences,
                                              const OracleBounds& bounds = {}) {
  for (const auto& w : words) parse_word(w);
  const bool bundled = is_bundled_family(sys.predicate.name);
  auto one = [&](const std::string& w) {
    SampleRow row{w, classify_word(sys, w, mode, fuel, min_recurrences), std::nullopt, std::nullopt};
    if (bundled) {
      row.oracle = brute_force_oracle(sys.predicate.name, w, bounds);
      row.agree = agrees(*row.oracle, row.classification.verdict);
    }
    return row;
  };
  const std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<SampleRow> rows;
  rows.reserve(words.size());
  for (std::size_t start = 0; start < words.size(); start += workers) {
    std::vector<std::future<SampleRow>> batch;
    for (std::size_t i = start; i < std::min(words.size(), start + workers); ++i)
      batch.push_back(std::async(std::launch::async, one, words[i]));
    for (auto& f : batch) rows.push_back(f.get());
  }
  return rows;
}

inline bool all_agree(const std::vector<SampleRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const SampleRow& r) { return !r.agree || *r.agree; });
}

inline std::string first_events(const Classification& c, std::size_t n = 4) {
  std::string out;
  for (std::size_t i = 0; i < std::min(n, c.signaling_times.size()); ++i) {
    if (!out.empty()) out += ',';
    out += std::to_string(c.signaling_times[i]);
  }
  return out.empty() ? "-" : out;
}

inline void write_report_table(std::ostream& out, const std::vector<SampleRow>& rows) {
  std::size_t ww = 6;
  for (const auto& r : rows) ww = std::max(ww, r.word.size() + 2);
  auto pad = [](std::string s, std::size_t n) {
    s.resize(std::max(n, s.size()), ' ');
    return s;
  };
  out << pad("word", ww) << pad("verdict", 18) << pad("count", 7) << pad("signals", 24) << pad("oracle", 9)
      << "agree\n";
  for (const auto& r : rows) {
    out << pad(r.word.empty() ? "ε" : r.word, ww + (r.word.empty() ? 1 : 0))
        << pad(r.classification.label(), 18) << pad(std::to_string(r.classification.count), 7)
        << pad(first_events(r.classification), 24) << pad(r.oracle ? to_string(*r.oracle) : "-", 9)
        << (r.agree ? (*r.agree ? "yes" : "NO") : "-") << "\n";
  }
}

}  // namespace sigca
