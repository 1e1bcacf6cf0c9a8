// sigma_ca: compile, classify, trace and export reduction systems.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sigca/sigca.hpp"

using namespace sigca;

namespace {

constexpr int kExitDisagree = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTooLarge = 3;

std::string dir_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? "." : path.substr(0, slash);
}

/// Fuel: explicit flag, then SIGMA_CA_FUEL, then the artifact default.
std::uint64_t resolve_fuel(const CLI::Option* flag, std::uint64_t flag_value, std::uint64_t fallback) {
  if (flag->count()) return flag_value;
  if (const char* env = std::getenv("SIGMA_CA_FUEL")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("SIGMA_CA_FUEL is not a number: '") + env + "'");
    }
  }
  return fallback;
}

const CLI::Validator kBinaryWord(
    [](std::string& s) -> std::string {
      for (char c : s)
        if (c != '0' && c != '1') return "word may only contain 0 and 1: '" + s + "'";
      return {};
    },
    "WORD");

std::string glyph(const CellCodec& codec, Cell c) {
  if (c == kSpreadCell) return "!!!";
  const TrackedCell t = codec.decode(c);
  std::string g;
  switch (t.main.kind) {
    case MainSymbol::Kind::Hash: g += '#'; break;
    case MainSymbol::Kind::Sep: g += '|'; break;
    case MainSymbol::Kind::Input: g += char('0' + t.main.a); break;
    case MainSymbol::Kind::Pair: g += char('0' + t.main.b + 2 * t.main.c); break;
  }
  g += t.head.kind == HeadMark::Kind::ArrowRight ? '>' : t.head.kind == HeadMark::Kind::ArrowLeft ? '<' : '*';
  g += t.work == 0 ? '.' : '+';
  return g;
}

void dump_row(std::ostream& out, const ReductionSystem& sys, std::uint64_t t, Position from, Position to,
              const std::function<std::optional<Cell>(Position)>& cell) {
  out << "t=" << t << " [" << from << "] ";
  std::string head;
  for (Position p = from; p <= to; ++p) {
    auto c = cell(p);
    if (!c) {
      out << "?? ";
      continue;
    }
    out << glyph(sys.codec, *c) << ' ';
    if (auto q = sys.codec.state_of(*c)) head = " head " + sys.checker->tm.name(*q) + "@" + std::to_string(p);
  }
  out << head << "\n";
}

int cmd_compile(const std::string& doc_path, const std::string& out_path) {
  const std::string text = read_file(doc_path);
  const SystemDocument doc = parse_system_document(text, dir_of(doc_path));
  const std::string artifact = artifact_text(compile_document(doc));
  if (out_path.empty() || out_path == "-") {
    std::cout << artifact;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write '" + out_path + "'");
    out << artifact;
  }
  return 0;
}

struct ClassifyArgs {
  std::string artifact;
  std::vector<std::string> words;
  int all_up_to = -1;
  std::uint64_t fuel = 0;
  std::size_t min_recurrences = 0;
  std::string mode;
  std::size_t max_period = 0;
  std::string witness;
  bool json = false;
};

int cmd_classify(const ClassifyArgs& a, const CLI::Option* fuel_opt) {
  CompiledSystem cs = load_artifact(read_file(a.artifact));
  if (!a.witness.empty()) cs.witness = parse_json_text(a.witness);
  if (!a.mode.empty()) cs.simulation.mode = a.mode;
  if (a.max_period) cs.simulation.max_period = a.max_period;
  if (a.min_recurrences) cs.simulation.min_recurrences = a.min_recurrences;
  const std::uint64_t fuel = resolve_fuel(fuel_opt, a.fuel, cs.simulation.fuel);
  std::vector<std::string> words = a.words;
  if (a.all_up_to >= 0) {
    auto all = all_words_up_to(std::size_t(a.all_up_to));
    words.insert(words.end(), all.begin(), all.end());
  }
  const auto rows = sample_language(cs.system, words, cs.mode(), fuel, cs.simulation.min_recurrences);
  if (a.json)
    std::cout << report_records(rows).dump(2) << "\n";
  else
    write_report_table(std::cout, rows);
  return all_agree(rows) ? 0 : kExitDisagree;
}

struct TraceArgs {
  std::string artifact;
  std::string word;
  std::uint64_t fuel = 0;
  std::uint64_t dump_every = 0;
  std::size_t dump_pairs = 16;
  bool binary = false;
  std::string witness;
  bool stop_at_spread = false;
  std::string config;
};

int cmd_trace(const TraceArgs& a, const CLI::Option* fuel_opt) {
  CompiledSystem cs = load_artifact(read_file(a.artifact));
  if (!a.witness.empty()) cs.witness = parse_json_text(a.witness);
  const ReductionSystem& sys = cs.system;
  const std::uint64_t fuel = resolve_fuel(fuel_opt, a.fuel, cs.simulation.fuel);
  const Witness w = cs.witness_fn()(a.word);
  const Configuration start =
      a.config.empty() ? phi(sys, a.word, w.c_set, w.skolem, w.c_track) : parse_configuration(read_file(a.config), sys);
  const Position k = Position(a.word.size()) + 4;
  const Position dump_lo = -2, dump_hi = Position(a.word.size()) + Position(a.dump_pairs);
  std::cout << "# " << sys.predicate.name << " " << to_string(sys.variant) << " w=\"" << a.word << "\" "
            << (a.config.empty() ? w.describe() : "config=" + a.config) << (a.binary ? " binary" : "") << "\n";

  Probes probes;
  probes.recurrence_k = k;
  probes.stop_at_spread = a.stop_at_spread;
  probes.track = std::make_pair(dump_lo, dump_hi);
  TraceReport rep;
  if (!a.binary) {
    probes.signal = signal_probe(sys, a.word);
    probes.spread_cell = kSpreadCell;
    if (a.dump_every) {
      probes.on_step = [&](std::uint64_t t, const CellReader& at) {
        if (t % a.dump_every == 0)
          dump_row(std::cout, sys, t, dump_lo, dump_hi, [&](Position p) { return std::optional<Cell>(at(p)); });
      };
    }
    rep = run_trace(sys.rule, start, fuel, probes);
  } else {
    const BinarySystem bin = recode_binary(sys.rule);
    const Position L = Position(bin.code.length());
    auto decode_cell = [&bin, L](const CellReader& at, Position cell) -> std::optional<Cell> {
      std::vector<std::uint8_t> buf(static_cast<std::size_t>(L));
      for (Position i = 0; i < L; ++i) buf[std::size_t(i)] = std::uint8_t(at(cell * L + i));
      return bin.code.decode(buf);
    };
    const auto word = parse_word(a.word);
    const CellCodec codec = sys.codec;
    const StateId q0 = sys.q0();
    probes.signal = SignalProbe{-L, (Position(word.size()) + 1) * L - 1, [=](const CellReader& at) {
                                  for (Position c = -1; c <= Position(word.size()); ++c)
                                    if (!decode_cell(at, c)) return false;
                                  return detect_signaling(codec, q0, word,
                                                          [&](Position p) { return *decode_cell(at, p); });
                                }};
    probes.recurrence_k = (k + 1) * L - 1;
    probes.track = std::make_pair(dump_lo * L, (dump_hi + 1) * L - 1);
    std::set<Position> touched;
    std::optional<std::pair<std::uint64_t, Position>> spread;
    const Position region = kDefaultSpreadRadius;
    probes.stop_on_cell = [&](Position bit, Cell) {
      const Position c = bit >= 0 ? bit / L : -((-bit + L - 1) / L);
      if (c >= -region && c <= region) touched.insert(c);
      return false;
    };
    probes.on_step = [&](std::uint64_t t, const CellReader& at) {
      if (!spread) {
        for (Position c : touched) {
          auto d = decode_cell(at, c);
          if (!d || *d == kSpreadCell) {
            spread = std::make_pair(t, c);
            break;
          }
        }
      }
      touched.clear();
      if (a.dump_every && t % a.dump_every == 0) {
        std::cout << "t=" << t << " bits ";
        for (Position p = dump_lo * L; p < (dump_lo + 4) * L; ++p) std::cout << at(p);
        std::cout << "...\n";
        dump_row(std::cout, sys, t, dump_lo, dump_hi, [&](Position c) { return decode_cell(at, c); });
      }
    };
    rep = run_trace(bin.rule, encode_config(start, bin.code), fuel, probes);
    if (spread) {
      rep.spread_detected_at = spread->first;
      rep.spread_position = spread->second;
    }
  }

  // Events in time order.
  std::size_t si = 0, ri = 0;
  const auto& rec = *rep.window_recurrence_times;
  for (std::uint64_t t = 0; t <= rep.steps_executed; ++t) {
    const bool sig = si < rep.signaling_times.size() && rep.signaling_times[si] == t;
    const bool spr = rep.spread_detected_at && *rep.spread_detected_at == t;
    const bool rc = ri < rec.size() && rec[ri] == t;
    if (sig) std::cout << "t=" << t << " SIGNAL\n", ++si;
    if (spr) std::cout << "t=" << t << " SPREAD@" << *rep.spread_position << "\n";
    if (rc) std::cout << "t=" << t << " RECUR\n", ++ri;
    if (!sig && !rc && si >= rep.signaling_times.size() && ri >= rec.size() &&
        (!rep.spread_detected_at || *rep.spread_detected_at < t))
      break;
  }
  std::cout << "# steps " << rep.steps_executed << " signals " << rep.signaling_times.size() << " recurrences "
            << rec.size() << " stop " << to_string(rep.stop);
  if (rep.fixpoint_at) std::cout << " fixpoint " << *rep.fixpoint_at;
  std::cout << "\n";
  return 0;
}

struct ExportArgs {
  std::string artifact;
  bool binary = false;
  unsigned max_table_bits = 20;
  int elementary = -1;
  std::string out;
};

int cmd_export(const ExportArgs& a) {
  LocalRule rule;
  std::string what;
  if (a.elementary >= 0) {
    if (a.elementary > 255) throw Error("elementary rule number must be in 0..255");
    rule = LocalRule::elementary(unsigned(a.elementary));
    what = "elementary rule " + std::to_string(a.elementary);
  } else {
    if (a.artifact.empty()) throw Error("export needs an artifact or --elementary");
    const CompiledSystem cs = load_artifact(read_file(a.artifact));
    rule = cs.system.rule;
    what = "compiled " + cs.system.predicate.name + " rule";
    if (a.binary) {
      rule = recode_binary(cs.system.rule).rule;
      what += " (binary recoding)";
    }
  }
  if (a.max_table_bits > 63) throw Error("--max-table-bits must be at most 63");
  const std::uint64_t bound = std::uint64_t(1) << a.max_table_bits;
  try {
    if (a.out.empty() || a.out == "-") {
      rule.export_table(std::cout, bound);
    } else {
      if (rule.neighborhood_count() > bound) {
        std::ostringstream sink;  // throws before writing anything
        rule.export_table(sink, bound);
      }
      std::ofstream out(a.out);
      if (!out) throw Error("cannot write '" + a.out + "'");
      rule.export_table(out, bound);
    }
  } catch (const TableTooLarge& e) {
    std::cerr << "TableTooLarge: " << what << ": " << e.what() << "\n"
              << "the rule is available as an executable description: alphabet " << rule.alphabet_size()
              << ", radius " << rule.radius() << "; load the artifact with the sigca library and call the LocalRule\n";
    return kExitTooLarge;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduction systems for signaling cellular automata"};
  app.require_subcommand(1);

  std::string doc_path, out_path;
  auto* compile = app.add_subcommand("compile", "compile a system document into an artifact");
  compile->add_option("document", doc_path, "system document (JSON)")->required();
  compile->add_option("-o,--out", out_path, "output path, '-' for standard output");

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "classify words through the compiled automaton");
  classify->add_option("artifact", ca.artifact, "compiled artifact")->required();
  classify->add_option("words", ca.words, "words over {0,1}")->check(kBinaryWord);
  classify->add_option("--all-up-to", ca.all_up_to, "every word of length <= N")->check(CLI::NonNegativeNumber);
  auto* classify_fuel = classify->add_option("--fuel", ca.fuel, "CA steps per trace");
  classify->add_option("--min-recurrences", ca.min_recurrences, "signaling times needed for Recurrent");
  classify->add_option("--mode", ca.mode, "witness or search")->check(CLI::IsMember({"witness", "search"}));
  classify->add_option("--max-period", ca.max_period, "largest b-track period in search mode");
  classify->add_option("--witness", ca.witness, "witness descriptor (JSON)");
  classify->add_flag("--json", ca.json, "structured records instead of the table");

  TraceArgs ta;
  auto* trace = app.add_subcommand("trace", "trace phi(w) and list events");
  trace->add_option("artifact", ta.artifact, "compiled artifact")->required();
  trace->add_option("word", ta.word, "word over {0,1}")->required()->check(kBinaryWord);
  auto* trace_fuel = trace->add_option("--fuel", ta.fuel, "CA steps");
  trace->add_option("--dump-every", ta.dump_every, "print the window every K steps");
  trace->add_option("--dump-pairs", ta.dump_pairs, "pair cells shown in dumps");
  trace->add_flag("--binary", ta.binary, "trace the binary recoding");
  trace->add_option("--witness", ta.witness, "witness descriptor (JSON)");
  trace->add_flag("--stop-at-spread", ta.stop_at_spread, "end the trace at the first Spread event");
  trace->add_option("--config", ta.config, "start from a configuration literal (JSON) instead of phi(w)");

  ExportArgs ea;
  auto* exp = app.add_subcommand("export", "write the rule table");
  exp->add_option("artifact", ea.artifact, "compiled artifact");
  exp->add_flag("--binary", ea.binary, "export the binary recoding");
  exp->add_option("--max-table-bits", ea.max_table_bits, "refuse tables above 2^B rows");
  exp->add_option("--elementary", ea.elementary, "export elementary CA N instead");
  exp->add_option("-o,--out", ea.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*compile) return cmd_compile(doc_path, out_path);
    if (*classify) return cmd_classify(ca, classify_fuel);
    if (*trace) return cmd_trace(ta, trace_fuel);
    if (*exp) return cmd_export(ea);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
