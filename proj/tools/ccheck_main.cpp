// ccheck — command-line front end: parse/emit traces, run the consistency
// checkers, drive the replicated-object simulator, and replay the golden
// corpus.
//
// Exit codes: 0 success (or --expect matched), 1 criterion mismatch,
// 2 parse/usage error, 3 enumeration size bound exceeded, 4 liveness failure.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccheck/checker.hpp"
#include "ccheck/corpus.hpp"
#include "ccheck/netsim.hpp"
#include "ccheck/replica.hpp"
#include "ccheck/trace.hpp"

namespace {

using namespace ccheck;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitParse = 2;
constexpr int kExitBound = 3;
constexpr int kExitLiveness = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    parts.push_back(s.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return parts;
}

Criterion criterion_or_die(const std::string& name) {
  if (auto c = criterion_by_name(name)) return *c;
  throw UsageError("unknown criterion \"" + name + "\"");
}

Verdict run_one(Criterion c, const History& h, const Adt& adt,
                const CheckOptions& opt) {
  switch (c) {
    case Criterion::sc: return check_sc(h, adt, opt);
    case Criterion::pc: return check_pc(h, adt, opt);
    case Criterion::wcc: return check_wcc(h, adt, opt);
    case Criterion::cc: return check_cc(h, adt, opt);
    case Criterion::ccv: return check_ccv(h, adt, opt);
    case Criterion::cm: return check_cm(h, adt, opt);
  }
  throw UsageError("unknown criterion");
}

// Covering pairs of `o` that program order does not already imply — the
// edges one would draw on top of the processes to depict the causal order.
std::vector<std::pair<int, int>> extra_cover(const Order& o, const Order& po) {
  std::vector<std::pair<int, int>> out;
  for (auto [a, b] : o.pairs()) {
    if (po.before(a, b)) continue;
    bool covering = true;
    for (int c = 0; c < o.size() && covering; ++c)
      if (c != a && c != b && o.before(a, c) && o.before(c, b))
        covering = false;
    if (covering) out.emplace_back(a, b);
  }
  return out;
}

std::string join_names(const History& h,
                       const std::vector<std::pair<int, int>>& pairs,
                       const char* arrow) {
  std::string s;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) s += " ";
    s += h.event_name(pairs[i].first) + arrow + h.event_name(pairs[i].second);
  }
  return s;
}

std::string total_sequence(const History& h, const Order& t) {
  std::vector<int> order(static_cast<std::size_t>(t.size()));
  for (int e = 0; e < t.size(); ++e) {
    int rank = 0;
    Mask m = t.preds(e);
    while (m) { m &= m - 1; ++rank; }
    order[static_cast<std::size_t>(rank)] = e;
  }
  std::string s;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) s += "<";
    s += h.event_name(order[i]);
  }
  return s;
}

void print_verdict(std::ostream& os, const Adt& adt, const History& h,
                   const Verdict& v) {
  os << criterion_name(v.criterion) << "=" << (v.holds ? "true" : "false")
     << "\n";
  os << "  explored: " << v.explored << "\n";
  if (v.holds && v.witness) {
    const Witness& w = *v.witness;
    if (w.causal_order.kind() != OrderKind::program) {
      auto extra = extra_cover(w.causal_order, h.program_order);
      os << "  causal: "
         << (extra.empty() ? std::string("(program order)")
                           : join_names(h, extra, "->"))
         << "\n";
    }
    if (w.total_order)
      os << "  total: " << total_sequence(h, *w.total_order) << "\n";
    if (w.writes_into)
      os << "  writes-into: "
         << (w.writes_into->empty() ? std::string("(none)")
                                    : join_names(h, *w.writes_into, "->"))
         << "\n";
    for (const auto& [e, lin] : w.per_event_linearizations)
      os << "  linearization [" << h.event_name(e)
         << "]: " << render_sequence(adt, lin, LabelStyle::report) << "\n";
  }
  if (!v.holds && v.refutation) {
    const Refutation& r = *v.refutation;
    os << "  refutation";
    if (r.event >= 0) os << " [" << h.event_name(r.event) << "]";
    os << ": " << render_sequence(adt, r.attempted, LabelStyle::report)
       << "\n";
    if (!r.note.empty()) os << "  note: " << r.note << "\n";
  }
}

std::vector<Criterion> applicable_criteria(const Adt& adt) {
  std::vector<Criterion> cs{Criterion::sc, Criterion::pc, Criterion::wcc,
                            Criterion::cc, Criterion::ccv};
  if (adt.kind() == AdtKind::memory) cs.push_back(Criterion::cm);
  return cs;
}

// --- check ---

int do_check(const std::string& file, const std::string& criterion_csv,
             const std::string& expect_csv, int max_events) {
  const Trace tr = parse_trace(slurp(file));
  const CheckOptions opt{max_events};

  std::vector<Criterion> run;
  auto want = [&](Criterion c) {
    if (std::find(run.begin(), run.end(), c) == run.end()) run.push_back(c);
  };
  for (const std::string& name : split_csv(criterion_csv)) {
    if (name == "all") {
      for (Criterion c : applicable_criteria(tr.adt)) want(c);
    } else {
      want(criterion_or_die(name));
    }
  }

  std::map<Criterion, bool> expected;
  if (!expect_csv.empty()) {
    for (const std::string& item : split_csv(expect_csv)) {
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos)
        throw UsageError("--expect items look like cc=true");
      const std::string val = item.substr(eq + 1);
      if (val != "true" && val != "false")
        throw UsageError("--expect values are true or false");
      const Criterion c = criterion_or_die(item.substr(0, eq));
      expected[c] = val == "true";
      want(c);
    }
  }

  std::cout << "# adt " << tr.adt.name() << ", " << tr.history.size()
            << " events, " << tr.history.process_names.size()
            << " processes\n";
  std::map<Criterion, Verdict> results;
  for (Criterion c : run) results.emplace(c, run_one(c, tr.history, tr.adt, opt));
  for (const auto& [c, v] : results) print_verdict(std::cout, tr.adt, tr.history, v);

  if (!expected.empty()) {
    bool ok = true;
    for (const auto& [c, want_hold] : expected) {
      if (results.at(c).holds == want_hold) continue;
      ok = false;
      std::cout << "expect-mismatch: " << criterion_name(c) << " expected "
                << (want_hold ? "true" : "false") << ", got "
                << (results.at(c).holds ? "true" : "false") << "\n";
    }
    std::cout << (ok ? "expectations met\n" : "expectations NOT met\n");
    return ok ? kExitOk : kExitMismatch;
  }
  for (const auto& [c, v] : results)
    if (!v.holds) return kExitMismatch;
  return kExitOk;
}

// --- simulate ---

std::pair<int, std::uint64_t> parse_crash(const std::string& tok) {
  // pN@M: process pN fails at the start of step M.
  const std::size_t at = tok.find('@');
  if (tok.size() < 4 || tok[0] != 'p' || at == std::string::npos || at < 2)
    throw UsageError("crash schedule entries look like p1@3");
  try {
    const int proc = std::stoi(tok.substr(1, at - 1));
    const std::uint64_t step = std::stoull(tok.substr(at + 1));
    return {proc, step};
  } catch (const std::exception&) {
    throw UsageError("crash schedule entries look like p1@3");
  }
}

std::vector<std::vector<ScriptOp>> load_script(const std::string& path,
                                               int streams, int window) {
  // Script files reuse the trace grammar for a window array; recorded
  // outputs (if any) are ignored, only the inputs are replayed.
  std::ostringstream text;
  text << "adt warray K=" << streams << " k=" << window << "\n" << slurp(path);
  const Trace tr = parse_trace(text.str());
  if (!tr.history.extra_edges.empty())
    throw UsageError("script files take no po edges");
  std::vector<std::vector<ScriptOp>> scripts;
  for (const auto& events : tr.history.process_events) {
    std::vector<ScriptOp> script;
    for (int e : events) {
      const Input& in = tr.history.label(e).in;
      if (in.kind == OpKind::write)
        script.push_back({true, in.loc, in.arg});
      else
        script.push_back({false, in.loc, 0});
    }
    scripts.push_back(std::move(script));
  }
  return scripts;
}

int do_simulate(const std::string& algo_name, int procs, int ops, int streams,
                int window, std::uint64_t seed,
                const std::vector<std::string>& crash_toks,
                const std::string& script_path, bool then_check,
                const std::string& out_path, bool with_log,
                bool literal_insert, std::uint64_t max_steps, int max_events) {
  const Algo algo = algo_name == "cc" ? Algo::causal : Algo::convergent;

  std::vector<std::vector<ScriptOp>> scripts =
      script_path.empty() ? random_scripts(seed, procs, ops, streams)
                          : load_script(script_path, streams, window);

  SimConfig cfg;
  cfg.seed = seed;
  cfg.max_steps = max_steps;
  for (const std::string& tok : crash_toks)
    cfg.crash_schedule.push_back(parse_crash(tok));

  const ReplicaRun run =
      run_replicas(algo, streams, window, scripts, cfg, literal_insert);

  std::ostringstream out;
  out << "# algo=" << algo_name << " procs=" << scripts.size()
      << " seed=" << seed << " steps=" << run.sim.steps
      << " messages=" << run.sim.messages.size();
  out << " crashed=";
  bool any_crash = false;
  for (std::size_t p = 0; p < run.sim.crashed.size(); ++p)
    if (run.sim.crashed[p]) {
      out << (any_crash ? "," : "") << "p" << p;
      any_crash = true;
    }
  if (!any_crash) out << "-";
  out << "\n";
  out << emit_trace(run.adt, run.history);
  if (with_log) {
    out << "# log:\n";
    for (const LogRecord& rec : run.sim.log) {
      out << "#   [" << rec.step << "] " << record_type_name(rec.type) << " p"
          << rec.process;
      if (rec.op)
        out << " " << render_label(run.adt, *rec.op, LabelStyle::report);
      if (rec.message) out << " msg=" << *rec.message;
      out << "\n";
    }
    out << "# final states:\n";
    for (std::size_t p = 0; p < run.sim.final_states.size(); ++p) {
      out << "#   p" << p << ":";
      for (Value v : run.sim.final_states[p]) out << " " << v;
      out << (run.sim.crashed[p] ? " (crashed)" : "") << "\n";
    }
  }
  write_out(out_path, out.str());

  if (then_check) {
    const CheckOptions opt{max_events};
    const Verdict v = algo == Algo::causal
                          ? check_cc(run.history, run.adt, opt)
                          : check_ccv(run.history, run.adt, opt);
    print_verdict(std::cout, run.adt, run.history, v);
    return v.holds ? kExitOk : kExitMismatch;
  }
  return kExitOk;
}

// --- demo ---

int do_demo(const std::string& id, int max_events) {
  std::vector<const CorpusEntry*> entries;
  if (id.empty()) {
    for (const CorpusEntry& e : golden_corpus()) entries.push_back(&e);
  } else {
    const CorpusEntry* e = corpus_entry(id);
    if (!e) throw UsageError("unknown corpus entry \"" + id + "\"");
    entries.push_back(e);
  }

  bool all_match = true;
  for (const CorpusEntry* e : entries) {
    std::cout << "== " << e->id << ": " << e->summary << "\n";
    std::istringstream lines(e->trace);
    std::string line;
    while (std::getline(lines, line)) std::cout << "   " << line << "\n";

    const Trace tr = parse_trace(e->trace);
    const auto verdicts = classify_all(tr.history, tr.adt, {max_events});
    for (const auto& [c, v] : verdicts) {
      std::cout << criterion_name(c) << "=" << (v.holds ? "true" : "false");
      for (const auto& [ec, ev] : e->expected) {
        if (ec != c) continue;
        const bool ok = ev == v.holds;
        all_match = all_match && ok;
        std::cout << "   [expected " << (ev ? "true" : "false") << ": "
                  << (ok ? "ok" : "MISMATCH") << "]";
      }
      std::cout << "\n";
    }
    if (!e->note.empty()) std::cout << "note: " << e->note << "\n";
    std::cout << "\n";
  }
  std::cout << (all_match ? "golden corpus: all expectations met\n"
                          : "golden corpus: MISMATCH\n");
  return all_match ? kExitOk : kExitMismatch;
}

// --- convert ---

int do_convert(const std::string& in_path, const std::string& out_path) {
  const Trace tr = parse_trace(slurp(in_path));
  write_out(out_path, emit_trace(tr.adt, tr.history));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consistency checking toolkit for replicated data types"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "classify a trace file");
  std::string check_file;
  std::string criterion = "all";
  std::string expect;
  int check_max_events = kDefaultEnumBound;
  check->add_option("file", check_file, "trace file, or - for stdin")
      ->required();
  check->add_option("--criterion", criterion,
                    "comma-separated list of sc,pc,wcc,cc,ccv,cm, or all");
  check->add_option("--expect", expect,
                    "declared classification, e.g. cc=true,sc=false; "
                    "exit 0 iff the computed verdicts match");
  check->add_option("--max-events", check_max_events,
                    "enumeration size bound");

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "run a replicated window array");
  std::string algo;
  int procs = 3, ops = 4, streams = 2, window = 2;
  std::uint64_t seed = 0, max_steps = 1'000'000;
  std::vector<std::string> crash_toks;
  std::string script_path, sim_out;
  bool then_check = false, with_log = false, literal_insert = false;
  int sim_max_events = 16;
  simulate->add_option("--algo", algo, "replication algorithm")
      ->required()
      ->check(CLI::IsMember({"cc", "ccv"}));
  simulate->add_option("--procs", procs, "replica count")
      ->check(CLI::Range(1, 16));
  simulate->add_option("--ops", ops, "max script length per replica")
      ->check(CLI::Range(1, 32));
  simulate->add_option("--streams", streams, "stream count K")
      ->check(CLI::Range(1, 8));
  simulate->add_option("--window", window, "window size k")
      ->check(CLI::Range(1, 8));
  simulate->add_option("--seed", seed, "script and scheduler seed");
  simulate->add_option("--crash", crash_toks,
                       "crash schedule entries, e.g. p1@3 (repeatable)");
  simulate->add_option("--script", script_path,
                       "script file (trace body syntax, outputs ignored); "
                       "replaces the random scripts");
  simulate->add_flag("--then-check", then_check,
                     "run the matching checker on the recorded history");
  simulate->add_option("--out", sim_out, "write the trace here, - for stdout");
  simulate->add_flag("--log", with_log, "append the event log as comments");
  simulate->add_flag("--literal-insert", literal_insert,
                     "use the misbehaving printed insertion loop (ccv only)");
  simulate->add_option("--max-steps", max_steps, "liveness bound");
  simulate->add_option("--max-events", sim_max_events,
                       "enumeration bound for --then-check");

  // demo
  auto* demo =
      app.add_subcommand("demo", "replay the golden corpus of examples");
  std::string demo_id;
  int demo_max_events = 12;
  demo->add_option("entry", demo_id, "corpus entry id (3a..3i); omit for all");
  demo->add_option("--max-events", demo_max_events, "enumeration size bound");

  // convert
  auto* convert =
      app.add_subcommand("convert", "parse a trace and re-emit it canonically");
  std::string conv_in, conv_out;
  convert->add_option("file", conv_in, "trace file, or - for stdin")
      ->required();
  convert->add_option("--out", conv_out, "output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitParse;
  }

  try {
    if (check->parsed())
      return do_check(check_file, criterion, expect, check_max_events);
    if (simulate->parsed())
      return do_simulate(algo, procs, ops, streams, window, seed, crash_toks,
                         script_path, then_check, sim_out, with_log,
                         literal_insert, max_steps, sim_max_events);
    if (demo->parsed()) return do_demo(demo_id, demo_max_events);
    if (convert->parsed()) return do_convert(conv_in, conv_out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const SizeBoundError& e) {
    std::cerr << "size bound exceeded: " << e.what() << "\n";
    return kExitBound;
  } catch (const LivenessError& e) {
    std::cerr << "liveness failure: " << e.what() << "\n";
    return kExitLiveness;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitParse;
}
