#include "ccheck/trace.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

namespace ccheck {

namespace {

struct Tok {
  std::string text;
  int line = 0;
  int col = 0;
};

struct RawLine {
  int no = 0;
  std::string text;
};

std::vector<RawLine> significant_lines(const std::string& text) {
  std::vector<RawLine> out;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back({no, line});
  }
  return out;
}

std::vector<Tok> split_tokens(const RawLine& l, std::size_t from = 0) {
  std::vector<Tok> toks;
  std::size_t i = from;
  while (i < l.text.size()) {
    while (i < l.text.size() && std::isspace(static_cast<unsigned char>(l.text[i]))) ++i;
    if (i >= l.text.size()) break;
    const std::size_t start = i;
    while (i < l.text.size() && !std::isspace(static_cast<unsigned char>(l.text[i]))) ++i;
    toks.push_back({l.text.substr(start, i - start), l.no,
                    static_cast<int>(start) + 1});
  }
  return toks;
}

[[noreturn]] void fail(const Tok& t, const std::string& what) {
  throw ParseError(t.line, t.col, what + " (got \"" + t.text + "\")");
}

Value parse_value(const Tok& t, const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    fail(t, "expected an unsigned integer");
  return std::strtoull(s.c_str(), nullptr, 10);
}

int parse_int_param(const Tok& t, const std::string& key) {
  if (t.text.rfind(key + "=", 0) != 0) fail(t, "expected " + key + "=<n>");
  return static_cast<int>(parse_value(t, t.text.substr(key.size() + 1)));
}

/// "(1,2,3)" -> values; "" stays empty on mismatch.
std::optional<std::vector<Value>> parse_tuple(const Tok& t,
                                              const std::string& s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return std::nullopt;
  std::vector<Value> vals;
  std::string body = s.substr(1, s.size() - 2);
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = body.find(',', pos);
    const std::string item = body.substr(pos, comma - pos);
    vals.push_back(parse_value(t, item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return vals;
}

/// One operation token for the given ADT shape. For register memories `loc`
/// temporarily holds the register letter; the caller remaps it once the
/// register set is known.
OpLabel parse_op(const Tok& t, AdtKind kind, int streams, int window) {
  const std::string& s = t.text;
  auto split_eq = [&](const std::string& rest)
      -> std::pair<std::string, std::optional<std::string>> {
    const std::size_t eq = rest.find('=');
    if (eq == std::string::npos) return {rest, std::nullopt};
    return {rest.substr(0, eq), rest.substr(eq + 1)};
  };
  auto arg_of = [&](const std::string& body) -> Value {
    if (body.size() < 2 || body.front() != '(' || body.back() != ')')
      fail(t, "expected (value)");
    return parse_value(t, body.substr(1, body.size() - 2));
  };
  auto scalar_out = [&](const std::string& o) -> Output {
    if (o == "_") return Output::bot();
    return Output::scalar(parse_value(t, o));
  };

  OpLabel l;
  switch (kind) {
    case AdtKind::window_stream:
    case AdtKind::window_array: {
      const bool arrayed = kind == AdtKind::window_array;
      if (s[0] == 'w') {
        std::size_t i = 1;
        int loc = 0;
        if (arrayed) {
          std::size_t d = i;
          while (d < s.size() && std::isdigit(static_cast<unsigned char>(s[d]))) ++d;
          if (d == i) fail(t, "expected a stream index after w");
          loc = static_cast<int>(parse_value(t, s.substr(i, d - i)));
          i = d;
        }
        if (loc >= streams) fail(t, "stream index out of range");
        l.in = {OpKind::write, loc, arg_of(s.substr(i))};
        l.out = Output::bot();
        return l;
      }
      if (s[0] == 'r') {
        std::size_t i = 1;
        int loc = 0;
        if (arrayed) {
          std::size_t d = i;
          while (d < s.size() && std::isdigit(static_cast<unsigned char>(s[d]))) ++d;
          if (d == i) fail(t, "expected a stream index after r");
          loc = static_cast<int>(parse_value(t, s.substr(i, d - i)));
          i = d;
        }
        if (loc >= streams) fail(t, "stream index out of range");
        l.in = {OpKind::read, loc, 0};
        if (i == s.size()) return l;  // hidden
        if (s[i] != '=') fail(t, "expected = before a recorded window");
        auto vals = parse_tuple(t, s.substr(i + 1));
        if (!vals) fail(t, "expected =(v1,...,vk)");
        if (static_cast<int>(vals->size()) != window)
          fail(t, "window output must list exactly " +
                      std::to_string(window) + " values");
        l.out = Output::tuple(std::move(*vals));
        return l;
      }
      fail(t, "unknown operation for this data type");
    }
    case AdtKind::memory: {
      if (s.size() >= 2 && (s[0] == 'w' || s[0] == 'r') &&
          std::islower(static_cast<unsigned char>(s[1])) && s[1] != '(') {
        const int letter = s[1] - 'a';
        if (s[0] == 'w') {
          l.in = {OpKind::write, letter, arg_of(s.substr(2))};
          l.out = Output::bot();
          return l;
        }
        auto [head, out] = split_eq(s.substr(2));
        if (!head.empty()) fail(t, "unexpected text after register name");
        l.in = {OpKind::read, letter, 0};
        if (out) {
          if (*out == "_") fail(t, "register reads always return a value");
          l.out = Output::scalar(parse_value(t, *out));
        }
        return l;
      }
      fail(t, "unknown operation for this data type");
    }
    case AdtKind::fifo_queue:
    case AdtKind::guarded_queue: {
      auto [head, out] = split_eq(s);
      if (head.rfind("push", 0) == 0) {
        if (out) fail(t, "push takes no recorded output");
        l.in = {OpKind::push, 0, arg_of(head.substr(4))};
        l.out = Output::bot();
        return l;
      }
      if (kind == AdtKind::fifo_queue && head == "pop") {
        l.in = {OpKind::pop, 0, 0};
        if (out) l.out = scalar_out(*out);
        return l;
      }
      if (kind == AdtKind::guarded_queue && head == "hd") {
        l.in = {OpKind::hd, 0, 0};
        if (out) l.out = scalar_out(*out);
        return l;
      }
      if (kind == AdtKind::guarded_queue && head.rfind("rh", 0) == 0) {
        if (out) fail(t, "rh takes no recorded output");
        l.in = {OpKind::rh, 0, arg_of(head.substr(2))};
        l.out = Output::bot();
        return l;
      }
      fail(t, "unknown operation for this data type");
    }
  }
  fail(t, "unknown operation");
}

}  // namespace

Trace parse_trace(const std::string& text) {
  const auto lines = significant_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "missing adt header");

  // Header.
  auto header = split_tokens(lines[0]);
  if (header.empty() || header[0].text != "adt")
    throw ParseError(lines[0].no, 1, "first line must declare: adt <type>");
  if (header.size() < 2) fail(header[0], "missing data type name");
  const std::string& tname = header[1].text;
  AdtKind kind;
  int streams = 1, window = 0;
  if (tname == "wstream") {
    kind = AdtKind::window_stream;
    if (header.size() != 3) fail(header[1], "wstream takes k=<n>");
    window = parse_int_param(header[2], "k");
  } else if (tname == "warray") {
    kind = AdtKind::window_array;
    if (header.size() != 4) fail(header[1], "warray takes K=<n> k=<n>");
    streams = parse_int_param(header[2], "K");
    window = parse_int_param(header[3], "k");
  } else if (tname == "memory") {
    kind = AdtKind::memory;
    if (header.size() != 2) fail(header[2], "memory takes no parameters");
  } else if (tname == "queue") {
    kind = AdtKind::fifo_queue;
    if (header.size() != 2) fail(header[2], "queue takes no parameters");
  } else if (tname == "gqueue") {
    kind = AdtKind::guarded_queue;
    if (header.size() != 2) fail(header[2], "gqueue takes no parameters");
  } else {
    fail(header[1], "unknown data type");
  }
  if ((kind == AdtKind::window_stream || kind == AdtKind::window_array) &&
      (window < 1 || streams < 1))
    fail(header.back(), "window sizes must be at least 1");

  // Bodies.
  std::vector<std::pair<std::string, std::vector<OpLabel>>> procs;
  std::vector<std::array<Tok, 2>> po_refs;
  std::set<std::string> seen_names;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto toks = split_tokens(lines[li]);
    if (toks[0].text == "process") {
      // Re-split on the colon so "process p0: ops" and "process p0:ops" agree.
      const std::size_t colon = lines[li].text.find(':');
      if (colon == std::string::npos)
        fail(toks[0], "process line needs a ':' after the name");
      auto name_toks = split_tokens({lines[li].no,
                                     lines[li].text.substr(0, colon)});
      if (name_toks.size() != 2) fail(toks[0], "expected: process <name>:");
      const std::string name = name_toks[1].text;
      if (name.find('.') != std::string::npos)
        fail(name_toks[1], "process names must not contain '.'");
      if (!seen_names.insert(name).second)
        fail(name_toks[1], "duplicate process name");
      std::vector<OpLabel> ops;
      RawLine rest{lines[li].no, lines[li].text};
      for (auto& t : split_tokens(rest, colon + 1))
        ops.push_back(parse_op(t, kind, streams, window));
      procs.emplace_back(name, std::move(ops));
    } else if (toks[0].text == "po") {
      if (toks.size() != 3) fail(toks[0], "expected: po <ev> <ev>");
      po_refs.push_back({toks[1], toks[2]});
    } else {
      fail(toks[0], "expected a process, po, or comment line");
    }
  }

  // Register memories are sized to the registers the trace touches.
  Adt adt = Adt::fifo_queue();
  switch (kind) {
    case AdtKind::window_stream: adt = Adt::window_stream(window); break;
    case AdtKind::window_array: adt = Adt::window_array(streams, window); break;
    case AdtKind::fifo_queue: adt = Adt::fifo_queue(); break;
    case AdtKind::guarded_queue: adt = Adt::guarded_queue(); break;
    case AdtKind::memory: {
      std::set<char> letters;
      for (auto& [name, ops] : procs)
        for (auto& l : ops)
          letters.insert(static_cast<char>('a' + l.in.loc));
      std::string regs(letters.begin(), letters.end());
      if (regs.empty()) regs = "a";
      adt = Adt::memory(regs);
      for (auto& [name, ops] : procs)
        for (auto& l : ops)
          l.in.loc = static_cast<std::int32_t>(
              regs.find(static_cast<char>('a' + l.in.loc)));
      break;
    }
  }

  // Event ids are assigned per process in declaration order.
  std::vector<int> base(procs.size() + 1, 0);
  for (std::size_t i = 0; i < procs.size(); ++i)
    base[i + 1] = base[i] + static_cast<int>(procs[i].second.size());
  if (base.back() > kMaxEvents)
    throw ParseError(lines[0].no, 1,
                     "trace has " + std::to_string(base.back()) +
                         " events; at most " + std::to_string(kMaxEvents) +
                         " are supported");
  auto resolve = [&](const Tok& t) -> int {
    const std::size_t dot = t.text.rfind('.');
    if (dot == std::string::npos) fail(t, "expected <process>.<index>");
    const std::string pname = t.text.substr(0, dot);
    const std::string idx = t.text.substr(dot + 1);
    for (std::size_t i = 0; i < procs.size(); ++i) {
      if (procs[i].first != pname) continue;
      const Value k = parse_value(t, idx);
      if (k >= procs[i].second.size()) fail(t, "event index out of range");
      return base[i] + static_cast<int>(k);
    }
    fail(t, "unknown process");
  };
  std::vector<std::pair<int, int>> edges;
  Order probe(base.back(), OrderKind::program);
  for (std::size_t i = 0; i < procs.size(); ++i)
    for (int e = base[i]; e + 1 < base[i + 1]; ++e) probe.add_edge(e, e + 1);
  for (auto& [a, b] : po_refs) {
    const int ea = resolve(a), eb = resolve(b);
    if (ea == eb || !probe.add_edge(ea, eb))
      fail(a, "this edge closes a program-order cycle");
    edges.emplace_back(ea, eb);
  }

  Trace tr{std::move(adt), make_history(std::move(procs), edges)};
  return tr;
}

std::string render_input(const Adt& adt, const Input& in) {
  auto v = [&] { return std::to_string(in.arg); };
  switch (in.kind) {
    case OpKind::write:
      if (adt.kind() == AdtKind::window_array)
        return "w" + std::to_string(in.loc) + "(" + v() + ")";
      if (adt.kind() == AdtKind::memory)
        return std::string("w") + adt.registers()[in.loc] + "(" + v() + ")";
      return "w(" + v() + ")";
    case OpKind::read:
      if (adt.kind() == AdtKind::window_array)
        return "r" + std::to_string(in.loc);
      if (adt.kind() == AdtKind::memory)
        return std::string("r") + adt.registers()[in.loc];
      return "r";
    case OpKind::push: return "push(" + v() + ")";
    case OpKind::pop: return "pop";
    case OpKind::hd: return "hd";
    case OpKind::rh: return "rh(" + v() + ")";
  }
  return "?";
}

std::string render_output(const Output& out, LabelStyle style) {
  if (out.bottom) return style == LabelStyle::trace ? "_" : "⊥";
  if (out.vals.size() == 1) return std::to_string(out.vals[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < out.vals.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(out.vals[i]);
  }
  return s + ")";
}

std::string render_label(const Adt& adt, const OpLabel& l, LabelStyle style) {
  const std::string in = render_input(adt, l.in);
  if (!l.out) return in;
  std::string out = render_output(*l.out, style);
  // Window reads always report whole windows; keep the parentheses at k = 1
  // so the emitted form stays inside the parse grammar.
  if (l.in.kind == OpKind::read && !l.out->bottom &&
      (adt.kind() == AdtKind::window_stream ||
       adt.kind() == AdtKind::window_array) &&
      l.out->vals.size() == 1)
    out = "(" + out + ")";
  if (style == LabelStyle::trace) {
    if (!adt.classify(l.in).is_query) return in;  // implicit bottom
    return in + "=" + out;
  }
  return in + "/" + out;
}

std::string render_sequence(const Adt& adt, const std::vector<OpLabel>& seq,
                            LabelStyle style) {
  std::string s;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) s += ".";
    s += render_label(adt, seq[i], style);
  }
  return s;
}

std::string emit_trace(const Adt& adt, const History& h) {
  std::string out = "adt " + adt.name() + "\n";
  for (std::size_t p = 0; p < h.process_names.size(); ++p) {
    out += "process " + h.process_names[p] + ":";
    for (int e : h.process_events[p])
      out += " " + render_label(adt, h.label(e), LabelStyle::trace);
    out += "\n";
  }
  for (auto [a, b] : h.extra_edges)
    out += "po " + h.event_name(a) + " " + h.event_name(b) + "\n";
  return out;
}

}  // namespace ccheck
