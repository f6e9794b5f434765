#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ccheck/adt.hpp"
#include "ccheck/history.hpp"

namespace ccheck {

struct ParseError : std::runtime_error {
  ParseError(int line, int col, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": " + what),
        line(line), col(col) {}
  int line;
  int col;
};

struct Trace {
  Adt adt;
  History history;
};

/// Text format:
///   # comment
///   adt wstream k=2        (or: warray K=2 k=2 | memory | queue | gqueue)
///   process p0: w(1) r=(0,1) r
///   process p1: w(2)
///   po p0.1 p1.0           (optional extra program-order edges)
/// Bare queries are hidden; `=_` records an observed bottom. Register memory
/// uses letter suffixes (wa(1), ra=1), window arrays digit suffixes (w0(1),
/// r0=(0,1)).
Trace parse_trace(const std::string& text);

std::string emit_trace(const Adt& adt, const History& h);

/// `trace` renders in input syntax (`r=(0,1)`, bottom as `_`); `report`
/// renders operation/output pairs (`r/(0,1)`, bottom as the bottom glyph),
/// hidden operations as the bare input.
enum class LabelStyle { trace, report };

std::string render_input(const Adt& adt, const Input& in);
std::string render_output(const Output& out, LabelStyle style);
std::string render_label(const Adt& adt, const OpLabel& l, LabelStyle style);

/// Sequence rendering with `.` separators, e.g. `w(1)/⊥.r/(0,1)`.
std::string render_sequence(const Adt& adt, const std::vector<OpLabel>& seq,
                            LabelStyle style);

}  // namespace ccheck
