#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "ccheck/corpus.hpp"
#include "ccheck/trace.hpp"

using namespace ccheck;

namespace {

ParseError capture(const std::string& text) {
  try {
    parse_trace(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError(0, 0, "unreachable");
}

}  // namespace

TEST_CASE("window stream trace parses into the expected history") {
  const std::string text =
      "adt wstream k=2\n"
      "process p0: w(1) r=(0,1)\n"
      "process p1: w(2) r=(1,2)\n";
  Trace tr = parse_trace(text);
  CHECK(tr.adt.name() == "wstream k=2");
  REQUIRE(tr.history.size() == 4);
  REQUIRE(tr.history.process_names.size() == 2);
  CHECK(tr.history.process_names[0] == "p0");
  CHECK(tr.history.process_names[1] == "p1");

  const OpLabel& w1 = tr.history.label(0);
  CHECK(w1.in.kind == OpKind::write);
  CHECK(w1.in.arg == 1);
  REQUIRE(w1.out.has_value());
  CHECK(w1.out->bottom);

  const OpLabel& r01 = tr.history.label(1);
  CHECK(r01.in.kind == OpKind::read);
  REQUIRE(r01.out.has_value());
  CHECK(r01.out->vals == std::vector<Value>{0, 1});

  // Program order within a process, nothing across processes.
  CHECK(tr.history.program_order.before(0, 1));
  CHECK(tr.history.program_order.before(2, 3));
  CHECK(!tr.history.program_order.comparable(0, 2));
  CHECK(!tr.history.program_order.comparable(1, 3));
}

TEST_CASE("bare queries are hidden") {
  Trace tr = parse_trace("adt wstream k=2\nprocess p0: w(1) r r=(0,1)\n");
  CHECK(tr.history.label(1).hidden());
  CHECK(!tr.history.label(2).hidden());
  CHECK(emit_trace(tr.adt, tr.history) ==
        "adt wstream k=2\nprocess p0: w(1) r r=(0,1)\n");
}

TEST_CASE("empty body yields an empty history") {
  Trace tr = parse_trace("adt queue\n");
  CHECK(tr.history.size() == 0);
  CHECK(tr.history.process_names.empty());
  CHECK(emit_trace(tr.adt, tr.history) == "adt queue\n");
}

TEST_CASE("comments and blank lines are ignored, colon may hug the ops") {
  const std::string text =
      "# a queue exercise\n"
      "\n"
      "adt queue   # header comment\n"
      "process p0:push(1) pop=1\n"
      "   \n"
      "process p1: pop=_\n";
  Trace tr = parse_trace(text);
  REQUIRE(tr.history.size() == 3);
  CHECK(tr.history.label(0).in.kind == OpKind::push);
  CHECK(tr.history.label(1).out->vals == std::vector<Value>{1});
  CHECK(tr.history.label(2).out->bottom);
}

TEST_CASE("memory registers are collected from the trace") {
  Trace tr = parse_trace(
      "adt memory\n"
      "process p0: wd(1) ra=0\n"
      "process p1: wa(2) rd=1\n");
  CHECK(tr.adt.registers() == "ad");  // sorted, sized to what is touched
  CHECK(tr.history.label(0).in.loc == 1);  // d
  CHECK(tr.history.label(1).in.loc == 0);  // a
  CHECK(emit_trace(tr.adt, tr.history) ==
        "adt memory\nprocess p0: wd(1) ra=0\nprocess p1: wa(2) rd=1\n");
}

TEST_CASE("window array ops carry stream indices") {
  Trace tr = parse_trace(
      "adt warray K=2 k=2\n"
      "process p0: w1(5) r0=(0,0) r1\n");
  CHECK(tr.adt.name() == "warray K=2 k=2");
  CHECK(tr.history.label(0).in.loc == 1);
  CHECK(tr.history.label(1).in.loc == 0);
  CHECK(tr.history.label(2).hidden());
  CHECK(emit_trace(tr.adt, tr.history) ==
        "adt warray K=2 k=2\nprocess p0: w1(5) r0=(0,0) r1\n");
}

TEST_CASE("guarded queue ops parse and re-emit") {
  const std::string text =
      "adt gqueue\n"
      "process p0: push(1) hd=1 rh(1) hd=_\n";
  Trace tr = parse_trace(text);
  CHECK(tr.history.label(1).in.kind == OpKind::hd);
  CHECK(tr.history.label(2).in.kind == OpKind::rh);
  CHECK(tr.history.label(2).in.arg == 1);
  CHECK(tr.history.label(3).out->bottom);
  CHECK(emit_trace(tr.adt, tr.history) == text);
}

TEST_CASE("po lines add cross-process edges and round-trip") {
  const std::string text =
      "adt wstream k=1\n"
      "process p0: w(1)\n"
      "process p1: w(2) r=(2)\n"
      "po p0.0 p1.1\n";
  Trace tr = parse_trace(text);
  // Events: p0.0 = 0, p1.0 = 1, p1.1 = 2.
  CHECK(!tr.history.program_order.comparable(0, 1));
  CHECK(tr.history.program_order.before(0, 2));  // the po edge
  CHECK(emit_trace(tr.adt, tr.history) == text);
}

TEST_CASE("round trip is the identity on canonical traces") {
  for (const CorpusEntry& entry : golden_corpus()) {
    CAPTURE(entry.id);
    Trace tr = parse_trace(entry.trace);
    CHECK(emit_trace(tr.adt, tr.history) == entry.trace);
    // And a second pass through the parser agrees event by event.
    Trace tr2 = parse_trace(emit_trace(tr.adt, tr.history));
    REQUIRE(tr2.history.size() == tr.history.size());
    for (int e = 0; e < tr.history.size(); ++e)
      CHECK(tr2.history.label(e) == tr.history.label(e));
    CHECK(tr2.history.program_order.pred_masks() ==
          tr.history.program_order.pred_masks());
  }
}

TEST_CASE("parse errors carry line and column") {
  SUBCASE("missing header") {
    ParseError e = capture("");
    CHECK(e.line == 1);
    CHECK(e.col == 1);
  }
  SUBCASE("first line must be the adt header") {
    ParseError e = capture("process p0: w(1)\n");
    CHECK(e.line == 1);
  }
  SUBCASE("unknown adt name") {
    ParseError e = capture("adt stack\nprocess p0: push(1)\n");
    CHECK(e.line == 1);
    CHECK(e.col == 5);
    CHECK(std::string(e.what()).find("unknown data type") != std::string::npos);
  }
  SUBCASE("missing window parameter") {
    CHECK_THROWS_AS(parse_trace("adt wstream\n"), ParseError);
    CHECK_THROWS_AS(parse_trace("adt wstream k=0\n"), ParseError);
    CHECK_THROWS_AS(parse_trace("adt warray K=2\n"), ParseError);
  }
  SUBCASE("unknown operation token") {
    ParseError e = capture("adt queue\nprocess p0: push(1) glorp\n");
    CHECK(e.line == 2);
    CHECK(e.col == 21);
  }
  SUBCASE("bad integer in a tuple") {
    CHECK_THROWS_AS(parse_trace("adt wstream k=2\nprocess p0: r=(0,x)\n"),
                    ParseError);
  }
  SUBCASE("window output arity must match k") {
    ParseError e = capture("adt wstream k=2\nprocess p0: r=(1)\n");
    CHECK(std::string(e.what()).find("exactly 2") != std::string::npos);
  }
  SUBCASE("stream index out of range") {
    CHECK_THROWS_AS(parse_trace("adt warray K=2 k=1\nprocess p0: w2(1)\n"),
                    ParseError);
  }
  SUBCASE("register reads cannot record a bottom") {
    ParseError e = capture("adt memory\nprocess p0: ra=_\n");
    CHECK(std::string(e.what()).find("register reads") != std::string::npos);
  }
  SUBCASE("updates take no recorded output") {
    CHECK_THROWS_AS(parse_trace("adt queue\nprocess p0: push(1)=2\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_trace("adt gqueue\nprocess p0: rh(1)=_\n"),
                    ParseError);
  }
  SUBCASE("duplicate process name") {
    ParseError e = capture(
        "adt queue\nprocess p0: push(1)\nprocess p0: pop=1\n");
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }
  SUBCASE("process names must not contain a dot") {
    CHECK_THROWS_AS(parse_trace("adt queue\nprocess p.0: push(1)\n"),
                    ParseError);
  }
  SUBCASE("stray line") {
    ParseError e = capture("adt queue\nprocess p0: push(1)\nprogram p1: pop\n");
    CHECK(e.line == 3);
  }
  SUBCASE("self-loop po edge") {
    ParseError e = capture(
        "adt queue\nprocess p0: push(1) pop=1\npo p0.0 p0.0\n");
    CHECK(std::string(e.what()).find("cycle") != std::string::npos);
  }
  SUBCASE("po edge against program order") {
    CHECK_THROWS_AS(
        parse_trace("adt queue\nprocess p0: push(1) pop=1\npo p0.1 p0.0\n"),
        ParseError);
  }
  SUBCASE("po references must resolve") {
    CHECK_THROWS_AS(
        parse_trace("adt queue\nprocess p0: push(1)\npo p9.0 p0.0\n"),
        ParseError);
    CHECK_THROWS_AS(
        parse_trace("adt queue\nprocess p0: push(1)\npo p0.7 p0.0\n"),
        ParseError);
    CHECK_THROWS_AS(
        parse_trace("adt queue\nprocess p0: push(1)\npo p0:0 p0.0\n"),
        ParseError);
  }
  SUBCASE("event cap") {
    std::string text = "adt queue\nprocess p0:";
    for (int i = 0; i < 65; ++i) text += " push(1)";
    CHECK_THROWS_AS(parse_trace(text + "\n"), ParseError);
  }
}

TEST_CASE("render styles") {
  const Adt ws = Adt::window_stream(2);
  const OpLabel w{{OpKind::write, 0, 1}, Output::bot()};
  const OpLabel r{{OpKind::read, 0, 0}, Output::tuple({0, 1})};
  const OpLabel hidden{{OpKind::read, 0, 0}, std::nullopt};

  CHECK(render_label(ws, w, LabelStyle::trace) == "w(1)");  // implicit bottom
  CHECK(render_label(ws, w, LabelStyle::report) == "w(1)/⊥");
  CHECK(render_label(ws, r, LabelStyle::trace) == "r=(0,1)");
  CHECK(render_label(ws, r, LabelStyle::report) == "r/(0,1)");
  CHECK(render_label(ws, hidden, LabelStyle::trace) == "r");
  CHECK(render_label(ws, hidden, LabelStyle::report) == "r");

  CHECK(render_sequence(ws, {w, r}, LabelStyle::report) == "w(1)/⊥.r/(0,1)");

  const Adt mem = Adt::memory("ab");
  const OpLabel rb{{OpKind::read, 1, 0}, Output::scalar(3)};
  CHECK(render_label(mem, rb, LabelStyle::trace) == "rb=3");
  CHECK(render_label(mem, rb, LabelStyle::report) == "rb/3");

  const Adt q = Adt::fifo_queue();
  const OpLabel pop_bot{{OpKind::pop, 0, 0}, Output::bot()};
  CHECK(render_label(q, pop_bot, LabelStyle::trace) == "pop=_");
  CHECK(render_label(q, pop_bot, LabelStyle::report) == "pop/⊥");
}
