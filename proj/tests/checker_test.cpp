#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <sstream>
#include <string>

#include "ccheck/checker.hpp"
#include "ccheck/trace.hpp"

using namespace ccheck;

namespace {

struct Fixture {
  const char* name;
  const char* trace;
  const char* expect;  // space-separated crit:0/1 pairs
};

// Verdicts pinned by an independent brute-force checker (tools/oracle),
// which enumerates orders and linearizations by definition, with no shared
// code or search strategy.
const Fixture kFixtures[] = {
    {"wb-two-writers",
     "adt wstream k=2\n"
     "process p0: w(1) r=(0,1) r=(1,2)\n"
     "process p1: w(2) r=(0,2) r=(1,2)\n",
     "sc:0 pc:0 wcc:1 cc:0 ccv:1"},
    {"wb-forwarded-write",
     "adt wstream k=2\n"
     "process p0: w(1)\n"
     "process p1: r=(0,1) w(2)\n"
     "process p2: r=(2,1)\n",
     "sc:0 pc:1 wcc:0 cc:0 ccv:0"},
    {"wb-crossed-reads",
     "adt wstream k=2\n"
     "process p0: w(1) r=(2,1)\n"
     "process p1: w(2) r=(1,2)\n",
     "sc:0 pc:1 wcc:1 cc:1 ccv:0"},
    {"wb-agreeing-reads",
     "adt wstream k=2\n"
     "process p0: w(1) r=(0,1)\n"
     "process p1: w(2) r=(1,2)\n",
     "sc:1 pc:1 wcc:1 cc:1 ccv:1"},
    {"queue-shared-pop",
     "adt queue\n"
     "process p0: pop=1 pop=_\n"
     "process p1: push(1) push(2) pop=1 pop=_\n",
     "sc:0 pc:1 wcc:1 cc:1 ccv:1"},
    {"queue-rnd-ok",
     "adt queue\n"
     "process p0: push(2) push(1)\n"
     "process p1: pop=2 push(1) push(1)\n",
     "sc:1 pc:1 wcc:1 cc:1 ccv:1"},
    {"window-rnd-unreadable",
     "adt wstream k=2\n"
     "process p0: r=(2,1)\n"
     "process p1: r=(3,3) r=(2,3) r=(2,1) w(2)\n",
     "sc:0 pc:0 wcc:0 cc:0 ccv:0"},
    {"memory-rnd-ok",
     "adt memory\n"
     "process p0: ra=1\n"
     "process p1: wa(1)\n"
     "process p2: rb=0\n",
     "sc:1 pc:1 wcc:1 cc:1 ccv:1 cm:1"},
    {"memory-overwritten-zero",
     "adt memory\n"
     "process p0: wb(2) rb=0 wb(1)\n",
     "sc:0 pc:0 wcc:0 cc:0 ccv:0 cm:0"},
    {"queue-pop-from-nowhere",
     "adt queue\n"
     "process p0: pop=1 pop=3\n",
     "sc:0 pc:0 wcc:0 cc:0 ccv:0"},
    {"memory-rnd-circular",
     "adt memory\n"
     "process p0: ra=3 wb(3)\n"
     "process p1: rb=2 wa(2) rb=1\n",
     "sc:0 pc:0 wcc:0 cc:0 ccv:0 cm:0"},
    {"memory-rnd-unwritten",
     "adt memory\n"
     "process p0: rb=0\n"
     "process p1: wb(1) ra=2\n",
     "sc:0 pc:0 wcc:0 cc:0 ccv:0 cm:0"},
    {"window-rnd-initial",
     "adt wstream k=2\n"
     "process p0: r=(0,0) r=(2,3)\n",
     "sc:0 pc:0 wcc:0 cc:0 ccv:0"},
    {"queue-rnd-phantom",
     "adt queue\n"
     "process p0: pop=_ push(3)\n"
     "process p1: pop=_ pop=1 pop=1\n",
     "sc:0 pc:0 wcc:0 cc:0 ccv:0"},
    {"queue-rnd-wrong-head",
     "adt queue\n"
     "process p0: push(2) push(2)\n"
     "process p1: pop=1 push(3) push(2)\n",
     "sc:0 pc:0 wcc:0 cc:0 ccv:0"},
    {"window-rnd-stale",
     "adt wstream k=2\n"
     "process p0: w(3) w(1) r=(2,1) r=(1,2)\n"
     "process p1: r=(2,2)\n",
     "sc:0 pc:0 wcc:0 cc:0 ccv:0"},
    {"window-rnd-vanishing",
     "adt wstream k=2\n"
     "process p0: w(2) w(1) r=(0,0)\n"
     "process p1: r=(0,2) w(3)\n",
     "sc:0 pc:0 wcc:0 cc:0 ccv:0"},
};

std::map<std::string, bool> parse_expect(const std::string& s) {
  std::map<std::string, bool> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    const auto colon = tok.find(':');
    out[tok.substr(0, colon)] = tok.substr(colon + 1) == "1";
  }
  return out;
}

}  // namespace

TEST_CASE("verdicts match the independent oracle") {
  for (const Fixture& f : kFixtures) {
    CAPTURE(f.name);
    Trace t = parse_trace(f.trace);
    auto verdicts = classify_all(t.history, t.adt);
    auto expect = parse_expect(f.expect);
    CHECK(verdicts.size() == expect.size());
    for (const auto& [name, want] : expect) {
      CAPTURE(name);
      auto crit = criterion_by_name(name);
      REQUIRE(crit.has_value());
      REQUIRE(verdicts.count(*crit) == 1);
      const Verdict& v = verdicts.at(*crit);
      CHECK(v.holds == want);
      if (v.holds) {
        REQUIRE(v.witness.has_value());
        CHECK(witness_sound(t.history, t.adt, v));
      } else {
        CHECK(v.refutation.has_value());
      }
    }
  }
}

TEST_CASE("verdicts and exploration counts are deterministic") {
  for (const Fixture& f : kFixtures) {
    CAPTURE(f.name);
    Trace t = parse_trace(f.trace);
    auto a = classify_all(t.history, t.adt);
    auto b = classify_all(t.history, t.adt);
    for (const auto& [crit, va] : a) {
      CHECK(va.holds == b.at(crit).holds);
      CHECK(va.explored == b.at(crit).explored);
    }
  }
}

TEST_CASE("criterion hierarchy on the fixture corpus") {
  for (const Fixture& f : kFixtures) {
    CAPTURE(f.name);
    Trace t = parse_trace(f.trace);
    auto v = classify_all(t.history, t.adt);
    auto holds = [&](Criterion c) { return v.at(c).holds; };
    if (holds(Criterion::sc)) {
      CHECK(holds(Criterion::cc));
      CHECK(holds(Criterion::ccv));
    }
    if (holds(Criterion::cc)) {
      CHECK(holds(Criterion::pc));
      CHECK(holds(Criterion::wcc));
    }
    if (holds(Criterion::ccv)) CHECK(holds(Criterion::wcc));
  }
}

TEST_CASE("interleaving witness prints the full replay") {
  Trace t = parse_trace(
      "adt wstream k=2\n"
      "process p0: w(1) r=(0,1)\n"
      "process p1: w(2) r=(1,2)\n");
  Verdict v = check_sc(t.history, t.adt);
  REQUIRE(v.holds);
  REQUIRE(v.witness.has_value());
  REQUIRE(v.witness->per_event_linearizations.size() == 1);
  const auto& lin = v.witness->per_event_linearizations.begin()->second;
  CHECK(render_sequence(t.adt, lin, LabelStyle::report) ==
        "w(1)/⊥.r/(0,1).w(2)/⊥.r/(1,2)");
}

TEST_CASE("refutation pinpoints the stuck read") {
  Trace t = parse_trace(
      "adt wstream k=2\n"
      "process p0: w(1)\n"
      "process p1: r=(0,1) w(2)\n"
      "process p2: r=(2,1)\n");
  Verdict v = check_wcc(t.history, t.adt);
  REQUIRE_FALSE(v.holds);
  REQUIRE(v.refutation.has_value());
  CHECK(t.history.event_name(v.refutation->event) == "p2.0");
  CHECK(render_sequence(t.adt, v.refutation->attempted, LabelStyle::report) ==
        "w(1).r.w(2).r/(2,1)");
}

TEST_CASE("arbitration witness nests the three orders") {
  Trace t = parse_trace(
      "adt wstream k=2\n"
      "process p0: w(1) r=(0,1) r=(1,2)\n"
      "process p1: w(2) r=(0,2) r=(1,2)\n");
  Verdict v = check_ccv(t.history, t.adt);
  REQUIRE(v.holds);
  REQUIRE(v.witness.has_value());
  REQUIRE(v.witness->total_order.has_value());
  CHECK(v.witness->total_order->is_total());
  CHECK(v.witness->total_order->contains(v.witness->causal_order));
  CHECK(v.witness->causal_order.contains(t.history.program_order));
}

TEST_CASE("writes-into witness names its reads") {
  Trace t = parse_trace(
      "adt memory\n"
      "process p0: ra=1\n"
      "process p1: wa(1)\n"
      "process p2: rb=0\n");
  Verdict v = check_cm(t.history, t.adt);
  REQUIRE(v.holds);
  REQUIRE(v.witness.has_value());
  REQUIRE(v.witness->writes_into.has_value());
  // ra=1 must be fed by the only wa(1); rb=0 reads the initial value.
  REQUIRE(v.witness->writes_into->size() == 1);
  CHECK(v.witness->writes_into->front() ==
        std::pair<int, int>{*t.history.event_by_name("p1.0"),
                            *t.history.event_by_name("p0.0")});
}

TEST_CASE("the memory-only checker rejects other types") {
  Trace t = parse_trace("adt queue\nprocess p0: push(1)\n");
  CHECK_THROWS_AS(check_cm(t.history, t.adt), AdtMismatchError);
}

TEST_CASE("empty histories satisfy everything") {
  Trace t = parse_trace("adt memory\nprocess p0:\n");
  auto v = classify_all(t.history, t.adt);
  CHECK(v.size() == 6);
  for (const auto& [crit, verdict] : v) {
    CHECK(verdict.holds);
    CHECK(witness_sound(t.history, t.adt, verdict));
  }
}

TEST_CASE("enumeration bound guards the order-quantified checkers") {
  std::string big = "adt memory\nprocess p0:";
  for (int i = 0; i < 11; ++i) big += " wa(" + std::to_string(i + 1) + ")";
  big += "\n";
  Trace t = parse_trace(big);
  CHECK_THROWS_AS(check_wcc(t.history, t.adt), SizeBoundError);
  CHECK_THROWS_AS(check_cc(t.history, t.adt), SizeBoundError);
  CHECK_THROWS_AS(check_ccv(t.history, t.adt), SizeBoundError);
  CHECK_THROWS_AS(check_cm(t.history, t.adt), SizeBoundError);
  CheckOptions wide;
  wide.max_events = 16;
  CHECK(check_wcc(t.history, t.adt, wide).holds);
  CHECK(check_sc(t.history, t.adt).holds);  // sc itself is unbounded
}

TEST_CASE("store buffering passes the per-process checks only") {
  // Each process misses the other's write: fine per process, impossible in
  // any single interleaving.
  Trace t = parse_trace(
      "adt memory\n"
      "process p0: wa(1) rb=0\n"
      "process p1: wb(1) ra=0\n");
  CHECK_FALSE(check_sc(t.history, t.adt).holds);
  CHECK(check_pc(t.history, t.adt).holds);
  CHECK(check_cm(t.history, t.adt).holds);
}
