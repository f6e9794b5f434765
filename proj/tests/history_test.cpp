#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <set>
#include <vector>

#include "ccheck/history.hpp"

using namespace ccheck;

namespace {

/// Processes with the given op counts; labels are distinct register writes so
/// events stay tellable-apart through projections.
History mk(const std::vector<int>& sizes,
           const std::vector<std::pair<int, int>>& extra = {}) {
  std::vector<std::pair<std::string, std::vector<OpLabel>>> procs;
  Value v = 1;
  for (std::size_t p = 0; p < sizes.size(); ++p) {
    std::vector<OpLabel> ops;
    for (int i = 0; i < sizes[p]; ++i)
      ops.push_back({{OpKind::write, 0, v++}, Output::bot()});
    procs.emplace_back("p" + std::to_string(p), std::move(ops));
  }
  return make_history(std::move(procs), extra);
}

std::uint64_t count_candidates(const History& h, int bound = 12) {
  auto s = causal_order_candidates(h, bound);
  std::uint64_t n = 0;
  while (s.advance()) ++n;
  return n;
}

std::uint64_t count_totals(const History& h) {
  auto s = total_extensions(h, h.program_order);
  std::uint64_t n = 0;
  while (s.next()) ++n;
  return n;
}

int reindex(Mask keep, int e) { return std::popcount(keep & (bit(e) - 1)); }

Mask image(Mask keep, Mask s) {
  Mask out = 0;
  for (Mask m = s & keep; m;) {
    const int e = std::countr_zero(m);
    m &= m - 1;
    out |= bit(reindex(keep, e));
  }
  return out;
}

bool same_history(const History& x, const History& y) {
  if (x.size() != y.size()) return false;
  if (x.process_names != y.process_names) return false;
  for (int e = 0; e < x.size(); ++e) {
    if (x.event_name(e) != y.event_name(e)) return false;
    if (!(x.label(e) == y.label(e))) return false;
  }
  return x.program_order.pred_masks() == y.program_order.pred_masks() &&
         x.extra_edges == y.extra_edges;
}

}  // namespace

TEST_CASE("orders close transitively and reject cycles") {
  Order o = Order::from_edges(3, {{0, 1}, {1, 2}});
  CHECK(o.before(0, 2));
  CHECK_FALSE(o.before(2, 0));
  CHECK(o.pairs() == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(o.is_total());
  CHECK_THROWS_AS(Order::from_edges(2, {{0, 1}, {1, 0}}), OrderError);
  CHECK_THROWS_AS(Order::from_edges(2, {{0, 0}}), OrderError);
  CHECK_THROWS_AS(Order::from_edges(2, {{0, 5}}), StructureError);

  Order p = Order::from_edges(3, {{0, 1}});
  Order before = p;
  CHECK_FALSE(p.add_edge(1, 0));  // would close a cycle
  CHECK(p == before);             // and must leave the order untouched
  CHECK(p.add_edge(1, 2));
  CHECK(p.before(0, 2));
  CHECK(p.contains(before));
  CHECK_FALSE(before.contains(p));
}

TEST_CASE("histories expose processes, names and program order") {
  History h = mk({2, 2});
  CHECK(h.size() == 4);
  CHECK(h.event_name(1) == "p0.1");
  CHECK(h.event_by_name("p1.0") == 2);
  CHECK_FALSE(h.event_by_name("p9.0").has_value());
  CHECK(h.program_order.before(0, 1));
  CHECK(h.program_order.before(2, 3));
  CHECK_FALSE(h.program_order.comparable(0, 2));

  CHECK_THROWS_AS(make_history({{"a", {}}, {"a", {}}}), StructureError);
  CHECK_THROWS_AS(mk({2}, {{0, 9}}), StructureError);
  CHECK_THROWS_AS(mk({2}, {{1, 0}}), OrderError);
}

TEST_CASE("maximal chains") {
  CHECK(maximal_chains(mk({2, 2})) == std::vector<Mask>{0b0011, 0b1100});
  CHECK(maximal_chains(mk({1, 1, 1}, {{0, 1}, {0, 2}})) ==
        std::vector<Mask>{0b011, 0b101});
  CHECK(maximal_chains(mk({1, 1, 1, 1}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}})) ==
        std::vector<Mask>{0b1011, 0b1101});
  CHECK(maximal_chains(mk({})).empty());
}

TEST_CASE("linearizations come lexicographically and exactly once") {
  History h = mk({2, 2});
  LinearizationStream s(h.program_order, h.all_events());
  std::vector<std::vector<int>> got;
  while (auto ids = s.next()) got.push_back(*ids);
  CHECK(got == std::vector<std::vector<int>>{{0, 1, 2, 3},
                                             {0, 2, 1, 3},
                                             {0, 2, 3, 1},
                                             {2, 0, 1, 3},
                                             {2, 0, 3, 1},
                                             {2, 3, 0, 1}});
  // empty scope yields the empty sequence once
  LinearizationStream e(h.program_order, 0);
  CHECK(e.next() == std::vector<int>{});
  CHECK_FALSE(e.next().has_value());
}

TEST_CASE("total extensions match the linearization stream") {
  History h = mk({2, 2});
  auto totals = total_extensions(h, h.program_order);
  LinearizationStream lins(h.program_order, h.all_events());
  while (auto t = totals.next()) {
    auto ids = lins.next();
    REQUIRE(ids.has_value());
    CHECK(totals.sequence() == *ids);
    CHECK(t->is_total());
    CHECK(t->contains(h.program_order));
  }
  CHECK_FALSE(lins.next().has_value());
}

TEST_CASE("order superset counts on small shapes") {
  CHECK(count_candidates(mk({1})) == 1);
  CHECK(count_candidates(mk({1, 1})) == 3);
  CHECK(count_candidates(mk({2, 2})) == 20);
  CHECK(count_candidates(mk({2, 1, 1})) == 66);
  CHECK(count_candidates(mk({3, 3})) == 175);
  CHECK(count_candidates(mk({2, 2, 2})) == 2827);
  CHECK(count_candidates(mk({})) == 1);

  CHECK(count_totals(mk({1})) == 1);
  CHECK(count_totals(mk({1, 1})) == 2);
  CHECK(count_totals(mk({2, 2})) == 6);
  CHECK(count_totals(mk({3, 3})) == 20);
  CHECK(count_totals(mk({2, 2, 2})) == 90);
  CHECK(count_totals(mk({})) == 1);
}

TEST_CASE("candidate stream: base first, each closed, unique, deterministic") {
  History h = mk({2, 2});
  auto s = causal_order_candidates(h);
  std::vector<std::vector<Mask>> seen;
  bool first = true;
  while (auto ord = s.next()) {
    if (first) {
      CHECK(ord->pred_masks() == h.program_order.pred_masks());
      first = false;
    }
    CHECK(ord->contains(h.program_order));
    const int n = ord->size();
    for (int a = 0; a < n; ++a) {
      CHECK_FALSE(ord->before(a, a));
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (ord->before(a, b) && ord->before(b, c)) CHECK(ord->before(a, c));
    }
    seen.push_back(ord->pred_masks());
  }
  std::set<std::vector<Mask>> uniq(seen.begin(), seen.end());
  CHECK(uniq.size() == seen.size());

  auto s2 = causal_order_candidates(h);
  std::vector<std::vector<Mask>> again;
  while (s2.advance()) again.push_back(s2.current());
  CHECK(again == seen);
}

TEST_CASE("limit_to restricts the stream to suborders of a total") {
  History h = mk({2, 2});
  auto totals = total_extensions(h, h.program_order);
  while (auto t = totals.next()) {
    std::set<std::vector<Mask>> expect;
    auto full = causal_order_candidates(h);
    while (full.advance()) {
      Order cand = Order::from_closed(full.current(), OrderKind::causal_candidate);
      if (t->contains(cand)) expect.insert(full.current());
    }
    std::set<std::vector<Mask>> got;
    OrderSupersetStream limited(h.program_order, &*t);
    while (limited.advance()) got.insert(limited.current());
    CHECK(got == expect);
  }
}

TEST_CASE("enumeration refuses oversized histories") {
  History big = mk({6, 5});
  CHECK_THROWS_AS(causal_order_candidates(big), SizeBoundError);
  auto s = causal_order_candidates(big, 11);
  CHECK(s.advance());
}

TEST_CASE("projection keeps names, restricts order, hides outputs") {
  // p0: wa(1) ra=1   p1: wa(2) ra=2
  std::vector<std::pair<std::string, std::vector<OpLabel>>> procs{
      {"p0", {{{OpKind::write, 0, 1}, Output::bot()},
              {{OpKind::read, 0, 0}, Output::scalar(1)}}},
      {"p1", {{{OpKind::write, 0, 2}, Output::bot()},
              {{OpKind::read, 0, 0}, Output::scalar(2)}}}};
  History h = make_history(procs);

  History id = project(h, h.all_events(), h.all_events());
  CHECK(same_history(id, h));

  History sub = project(h, 0b1011, 0b0001);
  CHECK(sub.size() == 3);
  CHECK(sub.event_name(0) == "p0.0");
  CHECK(sub.event_name(1) == "p0.1");
  CHECK(sub.event_name(2) == "p1.1");
  CHECK(sub.label(0).out == Output::bot());
  CHECK_FALSE(sub.label(1).out.has_value());
  CHECK_FALSE(sub.label(2).out.has_value());
  CHECK(sub.program_order.before(0, 1));
  CHECK_FALSE(sub.program_order.comparable(0, 2));

  SUBCASE("composition collapses to a single projection") {
    for (Mask a = 0; a < 16; ++a) {
      for (Mask b2 = 0; b2 < 16; ++b2) {
        for (Mask r1 : {Mask{0}, Mask{0b0101}, Mask{0b1010}, Mask{0b1111}}) {
          for (Mask r2 : {Mask{0}, Mask{0b0011}, Mask{0b1100}, Mask{0b1111}}) {
            History once = project(h, a, r1);
            History twice = project(once, image(a, b2), image(a, r2));
            History direct = project(h, a & b2, r1 & r2);
            CHECK(same_history(twice, direct));
          }
        }
      }
    }
  }
}
