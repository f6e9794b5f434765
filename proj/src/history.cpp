#include "ccheck/history.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace ccheck {

// ---------------------------------------------------------------- Order

Order Order::from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                        OrderKind kind) {
  Order ord(n, kind);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw StructureError("edge endpoint out of range");
    if (!ord.add_edge(a, b))
      throw OrderError("edges form a cycle through event " +
                       std::to_string(a));
  }
  return ord;
}

Order Order::from_closed(std::vector<Mask> preds, OrderKind kind) {
  Order ord;
  ord.kind_ = kind;
  ord.pred_ = std::move(preds);
  return ord;
}

bool Order::add_edge(int a, int b) {
  if (a == b || before(b, a)) return false;
  if (before(a, b)) return true;
  const Mask below = pred_[a] | bit(a);
  const int n = size();
  for (int y = 0; y < n; ++y)
    if (y == b || before(b, y)) pred_[y] |= below;
  return true;
}

bool Order::contains(const Order& other) const {
  const int n = size();
  if (other.size() != n) return false;
  for (int e = 0; e < n; ++e)
    if (other.pred_[e] & ~pred_[e]) return false;
  return true;
}

bool Order::is_total() const {
  std::size_t related = 0;
  for (Mask m : pred_) related += static_cast<std::size_t>(std::popcount(m));
  const std::size_t n = pred_.size();
  return related == n * (n - 1) / 2;
}

std::vector<std::pair<int, int>> Order::pairs() const {
  std::vector<std::pair<int, int>> out;
  const int n = size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (before(a, b)) out.emplace_back(a, b);
  return out;
}

// ---------------------------------------------------------------- History

std::string History::event_name(int e) const {
  const Event& ev = events[e];
  return process_names[ev.process] + "." + std::to_string(ev.index_in_process);
}

std::optional<int> History::event_by_name(const std::string& name) const {
  for (int e = 0; e < size(); ++e)
    if (event_name(e) == name) return e;
  return std::nullopt;
}

History make_history(
    std::vector<std::pair<std::string, std::vector<OpLabel>>> processes,
    const std::vector<std::pair<int, int>>& extra_edges) {
  History h;
  std::size_t total = 0;
  for (const auto& [name, ops] : processes) total += ops.size();
  if (total > kMaxEvents)
    throw StructureError("history exceeds " + std::to_string(kMaxEvents) +
                         " events");

  std::vector<std::pair<int, int>> edges;
  for (auto& [name, ops] : processes) {
    for (const auto& other : h.process_names)
      if (other == name) throw StructureError("duplicate process id: " + name);
    const int pid = static_cast<int>(h.process_names.size());
    h.process_names.push_back(name);
    h.process_events.emplace_back();
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const int id = static_cast<int>(h.events.size());
      h.events.push_back({id, pid, static_cast<int>(i), ops[i]});
      h.process_events[pid].push_back(id);
      if (i > 0) edges.emplace_back(id - 1, id);
    }
  }
  for (auto [a, b] : extra_edges) {
    if (a < 0 || b < 0 || a >= h.size() || b >= h.size())
      throw StructureError("extra edge references unknown event");
    edges.emplace_back(a, b);
  }
  h.program_order = Order::from_edges(h.size(), edges, OrderKind::program);
  h.extra_edges = extra_edges;
  return h;
}

std::vector<Mask> maximal_chains(const History& h) {
  const int n = h.size();
  const Order& ord = h.program_order;
  std::vector<Mask> succ(static_cast<std::size_t>(n), 0);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a)
      if (ord.before(a, b)) succ[a] |= bit(b);

  // e covers a iff a < e and nothing sits strictly between them.
  auto covers_of = [&](int a) {
    std::vector<int> out;
    for (int e = 0; e < n; ++e)
      if (ord.before(a, e) && !(succ[a] & ord.preds(e))) out.push_back(e);
    return out;
  };

  std::vector<Mask> chains;
  std::vector<int> stack;
  // Depth-first over the cover graph, rooted at the minimal events; every
  // root-to-sink path is one maximal chain.
  auto dfs = [&](auto&& self, int e, Mask acc) -> void {
    acc |= bit(e);
    auto next = covers_of(e);
    if (next.empty()) {
      chains.push_back(acc);
      return;
    }
    for (int c : next) self(self, c, acc);
  };
  for (int e = 0; e < n; ++e)
    if (ord.preds(e) == 0) dfs(dfs, e, 0);
  return chains;
}

History project(const History& h, Mask keep, Mask reveal) {
  History out;
  out.process_names = h.process_names;
  out.process_events.resize(h.process_names.size());
  std::vector<int> remap(static_cast<std::size_t>(h.size()), -1);
  for (int e = 0; e < h.size(); ++e) {
    if (!(keep >> e & 1)) continue;
    const int id = static_cast<int>(out.events.size());
    remap[e] = id;
    Event ev = h.events[e];
    ev.id = id;
    if (!(reveal >> e & 1)) ev.label.out.reset();
    out.events.push_back(std::move(ev));
    out.process_events[out.events.back().process].push_back(id);
  }
  // The restriction of a transitive closure to a subset is itself closed.
  std::vector<Mask> pred(static_cast<std::size_t>(out.size()), 0);
  for (int e = 0; e < h.size(); ++e) {
    if (remap[e] < 0) continue;
    Mask m = h.program_order.preds(e) & keep;
    Mask to = 0;
    while (m) {
      const int a = std::countr_zero(m);
      m &= m - 1;
      to |= bit(remap[a]);
    }
    pred[remap[e]] = to;
  }
  out.program_order = Order::from_closed(std::move(pred),
                                         h.program_order.kind());
  for (auto [a, b] : h.extra_edges)
    if (remap[a] >= 0 && remap[b] >= 0)
      out.extra_edges.emplace_back(remap[a], remap[b]);
  return out;
}

// ------------------------------------------------------ LinearizationStream

LinearizationStream::LinearizationStream(const Order& ord, Mask scope)
    : ord_(ord), scope_(scope) {
  remaining_.push_back(scope_);
}

std::optional<std::vector<int>> LinearizationStream::next() {
  if (done_) return std::nullopt;

  auto ready = [&](int e, Mask rem) {
    return (rem >> e & 1) && !(ord_.preds(e) & rem);
  };
  auto descend = [&](int from) -> bool {
    // Extend the prefix with the smallest ready event, starting the search at
    // `from` for the first level (resume point after backtracking).
    int start = from;
    while (remaining_.back()) {
      const Mask rem = remaining_.back();
      int pick = -1;
      for (int e = start; e < kMaxEvents && pick < 0; ++e)
        if (ready(e, rem)) pick = e;
      if (pick < 0) return false;
      seq_.push_back(pick);
      remaining_.push_back(rem & ~bit(pick));
      start = 0;
    }
    return true;
  };

  if (!started_) {
    started_ = true;
    descend(0);
    if (remaining_.back() == 0) return seq_;
    done_ = true;
    return std::nullopt;
  }
  // Backtrack: replace the deepest choice with the next ready event.
  while (!seq_.empty()) {
    const int last = seq_.back();
    seq_.pop_back();
    remaining_.pop_back();
    if (descend(last + 1) && remaining_.back() == 0) return seq_;
  }
  done_ = true;
  return std::nullopt;
}

LabelSequenceStream::LabelSequenceStream(const History& h, const Order& ord)
    : h_(h), ids_(ord, h.all_events()) {}

std::optional<std::vector<OpLabel>> LabelSequenceStream::next() {
  auto ids = ids_.next();
  if (!ids) return std::nullopt;
  std::vector<OpLabel> out;
  out.reserve(ids->size());
  for (int e : *ids) out.push_back(h_.label(e));
  return out;
}

LabelSequenceStream linearizations(const History& h, const Order& ord) {
  if (ord.size() != h.size())
    throw StructureError("order size does not match history");
  return LabelSequenceStream(h, ord);
}

// ----------------------------------------------------- OrderSupersetStream

OrderSupersetStream::OrderSupersetStream(const Order& base,
                                         const Order* limit_to)
    : n_(base.size()), limit_(limit_to), pred_(base.pred_masks()),
      inc_(static_cast<std::size_t>(n_), 0) {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!base.comparable(i, j)) pairs_.emplace_back(i, j);
}

bool OrderSupersetStream::try_edge(int a, int b) {
  const Mask below = pred_[a] | bit(a);
  Mask above = bit(b);
  for (int y = 0; y < n_; ++y)
    if (pred_[y] >> b & 1) above |= bit(y);
  // Refuse if closure would relate a pair already branched incomparable.
  Mask m = above;
  while (m) {
    const int y = std::countr_zero(m);
    m &= m - 1;
    if (inc_[y] & below) return false;
  }
  m = above;
  while (m) {
    const int y = std::countr_zero(m);
    m &= m - 1;
    const Mask add = below & ~pred_[y];
    if (add) {
      trail_.emplace_back(y, pred_[y]);
      pred_[y] |= add;
    }
  }
  return true;
}

void OrderSupersetStream::undo(const Frame& f) {
  if (f.branch == 0) {
    const auto [i, j] = pairs_[f.pair_idx];
    inc_[i] &= ~bit(j);
    inc_[j] &= ~bit(i);
  } else {
    while (trail_.size() > f.trail_start) {
      pred_[trail_.back().first] = trail_.back().second;
      trail_.pop_back();
    }
  }
}

void OrderSupersetStream::advance_to_leaf(int from_pair) {
  // Branch 0 (leave the pair incomparable) is always consistent, so the
  // default descent marks every still-undecided pair incomparable.
  for (int idx = from_pair; idx < static_cast<int>(pairs_.size()); ++idx) {
    auto [i, j] = pairs_[idx];
    if ((pred_[j] >> i & 1) || (pred_[i] >> j & 1)) continue;
    stack_.push_back({idx, 0, static_cast<std::uint32_t>(trail_.size())});
    inc_[i] |= bit(j);
    inc_[j] |= bit(i);
  }
}

bool OrderSupersetStream::advance() {
  if (done_) return false;
  if (fresh_) {
    fresh_ = false;
    advance_to_leaf(0);
    return true;
  }
  while (!stack_.empty()) {
    Frame& top = stack_.back();
    const int pair_idx = top.pair_idx;
    const auto [i, j] = pairs_[pair_idx];
    bool descended = false;
    for (int br = top.branch + 1; br <= 2 && !descended; ++br) {
      undo(top);
      top.branch = br;  // undo() for branches 1/2 pops the same trail span
      const int a = br == 1 ? i : j;
      const int b = br == 1 ? j : i;
      if (limit_ && !limit_->before(a, b)) continue;
      if (try_edge(a, b)) descended = true;
    }
    if (descended) {
      advance_to_leaf(pair_idx + 1);
      return true;
    }
    undo(top);
    stack_.pop_back();
  }
  done_ = true;
  return false;
}

std::optional<Order> OrderSupersetStream::next() {
  if (!advance()) return std::nullopt;
  return Order::from_closed(pred_, OrderKind::causal_candidate);
}

OrderSupersetStream causal_order_candidates(const History& h, int max_events) {
  if (h.size() > max_events)
    throw SizeBoundError("history has " + std::to_string(h.size()) +
                         " events, above the enumeration bound of " +
                         std::to_string(max_events) +
                         "; pass a larger bound explicitly to proceed");
  return OrderSupersetStream(h.program_order);
}

// ---------------------------------------------------- TotalExtensionStream

TotalExtensionStream::TotalExtensionStream(const Order& base, Mask scope)
    : base_(base), scope_(scope) {
  remaining_.push_back(scope_);
}

std::optional<Order> TotalExtensionStream::next() {
  if (done_) return std::nullopt;

  auto ready = [&](int e, Mask rem) {
    return (rem >> e & 1) && !(base_.preds(e) & rem);
  };
  auto descend = [&](int from) -> bool {
    int start = from;
    while (remaining_.back()) {
      const Mask rem = remaining_.back();
      int pick = -1;
      for (int e = start; e < kMaxEvents && pick < 0; ++e)
        if (ready(e, rem)) pick = e;
      if (pick < 0) return false;
      seq_.push_back(pick);
      remaining_.push_back(rem & ~bit(pick));
      start = 0;
    }
    return true;
  };
  auto emit = [&] {
    std::vector<Mask> pred(static_cast<std::size_t>(base_.size()), 0);
    Mask seen = 0;
    for (int e : seq_) {
      pred[e] = seen;
      seen |= bit(e);
    }
    return Order::from_closed(std::move(pred), OrderKind::total);
  };

  if (!started_) {
    started_ = true;
    descend(0);
    if (remaining_.back() == 0) return emit();
    done_ = true;
    return std::nullopt;
  }
  while (!seq_.empty()) {
    const int last = seq_.back();
    seq_.pop_back();
    remaining_.pop_back();
    if (descend(last + 1) && remaining_.back() == 0) return emit();
  }
  done_ = true;
  return std::nullopt;
}

TotalExtensionStream total_extensions(const History& h, const Order& base) {
  if (base.size() != h.size())
    throw StructureError("order size does not match history");
  return TotalExtensionStream(base, h.all_events());
}

}  // namespace ccheck
