#include "ccheck/checker.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace ccheck {

namespace {

using Key = std::vector<std::uint64_t>;

struct KeyHash {
  std::size_t operator()(const Key& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t w : v) {
      h ^= w;
      h *= 1099511628211ull;
    }
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

/// Shared machinery for one (history, ADT) pair: linearization search with
/// dead-state pruning, memoized across the candidate orders a checker walks.
class Search {
 public:
  Search(const History& h, const Adt& adt)
      : h_(h), adt_(adt), n_(h.size()), init_(adt.initial_state()),
        memory_(adt.kind() == AdtKind::memory) {
    for (int e = 0; e < n_; ++e) adt_.validate(h_.label(e).in);
  }

  /// Is some linearization of `scope` under `preds` admissible, with outputs
  /// enforced only on `reveal`?
  bool admissible(Mask scope, Mask reveal, const std::vector<Mask>& preds) {
    reveal &= scope;
    if (memory_) {
      if (auto fast = memory_single_reveal(scope, reveal, preds)) return *fast;
    }
    key_.clear();
    key_.push_back(scope);
    key_.push_back(reveal);
    for (Mask m = scope; m;) {
      const int e = std::countr_zero(m);
      m &= m - 1;
      key_.push_back(preds[e] & scope);
    }
    const auto it = memo_.find(key_);
    if (it != memo_.end()) return it->second;
    visited_.clear();
    const bool ok = dfs(scope, reveal, preds, 0, init_, nullptr);
    memo_.emplace(key_, ok);
    return ok;
  }

  /// First admissible linearization in ascending-id preference order.
  std::optional<std::vector<int>> find_lin(Mask scope, Mask reveal,
                                           const std::vector<Mask>& preds) {
    visited_.clear();
    std::vector<int> path;
    if (dfs(scope, reveal & scope, preds, 0, init_, &path)) return path;
    return std::nullopt;
  }

  /// Event ids -> label sequence, hiding outputs outside `reveal`.
  std::vector<OpLabel> labels_of(const std::vector<int>& ids,
                                 Mask reveal) const {
    std::vector<OpLabel> out;
    out.reserve(ids.size());
    for (int e : ids) {
      OpLabel l = h_.label(e);
      if (!(reveal >> e & 1)) l.out.reset();
      out.push_back(std::move(l));
    }
    return out;
  }

  // --- fixed-sequence replays (one per total order) ---------------------

  void set_sequence(const std::vector<int>& seq) {
    seq_ = &seq;
    seq_memo_.clear();
  }

  /// Replays `scope` in sequence order with only `e`'s output enforced.
  /// `e` is always sequence-maximal in `scope`, so the scope mask alone
  /// identifies the replay.
  bool sequence_past_ok(Mask scope, int e) {
    const auto it = seq_memo_.find(scope);
    if (it != seq_memo_.end()) return it->second;
    State q = init_;
    bool ok = true;
    for (int ev : *seq_) {
      if (!(scope >> ev & 1)) continue;
      auto [q2, out] = adt_.step(q, h_.label(ev).in);
      if (ev == e && h_.label(ev).out && *h_.label(ev).out != out) {
        ok = false;
        break;
      }
      q = std::move(q2);
    }
    seq_memo_.emplace(scope, ok);
    return ok;
  }

  std::vector<int> sequence_ids(Mask scope) const {
    std::vector<int> ids;
    for (int ev : *seq_)
      if (scope >> ev & 1) ids.push_back(ev);
    return ids;
  }

 private:
  bool dfs(Mask scope, Mask reveal, const std::vector<Mask>& preds, Mask done,
           const State& q, std::vector<int>* path) {
    if (done == scope) return true;
    for (Mask avail = scope & ~done; avail;) {
      const int e = std::countr_zero(avail);
      avail &= avail - 1;
      if (preds[e] & scope & ~done) continue;
      auto [q2, out] = adt_.step(q, h_.label(e).in);
      if ((reveal >> e & 1) && h_.label(e).out && *h_.label(e).out != out)
        continue;
      vkey_.clear();
      vkey_.push_back(done | bit(e));
      vkey_.insert(vkey_.end(), q2.begin(), q2.end());
      if (!visited_.insert(vkey_).second) continue;
      if (path) path->push_back(e);
      if (dfs(scope, reveal, preds, done | bit(e), q2, path)) return true;
      if (path) path->pop_back();
    }
    return false;
  }

  /// Closed form for register histories when exactly one output is enforced
  /// and it belongs to the scope's unique maximum: a read of v is satisfiable
  /// iff some write of v to the same register can be placed after every other
  /// write to that register (no such write may already be ordered above it),
  /// or v is the initial value and the scope writes the register nowhere.
  std::optional<bool> memory_single_reveal(Mask scope, Mask reveal,
                                           const std::vector<Mask>& preds) {
    if (std::popcount(reveal) != 1) return std::nullopt;
    const int e = std::countr_zero(reveal);
    if ((scope & ~preds[e]) != bit(e)) return std::nullopt;
    const OpLabel& le = h_.label(e);
    if (!le.out) return true;
    if (le.in.kind == OpKind::write) return le.out->bottom;
    if (le.out->bottom || le.out->vals.size() != 1) return false;
    const Value v = le.out->vals[0];
    Mask xwrites = 0;
    for (Mask m = scope & ~bit(e); m;) {
      const int w = std::countr_zero(m);
      m &= m - 1;
      if (h_.label(w).in.kind == OpKind::write && h_.label(w).in.loc == le.in.loc)
        xwrites |= bit(w);
    }
    if (v == 0 && !xwrites) return true;
    for (Mask m = xwrites; m;) {
      const int w = std::countr_zero(m);
      m &= m - 1;
      if (h_.label(w).in.arg != v) continue;
      bool placeable_last = true;
      for (Mask m2 = xwrites & ~bit(w); m2 && placeable_last;) {
        const int w2 = std::countr_zero(m2);
        m2 &= m2 - 1;
        if (preds[w2] >> w & 1) placeable_last = false;
      }
      if (placeable_last) return true;
    }
    return false;
  }

  const History& h_;
  const Adt& adt_;
  int n_;
  State init_;
  bool memory_;
  Key key_, vkey_;
  std::unordered_map<Key, bool, KeyHash> memo_;
  std::unordered_set<Key, KeyHash> visited_;
  const std::vector<int>* seq_ = nullptr;
  std::unordered_map<Mask, bool> seq_memo_;
};

int chain_max(const Order& ord, Mask chain) {
  for (Mask m = chain; m;) {
    const int e = std::countr_zero(m);
    m &= m - 1;
    if (((chain & ~bit(e)) & ~ord.preds(e)) == 0) return e;
  }
  return -1;
}

void ensure_bound(const History& h, const CheckOptions& opt) {
  if (h.size() > opt.max_events)
    throw SizeBoundError("history has " + std::to_string(h.size()) +
                         " events, above the enumeration bound of " +
                         std::to_string(opt.max_events) +
                         "; raise the bound explicitly to proceed");
}

/// First linearization of `scope` under the given masks, rendered with
/// `reveal` outputs shown; used for refutation exhibits.
std::vector<OpLabel> first_lin_labels(const Search& s, const History& h,
                                      const std::vector<Mask>& preds,
                                      Mask scope, Mask reveal) {
  Order ord = Order::from_closed(preds, OrderKind::causal_candidate);
  LinearizationStream ls(ord, scope);
  if (auto ids = ls.next()) return s.labels_of(*ids, reveal);
  return {};
}

}  // namespace

const char* criterion_name(Criterion c) {
  switch (c) {
    case Criterion::sc: return "sc";
    case Criterion::pc: return "pc";
    case Criterion::wcc: return "wcc";
    case Criterion::cc: return "cc";
    case Criterion::ccv: return "ccv";
    case Criterion::cm: return "cm";
  }
  return "?";
}

std::optional<Criterion> criterion_by_name(const std::string& name) {
  if (name == "sc") return Criterion::sc;
  if (name == "pc") return Criterion::pc;
  if (name == "wcc") return Criterion::wcc;
  if (name == "cc") return Criterion::cc;
  if (name == "ccv") return Criterion::ccv;
  if (name == "cm") return Criterion::cm;
  return std::nullopt;
}

Verdict check_sc(const History& h, const Adt& adt, CheckOptions opt) {
  (void)opt;
  Verdict v;
  v.criterion = Criterion::sc;
  Search s(h, adt);
  const Mask all = h.all_events();
  const auto& preds = h.program_order.pred_masks();
  v.explored = 1;
  if (auto lin = s.find_lin(all, all, preds)) {
    v.holds = true;
    Witness w;
    w.causal_order = h.program_order;
    if (!lin->empty())
      w.per_event_linearizations[lin->back()] = s.labels_of(*lin, all);
    v.witness = std::move(w);
  } else {
    Refutation r;
    r.attempted = first_lin_labels(s, h, preds, all, all);
    if (h.size() > 0) r.event = chain_max(h.program_order, all);
    r.note = "no interleaving of the whole history replays with every "
             "output enforced";
    v.refutation = std::move(r);
  }
  return v;
}

Verdict check_pc(const History& h, const Adt& adt, CheckOptions opt) {
  (void)opt;
  Verdict v;
  v.criterion = Criterion::pc;
  Search s(h, adt);
  const Mask all = h.all_events();
  const auto& preds = h.program_order.pred_masks();
  const auto chains = maximal_chains(h);
  Witness w;
  w.causal_order = h.program_order;
  for (std::size_t ci = 0; ci < chains.size(); ++ci) {
    ++v.explored;
    const int last = chain_max(h.program_order, chains[ci]);
    if (auto lin = s.find_lin(all, chains[ci], preds)) {
      w.per_event_linearizations[last] = s.labels_of(*lin, chains[ci]);
    } else {
      Refutation r;
      r.event = last;
      r.process = static_cast<int>(ci);
      r.attempted = first_lin_labels(s, h, preds, all, chains[ci]);
      r.note = "no interleaving matches the outputs seen along the chain "
               "through " + h.event_name(last);
      v.refutation = std::move(r);
      return v;
    }
  }
  v.holds = true;
  v.witness = std::move(w);
  return v;
}

Verdict check_wcc(const History& h, const Adt& adt, CheckOptions opt) {
  Verdict v;
  v.criterion = Criterion::wcc;
  Search s(h, adt);
  const int n = h.size();
  auto stream = causal_order_candidates(h, opt.max_events);
  int best_depth = -1, best_past = -1;
  Refutation best;
  while (stream.advance()) {
    ++v.explored;
    const auto& preds = stream.current();
    int fail = -1;
    for (int e = 0; e < n; ++e) {
      if (!s.admissible(preds[e] | bit(e), bit(e), preds)) {
        fail = e;
        break;
      }
    }
    if (fail < 0) {
      v.holds = true;
      Witness w;
      w.causal_order = Order::from_closed(preds, OrderKind::causal_candidate);
      for (int e = 0; e < n; ++e) {
        auto lin = s.find_lin(preds[e] | bit(e), bit(e), preds);
        w.per_event_linearizations[e] = s.labels_of(*lin, bit(e));
      }
      v.witness = std::move(w);
      return v;
    }
    const int past = std::popcount(preds[fail]) + 1;
    if (fail > best_depth || (fail == best_depth && past > best_past)) {
      best_depth = fail;
      best_past = past;
      best.event = fail;
      best.process = h.events[fail].process;
      best.attempted =
          first_lin_labels(s, h, preds, preds[fail] | bit(fail), bit(fail));
      best.note = "event " + h.event_name(fail) +
                  " has no admissible causal past under any causal order";
    }
  }
  v.refutation = std::move(best);
  return v;
}

Verdict check_cc(const History& h, const Adt& adt, CheckOptions opt) {
  Verdict v;
  v.criterion = Criterion::cc;
  Search s(h, adt);
  auto stream = causal_order_candidates(h, opt.max_events);
  const auto chains = maximal_chains(h);
  int best_depth = -1, best_past = -1;
  Refutation best;
  while (stream.advance()) {
    ++v.explored;
    const auto& preds = stream.current();
    int fail_event = -1, fail_chain = -1, depth = 0;
    for (std::size_t ci = 0; ci < chains.size() && fail_event < 0; ++ci) {
      for (Mask m = chains[ci]; m;) {
        const int e = std::countr_zero(m);
        m &= m - 1;
        if (!s.admissible(preds[e] | bit(e), chains[ci], preds)) {
          fail_event = e;
          fail_chain = static_cast<int>(ci);
          break;
        }
        ++depth;
      }
    }
    if (fail_event < 0) {
      v.holds = true;
      Witness w;
      w.causal_order = Order::from_closed(preds, OrderKind::causal_candidate);
      for (int e = 0; e < h.size(); ++e) {
        for (std::size_t ci = 0; ci < chains.size(); ++ci) {
          if (!(chains[ci] >> e & 1)) continue;
          auto lin = s.find_lin(preds[e] | bit(e), chains[ci], preds);
          w.per_event_linearizations[e] = s.labels_of(*lin, chains[ci]);
          break;
        }
      }
      v.witness = std::move(w);
      return v;
    }
    const int past = std::popcount(preds[fail_event]) + 1;
    if (depth > best_depth || (depth == best_depth && past > best_past)) {
      best_depth = depth;
      best_past = past;
      best.event = fail_event;
      best.process = fail_chain;
      best.attempted = first_lin_labels(
          s, h, preds, preds[fail_event] | bit(fail_event), chains[fail_chain]);
      best.note = "event " + h.event_name(fail_event) +
                  " has no admissible causal past as seen from its chain";
    }
  }
  v.refutation = std::move(best);
  return v;
}

Verdict check_ccv(const History& h, const Adt& adt, CheckOptions opt) {
  ensure_bound(h, opt);
  Verdict v;
  v.criterion = Criterion::ccv;
  Search s(h, adt);
  const int n = h.size();
  const bool memory = adt.kind() == AdtKind::memory;

  std::vector<int> rank(static_cast<std::size_t>(n), 0);
  // A total order is hopeless for a register read of v unless some write of v
  // can be the read's last arbitration predecessor: it must sit below the read
  // and above every same-register write the reader already saw in program
  // order (those are in every causal past of the read). Necessary only, so
  // skipping such totals never changes the verdict, only the work done.
  auto total_feasible = [&](const std::vector<int>& seq) {
    for (int e : seq) {
      const OpLabel& le = h.label(e);
      if (le.in.kind != OpKind::read || !le.out) continue;
      if (le.out->bottom || le.out->vals.size() != 1) return false;
      const Value val = le.out->vals[0];
      const Mask prog_past = h.program_order.preds(e);
      bool found = false;
      for (int w = 0; w < n && !found; ++w) {
        if (w == e || h.label(w).in.kind != OpKind::write) continue;
        if (h.label(w).in.loc != le.in.loc) continue;
        if (h.label(w).in.arg != val || rank[w] > rank[e]) continue;
        bool above_prog_writes = true;
        for (Mask m = prog_past; m && above_prog_writes;) {
          const int pw = std::countr_zero(m);
          m &= m - 1;
          if (pw != w && h.label(pw).in.kind == OpKind::write &&
              h.label(pw).in.loc == le.in.loc && rank[pw] > rank[w])
            above_prog_writes = false;
        }
        if (above_prog_writes) found = true;
      }
      if (!found) {
        if (val != 0) return false;
        // The initial value only survives if the reader saw no write at all.
        for (Mask m = prog_past; m;) {
          const int pw = std::countr_zero(m);
          m &= m - 1;
          if (h.label(pw).in.kind == OpKind::write &&
              h.label(pw).in.loc == le.in.loc)
            return false;
        }
      }
    }
    return true;
  };

  int best_depth = -1, best_past = -1;
  Refutation best;
  auto totals = total_extensions(h, h.program_order);
  while (auto tot = totals.next()) {
    const Order total = std::move(*tot);
    const std::vector<int>& seq = totals.sequence();
    for (std::size_t i = 0; i < seq.size(); ++i) rank[seq[i]] = static_cast<int>(i);
    if (memory && !total_feasible(seq)) continue;
    s.set_sequence(seq);
    OrderSupersetStream inner(h.program_order, &total);
    while (inner.advance()) {
      ++v.explored;
      const auto& preds = inner.current();
      int fail = -1;
      for (int e = 0; e < n; ++e) {
        if (!s.sequence_past_ok(preds[e] | bit(e), e)) {
          fail = e;
          break;
        }
      }
      if (fail < 0) {
        v.holds = true;
        Witness w;
        w.causal_order = Order::from_closed(preds, OrderKind::causal_candidate);
        w.total_order = total;
        for (int e = 0; e < n; ++e) {
          w.per_event_linearizations[e] =
              s.labels_of(s.sequence_ids(preds[e] | bit(e)), bit(e));
        }
        v.witness = std::move(w);
        return v;
      }
      const int past = std::popcount(preds[fail]) + 1;
      if (fail > best_depth || (fail == best_depth && past > best_past)) {
        best_depth = fail;
        best_past = past;
        best.event = fail;
        best.process = h.events[fail].process;
        best.attempted =
            s.labels_of(s.sequence_ids(preds[fail] | bit(fail)), bit(fail));
        best.note = "event " + h.event_name(fail) +
                    " cannot read its causal past in arbitration order";
      }
    }
  }
  v.refutation = std::move(best);
  return v;
}

Verdict check_cm(const History& h, const Adt& mem, CheckOptions opt) {
  if (mem.kind() != AdtKind::memory)
    throw AdtMismatchError("this criterion is defined for register memories "
                           "only, not " + mem.name());
  ensure_bound(h, opt);
  Verdict v;
  v.criterion = Criterion::cm;
  Search s(h, mem);
  const int n = h.size();
  const Mask all = h.all_events();
  const auto chains = maximal_chains(h);

  // Writer options per read, ascending; -1 stands for "reads the initial
  // value" and is only on offer when the read saw 0.
  struct Slot {
    int read = -1;
    std::vector<int> options;
  };
  std::vector<Slot> slots;
  for (int e = 0; e < n; ++e) {
    const OpLabel& le = h.label(e);
    if (le.in.kind != OpKind::read || !le.out) continue;
    Slot slot;
    slot.read = e;
    if (le.out->bottom || le.out->vals.size() != 1) {
      Refutation r;
      r.event = e;
      r.note = "read " + h.event_name(e) + " has a non-scalar output";
      v.refutation = std::move(r);
      return v;
    }
    const Value val = le.out->vals[0];
    if (val == 0) slot.options.push_back(-1);
    for (int w = 0; w < n; ++w)
      if (h.label(w).in.kind == OpKind::write && h.label(w).in.loc == le.in.loc &&
          h.label(w).in.arg == val)
        slot.options.push_back(w);
    if (slot.options.empty()) {
      Refutation r;
      r.event = e;
      r.note = "read " + h.event_name(e) + " returns a value no write put "
               "into its register";
      v.refutation = std::move(r);
      return v;
    }
    slots.push_back(std::move(slot));
  }

  int best_depth = -1;
  Refutation best;
  std::vector<int> chosen(slots.size(), -1);
  Witness won;
  bool found = false;

  // Only the closure of program order plus the chosen writes-into edges is
  // checked: every linearization of a larger order already linearizes this
  // one, so a witness using extra edges yields the same witness here.
  auto at_leaf = [&](const Order& ord) {
    ++v.explored;
    int depth = 0;
    for (std::size_t ci = 0; ci < chains.size(); ++ci) {
      if (!s.admissible(all, chains[ci], ord.pred_masks())) {
        const int last = chain_max(h.program_order, chains[ci]);
        if (depth > best_depth) {
          best_depth = depth;
          best.event = last;
          best.process = static_cast<int>(ci);
          best.attempted =
              first_lin_labels(s, h, ord.pred_masks(), all, chains[ci]);
          best.note = "the chain through " + h.event_name(last) +
                      " sees no admissible interleaving under these "
                      "writes-into choices";
        }
        return false;
      }
      ++depth;
    }
    Witness w;
    w.causal_order = ord;
    w.causal_order.set_kind(OrderKind::causal_candidate);
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (chosen[i] >= 0) edges.emplace_back(chosen[i], slots[i].read);
    w.writes_into = std::move(edges);
    for (std::size_t ci = 0; ci < chains.size(); ++ci) {
      const int last = chain_max(h.program_order, chains[ci]);
      auto lin = s.find_lin(all, chains[ci], ord.pred_masks());
      w.per_event_linearizations[last] = s.labels_of(*lin, chains[ci]);
    }
    won = std::move(w);
    return true;
  };

  auto assign = [&](auto&& self, std::size_t si, Order& ord) -> bool {
    if (si == slots.size()) return at_leaf(ord);
    for (int o : slots[si].options) {
      chosen[si] = o;
      if (o < 0) {
        if (self(self, si + 1, ord)) return true;
        continue;
      }
      Order saved = ord;
      if (!ord.add_edge(o, slots[si].read)) continue;  // cyclic choice
      const bool ok = self(self, si + 1, ord);
      ord = std::move(saved);
      if (ok) return true;
    }
    return false;
  };

  Order ord = h.program_order;
  found = assign(assign, 0, ord);
  if (found) {
    v.holds = true;
    v.witness = std::move(won);
  } else {
    if (best.event < 0 && !slots.empty()) {
      best.event = slots.front().read;
      best.note = "every writes-into assignment is cyclic with program order";
    }
    v.refutation = std::move(best);
  }
  return v;
}

std::map<Criterion, Verdict> classify_all(const History& h, const Adt& adt,
                                          CheckOptions opt) {
  std::map<Criterion, Verdict> out;
  out.emplace(Criterion::sc, check_sc(h, adt, opt));
  out.emplace(Criterion::pc, check_pc(h, adt, opt));
  out.emplace(Criterion::wcc, check_wcc(h, adt, opt));
  out.emplace(Criterion::cc, check_cc(h, adt, opt));
  out.emplace(Criterion::ccv, check_ccv(h, adt, opt));
  if (adt.kind() == AdtKind::memory)
    out.emplace(Criterion::cm, check_cm(h, adt, opt));
  return out;
}

bool witness_sound(const History& h, const Adt& adt, const Verdict& v) {
  if (!v.holds || !v.witness) return false;
  const Witness& w = *v.witness;
  const int n = h.size();
  if (w.causal_order.size() != n) return false;
  for (int e = 0; e < n; ++e)
    if (w.causal_order.before(e, e)) return false;
  if (!w.causal_order.contains(h.program_order)) return false;
  if (w.total_order) {
    if (w.total_order->size() != n || !w.total_order->is_total()) return false;
    if (!w.total_order->contains(w.causal_order)) return false;
  }
  if (w.writes_into) {
    for (auto [wr, rd] : *w.writes_into) {
      if (wr < 0 || wr >= n || rd < 0 || rd >= n) return false;
      const OpLabel& lw = h.label(wr);
      const OpLabel& lr = h.label(rd);
      if (lw.in.kind != OpKind::write || lr.in.kind != OpKind::read)
        return false;
      if (lw.in.loc != lr.in.loc) return false;
      if (!lr.out || lr.out->bottom || lr.out->vals.size() != 1 ||
          lr.out->vals[0] != lw.in.arg)
        return false;
      if (!w.causal_order.before(wr, rd)) return false;
    }
  }
  for (const auto& [e, lin] : w.per_event_linearizations) {
    if (e < 0 || e >= n) return false;
    if (!admits(adt, lin)) return false;
  }
  return true;
}

}  // namespace ccheck
