#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccheck/adt.hpp"

namespace ccheck {

/// Event sets and causal pasts are bitmasks over dense event ids.
using Mask = std::uint64_t;

constexpr int kMaxEvents = 64;
constexpr int kDefaultEnumBound = 10;

constexpr Mask bit(int e) { return Mask{1} << e; }

struct OrderError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct StructureError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Enumeration asked for on a history larger than the configured bound.
struct SizeBoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OrderKind : std::uint8_t { program, causal_candidate, total };

/// A strict partial order on events 0..n-1, kept transitively closed.
/// pred(e) is the mask of events strictly before e.
class Order {
 public:
  Order() = default;
  explicit Order(int n, OrderKind kind = OrderKind::program)
      : kind_(kind), pred_(static_cast<std::size_t>(n), 0) {}

  /// Builds the transitive closure of the given edges; throws OrderError on a
  /// cycle (including self-loops).
  static Order from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                          OrderKind kind = OrderKind::program);

  /// Adopts predecessor masks that are already transitively closed and
  /// acyclic (not re-verified; callers are the enumeration streams).
  static Order from_closed(std::vector<Mask> preds, OrderKind kind);

  int size() const { return static_cast<int>(pred_.size()); }
  bool before(int a, int b) const { return (pred_[b] >> a) & 1; }
  bool comparable(int a, int b) const { return before(a, b) || before(b, a); }
  Mask preds(int e) const { return pred_[e]; }
  const std::vector<Mask>& pred_masks() const { return pred_; }

  OrderKind kind() const { return kind_; }
  void set_kind(OrderKind k) { kind_ = k; }

  /// Causal past ⌊e⌋: everything strictly before e, plus e itself.
  Mask past(int e) const { return pred_[e] | bit(e); }

  bool contains(const Order& other) const;
  bool is_total() const;

  /// All ordered pairs (a, b) with a before b, in (a, b)-lexicographic order.
  std::vector<std::pair<int, int>> pairs() const;

  /// Adds a -> b and restores transitive closure. Returns false, leaving the
  /// order untouched, if this would create a cycle (or a == b).
  bool add_edge(int a, int b);

  friend bool operator==(const Order&, const Order&) = default;

 private:
  OrderKind kind_ = OrderKind::program;
  std::vector<Mask> pred_;
};

struct Event {
  int id = 0;
  int process = 0;            // index into History::process_names
  int index_in_process = 0;
  OpLabel label;
};

/// A finite distributed history: labeled events plus the program order
/// (transitive closure of per-process chains and optional extra edges).
struct History {
  std::vector<Event> events;
  std::vector<std::string> process_names;
  std::vector<std::vector<int>> process_events;
  Order program_order;
  std::vector<std::pair<int, int>> extra_edges;

  int size() const { return static_cast<int>(events.size()); }
  Mask all_events() const {
    return size() == 64 ? ~Mask{0} : (Mask{1} << size()) - 1;
  }
  const OpLabel& label(int e) const { return events[e].label; }
  /// Display name, e.g. "p0.1".
  std::string event_name(int e) const;
  std::optional<int> event_by_name(const std::string& name) const;
};

History make_history(
    std::vector<std::pair<std::string, std::vector<OpLabel>>> processes,
    const std::vector<std::pair<int, int>>& extra_edges = {});

/// P_H: the maximal chains of the program order, each as an event mask, in
/// lexicographic order of their ascending event sequences. For plain
/// per-process histories this is exactly the per-process event sets; with
/// extra edges an event may lie on several chains.
std::vector<Mask> maximal_chains(const History& h);

/// π(keep, reveal): restrict to `keep` (events are re-indexed densely but
/// keep their names) and hide the outputs of kept events outside `reveal`.
History project(const History& h, Mask keep, Mask reveal);

/// Lazy stream of the topological orders of `scope` under `ord`, yielded as
/// ascending-lexicographic event-id sequences.
class LinearizationStream {
 public:
  LinearizationStream(const Order& ord, Mask scope);
  std::optional<std::vector<int>> next();

 private:
  const Order& ord_;
  Mask scope_;
  bool started_ = false;
  bool done_ = false;
  std::vector<int> seq_;        // current prefix
  std::vector<Mask> remaining_; // remaining events per depth
};

/// lin(H) under an explicit order, as label sequences.
class LabelSequenceStream {
 public:
  LabelSequenceStream(const History& h, const Order& ord);
  std::optional<std::vector<OpLabel>> next();

 private:
  const History& h_;
  LinearizationStream ids_;
};

LabelSequenceStream linearizations(const History& h, const Order& ord);

/// Lazy stream of every strict partial order containing `base`, transitively
/// closed, each yielded exactly once in a fixed canonical order (the first
/// yield is `base` itself). Used for causal-order candidates; `limit_to`
/// restricts the enumeration to suborders of a given total order.
class OrderSupersetStream {
 public:
  explicit OrderSupersetStream(const Order& base,
                               const Order* limit_to = nullptr);
  std::optional<Order> next();

  /// Zero-copy protocol used by the checkers: step to the next candidate and
  /// read its predecessor masks in place (valid until the next advance).
  bool advance();
  const std::vector<Mask>& current() const { return pred_; }

 private:
  struct Frame {
    int pair_idx;
    int branch;  // branch currently taken: 0 = incomparable, 1 = fwd, 2 = rev
    std::uint32_t trail_start;
  };

  void advance_to_leaf(int from_pair);
  bool try_edge(int a, int b);
  void undo(const Frame& f);

  int n_;
  const Order* limit_;
  std::vector<std::pair<int, int>> pairs_;  // undecided at the root
  std::vector<Mask> pred_;
  std::vector<Mask> inc_;  // pairs explicitly branched "incomparable"
  std::vector<std::pair<int, Mask>> trail_;  // pred_ undo log
  std::vector<Frame> stack_;
  bool fresh_ = true;
  bool done_ = false;
};

/// Causal-order candidates of a history: all closed supersets of the program
/// order. Throws SizeBoundError when the history exceeds `max_events`.
OrderSupersetStream causal_order_candidates(const History& h,
                                            int max_events = kDefaultEnumBound);

/// Lazy stream of the total orders containing `base`, in lexicographic order
/// by event id.
class TotalExtensionStream {
 public:
  explicit TotalExtensionStream(const Order& base, Mask scope);
  std::optional<Order> next();

  /// The latest yield as an event sequence (valid until the next call).
  const std::vector<int>& sequence() const { return seq_; }

 private:
  const Order& base_;
  Mask scope_;
  bool started_ = false;
  bool done_ = false;
  std::vector<int> seq_;
  std::vector<Mask> remaining_;
};

TotalExtensionStream total_extensions(const History& h, const Order& base);

}  // namespace ccheck
