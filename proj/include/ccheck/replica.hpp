#pragma once

// Replicated implementations of the shared window-array object on top of the
// causal-broadcast simulator, plus helpers to turn a finished run into a
// history suitable for the consistency checkers.
//
// Two algorithms are provided.  The causal one keeps, per stream, the last k
// delivered values in delivery order.  The convergent one additionally stamps
// every write with a logical timestamp (clock value, writer id) and keeps,
// per stream, the k greatest writes in timestamp order, so replicas that have
// delivered the same set of writes hold the same windows regardless of the
// order in which they arrived.

#include <compare>
#include <cstdint>
#include <vector>

#include "ccheck/adt.hpp"
#include "ccheck/history.hpp"
#include "ccheck/netsim.hpp"

namespace ccheck {

struct Timestamp {
  std::uint64_t time = 0;  // logical clock value carried by the write
  std::uint64_t proc = 0;  // writer id, breaks clock ties

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

struct StampedValue {
  Value val = 0;
  Timestamp ts{};

  friend bool operator==(const StampedValue&, const StampedValue&) = default;
};

// --- pure state transitions, shared by the nodes and their tests ---

// Shift the window of stream x one slot left and append v (delivery-order
// semantics).  str is the flat streams*window state, oldest value first
// within each window.
void window_append(State& str, int window, int x, Value v);

// Timestamp-order insertion: the window holds the k greatest delivered
// writes of its stream sorted by ascending timestamp, left-padded with
// (0, (0,0)) slots.  A write older than everything retained is discarded.
void stamped_insert(std::vector<StampedValue>& str, int window, int x,
                    Value v, Timestamp ts);

// Transcription of the insertion loop as printed in the source algorithm.
// It mishandles the slot it frees: after shifting, the new write lands one
// slot left of where the scan stopped, so a write that should occupy the
// newest slot of a fresh window ends up in the oldest one.  Kept selectable
// to make the misbehaviour observable; see the replica tests.
void stamped_insert_literal(std::vector<StampedValue>& str, int window, int x,
                            Value v, Timestamp ts);

std::vector<Value> window_values(const std::vector<StampedValue>& str,
                                 int window, int x);

// --- simulator nodes ---

struct ScriptOp {
  bool is_write = false;
  int x = 0;      // stream index
  Value v = 0;    // written value (writes only)

  friend bool operator==(const ScriptOp&, const ScriptOp&) = default;
};

class CausalNode : public Node {
 public:
  CausalNode(int id, int streams, int window, std::vector<ScriptOp> script);

  bool has_pending_op() const override;
  OpLabel run_next_op(Endpoint& net) override;
  void on_deliver(const Message& msg, Endpoint& net) override;
  State snapshot() const override;

 private:
  int window_;
  std::vector<ScriptOp> script_;
  std::size_t next_ = 0;
  State str_;
};

class ConvergentNode : public Node {
 public:
  ConvergentNode(int id, int streams, int window, std::vector<ScriptOp> script,
                 bool literal_insert = false);

  bool has_pending_op() const override;
  OpLabel run_next_op(Endpoint& net) override;
  void on_deliver(const Message& msg, Endpoint& net) override;
  State snapshot() const override;  // values only, timestamps stripped

  std::uint64_t clock() const { return vtime_; }

 private:
  int id_;
  int window_;
  bool literal_insert_;
  std::vector<ScriptOp> script_;
  std::size_t next_ = 0;
  std::vector<StampedValue> str_;
  std::uint64_t vtime_ = 0;
};

// --- whole-run helpers ---

enum class Algo { causal, convergent };

struct ReplicaRun {
  SimRun sim;
  Adt adt;          // window_array(streams, window)
  History history;  // one process per replica, completed operations only
};

ReplicaRun run_replicas(Algo algo, int streams, int window,
                        const std::vector<std::vector<ScriptOp>>& scripts,
                        const SimConfig& config, bool literal_insert = false);

// Rebuilds the per-process operation history from a run's ret records.
History record_history(const SimRun& run);

// Deterministic random scripts: every write carries a globally unique value,
// so reads can be traced back to their writer.
std::vector<std::vector<ScriptOp>> random_scripts(std::uint64_t seed,
                                                  int processes,
                                                  int max_ops_per_process,
                                                  int streams);

}  // namespace ccheck
