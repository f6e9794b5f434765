#pragma once

// Deterministic discrete-event simulation of asynchronous, crash-prone
// processes exchanging messages through a reliable causal-order broadcast.
//
// Each call to Simulator::step() executes exactly one enabled action: either
// a process invokes its next scripted operation, or a process delivers one
// pending message whose causal dependencies are satisfied.  The choice among
// enabled actions is driven by a seeded PRNG, so runs are reproducible from
// (nodes, config) alone.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ccheck/adt.hpp"

namespace ccheck {

// Thrown when a run exceeds its step budget without reaching quiescence.
class LivenessError : public std::runtime_error {
 public:
  explicit LivenessError(const std::string& what) : std::runtime_error(what) {}
};

struct Payload {
  std::vector<std::uint64_t> words;

  friend bool operator==(const Payload&, const Payload&) = default;
};

struct Message {
  int id = 0;      // index into SimRun::messages
  int sender = 0;
  int seq = 0;     // 1-based sequence number among the sender's broadcasts
  Payload payload;
  // Delivery precondition: process p may deliver this message only once it
  // has delivered at least deps[q] messages from every process q.  The vector
  // is a snapshot of the sender's own delivery counts at broadcast time,
  // which is exactly what makes the broadcast causal (and, via deps[sender],
  // FIFO per sender).
  std::vector<std::uint64_t> deps;

  friend bool operator==(const Message&, const Message&) = default;
};

enum class RecordType { invoke, ret, broadcast, deliver, crash, suppressed };

const char* record_type_name(RecordType t);

struct LogRecord {
  std::uint64_t step = 0;
  RecordType type = RecordType::invoke;
  int process = 0;
  std::optional<OpLabel> op;    // invoke carries the input, ret the full label
  std::optional<int> message;   // broadcast / deliver / suppressed

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

class Endpoint {
 public:
  virtual ~Endpoint() = default;
  virtual void broadcast(const Payload& payload) = 0;
};

// A replica algorithm, decoupled from scheduling.  run_next_op may call
// Endpoint::broadcast, and the matching self-delivery happens re-entrantly
// (on_deliver runs before broadcast returns), so a node observes its own
// message immediately.
class Node {
 public:
  virtual ~Node() = default;
  virtual bool has_pending_op() const = 0;
  virtual OpLabel run_next_op(Endpoint& net) = 0;
  virtual void on_deliver(const Message& msg, Endpoint& net) = 0;
  virtual State snapshot() const = 0;
};

struct SimConfig {
  std::uint64_t seed = 0;
  // (process, step): the process fails at the start of that step, losing its
  // undelivered inbox and abandoning its remaining script.
  std::vector<std::pair<int, std::uint64_t>> crash_schedule;
  std::uint64_t max_steps = 1'000'000;
};

struct SimRun {
  int processes = 0;
  std::uint64_t steps = 0;
  std::vector<LogRecord> log;
  std::vector<Message> messages;
  std::vector<State> final_states;
  std::vector<bool> crashed;
};

class Simulator {
 public:
  Simulator(std::vector<Node*> nodes, SimConfig config);

  // Executes one enabled action.  Returns false (and does nothing beyond
  // firing due crashes) when no action is enabled.
  bool step();

  // Steps until quiescence and packages the outcome.  Throws LivenessError
  // if the step budget is exhausted first.
  SimRun run_until_quiescent();

  // Broadcast on behalf of a process.  Nodes reach this through the Endpoint
  // passed to them; a broadcast attempted by a crashed process is recorded
  // as suppressed and no message is created.
  void broadcast_from(int sender, const Payload& payload);

  const std::vector<LogRecord>& log() const { return log_; }
  const std::vector<Message>& messages() const { return messages_; }
  std::uint64_t steps_taken() const { return steps_; }
  bool crashed(int process) const { return crashed_.at(process); }

 private:
  struct Action {
    bool is_delivery = false;
    int process = 0;
    int inbox_pos = 0;  // deliveries only
  };

  void fire_due_crashes();
  std::vector<Action> enabled_actions() const;
  bool deliverable(int process, const Message& msg) const;
  void execute(const Action& action);

  std::vector<Node*> nodes_;
  SimConfig config_;
  std::mt19937_64 rng_;
  std::uint64_t steps_ = 0;
  std::vector<LogRecord> log_;
  std::vector<Message> messages_;
  std::vector<std::vector<int>> inbox_;  // message ids in arrival order
  std::vector<std::vector<std::uint64_t>> delivered_;  // [process][sender]
  std::vector<bool> crashed_;
};

}  // namespace ccheck
