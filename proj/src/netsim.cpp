#include "ccheck/netsim.hpp"

#include <algorithm>
#include <cassert>

namespace ccheck {

const char* record_type_name(RecordType t) {
  switch (t) {
    case RecordType::invoke:     return "invoke";
    case RecordType::ret:        return "ret";
    case RecordType::broadcast:  return "broadcast";
    case RecordType::deliver:    return "deliver";
    case RecordType::crash:      return "crash";
    case RecordType::suppressed: return "suppressed";
  }
  return "?";
}

Simulator::Simulator(std::vector<Node*> nodes, SimConfig config)
    : nodes_(std::move(nodes)),
      config_(std::move(config)),
      rng_(config_.seed) {
  const std::size_t n = nodes_.size();
  inbox_.resize(n);
  delivered_.assign(n, std::vector<std::uint64_t>(n, 0));
  crashed_.assign(n, false);
  for (const auto& [process, step] : config_.crash_schedule) {
    if (process < 0 || static_cast<std::size_t>(process) >= n) {
      throw std::invalid_argument("crash schedule names an unknown process");
    }
    (void)step;
  }
}

void Simulator::fire_due_crashes() {
  for (const auto& [process, step] : config_.crash_schedule) {
    if (step <= steps_ && !crashed_[process]) {
      crashed_[process] = true;
      inbox_[process].clear();
      log_.push_back({steps_, RecordType::crash, process, std::nullopt,
                      std::nullopt});
    }
  }
}

bool Simulator::deliverable(int process, const Message& msg) const {
  for (std::size_t q = 0; q < delivered_[process].size(); ++q) {
    if (delivered_[process][q] < msg.deps[q]) return false;
  }
  return true;
}

std::vector<Simulator::Action> Simulator::enabled_actions() const {
  std::vector<Action> actions;
  for (std::size_t p = 0; p < nodes_.size(); ++p) {
    if (!crashed_[p] && nodes_[p]->has_pending_op()) {
      actions.push_back({false, static_cast<int>(p), 0});
    }
  }
  for (std::size_t p = 0; p < nodes_.size(); ++p) {
    if (crashed_[p]) continue;
    for (std::size_t i = 0; i < inbox_[p].size(); ++i) {
      if (deliverable(static_cast<int>(p), messages_[inbox_[p][i]])) {
        actions.push_back({true, static_cast<int>(p), static_cast<int>(i)});
      }
    }
  }
  return actions;
}

void Simulator::broadcast_from(int sender, const Payload& payload) {
  if (crashed_[sender]) {
    log_.push_back({steps_, RecordType::suppressed, sender, std::nullopt,
                    std::nullopt});
    return;
  }
  Message msg;
  msg.id = static_cast<int>(messages_.size());
  msg.sender = sender;
  msg.deps = delivered_[sender];
  msg.seq = static_cast<int>(msg.deps[sender]) + 1;
  msg.payload = payload;
  messages_.push_back(msg);
  log_.push_back({steps_, RecordType::broadcast, sender, std::nullopt,
                  msg.id});

  // Self-delivery is immediate: the sender observes its own message before
  // the broadcast call returns.
  log_.push_back({steps_, RecordType::deliver, sender, std::nullopt, msg.id});
  delivered_[sender][sender] += 1;
  struct Port : Endpoint {
    Simulator* sim;
    int pid;
    void broadcast(const Payload& p) override { sim->broadcast_from(pid, p); }
  };
  Port port;
  port.sim = this;
  port.pid = sender;
  nodes_[sender]->on_deliver(messages_[msg.id], port);

  for (std::size_t p = 0; p < nodes_.size(); ++p) {
    if (static_cast<int>(p) == sender || crashed_[p]) continue;
    inbox_[p].push_back(msg.id);
  }
}

void Simulator::execute(const Action& action) {
  struct Port : Endpoint {
    Simulator* sim;
    int pid;
    void broadcast(const Payload& p) override { sim->broadcast_from(pid, p); }
  };
  Port port;
  port.sim = this;
  port.pid = action.process;

  if (!action.is_delivery) {
    // Records emitted while the operation runs (broadcast, self-delivery)
    // land between its invoke and ret records.
    const std::size_t mark = log_.size();
    const OpLabel label = nodes_[action.process]->run_next_op(port);
    log_.insert(log_.begin() + static_cast<std::ptrdiff_t>(mark),
                {steps_, RecordType::invoke, action.process,
                 OpLabel{label.in, std::nullopt}, std::nullopt});
    log_.push_back({steps_, RecordType::ret, action.process, label,
                    std::nullopt});
    return;
  }

  const int msg_id = inbox_[action.process][action.inbox_pos];
  inbox_[action.process].erase(inbox_[action.process].begin() +
                               action.inbox_pos);
  const Message& msg = messages_[msg_id];
  log_.push_back({steps_, RecordType::deliver, action.process, std::nullopt,
                  msg_id});
  delivered_[action.process][msg.sender] += 1;
  nodes_[action.process]->on_deliver(msg, port);
}

bool Simulator::step() {
  fire_due_crashes();
  const std::vector<Action> actions = enabled_actions();
  if (actions.empty()) return false;
  const std::size_t pick =
      static_cast<std::size_t>(rng_() % actions.size());
  execute(actions[pick]);
  steps_ += 1;
  return true;
}

SimRun Simulator::run_until_quiescent() {
  while (step()) {
    if (steps_ > config_.max_steps) {
      throw LivenessError("no quiescence within " +
                          std::to_string(config_.max_steps) + " steps");
    }
  }
  SimRun run;
  run.processes = static_cast<int>(nodes_.size());
  run.steps = steps_;
  run.log = log_;
  run.messages = messages_;
  run.crashed = crashed_;
  run.final_states.reserve(nodes_.size());
  for (const Node* node : nodes_) run.final_states.push_back(node->snapshot());
  return run;
}

}  // namespace ccheck
