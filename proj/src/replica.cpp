#include "ccheck/replica.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

namespace ccheck {

void window_append(State& str, int window, int x, Value v) {
  Value* w = str.data() + static_cast<std::size_t>(x) * window;
  for (int y = 0; y + 1 < window; ++y) w[y] = w[y + 1];
  w[window - 1] = v;
}

void stamped_insert(std::vector<StampedValue>& str, int window, int x,
                    Value v, Timestamp ts) {
  StampedValue* w = str.data() + static_cast<std::size_t>(x) * window;
  if (ts <= w[0].ts) return;  // older than everything retained
  int y = 0;
  while (y + 1 < window && w[y + 1].ts < ts) {
    w[y] = w[y + 1];
    ++y;
  }
  w[y] = {v, ts};
}

void stamped_insert_literal(std::vector<StampedValue>& str, int window, int x,
                            Value v, Timestamp ts) {
  StampedValue* w = str.data() + static_cast<std::size_t>(x) * window;
  int y = 0;
  while (y < window - 1 && w[y].ts <= ts) {
    w[y] = w[y + 1];
    ++y;
  }
  if (y != 0) w[y - 1] = {v, ts};
}

std::vector<Value> window_values(const std::vector<StampedValue>& str,
                                 int window, int x) {
  const StampedValue* w = str.data() + static_cast<std::size_t>(x) * window;
  std::vector<Value> vals(static_cast<std::size_t>(window));
  for (int y = 0; y < window; ++y) vals[static_cast<std::size_t>(y)] = w[y].val;
  return vals;
}

CausalNode::CausalNode(int, int streams, int window,
                       std::vector<ScriptOp> script)
    : window_(window),
      script_(std::move(script)),
      str_(static_cast<std::size_t>(streams) * window, 0) {}

bool CausalNode::has_pending_op() const { return next_ < script_.size(); }

OpLabel CausalNode::run_next_op(Endpoint& net) {
  const ScriptOp op = script_[next_++];
  if (op.is_write) {
    net.broadcast({{static_cast<std::uint64_t>(op.x), op.v}});
    return {Input{OpKind::write, op.x, op.v}, Output::bot()};
  }
  const Value* w = str_.data() + static_cast<std::size_t>(op.x) * window_;
  return {Input{OpKind::read, op.x, 0},
          Output::tuple(std::vector<Value>(w, w + window_))};
}

void CausalNode::on_deliver(const Message& msg, Endpoint&) {
  window_append(str_, window_, static_cast<int>(msg.payload.words[0]),
                msg.payload.words[1]);
}

State CausalNode::snapshot() const { return str_; }

ConvergentNode::ConvergentNode(int id, int streams, int window,
                               std::vector<ScriptOp> script,
                               bool literal_insert)
    : id_(id),
      window_(window),
      literal_insert_(literal_insert),
      script_(std::move(script)),
      str_(static_cast<std::size_t>(streams) * window) {}

bool ConvergentNode::has_pending_op() const { return next_ < script_.size(); }

OpLabel ConvergentNode::run_next_op(Endpoint& net) {
  const ScriptOp op = script_[next_++];
  if (op.is_write) {
    // The new write is stamped one past the greatest clock value seen so
    // far; the clock itself advances when the self-delivery applies the max
    // rule below.
    net.broadcast({{static_cast<std::uint64_t>(op.x), op.v, vtime_ + 1,
                    static_cast<std::uint64_t>(id_)}});
    return {Input{OpKind::write, op.x, op.v}, Output::bot()};
  }
  return {Input{OpKind::read, op.x, 0},
          Output::tuple(window_values(str_, window_, op.x))};
}

void ConvergentNode::on_deliver(const Message& msg, Endpoint&) {
  const auto& w = msg.payload.words;
  const Timestamp ts{w[2], w[3]};
  vtime_ = std::max(vtime_, ts.time);
  if (literal_insert_) {
    stamped_insert_literal(str_, window_, static_cast<int>(w[0]), w[1], ts);
  } else {
    stamped_insert(str_, window_, static_cast<int>(w[0]), w[1], ts);
  }
}

State ConvergentNode::snapshot() const {
  State vals(str_.size());
  for (std::size_t i = 0; i < str_.size(); ++i) vals[i] = str_[i].val;
  return vals;
}

History record_history(const SimRun& run) {
  std::vector<std::pair<std::string, std::vector<OpLabel>>> processes(
      static_cast<std::size_t>(run.processes));
  for (int p = 0; p < run.processes; ++p) {
    processes[static_cast<std::size_t>(p)].first = "p" + std::to_string(p);
  }
  for (const LogRecord& rec : run.log) {
    if (rec.type == RecordType::ret) {
      processes[static_cast<std::size_t>(rec.process)].second.push_back(
          *rec.op);
    }
  }
  return make_history(std::move(processes));
}

ReplicaRun run_replicas(Algo algo, int streams, int window,
                        const std::vector<std::vector<ScriptOp>>& scripts,
                        const SimConfig& config, bool literal_insert) {
  if (streams < 1 || window < 1) {
    throw std::invalid_argument("need at least one stream and a window >= 1");
  }
  for (const auto& script : scripts) {
    for (const ScriptOp& op : script) {
      if (op.x < 0 || op.x >= streams) {
        throw std::invalid_argument("script uses an out-of-range stream");
      }
    }
  }
  std::vector<std::unique_ptr<Node>> owned;
  owned.reserve(scripts.size());
  for (std::size_t p = 0; p < scripts.size(); ++p) {
    if (algo == Algo::causal) {
      owned.push_back(std::make_unique<CausalNode>(
          static_cast<int>(p), streams, window, scripts[p]));
    } else {
      owned.push_back(std::make_unique<ConvergentNode>(
          static_cast<int>(p), streams, window, scripts[p], literal_insert));
    }
  }
  std::vector<Node*> nodes;
  nodes.reserve(owned.size());
  for (const auto& node : owned) nodes.push_back(node.get());

  Simulator sim(nodes, config);
  ReplicaRun result{sim.run_until_quiescent(),
                    Adt::window_array(streams, window), History{}};
  result.history = record_history(result.sim);
  return result;
}

std::vector<std::vector<ScriptOp>> random_scripts(std::uint64_t seed,
                                                  int processes,
                                                  int max_ops_per_process,
                                                  int streams) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<ScriptOp>> scripts(
      static_cast<std::size_t>(processes));
  Value fresh = 0;
  for (auto& script : scripts) {
    const int count = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                               max_ops_per_process));
    for (int i = 0; i < count; ++i) {
      ScriptOp op;
      op.x = static_cast<int>(rng() % static_cast<std::uint64_t>(streams));
      op.is_write = rng() % 10 < 6;
      if (op.is_write) op.v = ++fresh;
      script.push_back(op);
    }
  }
  return scripts;
}

}  // namespace ccheck
