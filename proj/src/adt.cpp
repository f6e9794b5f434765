#include "ccheck/adt.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccheck {

Adt Adt::window_stream(int k) {
  if (k < 1) throw std::invalid_argument("window size must be >= 1");
  return Adt(AdtKind::window_stream, 1, k, {});
}

Adt Adt::window_array(int streams, int k) {
  if (streams < 1) throw std::invalid_argument("stream count must be >= 1");
  if (k < 1) throw std::invalid_argument("window size must be >= 1");
  return Adt(AdtKind::window_array, streams, k, {});
}

Adt Adt::memory(std::string registers) {
  if (registers.empty()) throw std::invalid_argument("memory needs registers");
  std::sort(registers.begin(), registers.end());
  registers.erase(std::unique(registers.begin(), registers.end()),
                  registers.end());
  return Adt(AdtKind::memory, 1, 0, std::move(registers));
}

Adt Adt::fifo_queue() { return Adt(AdtKind::fifo_queue, 1, 0, {}); }

Adt Adt::guarded_queue() { return Adt(AdtKind::guarded_queue, 1, 0, {}); }

std::string Adt::name() const {
  switch (kind_) {
    case AdtKind::window_stream:
      return "wstream k=" + std::to_string(window_);
    case AdtKind::window_array:
      return "warray K=" + std::to_string(streams_) +
             " k=" + std::to_string(window_);
    case AdtKind::memory:
      return "memory";
    case AdtKind::fifo_queue:
      return "queue";
    case AdtKind::guarded_queue:
      return "gqueue";
  }
  return {};
}

State Adt::initial_state() const {
  switch (kind_) {
    case AdtKind::window_stream:
    case AdtKind::window_array:
      return State(static_cast<std::size_t>(streams_) * window_, 0);
    case AdtKind::memory:
      return State(regs_.size(), 0);
    case AdtKind::fifo_queue:
    case AdtKind::guarded_queue:
      return {};
  }
  return {};
}

void Adt::validate(const Input& in) const {
  switch (kind_) {
    case AdtKind::window_stream:
    case AdtKind::window_array:
      if (in.kind != OpKind::write && in.kind != OpKind::read)
        throw SymbolError("window streams accept only w/r");
      if (in.loc < 0 || in.loc >= streams_)
        throw SymbolError("stream index out of range: " +
                          std::to_string(in.loc));
      return;
    case AdtKind::memory:
      if (in.kind != OpKind::write && in.kind != OpKind::read)
        throw SymbolError("memory accepts only w/r");
      if (in.loc < 0 || in.loc >= static_cast<int>(regs_.size()))
        throw SymbolError("register index out of range: " +
                          std::to_string(in.loc));
      return;
    case AdtKind::fifo_queue:
      if (in.kind != OpKind::push && in.kind != OpKind::pop)
        throw SymbolError("queue accepts only push/pop");
      return;
    case AdtKind::guarded_queue:
      if (in.kind != OpKind::push && in.kind != OpKind::hd &&
          in.kind != OpKind::rh)
        throw SymbolError("guarded queue accepts only push/hd/rh");
      return;
  }
  throw SymbolError("unknown ADT");
}

std::pair<State, Output> Adt::step(const State& q, const Input& in) const {
  validate(in);
  switch (kind_) {
    case AdtKind::window_stream:
    case AdtKind::window_array: {
      const std::size_t base = static_cast<std::size_t>(in.loc) * window_;
      if (in.kind == OpKind::read) {
        std::vector<Value> win(q.begin() + base, q.begin() + base + window_);
        return {q, Output::tuple(std::move(win))};
      }
      State next = q;  // shift the addressed stream left, append the value
      for (int y = 0; y + 1 < window_; ++y) next[base + y] = next[base + y + 1];
      next[base + window_ - 1] = in.arg;
      return {std::move(next), Output::bot()};
    }
    case AdtKind::memory: {
      if (in.kind == OpKind::read)
        return {q, Output::scalar(q[static_cast<std::size_t>(in.loc)])};
      State next = q;
      next[static_cast<std::size_t>(in.loc)] = in.arg;
      return {std::move(next), Output::bot()};
    }
    case AdtKind::fifo_queue: {
      if (in.kind == OpKind::push) {
        State next = q;
        next.push_back(in.arg);
        return {std::move(next), Output::bot()};
      }
      if (q.empty()) return {q, Output::bot()};
      State next(q.begin() + 1, q.end());
      return {std::move(next), Output::scalar(q.front())};
    }
    case AdtKind::guarded_queue: {
      if (in.kind == OpKind::push) {
        State next = q;
        next.push_back(in.arg);
        return {std::move(next), Output::bot()};
      }
      if (in.kind == OpKind::hd) {
        if (q.empty()) return {q, Output::bot()};
        return {q, Output::scalar(q.front())};
      }
      // rh(v): remove the head iff it exists and equals v; always bottom.
      if (!q.empty() && q.front() == in.arg) {
        State next(q.begin() + 1, q.end());
        return {std::move(next), Output::bot()};
      }
      return {q, Output::bot()};
    }
  }
  throw SymbolError("unknown ADT");
}

OpClass Adt::classify(const Input& in) const {
  validate(in);
  switch (in.kind) {
    case OpKind::write:
    case OpKind::push:
    case OpKind::rh:
      return {true, false};
    case OpKind::read:
    case OpKind::hd:
      return {false, true};
    case OpKind::pop:
      return {true, true};
  }
  throw SymbolError("unknown input symbol");
}

bool admits(const Adt& adt, const std::vector<OpLabel>& seq) {
  State q = adt.initial_state();
  for (const OpLabel& op : seq) {
    auto [next, out] = adt.step(q, op.in);
    if (op.out && *op.out != out) return false;
    q = std::move(next);
  }
  return true;
}

}  // namespace ccheck
