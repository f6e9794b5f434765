#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccheck {

using Value = std::uint64_t;

/// Flat state representation shared by all built-in ADTs:
///  - window stream / window array: k (resp. K*k) slot values
///  - memory: one slot per register
///  - queue / guarded queue: current contents, oldest first (variable length)
using State = std::vector<Value>;

enum class OpKind : std::uint8_t { write, read, push, pop, hd, rh };

/// An input symbol. `loc` is the stream index (window array) or register
/// index (memory); unused otherwise. `arg` is the written/pushed/guard value.
struct Input {
  OpKind kind;
  std::int32_t loc = 0;
  Value arg = 0;

  friend bool operator==(const Input&, const Input&) = default;
};

/// An output symbol: either bottom or a value tuple (window reads return k
/// values, scalar outputs are singleton tuples).
struct Output {
  bool bottom = true;
  std::vector<Value> vals;

  static Output bot() { return {}; }
  static Output scalar(Value v) { return {false, {v}}; }
  static Output tuple(std::vector<Value> vs) { return {false, std::move(vs)}; }

  friend bool operator==(const Output&, const Output&) = default;
};

/// One operation of a sequential history: an input with the observed output,
/// or input alone (hidden operation, output unconstrained).
struct OpLabel {
  Input in;
  std::optional<Output> out;

  bool hidden() const { return !out.has_value(); }

  friend bool operator==(const OpLabel&, const OpLabel&) = default;
};

struct OpClass {
  bool is_update = false;
  bool is_query = false;
};

/// Unknown or ill-formed input symbol for the given ADT.
struct SymbolError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class AdtKind : std::uint8_t {
  window_stream,
  window_array,
  memory,
  fifo_queue,
  guarded_queue,
};

/// A sequential abstract data type as a deterministic transducer: initial
/// state, total transition function, total output function, and a declared
/// update/query classification per input symbol.
class Adt {
 public:
  /// Window stream of size k: state is the last k written values, zero
  /// padded; a read returns the whole window, oldest first.
  static Adt window_stream(int k);
  /// Array of K independent window streams of size k, addressed by `loc`;
  /// modeled as a single ADT because consistency is not composable.
  static Adt window_array(int streams, int k);
  /// Integer registers named by single letters, all initially 0.
  static Adt memory(std::string registers = "abcdefghijklmnopqrstuvwxyz");
  /// FIFO queue. pop removes and returns the oldest element (bottom when
  /// empty); it is both an update and a query.
  static Adt fifo_queue();
  /// Guarded queue: hd peeks at the head (pure query, bottom when empty);
  /// rh(v) removes the head iff it exists and equals v (pure update).
  static Adt guarded_queue();

  AdtKind kind() const { return kind_; }
  int window() const { return window_; }
  int streams() const { return streams_; }
  const std::string& registers() const { return regs_; }

  /// Header form used by the trace format, e.g. "wstream k=2".
  std::string name() const;

  State initial_state() const;

  /// One transducer step; the output is computed on the pre-state.
  std::pair<State, Output> step(const State& q, const Input& in) const;

  OpClass classify(const Input& in) const;

  /// Throws SymbolError unless `in` belongs to this ADT's input alphabet.
  void validate(const Input& in) const;

  friend bool operator==(const Adt&, const Adt&) = default;

 private:
  Adt(AdtKind kind, int streams, int window, std::string regs)
      : kind_(kind), streams_(streams), window_(window),
        regs_(std::move(regs)) {}

  AdtKind kind_;
  int streams_ = 1;   // K (window array)
  int window_ = 0;    // k (window stream size)
  std::string regs_;  // memory register names
};

/// Membership of a finite sequence in the sequential specification L(T):
/// replay from the initial state; every present output must match, hidden
/// outputs are unconstrained.
bool admits(const Adt& adt, const std::vector<OpLabel>& seq);

}  // namespace ccheck
