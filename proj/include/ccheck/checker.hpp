#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccheck/adt.hpp"
#include "ccheck/history.hpp"

namespace ccheck {

enum class Criterion : std::uint8_t { sc, pc, wcc, cc, ccv, cm };

const char* criterion_name(Criterion c);
std::optional<Criterion> criterion_by_name(const std::string& name);

/// Checker applied to an ADT outside its domain (cm on a non-memory ADT).
struct AdtMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Evidence that a criterion holds. Every recorded linearization is a label
/// sequence after projection (hidden outputs hidden), so it replays directly
/// through `admits`.
struct Witness {
  Order causal_order;                // = program order for sc/pc
  std::optional<Order> total_order;  // ccv
  std::optional<std::vector<std::pair<int, int>>> writes_into;  // cm
  std::map<int, std::vector<OpLabel>> per_event_linearizations;
};

/// Where the deepest search attempt died: the first failing event (or chain)
/// of the candidate that got furthest, with one concrete rejected sequence.
struct Refutation {
  int event = -1;
  int process = -1;  // chain index where applicable (pc/cc/cm)
  std::vector<OpLabel> attempted;
  std::string note;
};

struct Verdict {
  Criterion criterion;
  bool holds = false;
  /// Candidates examined: linearization searches for sc/pc, causal-order
  /// candidates for wcc/cc, (total, causal) pairs for ccv, and writes-into
  /// assignments for cm.
  std::uint64_t explored = 0;
  std::optional<Witness> witness;
  std::optional<Refutation> refutation;
};

struct CheckOptions {
  int max_events = kDefaultEnumBound;
};

Verdict check_sc(const History& h, const Adt& adt, CheckOptions opt = {});
Verdict check_pc(const History& h, const Adt& adt, CheckOptions opt = {});
Verdict check_wcc(const History& h, const Adt& adt, CheckOptions opt = {});
Verdict check_cc(const History& h, const Adt& adt, CheckOptions opt = {});
Verdict check_ccv(const History& h, const Adt& adt, CheckOptions opt = {});
Verdict check_cm(const History& h, const Adt& mem, CheckOptions opt = {});

/// Runs every applicable checker (cm only on memories), each evaluated
/// independently so hierarchy violations would surface rather than being
/// masked by shortcut derivations.
std::map<Criterion, Verdict> classify_all(const History& h, const Adt& adt,
                                          CheckOptions opt = {});

/// Independent re-validation of a positive verdict: replays every recorded
/// linearization through `admits` and re-checks the witness orders' shape and
/// containment constraints (causal ⊇ program, total ⊇ causal, writes-into
/// ⊆ causal).
bool witness_sound(const History& h, const Adt& adt, const Verdict& v);

}  // namespace ccheck
