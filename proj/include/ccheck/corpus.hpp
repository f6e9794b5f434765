#pragma once

// Embedded golden histories: the classified examples bundled with the tool
// (`demo` command, acceptance suite).  Each entry records the trace text and
// the expected verdicts for the criteria its source classifies.

#include <string>
#include <vector>

#include "ccheck/checker.hpp"

namespace ccheck {

struct CorpusEntry {
  std::string id;       // e.g. "3a"
  std::string summary;  // e.g. "window stream, convergent but not pipelined"
  std::string trace;
  std::vector<std::pair<Criterion, bool>> expected;
  std::string note;  // nonempty when the expected set needs an explanation
};

const std::vector<CorpusEntry>& golden_corpus();

// nullptr when the id is unknown.
const CorpusEntry* corpus_entry(const std::string& id);

}  // namespace ccheck
