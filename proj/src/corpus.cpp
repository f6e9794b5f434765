#include "ccheck/corpus.hpp"

namespace ccheck {

const std::vector<CorpusEntry>& golden_corpus() {
  static const std::vector<CorpusEntry> entries{
      {"3a",
       "window stream, convergent but not pipelined",
       "adt wstream k=2\n"
       "process p0: w(1) r=(0,1) r=(1,2)\n"
       "process p1: w(2) r=(0,2) r=(1,2)\n",
       {{Criterion::ccv, true}, {Criterion::pc, false}}},
      {"3b",
       "window stream, pipelined but not weakly causal",
       "adt wstream k=2\n"
       "process p0: w(1)\n"
       "process p1: r=(0,1) w(2)\n"
       "process p2: r=(2,1)\n",
       {{Criterion::pc, true}, {Criterion::wcc, false}}},
      {"3c",
       "window stream, causal but not convergent",
       "adt wstream k=2\n"
       "process p0: w(1) r=(2,1)\n"
       "process p1: w(2) r=(1,2)\n",
       {{Criterion::cc, true}, {Criterion::ccv, false}}},
      {"3d",
       "window stream, sequentially consistent",
       "adt wstream k=2\n"
       "process p0: w(1) r=(0,1)\n"
       "process p1: w(2) r=(1,2)\n",
       {{Criterion::sc, true}}},
      {"3e",
       "queue, weakly causal and pipelined but not causal",
       "adt queue\n"
       "process p0: push(1) pop=1 pop=1 push(3)\n"
       "process p1: push(2) pop=3 push(1)\n",
       {{Criterion::wcc, true}, {Criterion::pc, true}, {Criterion::cc, false}}},
      {"3f",
       "queue, causal but not sequentially consistent",
       "adt queue\n"
       "process p0: pop=1 pop=_\n"
       "process p1: push(1) push(2) pop=1 pop=_\n",
       {{Criterion::cc, true}, {Criterion::sc, false}}},
      {"3g",
       "guarded queue, recovers sequential behaviour",
       "adt gqueue\n"
       "process p0: hd=1 rh(1) hd=2 rh(2)\n"
       "process p1: push(1) push(2) hd=1 rh(1) hd=2 rh(2)\n",
       {{Criterion::cc, true}, {Criterion::sc, true}},
       "this example's source labels it non-sequential, but a legal "
       "interleaving exists: the second rh(1) finds head 2 and is a silent "
       "no-op, so push(1).push(2).hd/1.hd/1.rh(1).rh(1).hd/2.hd/2.rh(2).rh(2) "
       "replays sequentially"},
      {"3h",
       "memory, convergent but not causal",
       "adt memory\n"
       "process p0: wa(1) wc(2) wd(1) rb=0 re=1 rc=3\n"
       "process p1: wb(1) wc(3) we(1) ra=0 rd=1 rc=3\n",
       {{Criterion::ccv, true}, {Criterion::cc, false}}},
      {"3i",
       "memory, causal memory but not causal",
       "adt memory\n"
       "process p0: wa(1) wa(2) wb(3) rd=3 rc=1 wa(1)\n"
       "process p1: wc(1) wc(2) wd(3) rb=3 ra=1 wc(1)\n",
       {{Criterion::cm, true}, {Criterion::cc, false}}},
  };
  return entries;
}

const CorpusEntry* corpus_entry(const std::string& id) {
  for (const CorpusEntry& entry : golden_corpus()) {
    if (entry.id == id) return &entry;
  }
  return nullptr;
}

}  // namespace ccheck
