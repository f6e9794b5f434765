#!/usr/bin/env python3
"""Independent brute-force reference checker for small histories.

Decides SC / PC / WCC / CC / CCv / CM on histories of <= 6 events by
exhaustive enumeration (permutations for linearizations, 3^pairs for
candidate orders).  Shares no algorithmic structure with the C++
implementation: orders are enumerated as pair-state assignments and
linearizations as filtered permutations.  The frozen output table is
embedded in the C++ test suite.

Label model: (kind, loc, arg, out) where
  kind in {w, r, push, pop, hd, rh}
  loc: register letter or stream index or None
  arg: written value or None
  out: None = hidden; otherwise a tuple (window read) / int / 'bot'
"""

import itertools
import json
import random
import sys
from functools import lru_cache


# ---------------- ADT replay ----------------

def make_wstream(k):
    def init():
        return (0,) * k

    def step(q, lab):
        kind, loc, arg, _ = lab
        if kind == 'w':
            return q[1:] + (arg,), 'bot'
        if kind == 'r':
            return q, q
        raise ValueError(kind)
    return init, step


def make_memory():
    def init():
        return ()  # map as sorted tuple of (reg, val)

    def step(q, lab):
        kind, loc, arg, _ = lab
        d = dict(q)
        if kind == 'w':
            d[loc] = arg
            return tuple(sorted(d.items())), 'bot'
        if kind == 'r':
            return q, d.get(loc, 0)
        raise ValueError(kind)
    return init, step


def make_queue():
    def init():
        return ()

    def step(q, lab):
        kind, loc, arg, _ = lab
        if kind == 'push':
            return q + (arg,), 'bot'
        if kind == 'pop':
            if q:
                return q[1:], q[0]
            return q, 'bot'
        raise ValueError(kind)
    return init, step


def make_gqueue():
    def init():
        return ()

    def step(q, lab):
        kind, loc, arg, _ = lab
        if kind == 'push':
            return q + (arg,), 'bot'
        if kind == 'hd':
            return q, (q[0] if q else 'bot')
        if kind == 'rh':
            if q and q[0] == arg:
                return q[1:], 'bot'
            return q, 'bot'
        raise ValueError(kind)
    return init, step


ADTS = {'wstream2': make_wstream(2), 'memory': make_memory(),
        'queue': make_queue(), 'gqueue': make_gqueue()}


def admits(adt, seq):
    init, step = adt
    q = init()
    for lab in seq:
        q, out = step(q, lab)
        want = lab[3]
        if want is not None and out != want:
            return False
    return True


def is_update(lab):
    return lab[0] in ('w', 'push', 'pop', 'rh')


def is_query(lab):
    return lab[0] in ('r', 'pop', 'hd')


# ---------------- history / orders ----------------

def build(procs):
    """procs: list of list of labels -> (labels, prog pairs, proc_of)"""
    labels = []
    prog = set()
    proc_of = []
    for pi, ops in enumerate(procs):
        base = len(labels)
        for i, lab in enumerate(ops):
            labels.append(lab)
            proc_of.append(pi)
            for j in range(i):
                prog.add((base + j, base + i))
    return labels, prog, proc_of


def closed_orders(n, base):
    base = set(base)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    free = [p for p in pairs if p not in base and (p[1], p[0]) not in base]
    for choice in itertools.product(range(3), repeat=len(free)):
        rel = set(base)
        for (i, j), c in zip(free, choice):
            if c == 1:
                rel.add((i, j))
            elif c == 2:
                rel.add((j, i))
        ok = True
        for (a, b) in rel:
            for (c2, d) in rel:
                if b == c2 and (a, d) not in rel:
                    ok = False
                    break
            if not ok:
                break
        if ok and not any((b, a) in rel for (a, b) in rel):
            yield frozenset(rel)


def linear_extensions(elems, rel):
    elems = tuple(elems)
    for perm in itertools.permutations(elems):
        pos = {e: i for i, e in enumerate(perm)}
        if all(pos[a] < pos[b] for (a, b) in rel
               if a in pos and b in pos):
            yield perm


def hide(lab):
    return (lab[0], lab[1], lab[2], None)


def seq_of(perm, labels, reveal):
    return tuple(labels[e] if e in reveal else hide(labels[e]) for e in perm)


def past_of(e, rel, n):
    return frozenset([e] + [a for a in range(n) if (a, e) in rel])


# ---------------- criteria ----------------

def check_sc(labels, prog, proc_of, adt):
    n = len(labels)
    for perm in linear_extensions(range(n), prog):
        if admits(adt, seq_of(perm, labels, set(range(n)))):
            return True
    return False


def chains(labels, prog, proc_of):
    by = {}
    for e, p in enumerate(proc_of):
        by.setdefault(p, set()).add(e)
    return list(by.values())


def check_pc(labels, prog, proc_of, adt):
    n = len(labels)
    for p in chains(labels, prog, proc_of):
        ok = False
        for perm in linear_extensions(range(n), prog):
            if admits(adt, seq_of(perm, labels, p)):
                ok = True
                break
        if not ok:
            return False
    return True


def event_ok(labels, rel, e, reveal, adt, memo):
    n = len(labels)
    past = past_of(e, rel, n)
    sub = frozenset((a, b) for (a, b) in rel if a in past and b in past)
    key = (past, sub, frozenset(reveal & past))
    if key in memo:
        return memo[key]
    ok = False
    for perm in linear_extensions(past, sub):
        if admits(adt, seq_of(perm, labels, reveal & past)):
            ok = True
            break
    memo[key] = ok
    return ok


def check_wcc(labels, prog, proc_of, adt):
    n = len(labels)
    memo = {}
    for rel in closed_orders(n, prog):
        if all(event_ok(labels, rel, e, {e}, adt, memo) for e in range(n)):
            return True
    return False


def check_cc(labels, prog, proc_of, adt):
    n = len(labels)
    memo = {}
    ps = chains(labels, prog, proc_of)
    for rel in closed_orders(n, prog):
        if all(event_ok(labels, rel, e, p, adt, memo)
               for p in ps for e in p):
            return True
    return False


def check_ccv(labels, prog, proc_of, adt):
    n = len(labels)
    memo = {}
    for rel in closed_orders(n, prog):
        for total in linear_extensions(range(n), rel):
            pos = {e: i for i, e in enumerate(total)}
            ok = True
            for e in range(n):
                past = sorted(past_of(e, rel, n), key=lambda a: pos[a])
                key = (tuple(past), e)
                if key in memo:
                    good = memo[key]
                else:
                    good = admits(adt, seq_of(past, labels, {e}))
                    memo[key] = good
                if not good:
                    ok = False
                    break
            if ok:
                return True
    return False


def close(rel, n):
    rel = set(rel)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return frozenset(rel)


def check_cm(labels, prog, proc_of, adt):
    """Memory-only; searches all causal orders containing closure(wi+prog)."""
    n = len(labels)
    reads = [e for e in range(n)
             if labels[e][0] == 'r' and labels[e][3] is not None]
    options = []
    for r in reads:
        x, v = labels[r][1], labels[r][3]
        opts = [w for w in range(n)
                if labels[w][0] == 'w' and labels[w][1] == x
                and labels[w][2] == v]
        cand = [(w, r) for w in opts]
        if v == 0:
            cand = [None] + cand
        if not cand:
            return False
        options.append(cand)
    ps = chains(labels, prog, proc_of)
    memo = {}
    for combo in itertools.product(*options) if options else [()]:
        wi = frozenset(p for p in combo if p is not None)
        base = close(wi | prog, n)
        if any((b, a) in base for (a, b) in base):
            continue
        for rel in closed_orders(n, base):
            ok = True
            for p in ps:
                good = False
                sub_key = (rel, frozenset(p))
                if sub_key in memo:
                    good = memo[sub_key]
                else:
                    for perm in linear_extensions(range(n), rel):
                        if admits(adt, seq_of(perm, labels, p)):
                            good = True
                            break
                    memo[sub_key] = good
                if not good:
                    ok = False
                    break
            if ok:
                return True
    return False


# ---------------- corpora ----------------

def W(v):
    return ('w', None, v, 'bot')


def R(*vals):
    return ('r', None, None, tuple(vals))


def Rh():
    return ('r', None, None, None)


def MW(x, v):
    return ('w', x, v, 'bot')


def MR(x, v):
    return ('r', x, None, v)


def PUSH(v):
    return ('push', None, v, 'bot')


def POP(v):
    return ('pop', None, None, v)


def HD(v):
    return ('hd', None, None, v)


def RH(v):
    return ('rh', None, v, 'bot')


CASES = {
    '3a': ('wstream2', [[W(1), R(0, 1), R(1, 2)], [W(2), R(0, 2), R(1, 2)]]),
    '3b': ('wstream2', [[W(1)], [R(0, 1), W(2)], [R(2, 1)]]),
    '3c': ('wstream2', [[W(1), R(2, 1)], [W(2), R(1, 2)]]),
    '3d': ('wstream2', [[W(1), R(0, 1)], [W(2), R(1, 2)]]),
    '3f': ('queue', [[POP(1), POP('bot')],
                     [PUSH(1), PUSH(2), POP(1), POP('bot')]]),
}


def random_history(rng, adt_name):
    nproc = rng.choice([1, 2, 2, 3])
    total = rng.randint(2, 5)
    procs = [[] for _ in range(nproc)]
    for _ in range(total):
        p = rng.randrange(nproc)
        if adt_name == 'wstream2':
            if rng.random() < 0.5:
                procs[p].append(W(rng.randint(1, 3)))
            else:
                procs[p].append(R(rng.randint(0, 3), rng.randint(0, 3)))
        elif adt_name == 'memory':
            x = rng.choice('ab')
            if rng.random() < 0.5:
                procs[p].append(MW(x, rng.randint(1, 3)))
            else:
                procs[p].append(MR(x, rng.randint(0, 3)))
        else:
            if rng.random() < 0.5:
                procs[p].append(PUSH(rng.randint(1, 3)))
            else:
                procs[p].append(POP(rng.choice([1, 2, 3, 'bot'])))
    return [q for q in procs if q]


def classify(adt_name, procs):
    adt = ADTS[adt_name]
    labels, prog, proc_of = build(procs)
    res = {
        'sc': check_sc(labels, prog, proc_of, adt),
        'pc': check_pc(labels, prog, proc_of, adt),
        'wcc': check_wcc(labels, prog, proc_of, adt),
        'cc': check_cc(labels, prog, proc_of, adt),
        'ccv': check_ccv(labels, prog, proc_of, adt),
    }
    if adt_name == 'memory':
        res['cm'] = check_cm(labels, prog, proc_of, adt)
    return res


def render(procs):
    out = []
    for ops in procs:
        toks = []
        for (kind, loc, arg, outp) in ops:
            if kind == 'w' and loc is None:
                toks.append(f'w({arg})')
            elif kind == 'r' and loc is None:
                toks.append('r' if outp is None
                            else 'r=(' + ','.join(map(str, outp)) + ')')
            elif kind == 'w':
                toks.append(f'w{loc}({arg})')
            elif kind == 'r':
                toks.append(f'r{loc}' if outp is None else
                            f'r{loc}={"_" if outp == "bot" else outp}')
            elif kind == 'push':
                toks.append(f'push({arg})')
            elif kind == 'pop':
                toks.append('pop=' + ('_' if outp == 'bot' else str(outp)))
            elif kind == 'hd':
                toks.append('hd=' + ('_' if outp == 'bot' else str(outp)))
            elif kind == 'rh':
                toks.append(f'rh({arg})')
        out.append(' '.join(toks))
    return out


def main():
    results = []
    for case_id, (adt_name, procs) in sorted(CASES.items()):
        res = classify(adt_name, procs)
        results.append((case_id, adt_name, render(procs), res))
        print(case_id, adt_name, res, flush=True)

    rng = random.Random(20250816)
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 12
    made = 0
    while made < count:
        adt_name = rng.choice(['wstream2', 'memory', 'queue'])
        procs = random_history(rng, adt_name)
        n = sum(len(p) for p in procs)
        if n > 5 or n < 2:
            continue
        res = classify(adt_name, procs)
        made += 1
        results.append((f'rnd{made}', adt_name, render(procs), res))
        print(f'rnd{made}', adt_name, render(procs), res, flush=True)

    with open('tools/oracle/frozen_verdicts.json', 'w') as f:
        json.dump(
            [{'name': nm, 'adt': a, 'procs': pr, 'verdicts': r}
             for nm, a, pr, r in results], f, indent=1)
    print('wrote tools/oracle/frozen_verdicts.json')


if __name__ == '__main__':
    main()
