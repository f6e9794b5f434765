#!/usr/bin/env python3
"""Independent brute-force counts of partial-order enumerations.

Counts transitively closed strict partial orders on n labeled events that
contain a given base order, plus linear-extension counts.  Used to freeze
expected values for the enumeration tests; deliberately naive so it shares
no code with the C++ implementation.
"""

import itertools
import sys


def closed_orders(n, base):
    """Yield all transitively closed strict orders on range(n) containing base.

    base: iterable of (a, b) pairs meaning a before b.
    Representation: frozenset of (a, b) pairs.
    """
    base = set(base)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    # 3 states per unordered pair: absent, i<j, j<i
    for choice in itertools.product(range(3), repeat=len(pairs)):
        rel = set()
        ok = True
        for (i, j), c in zip(pairs, choice):
            if c == 1:
                rel.add((i, j))
            elif c == 2:
                rel.add((j, i))
        for (a, b) in base:
            if (a, b) not in rel:
                ok = False
                break
        if not ok:
            continue
        # transitively closed?
        for (a, b) in rel:
            for (c, d) in rel:
                if b == c and (a, d) not in rel:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        # acyclic (strict): no (a,b) and (b,a)
        if any((b, a) in rel for (a, b) in rel):
            continue
        out.append(frozenset(rel))
    return out


def linear_extensions(n, base):
    base = set(base)
    count = 0
    exts = []
    for perm in itertools.permutations(range(n)):
        pos = {e: i for i, e in enumerate(perm)}
        if all(pos[a] < pos[b] for (a, b) in base):
            count += 1
            exts.append(perm)
    return count, exts


def main():
    # Sanity: unconstrained counts must match the known poset numbers
    # 1, 1, 3, 19, 219, 4231 for n = 0..5.
    for n, want in [(0, 1), (1, 1), (2, 3), (3, 19), (4, 219)]:
        got = len(closed_orders(n, []))
        print(f"posets on {n} labeled elements: {got} (known {want})")
        assert got == want, (n, got, want)

    two_2chains = [(0, 1), (2, 3)]
    c = closed_orders(4, two_2chains)
    print(f"closed orders on 4 events containing two 2-chains: {len(c)}")

    le, _ = linear_extensions(4, two_2chains)
    print(f"linear extensions of two 2-chains: {le}")

    # chain of 2 + 2 free events
    c2 = closed_orders(4, [(0, 1)])
    print(f"closed orders on 4 events containing one 2-chain: {len(c2)}")

    # three 2-chains (6 events) -- frozen for the checker stress test
    three_2chains = [(0, 1), (2, 3), (4, 5)]
    c3 = closed_orders(6, three_2chains) if "--big" in sys.argv else None
    if c3 is not None:
        print(f"closed orders on 6 events containing three 2-chains: {len(c3)}")
        le3, _ = linear_extensions(6, three_2chains)
        print(f"linear extensions of three 2-chains: {le3}")

    # two 3-chains (6 events)
    if "--big" in sys.argv:
        two_3chains = [(0, 1), (1, 2), (3, 4), (4, 5)]
        c4 = closed_orders(6, two_3chains)
        print(f"closed orders on 6 events containing two 3-chains: {len(c4)}")
        le4, _ = linear_extensions(6, two_3chains)
        print(f"linear extensions of two 3-chains: {le4}")


if __name__ == "__main__":
    main()
