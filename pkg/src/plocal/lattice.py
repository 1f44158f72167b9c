"""Subgroup lattice of a p-group, via local bitmask indexing.

Every subgroup of a p-group sits below a maximal chain with index-p steps,
each step normal in the next, so upward BFS through normalizer extensions
enumerates the full lattice.
"""

from __future__ import annotations

from .errors import SizeGuardExceeded
from .groups import Subgroup

DEFAULT_SUBGROUP_GUARD = 10_000


def subgroups_of_p_group(G, S, guard=DEFAULT_SUBGROUP_GUARD):
    """All subgroups of the p-group S <= G, sorted by (order, member tuple)."""
    cache = G._cache.setdefault("p_lattice", {})
    ck = (S.ids, guard)
    if ck in cache:
        return cache[ck]

    local = sorted(S.ids)
    n = len(local)
    pos = {x: k for k, x in enumerate(local)}
    mul = [[pos[G.mul(local[a], local[b])] for b in range(n)] for a in range(n)]
    conj = [[pos[G.conj(local[x], local[g])] for g in range(n)] for x in range(n)]
    ident = pos[G.identity]

    def closure(bits, seed):
        members = bits | (1 << seed)
        stack = [k for k in range(n) if (members >> k) & 1]
        while stack:
            a = stack.pop()
            row = mul[a]
            for b in range(n):
                if (members >> b) & 1:
                    c = row[b]
                    if not (members >> c) & 1:
                        members |= 1 << c
                        stack.append(c)
        return members

    trivial = 1 << ident
    found = {trivial}
    frontier = [trivial]
    while frontier:
        new = []
        for mask in frontier:
            inside = [k for k in range(n) if (mask >> k) & 1]
            for g in range(n):
                if (mask >> g) & 1:
                    continue
                # g must normalize the current subgroup
                if all((mask >> conj[x][g]) & 1 for x in inside):
                    ext = closure(mask, g)
                    if ext not in found:
                        found.add(ext)
                        if len(found) > guard:
                            raise SizeGuardExceeded(
                                f"subgroup lattice of S exceeded guard {guard}"
                            )
                        new.append(ext)
        frontier = new

    subs = []
    for mask in found:
        ids = frozenset(local[k] for k in range(n) if (mask >> k) & 1)
        subs.append(Subgroup(G, ids))
    subs.sort(key=lambda H: H.key())
    cache[ck] = tuple(subs)
    return cache[ck]
