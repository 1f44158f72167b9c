"""Permutations as image tuples on points 0..degree-1."""

from __future__ import annotations

from .errors import InvalidPermutation


def identity(degree: int) -> tuple:
    return tuple(range(degree))


def validate(images) -> tuple:
    """Check that an image sequence is a bijection and return it as a tuple."""
    t = tuple(int(x) for x in images)
    n = len(t)
    if sorted(t) != list(range(n)):
        raise InvalidPermutation(f"not a bijection on 0..{n - 1}: {images!r}")
    return t


def compose(a: tuple, b: tuple) -> tuple:
    """a followed by b: x -> b[a[x]]."""
    return tuple(map(b.__getitem__, a))


def inverse(a: tuple) -> tuple:
    r = [0] * len(a)
    for i, j in enumerate(a):
        r[j] = i
    return tuple(r)


def from_cycles(cycles, degree: int, one_based: bool = True) -> tuple:
    """Build a permutation from a cycle list, e.g. [[1,2],[3,4]] for (1 2)(3 4)."""
    img = list(range(degree))
    shift = 1 if one_based else 0
    for cyc in cycles:
        pts = [int(p) - shift for p in cyc]
        if any(p < 0 or p >= degree for p in pts):
            raise InvalidPermutation(f"cycle point out of range for degree {degree}: {cyc}")
        if len(set(pts)) != len(pts):
            raise InvalidPermutation(f"repeated point in cycle: {cyc}")
        for i, p in enumerate(pts):
            img[p] = pts[(i + 1) % len(pts)]
    return validate(img)


def to_cycles(perm: tuple, one_based: bool = True):
    """Cycle decomposition (fixed points omitted), deterministic order."""
    shift = 1 if one_based else 0
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x + shift)
            x = perm[x]
        cycles.append(cyc)
    return cycles


def cycle_string(perm: tuple) -> str:
    cycles = to_cycles(perm)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycles)
