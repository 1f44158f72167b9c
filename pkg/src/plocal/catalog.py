"""Built-in permutation-group catalog.

The order-2688 entry is the affine group of a 4-dimensional F2-module for
GL3(2) that is uniserial with natural 3-dimensional submodule and trivial
quotient; the lift cocycle was found by search over the 64 candidates and the
defining properties (order, fixed-point-freeness of the point stabilizer) are
re-certified at load time.  PSL27-based entries are included because their
2-local structure is genuinely partial (Sylow intersections connect without
an ambient normal p-subgroup), which exercises components and E-balance
nontrivially.
"""

from __future__ import annotations

from .errors import UnknownCatalogName
from .groups import FiniteGroup, centralizer, enumerate_group, p_part
from .perm import from_cycles


def _cyc(degree, *cycles):
    return from_cycles(cycles, degree)


def _shift(perm, offset, degree):
    """Embed a permutation into a larger degree at the given offset."""
    img = list(range(degree))
    for i, j in enumerate(perm):
        img[i + offset] = j + offset
    return tuple(img)


def _direct_product(gens1, deg1, gens2, deg2):
    deg = deg1 + deg2
    out = [_shift(g, 0, deg) for g in gens1]
    out += [_shift(g, deg1, deg) for g in gens2]
    return out, deg


_A5_GENS = [_cyc(5, [1, 2, 3, 4, 5]), _cyc(5, [1, 2, 3])]
_A6_GENS = [_cyc(6, [1, 2, 3, 4, 5]), _cyc(6, [4, 5, 6])]

# GL3(2) acting on the 7 nonzero vectors of F2^3 (point i+1 <-> vector bits of i+1)
_PSL27_GENS = [
    (0, 4, 2, 6, 1, 5, 3),  # transvection e1 -> e1+e2
    (1, 3, 5, 7, 2, 4, 6),  # coordinate cycle
]
_PSL27_GENS = [tuple(x if x < 7 else x - 7 for x in g) for g in _PSL27_GENS]

# V x| GL3(2) with |V| = 16 acting on the 16 vectors of the module.
_VGL32_GENS = [
    (0, 1, 3, 2, 4, 5, 7, 6, 12, 13, 15, 14, 8, 9, 11, 10),
    (0, 2, 4, 6, 1, 3, 5, 7, 8, 10, 12, 14, 9, 11, 13, 15),
    (8, 9, 10, 11, 12, 13, 14, 15, 0, 1, 2, 3, 4, 5, 6, 7),
]

# SL2(3) on the 8 nonzero vectors of F3^2 (point = 3*a + b - 1 for vector (a,b))


def _sl23_gens():
    def idx(v):
        return v[0] * 3 + v[1] - 1

    def vec(i):
        return ((i + 1) // 3, (i + 1) % 3)

    def act(M):
        out = []
        for i in range(8):
            a, b = vec(i)
            out.append(idx(((M[0][0] * a + M[0][1] * b) % 3, (M[1][0] * a + M[1][1] * b) % 3)))
        return tuple(out)

    return [act(((1, 1), (0, 1))), act(((0, 2), (1, 0)))]


def _entries():
    a4 = [_cyc(4, [1, 2, 3]), _cyc(4, [1, 2], [3, 4])]
    s4 = [_cyc(4, [1, 2]), _cyc(4, [1, 2, 3, 4])]
    d8 = [_cyc(4, [1, 2, 3, 4]), _cyc(4, [1, 3])]
    c2 = [_cyc(2, [1, 2])]
    c3 = [_cyc(3, [1, 2, 3])]
    a5xa5 = _direct_product(_A5_GENS, 5, _A5_GENS, 5)
    a5xc3 = _direct_product(_A5_GENS, 5, c3, 3)
    psl2 = _direct_product(_PSL27_GENS, 7, _PSL27_GENS, 7)
    # (C3 x C3) x| V4: each V4 involution inverts one C3 factor
    coprime = (
        [
            _cyc(6, [1, 2, 3]),
            _cyc(6, [4, 5, 6]),
            _cyc(6, [2, 3]),
            _cyc(6, [5, 6]),
        ],
        6,
    )
    return {
        "C2": (c2, 2, 2),
        "C3": (c3, 3, 3),
        "D8": (d8, 4, 2),
        "A4": (a4, 4, 2),
        "S4": (s4, 4, 2),
        "SL23": (_sl23_gens(), 8, 2),
        "A5": (_A5_GENS, 5, 2),
        "A6": (_A6_GENS, 6, 2),
        "PSL27": (_PSL27_GENS, 7, 2),
        "A5xA5": (a5xa5[0], a5xa5[1], 2),
        "A5xC3": (a5xc3[0], a5xc3[1], 2),
        "PSL27xPSL27": (psl2[0], psl2[1], 2),
        "V_GL32": (_VGL32_GENS, 16, 2),
        "C3C3_V4": (coprime[0], coprime[1], 2),
    }


_EXPECTED_ORDERS = {
    "C2": 2,
    "C3": 3,
    "D8": 8,
    "A4": 12,
    "S4": 24,
    "SL23": 24,
    "A5": 60,
    "A6": 360,
    "PSL27": 168,
    "A5xA5": 3600,
    "A5xC3": 180,
    "PSL27xPSL27": 28224,
    "V_GL32": 2688,
    "C3C3_V4": 36,
}

_CACHE = {}


def catalog_names():
    return tuple(sorted(_entries()))


def default_prime(name):
    entries = _entries()
    if name not in entries:
        raise UnknownCatalogName(name)
    return entries[name][2]


def catalog_group(name, bound=100_000) -> FiniteGroup:
    entries = _entries()
    if name not in entries:
        raise UnknownCatalogName(f"unknown catalog entry {name!r}")
    if _EXPECTED_ORDERS[name] > bound:
        from .errors import SizeGuardExceeded

        raise SizeGuardExceeded(
            f"catalog entry {name} has order {_EXPECTED_ORDERS[name]} > bound {bound}"
        )
    if name not in _CACHE:
        gens, degree, _p = entries[name]
        G = enumerate_group(gens, degree=degree, bound=bound, name=name)
        if G.order != _EXPECTED_ORDERS[name]:
            raise AssertionError(f"catalog entry {name} has unexpected order {G.order}")
        if name == "V_GL32":
            _certify_vgl32(G)
        _CACHE[name] = G
    return _CACHE[name]


def _certify_vgl32(G):
    """V = translations is normal elementary abelian 16 with C_V(H) = 1 for a
    point stabilizer H (so the module extension is the fixed-point-free one)."""
    from .groups import Subgroup

    translations = set()
    for g in G.all_ids():
        img = G.elements[g]
        w = img[0]
        if all(img[x] == x ^ w for x in range(16)):
            translations.add(g)
    V = Subgroup(G, frozenset(translations))
    assert V.order == 16 and V.is_elementary_abelian(2)
    h_ids = frozenset(g for g in G.all_ids() if G.elements[g][0] == 0)
    H = Subgroup(G, h_ids)
    assert H.order == 168
    fixed = centralizer(G, H.generators(), within=V)
    assert fixed.order == 1, "C_V(H) must be trivial"
    assert p_part(G.order, 2) == 128
