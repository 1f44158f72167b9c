"""Finite permutation-group engine.

Groups are fully enumerated; elements are identified with integer ids, sorted
lexicographically by image tuple (so id 0 is always the identity).  A dense
multiplication table is built for orders up to DENSE_TABLE_LIMIT; above that,
products compose permutations on the fly.  All objects here are immutable
after construction; caches only ever add derived data, so instances are safe
to share between threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import perm as pm
from .errors import (
    EmptyInput,
    InvalidPermutation,
    NotPDisconnected,
    PreconditionViolated,
    SizeGuardExceeded,
)

DENSE_TABLE_LIMIT = 5000
DEFAULT_ORDER_GUARD = 100_000


class FiniteGroup:
    """A fully enumerated permutation group with id-level arithmetic."""

    def __init__(self, elements, degree, name="G"):
        self.degree = degree
        self.name = name
        self.elements = tuple(sorted(elements))
        self.order = len(self.elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.identity = self.index[pm.identity(degree)]
        inv = np.empty(self.order, dtype=np.int64)
        for i, g in enumerate(self.elements):
            inv[i] = self.index[pm.inverse(g)]
        self._inv = inv
        self._table = None
        if self.order <= DENSE_TABLE_LIMIT and self.degree <= 64:
            self._table = self._build_table()
        self._cache = {}

    # -- construction ------------------------------------------------------

    @classmethod
    def from_generators(cls, generators, degree=None, bound=DEFAULT_ORDER_GUARD, name="G"):
        """Group generated by the closure of `generators` (image tuples)."""
        gens = [pm.validate(g) for g in generators]
        if degree is None:
            if not gens:
                raise EmptyInput("no generators and no degree given")
            degree = len(gens[0])
        if any(len(g) != degree for g in gens):
            raise InvalidPermutation("generators act on different degrees")
        if bound < 1:
            raise PreconditionViolated("bound must be >= 1")
        ident = pm.identity(degree)
        seen = {ident}
        frontier = [ident]
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    b = pm.compose(a, g)
                    if b not in seen:
                        seen.add(b)
                        if len(seen) > bound:
                            raise SizeGuardExceeded(
                                f"group closure exceeded bound {bound}"
                            )
                        new.append(b)
            frontier = new
        grp = cls(seen, degree, name=name)
        grp.generator_ids = tuple(sorted(grp.index[g] for g in gens))
        return grp

    @staticmethod
    def _encode_rows(P, degree):
        """Injective sortable codes for permutation rows."""
        if degree <= 15:
            radix = np.array([degree**k for k in range(degree)], dtype=np.int64)
            return P.astype(np.int64) @ radix
        base = np.uint8 if degree <= 255 else np.uint16
        raw = np.ascontiguousarray(P.astype(base))
        return raw.view(np.dtype((np.void, raw.dtype.itemsize * degree))).ravel()

    def _build_table(self):
        n = self.order
        P = np.array(self.elements, dtype=np.int32)
        codes = self._encode_rows(P, self.degree)
        sort_idx = np.argsort(codes)
        sorted_codes = codes[sort_idx]
        dtype = np.int16 if n < 32768 else np.int32
        table = np.empty((n, n), dtype=dtype)
        for a in range(n):
            prods = P[:, P[a]]  # row b = images of (a followed by b)
            pos = np.searchsorted(sorted_codes, self._encode_rows(prods, self.degree))
            table[a, :] = sort_idx[pos]
        return table

    # -- arithmetic ----------------------------------------------------------

    def mul(self, a, b):
        """Product id of element a followed by element b."""
        if self._table is not None:
            return int(self._table[a, b])
        return self.index[pm.compose(self.elements[a], self.elements[b])]

    def inv(self, a):
        return int(self._inv[a])

    def conj(self, x, g):
        """x^g = g^-1 x g."""
        if self._table is not None:
            t = self._table
            return int(t[t[self._inv[g], x], g])
        gi = self.elements[int(self._inv[g])]
        return self.index[pm.compose(pm.compose(gi, self.elements[x]), self.elements[g])]

    def power(self, a, k):
        r = self.identity
        x = a
        while k:
            if k & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            k >>= 1
        return r

    def element_order(self, a):
        orders = self._cache.setdefault("orders", {})
        if a not in orders:
            k, x = 1, a
            while x != self.identity:
                x = self.mul(x, a)
                k += 1
            orders[a] = k
        return orders[a]

    # -- vectorized bulk operations (hot paths on large groups) --------------

    def _vec_data(self):
        if "vec" not in self._cache:
            P = np.array(self.elements, dtype=np.int32)
            codes = self._encode_rows(P, self.degree)
            sort_idx = np.argsort(codes)
            self._cache["vec"] = (P, codes[sort_idx], sort_idx)
        return self._cache["vec"]

    def _lookup_many(self, perm_matrix):
        P, sorted_codes, sort_idx = self._vec_data()
        codes = self._encode_rows(perm_matrix, self.degree)
        pos = np.searchsorted(sorted_codes, codes)
        return sort_idx[pos].astype(np.int64)

    def conj_all(self, x):
        """Array of x^g over all g (indexed by g), cached per x."""
        cache = self._cache.setdefault("conj_all", {})
        if x in cache:
            return cache[x]
        n = self.order
        if self._table is not None:
            t = self._table
            u = t[self._inv, x]
            out = t[u, np.arange(n)].astype(np.int64)
        else:
            P, _sc, _si = self._vec_data()
            X = P[x]
            rows = X[P[self._inv]]  # row g = compose(inv g, x)
            rows = np.take_along_axis(P, rows, axis=1)  # then compose with g
            out = self._lookup_many(rows)
        cache[x] = out
        return out

    def conj_members_by(self, ids_array, g):
        """Array of x^g for the given x-ids (vectorized over x)."""
        if self._table is not None:
            t = self._table
            return t[t[self._inv[g], ids_array], g].astype(np.int64)
        P, _sc, _si = self._vec_data()
        gi = P[int(self._inv[g])]
        gp = P[g]
        rows = P[ids_array][:, gi]
        rows = gp[rows]
        return self._lookup_many(rows)

    def commutator(self, a, b):
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    # -- whole-group views ---------------------------------------------------

    def all_ids(self):
        return range(self.order)

    def whole(self):
        key = ("whole",)
        if key not in self._cache:
            self._cache[key] = Subgroup(self, frozenset(range(self.order)))
        return self._cache[key]

    def trivial(self):
        key = ("trivial",)
        if key not in self._cache:
            self._cache[key] = Subgroup(self, frozenset({self.identity}))
        return self._cache[key]

    def conjugacy_classes(self):
        """Partition of ids into conjugacy classes, each sorted; deterministic order."""
        key = ("classes",)
        if key in self._cache:
            return self._cache[key]
        out = []
        seen = set()
        gens = getattr(self, "generator_ids", None) or range(self.order)
        for x in range(self.order):
            if x in seen:
                continue
            orb = {x}
            frontier = [x]
            while frontier:
                new = []
                for y in frontier:
                    for g in gens:
                        z = self.conj(y, g)
                        if z not in orb:
                            orb.add(z)
                            new.append(z)
                frontier = new
            seen |= orb
            out.append(tuple(sorted(orb)))
        self._cache[key] = tuple(out)
        return self._cache[key]

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order}, degree={self.degree})"


@dataclass(frozen=True)
class Subgroup:
    """Subgroup given by its member-id set inside a parent FiniteGroup.

    Identity is the member set; deterministic ordering key is
    (order, sorted member tuple).
    """

    group: FiniteGroup
    ids: frozenset
    _derived: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.group.identity not in self.ids:
            raise PreconditionViolated("a subgroup must contain the identity")

    @property
    def order(self):
        return len(self.ids)

    def key(self):
        if "key" not in self._derived:
            self._derived["key"] = (len(self.ids), tuple(sorted(self.ids)))
        return self._derived["key"]

    def sorted_ids(self):
        return self.key()[1]

    def __le__(self, other):
        return self.ids <= other.ids

    def __lt__(self, other):
        return self.ids < other.ids

    def __contains__(self, x):
        return x in self.ids

    def __iter__(self):
        return iter(self.sorted_ids())

    def generators(self):
        """A small deterministic generating set (greedy)."""
        if "gens" not in self._derived:
            G = self.group
            gens = []
            have = {G.identity}
            for x in self.sorted_ids():
                if x in have:
                    continue
                gens.append(x)
                have = _closure_ids(G, gens)
                if len(have) == self.order:
                    break
            if len(have) != self.order:
                raise PreconditionViolated(
                    "generators() called on a set that is not a subgroup"
                )
            self._derived["gens"] = tuple(gens)
        return self._derived["gens"]

    def conjugate(self, g):
        G = self.group
        return Subgroup(G, frozenset(G.conj(x, g) for x in self.ids))

    def is_conjugation_invariant_under(self, ids):
        G = self.group
        gens = self.generators()
        return all(G.conj(x, g) in self.ids for g in ids for x in gens)

    def is_abelian(self):
        if "abelian" not in self._derived:
            G = self.group
            gens = self.generators()
            self._derived["abelian"] = all(
                G.mul(a, b) == G.mul(b, a) for a in gens for b in gens
            )
        return self._derived["abelian"]

    def is_p_group(self, p):
        m = self.order
        while m % p == 0:
            m //= p
        return m == 1

    def is_elementary_abelian(self, p):
        return (
            self.is_p_group(p)
            and self.is_abelian()
            and all(
                self.group.power(x, p) == self.group.identity for x in self.generators()
            )
        )

    def certify_closed(self):
        """Element-by-element closure/identity/inverse certification."""
        G = self.group
        ids = self.ids
        if G.identity not in ids:
            return False
        if any(G.inv(x) not in ids for x in ids):
            return False
        return all(G.mul(x, y) in ids for x in ids for y in ids)

    def label(self):
        return f"subgroup(order={self.order})"

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.group.name})"


# -- id-level helpers ---------------------------------------------------------


def _closure_ids(G, gen_ids):
    """Closure of a set of element ids under multiplication."""
    gen_ids = list(dict.fromkeys(gen_ids))
    if G._table is None and G.order > 2000 and gen_ids:
        return _closure_ids_vectorized(G, gen_ids)
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        new = []
        for a in frontier:
            for g in gen_ids:
                b = G.mul(a, g)
                if b not in seen:
                    seen.add(b)
                    new.append(b)
        frontier = new
    return seen


def _closure_ids_vectorized(G, gen_ids):
    P, _sc, _si = G._vec_data()
    seen = np.zeros(G.order, dtype=bool)
    seen[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    gperms = [P[g] for g in gen_ids]
    while frontier.size:
        rows = P[frontier]
        fresh_parts = []
        for gp in gperms:
            ids = np.unique(G._lookup_many(gp[rows]))
            fresh = ids[~seen[ids]]
            if fresh.size:
                seen[fresh] = True
                fresh_parts.append(fresh)
        frontier = (
            np.unique(np.concatenate(fresh_parts))
            if fresh_parts
            else np.array([], dtype=np.int64)
        )
    return {int(x) for x in np.nonzero(seen)[0]}


def subgroup_closure(G, gen_ids):
    return Subgroup(G, frozenset(_closure_ids(G, gen_ids)))


def span_of(G, ids):
    """<ids> as a subgroup, via a greedy small generating subset."""
    ids = sorted(set(ids))
    if not ids:
        return G.trivial()
    gens = []
    have = {G.identity}
    for x in ids:
        if x in have:
            continue
        gens.append(x)
        have = _closure_ids(G, gens)
    return Subgroup(G, frozenset(have))


def enumerate_group(generators, bound=DEFAULT_ORDER_GUARD, degree=None, name="G"):
    """Spec entry point: group generated by permutations, with size guard."""
    return FiniteGroup.from_generators(generators, degree=degree, bound=bound, name=name)


def p_part(n, p):
    m = 1
    while n % p == 0:
        n //= p
        m *= p
    return m


def sylow_subgroup(G, p, within=None):
    """A Sylow p-subgroup of `within` (default: all of G), grown greedily.

    Any p-subgroup P below Sylow order has a p-element in its normalizer
    extending it, so the greedy walk in id order cannot get stuck; the result
    is deterministic for a fixed group.
    """
    if within is None:
        within = G.whole()
    cache = G._cache.setdefault("sylow", {})
    ck = (p, within.ids)
    if ck in cache:
        return cache[ck]
    target = p_part(within.order, p)
    P = {G.identity}
    while len(P) < target:
        Psub = Subgroup(G, frozenset(P))
        extended = False
        for g in sorted(within.ids):
            if g in P:
                continue
            if G.element_order(g) % p != 0:
                continue
            # pass to the p-power part of g
            o = G.element_order(g)
            x = G.power(g, o // p_part(o, p))
            if x in P:
                continue
            if not all(G.conj(y, x) in P for y in Psub.generators()):
                continue
            cand = _closure_ids(G, list(Psub.generators()) + [x])
            m = len(cand)
            while m % p == 0:
                m //= p
            if m == 1 and len(cand) <= target:
                P = cand
                extended = True
                break
        if not extended:  # pragma: no cover - would contradict Sylow theory
            raise RuntimeError("sylow growth stuck")
    res = Subgroup(G, frozenset(P))
    cache[ck] = res
    return res


def normalizer(G, H, within=None):
    """N_within(H), via generator conjugation (vectorized on large pools)."""
    cache = G._cache.setdefault("normalizer", {})
    wid = None if within is None else within.ids
    ck = (H.ids, wid)
    if ck in cache:
        return cache[ck]
    gens = H.generators()
    pool_size = G.order if within is None else within.order
    if pool_size > 2000:
        target = np.fromiter(sorted(H.ids), dtype=np.int64, count=len(H.ids))
        mask = np.ones(G.order, dtype=bool)
        for x in gens:
            mask &= np.isin(G.conj_all(x), target)
        hits = np.nonzero(mask)[0]
        if within is None:
            ids = frozenset(int(g) for g in hits)
        else:
            ids = frozenset(int(g) for g in hits if int(g) in within.ids)
    else:
        pool = G.all_ids() if within is None else within.ids
        ids = frozenset(
            g for g in pool if all(G.conj(x, g) in H.ids for x in gens)
        )
    res = Subgroup(G, ids)
    cache[ck] = res
    return res


def centralizer(G, xs, within=None):
    """C_within(xs) for an element-id iterable xs."""
    xs = frozenset(xs)
    cache = G._cache.setdefault("centralizer", {})
    wid = None if within is None else within.ids
    ck = (xs, wid)
    if ck in cache:
        return cache[ck]
    pool_size = G.order if within is None else within.order
    if pool_size > 2000:
        mask = np.ones(G.order, dtype=bool)
        for x in xs:
            mask &= G.conj_all(x) == x
        hits = np.nonzero(mask)[0]
        if within is None:
            ids = frozenset(int(g) for g in hits)
        else:
            ids = frozenset(int(g) for g in hits if int(g) in within.ids)
    else:
        pool = G.all_ids() if within is None else within.ids
        ids = frozenset(
            g for g in pool if all(G.mul(g, x) == G.mul(x, g) for x in xs)
        )
    res = Subgroup(G, ids)
    cache[ck] = res
    return res


def centralizer_of_subgroup(G, H, within=None):
    return centralizer(G, H.generators() or [G.identity], within=within)


def _greedy_generators(G, ids):
    """A small subset of ids generating <ids>."""
    gens = []
    have = {G.identity}
    for x in sorted(ids):
        if x in have:
            continue
        gens.append(x)
        have = _closure_ids(G, gens)
    return gens, have


def normal_closure(G, seed_ids, within=None):
    """Smallest subgroup containing seed_ids invariant under `within`-conjugation."""
    pool = list(
        (getattr(G, "generator_ids", None) or range(G.order))
        if within is None
        else within.generators()
    )
    current = set(seed_ids)
    while True:
        gens, sub = _greedy_generators(G, current)
        extra = set()
        for x in gens:
            for g in pool:
                y = G.conj(x, g)
                if y not in sub:
                    extra.add(y)
        if not extra:
            return Subgroup(G, frozenset(sub))
        current = sub | extra


def conjugacy_classes_within(G, H):
    """Conjugacy classes of the subgroup H, each a sorted id tuple."""
    cache = G._cache.setdefault("classes_within", {})
    if H.ids in cache:
        return cache[H.ids]
    gens = H.generators() or (G.identity,)
    out = []
    seen = set()
    for x in H.sorted_ids():
        if x in seen:
            continue
        orb = {x}
        frontier = [x]
        while frontier:
            new = []
            for y in frontier:
                for g in gens:
                    z = G.conj(y, g)
                    if z not in orb:
                        orb.add(z)
                        new.append(z)
            frontier = new
        seen |= orb
        out.append(tuple(sorted(orb)))
    cache[H.ids] = tuple(out)
    return cache[H.ids]


def normal_subgroups(G, within=None, guard=DEFAULT_ORDER_GUARD):
    """All normal subgroups of `within` (default: G) via class-union closure.

    Every normal subgroup is the join of the normal closures of the classes
    it contains, so joining the per-class closures to a fixpoint is complete.
    Sorted by (order, member tuple).
    """
    H = within if within is not None else G.whole()
    if H.order > guard:
        raise SizeGuardExceeded(f"normal_subgroups guard: |H|={H.order} > {guard}")
    key = ("normals", H.ids)
    if key in G._cache:
        return G._cache[key]
    classes = (
        G.conjugacy_classes() if H.order == G.order else conjugacy_classes_within(G, H)
    )
    irreducibles = set()
    for cls in classes:
        N = normal_closure(G, {cls[0]}, within=H)
        irreducibles.add(N.ids)
    found = set(irreducibles)
    found.add(frozenset({G.identity}))
    gen_cache = {ids: _greedy_generators(G, ids)[0] for ids in found}
    while True:
        new = set()
        for a in found:
            for b in irreducibles:
                if b <= a:
                    continue
                j = frozenset(_closure_ids(G, gen_cache[a] + gen_cache[b]))
                if j not in found and j not in new:
                    new.add(j)
                    gen_cache[j] = _greedy_generators(G, j)[0]
        if not new:
            break
        found |= new
    out = sorted((Subgroup(G, ids) for ids in found), key=lambda s: s.key())
    G._cache[key] = tuple(out)
    return G._cache[key]


def p_prime_core(G, p, within=None):
    """O_{p'}: the largest normal p'-subgroup."""
    H = within if within is not None else G.whole()
    best = G.trivial()
    for K in normal_subgroups(G, within=H):
        if K.order % p != 0 and K.order > best.order:
            best = K
    return best


def p_core(G, p):
    """O_p(G): the intersection of all conjugates of one Sylow p-subgroup."""
    key = ("p_core", p)
    if key in G._cache:
        return G._cache[key]
    S = sylow_subgroup(G, p)
    inter = set(S.ids)
    seen = {S.ids}
    frontier = [S.ids]
    gens = getattr(G, "generator_ids", None) or range(G.order)
    while frontier and len(inter) > 1:
        new = []
        for ids in frontier:
            for g in gens:
                img = frozenset(G.conj(x, g) for x in ids)
                if img not in seen:
                    seen.add(img)
                    new.append(img)
                    inter &= img
        frontier = new
    res = Subgroup(G, frozenset(inter))
    G._cache[key] = res
    return res


def p_residual(G, p):
    """O^p(G): subgroup generated by all p'-elements (smallest normal with p-group quotient)."""
    key = ("p_residual", p)
    if key in G._cache:
        return G._cache[key]
    seeds = [x for x in G.all_ids() if G.element_order(x) % p != 0]
    res = Subgroup(G, frozenset(_greedy_generators(G, seeds)[1]))
    G._cache[key] = res
    return res


def p_prime_residual(G, p):
    """O^{p'}(G): subgroup generated by all p-elements."""
    key = ("pp_residual", p)
    if key in G._cache:
        return G._cache[key]
    seeds = [
        x
        for x in G.all_ids()
        if x != G.identity and p_part(G.element_order(x), p) == G.element_order(x)
    ]
    res = Subgroup(G, frozenset(_greedy_generators(G, seeds)[1]))
    G._cache[key] = res
    return res


def sub_p_residual(G, H, p):
    """O^p(H) for a subgroup H: generated by the p'-elements of H."""
    seeds = [x for x in H.ids if G.element_order(x) % p != 0]
    return Subgroup(G, frozenset(_greedy_generators(G, seeds)[1]))


def sub_p_prime_residual(G, H, p):
    """O^{p'}(H) for a subgroup H: generated by the p-elements of H."""
    seeds = [
        x
        for x in H.ids
        if x != G.identity and p_part(G.element_order(x), p) == G.element_order(x)
    ]
    return Subgroup(G, frozenset(_greedy_generators(G, seeds)[1]))


def sub_p_core(G, H, p):
    """O_p(H) for a subgroup H: core of a Sylow p of H over H."""
    S = sylow_subgroup(G, p, within=H)
    inter = set(S.ids)
    seen = {S.ids}
    frontier = [S.ids]
    gens = H.generators()
    while frontier and len(inter) > 1:
        new = []
        for ids in frontier:
            for g in gens:
                img = frozenset(G.conj(x, g) for x in ids)
                if img not in seen:
                    seen.add(img)
                    new.append(img)
                    inter &= img
        frontier = new
    return Subgroup(G, frozenset(inter))


def is_characteristic_p(G, p, H=None):
    """C_H(O_p(H)) <= O_p(H); H defaults to the whole group."""
    if H is None:
        H = G.whole()
    Q = sub_p_core(G, H, p)
    C = centralizer(G, Q.generators() or [G.identity], within=H)
    return C.ids <= Q.ids


def is_p_nilpotent(G, H, p):
    """Normal p-complement test: #p'-elements equals the p'-part of |H|."""
    count = sum(1 for x in H.ids if G.element_order(x) % p != 0)
    return count == H.order // p_part(H.order, p)


def derived_subgroup(G, H=None):
    if H is None:
        H = G.whole()
    gens = list(H.generators())
    seeds = set()
    for a in H.ids:
        for b in gens:
            seeds.add(G.commutator(a, b))
    # normal closure inside H
    return normal_closure(G, seeds, within=H)


def group_commutator_subgroup(G, A, B):
    """[A, B] as a subgroup: normal closure of pairwise commutators in <A,B>."""
    joint = subgroup_closure(G, set(A.generators()) | set(B.generators()))
    seeds = {G.commutator(a, b) for a in A.ids for b in B.generators()}
    return normal_closure(G, seeds, within=joint)


@dataclass(frozen=True)
class GroupHomomorphismWitness:
    """A certified homomorphism: domain/codomain plus the full element map."""

    domain: Subgroup
    codomain: Subgroup
    mapping: dict

    def certify(self):
        G = self.domain.group
        H = self.codomain.group
        m = self.mapping
        for x in self.domain.ids:
            for y in self.domain.ids:
                if m[G.mul(x, y)] != H.mul(m[x], m[y]):
                    return False
        return True


def quotient_group(G, K, N, name=None):
    """K/N as a FiniteGroup (regular action on right cosets), with witness.

    Returns (quotient, witness) where witness maps each id of K to the
    quotient element id.
    """
    if not N.ids <= K.ids:
        raise PreconditionViolated("N must be contained in K")
    if not N.is_conjugation_invariant_under(K.generators()):
        raise PreconditionViolated("N must be normal in K")
    k_sorted = sorted(K.ids)
    coset_of = {}
    reps = []
    for x in k_sorted:
        if x in coset_of:
            continue
        rep_idx = len(reps)
        reps.append(x)
        for n in N.ids:
            coset_of[G.mul(n, x)] = rep_idx
    m = len(reps)
    perms = {}
    for x in k_sorted:
        img = tuple(coset_of[G.mul(reps[i], x)] for i in range(m))
        perms[x] = img
    Q = FiniteGroup(set(perms.values()), m, name=name or f"{G.name}/N")
    Q.generator_ids = tuple(sorted({Q.index[perms[g]] for g in K.generators()})) or (
        Q.identity,
    )
    mapping = {x: Q.index[perms[x]] for x in k_sorted}
    witness = GroupHomomorphismWitness(
        domain=K, codomain=Q.whole(), mapping=mapping
    )
    return Q, witness


def coprime_generation_check(G, X, A, p):
    """Whether X = < C_X(a) : 1 != a in A > for A elementary abelian of order p^2.

    Raises PreconditionViolated unless A has order p^2, is elementary abelian,
    normalizes X, and X is a p'-group.
    """
    if A.order != p * p or not A.is_elementary_abelian(p):
        raise PreconditionViolated("A must be elementary abelian of order p^2")
    if X.order % p == 0:
        raise PreconditionViolated("X must be a p'-group")
    if not X.is_conjugation_invariant_under(A.generators()):
        raise PreconditionViolated("A must normalize X")
    seeds = set()
    for a in A.ids:
        if a == G.identity:
            continue
        seeds |= {x for x in X.ids if G.mul(x, a) == G.mul(a, x)}
    return frozenset(_closure_ids(G, seeds)) == X.ids


def intersection(A, B):
    return Subgroup(A.group, A.ids & B.ids)


def product_set(G, A_ids, B_ids):
    """The set {ab : a in A, b in B} (not necessarily a subgroup)."""
    return frozenset(G.mul(a, b) for a in A_ids for b in B_ids)


def product_subgroup(G, A, B):
    """AB when it is a group (certified); raises otherwise."""
    ids = product_set(G, A.ids, B.ids)
    sub = Subgroup(G, ids)
    if len(ids) * len(A.ids & B.ids) != A.order * B.order:
        raise PreconditionViolated("AB is not a subgroup (size mismatch)")
    return sub


def find_conjugator(G, A, B, pool=None):
    """Some g with A^g = B, or None; scans pool (default: all of G)."""
    if len(A.ids) != len(B.ids):
        return None
    gens = A.generators()
    pool = G.all_ids() if pool is None else pool
    for g in pool:
        if all(G.conj(x, g) in B.ids for x in gens):
            if frozenset(G.conj(x, g) for x in A.ids) == B.ids:
                return g
    return None
