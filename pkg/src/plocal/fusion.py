"""Fusion systems realized over an ambient finite group.

A FusionSystem is determined by an ambient group G, a p-subgroup S, and a
mover pool: the elements whose conjugation maps generate the morphisms.  A
pool of None means all of G (the classical F_S(G)); a pool that is a group
covers local subsystems N_F(X), C_F(X); an arbitrary inversion-closed pool
covers the fusion system F_T(N) of a partial normal subgroup N.

Conjugacy for pool systems: two subgroups of S are equivalent when joined by
a chain of single conjugation steps A -> A^g (g in the pool) with every link
inside S; this is complete because every morphism is a composite of
restrictions of the generating maps.  The chain search runs on transporter
cosets N_G(A) t inside each ambient orbit, which keeps the pool scan out of
the inner loop.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    EmptyInput,
    NotFullyCentralized,
    NotFullyNormalized,
    PreconditionViolated,
)
from .groups import (
    Subgroup,
    centralizer,
    is_p_nilpotent,
    normalizer,
    p_part,
    sub_p_core,
    subgroup_closure,
)
from .lattice import DEFAULT_SUBGROUP_GUARD, subgroups_of_p_group
from .unionfind import UnionFind

COLLECTION_KINDS = ("cr", "c", "q", "s")


def fusion_system(G, S, p, movers=None, guard=DEFAULT_SUBGROUP_GUARD, pool_is_group=False):
    """Memoized constructor; movers is None (all of G) or an id iterable."""
    mv = None if movers is None else frozenset(movers)
    key = ("fusion", S.ids, p, mv, guard)
    if key not in G._cache:
        G._cache[key] = FusionSystem(
            G, S, p, movers=movers, guard=guard, pool_is_group=pool_is_group
        )
    return G._cache[key]


class FusionSystem:
    def __init__(self, G, S, p, movers=None, guard=DEFAULT_SUBGROUP_GUARD, pool_is_group=False):
        if not S.is_p_group(p):
            raise PreconditionViolated("S must be a p-group")
        self.group = G
        self.S = S
        self.p = p
        self.guard = guard
        if movers is None:
            self.movers = None
            self.pool_group = G.whole()
        else:
            mv = frozenset(movers)
            self.movers = tuple(sorted(mv))
            self.pool_group = None
            if pool_is_group or _set_is_subgroup(G, mv):
                self.pool_group = Subgroup(G, mv)
        self._cache = {}

    # -- basic views ---------------------------------------------------------

    def label(self):
        pool = "G" if self.movers is None else f"pool({len(self.movers)})"
        return f"F_{{S:{self.S.order}}}({self.group.name};{pool})"

    def subgroups(self):
        return subgroups_of_p_group(self.group, self.S, guard=self.guard)

    def subgroup_index(self):
        if "index" not in self._cache:
            self._cache["index"] = {H.ids: i for i, H in enumerate(self.subgroups())}
        return self._cache["index"]

    def find(self, H):
        idx = self.subgroup_index().get(H.ids)
        if idx is None:
            raise PreconditionViolated("subgroup is not contained in S")
        return idx

    # -- conjugacy -----------------------------------------------------------

    def _ambient_orbit_data(self):
        """Per ambient class: members-in-S, a conjugator to each from the rep,
        and the ambient normalizer of the rep."""
        if "orbit_data" in self._cache:
            return self._cache["orbit_data"]
        import numpy as np

        G = self.group
        subs = self.subgroups()
        index = self.subgroup_index()
        Sids = self.S.ids
        gens = getattr(G, "generator_ids", None) or tuple(range(G.order))
        seen_rooted = {}
        data = []
        for i, H in enumerate(subs):
            if i in seen_rooted:
                continue
            conjugator = {H.ids: G.identity}
            frontier = [H.ids]
            while frontier:
                new = []
                for ids in frontier:
                    t = conjugator[ids]
                    arr = np.fromiter(ids, dtype=np.int64, count=len(ids))
                    for g in gens:
                        img = frozenset(
                            int(y) for y in G.conj_members_by(arr, g)
                        )
                        if img not in conjugator:
                            conjugator[img] = G.mul(t, g)
                            new.append(img)
                frontier = new
            members = sorted(
                (index[ids] for ids in conjugator if ids <= Sids and ids in index)
            )
            NA = normalizer(G, H)
            entry = {
                "rep": i,
                "members": tuple(members),
                "t": {j: conjugator[subs[j].ids] for j in members},
                "N_rep": NA,
            }
            k = len(data)
            data.append(entry)
            for j in members:
                seen_rooted[j] = k
        self._cache["orbit_data"] = (tuple(data), seen_rooted)
        return self._cache["orbit_data"]

    def classes(self):
        """F-conjugacy classes as tuples of lattice indices."""
        if "classes" in self._cache:
            return self._cache["classes"]
        subs = self.subgroups()
        if self.movers is None:
            data, _ = self._ambient_orbit_data()
            classes = tuple(sorted((e["members"] for e in data), key=lambda m: m[0]))
            class_of = [None] * len(subs)
            for cid, cls in enumerate(classes):
                for j in cls:
                    class_of[j] = cid
            self._cache["classes"] = classes
            self._cache["class_of"] = tuple(class_of)
            return classes
        G = self.group
        mv = set(self.movers)
        data, _ = self._ambient_orbit_data()
        classes = []
        for entry in data:
            members = entry["members"]
            if len(members) == 1:
                classes.append((members[0],))
                continue
            uf = UnionFind()
            for j in members:
                uf.add(j)
            NA = entry["N_rep"].sorted_ids()
            t = entry["t"]
            inv_t = {j: G.inv(t[j]) for j in members}
            for a_pos, ja in enumerate(members):
                for jb in members[a_pos + 1 :]:
                    if uf.find(ja) == uf.find(jb):
                        continue
                    # transporter {t_a^-1 n t_b : n in N_G(rep)}
                    ta_i, tb = inv_t[ja], t[jb]
                    for n in NA:
                        if G.mul(G.mul(ta_i, n), tb) in mv:
                            uf.union(ja, jb)
                            break
            groups = {}
            for j in members:
                groups.setdefault(uf.find(j), []).append(j)
            for part in groups.values():
                classes.append(tuple(sorted(part)))
        classes.sort(key=lambda c: c[0])
        class_of = [None] * len(subs)
        for cid, cls in enumerate(classes):
            for j in cls:
                class_of[j] = cid
        self._cache["classes"] = tuple(classes)
        self._cache["class_of"] = tuple(class_of)
        return self._cache["classes"]

    def class_id(self, H):
        self.classes()
        return self._cache["class_of"][self.find(H)]

    def f_class(self, H):
        subs = self.subgroups()
        cls = self.classes()[self.class_id(H)]
        return tuple(subs[i] for i in cls)

    # -- normalizer/centralizer data ------------------------------------------

    def n_s(self, H):
        return normalizer(self.group, H, within=self.S)

    def c_s(self, H):
        return centralizer(
            self.group, H.generators() or [self.group.identity], within=self.S
        )

    def is_fully_normalized(self, H):
        m = self.n_s(H).order
        return all(self.n_s(K).order <= m for K in self.f_class(H))

    def is_fully_centralized(self, H):
        m = self.c_s(H).order
        return all(self.c_s(K).order <= m for K in self.f_class(H))

    def pool_normalizer(self, H):
        """The group generated by the pool elements normalizing H."""
        G = self.group
        if self.movers is None:
            return normalizer(G, H)
        if self.pool_group is not None:
            return normalizer(G, H, within=self.pool_group)
        data, rooted = self._ambient_orbit_data()
        entry = data[rooted[self.find(H)]]
        j = self.find(H)
        t, NA = entry["t"][j], entry["N_rep"]
        ti = G.inv(t)
        mv = set(self.movers)
        ids = [g for n in NA.ids if (g := G.mul(G.mul(ti, n), t)) in mv]
        return subgroup_closure(G, ids) if ids else G.trivial()

    def pool_centralizer(self, H):
        G = self.group
        gens = H.generators() or [G.identity]
        if self.movers is None:
            return centralizer(G, gens)
        if self.pool_group is not None:
            return centralizer(G, gens, within=self.pool_group)
        ids = [
            g for g in self.movers if all(G.mul(g, x) == G.mul(x, g) for x in gens)
        ]
        return subgroup_closure(G, ids) if ids else G.trivial()

    # -- the four collections --------------------------------------------------

    def collection(self, kind):
        """One of the c / cr / q / s collections; conjugacy-closed by construction."""
        if kind not in COLLECTION_KINDS:
            raise PreconditionViolated(f"unknown collection kind {kind!r}")
        ck = ("coll", kind)
        if ck in self._cache:
            return self._cache[ck]
        subs = self.subgroups()
        chosen = set()
        for cls in self.classes():
            members = [subs[i] for i in cls]
            if self._class_in_collection(kind, members):
                chosen |= set(cls)
        out = SubgroupCollection(self, kind, frozenset(chosen), f_closed=False)
        self._cache[ck] = out
        return out

    def _class_in_collection(self, kind, members):
        if kind == "c":
            return all(self.c_s(B).ids <= B.ids for B in members)
        if kind == "cr":
            if not self._class_in_collection("c", members):
                return False
            for V in members:
                if self.is_fully_normalized(V):
                    NV = self.pool_normalizer(V)
                    if sub_p_core(self.group, NV, self.p).ids == V.ids:
                        return True
            return False
        if kind == "q":
            for Q in members:
                if self.is_fully_centralized(Q):
                    return self._centralizer_fusion_trivial(Q)
            return False
        if kind == "s":
            centrics = self.collection("c")
            for Q in members:
                if self.is_fully_normalized(Q):
                    NQ = self.pool_normalizer(Q)
                    R = sub_p_core(self.group, NQ, self.p)
                    return R.ids in self.subgroup_index() and R in centrics
            return False
        raise AssertionError(kind)

    def _centralizer_fusion_trivial(self, Q):
        """Whether the centralizer fusion system of Q is inner on C_S(Q).

        For a group pool this is the classical normal-p-complement criterion;
        otherwise each pool map is compared pointwise against inner maps.
        """
        G = self.group
        C = self.c_s(Q)
        K = self.pool_centralizer(Q)
        if p_part(K.order, self.p) != C.order:
            return False
        if self.movers is None or self.pool_group is not None:
            return is_p_nilpotent(G, K, self.p)
        gens = Q.generators() or [G.identity]
        pool = [
            g for g in self.movers if all(G.mul(g, x) == G.mul(x, g) for x in gens)
        ]
        Cids = C.ids
        for g in pool:
            dom = [a for a in Cids if G.conj(a, g) in Cids]
            if any(G.conj(a, g) != a for a in dom):
                if not any(
                    all(G.conj(a, g) == G.conj(a, x) for a in dom) for x in Cids
                ):
                    return False
        return True

    # -- closure and related predicates -----------------------------------------

    def f_closure(self, gamma):
        """Smallest F-closed set containing gamma: overgroups of conjugates of members."""
        gamma = list(gamma)
        if not gamma:
            raise EmptyInput("f_closure of an empty family")
        subs = self.subgroups()
        seeds = set()
        for H in gamma:
            seeds |= set(self.classes()[self.class_id(H)])
        chosen = set()
        for i in seeds:
            A = subs[i].ids
            for j, X in enumerate(subs):
                if A <= X.ids:
                    chosen.add(j)
        return SubgroupCollection(self, "custom", frozenset(chosen), f_closed=True)

    def is_strongly_closed(self, T):
        if not T.ids <= self.S.ids:
            raise PreconditionViolated("T must be a subgroup of S")
        Tids = T.ids
        for i, P in enumerate(self.subgroups()):
            if P.ids <= Tids:
                for Q in self.f_class(P):
                    if not Q.ids <= Tids:
                        return False
        return True

    def local_fusion(self, X, mode):
        """N_F(X) or C_F(X) as the fusion system of the ambient local subgroup."""
        G = self.group
        if mode == "normalizer":
            if not self.is_fully_normalized(X):
                raise NotFullyNormalized("X must be fully normalized")
            pool = self.pool_normalizer(X)
            Snew = self.n_s(X)
        elif mode == "centralizer":
            if not self.is_fully_centralized(X):
                raise NotFullyCentralized("X must be fully centralized")
            pool = self.pool_centralizer(X)
            Snew = self.c_s(X)
        else:
            raise PreconditionViolated(f"unknown mode {mode!r}")
        if p_part(pool.order, self.p) != Snew.order:
            raise PreconditionViolated("local Sylow certification failed")
        if self.movers is None and pool.order == G.order:
            return fusion_system(G, Snew, self.p, guard=self.guard)
        return fusion_system(
            G, Snew, self.p, movers=pool.sorted_ids(), guard=self.guard,
            pool_is_group=True,
        )

    # -- morphism-level data (small inputs only) ---------------------------------

    def iso_maps(self, A, B):
        """All F-isomorphisms A -> B as image tuples over sorted(A)."""
        G = self.group
        base = tuple(sorted(A.ids))
        out = set()
        if self.pool_group is not None:
            for g in self.pool_group.ids:
                img = tuple(G.conj(x, g) for x in base)
                if frozenset(img) == B.ids:
                    out.add(img)
            return out
        states = {(A.ids, base)}
        frontier = [(A.ids, base)]
        Sids = self.S.ids
        while frontier:
            new = []
            for ids, img in frontier:
                for g in self.movers:
                    jm = tuple(G.conj(x, g) for x in img)
                    jids = frozenset(jm)
                    if not jids <= Sids:
                        continue
                    st = (jids, jm)
                    if st not in states:
                        states.add(st)
                        new.append(st)
            frontier = new
        for ids, img in states:
            if ids == B.ids:
                out.add(img)
        return out

    def __repr__(self):
        return f"FusionSystem({self.label()}, p={self.p})"


def _set_is_subgroup(G, ids):
    if G.identity not in ids:
        return False
    gens = []
    have = {G.identity}
    for x in sorted(ids):
        if x in have:
            continue
        gens.append(x)
        have = subgroup_closure(G, gens).ids
        if not have <= ids:
            return False
        if have == ids:
            return True
    return have == ids


@dataclass(frozen=True)
class SubgroupCollection:
    """A set of subgroups of S, tagged with its defining kind."""

    owner: FusionSystem
    kind: str
    indices: frozenset
    f_closed: bool = False

    def members(self):
        subs = self.owner.subgroups()
        return tuple(subs[i] for i in sorted(self.indices))

    def member_ids(self):
        subs = self.owner.subgroups()
        return frozenset(subs[i].ids for i in self.indices)

    def __contains__(self, H):
        try:
            return self.owner.find(H) in self.indices
        except PreconditionViolated:
            return False

    def __len__(self):
        return len(self.indices)

    def issubset(self, other):
        if isinstance(other, SubgroupCollection):
            if other.owner is self.owner:
                return self.indices <= other.indices
            return self.member_ids() <= other.member_ids()
        return all(m in other for m in self.members())

    def serialize(self):
        from .perm import cycle_string

        out = []
        G = self.owner.group
        for H in self.members():
            gens = [cycle_string(G.elements[g]) for g in H.generators()]
            out.append({"order": H.order, "generators": gens})
        return out


def fusion_systems_agree(F1, F2, element_map):
    """Whether element_map (ids of S1 -> ids of S2) carries F1 to F2.

    Compares subgroup lattices, conjugacy classes, and isomorphism-map sets.
    Intended for the small groups where model reduction is applied.
    """
    G2 = F2.group
    subs1 = F1.subgroups()
    translate = {}
    for H in subs1:
        img = frozenset(element_map[x] for x in H.ids)
        if img not in F2.subgroup_index():
            return False
        translate[H.ids] = img
    if len(F2.subgroups()) != len(subs1):
        return False
    for H in subs1:
        for K in F1.f_class(H):
            img_maps = set()
            base = tuple(sorted(H.ids))
            order = sorted(range(len(base)), key=lambda i: element_map[base[i]])
            for m in F1.iso_maps(H, K):
                mapped = tuple(element_map[y] for y in m)
                img_maps.add(tuple(mapped[i] for i in order))
            H2 = Subgroup(G2, translate[H.ids])
            K2 = Subgroup(G2, translate[K.ids])
            if img_maps != F2.iso_maps(H2, K2):
                return False
    return True
