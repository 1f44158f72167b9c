"""Localities realized inside an ambient finite group.

A locality here is (carrier, delta, S) where the carrier is a subset of the
ambient group closed under inversion, delta is an overgroup- and
conjugacy-closed set of subgroups of S, and a word w lies in the domain of
the partial product exactly when S_w (tracked stepwise through `track`, then
cut down to S) lies in delta.  Top-level localities track through S itself
and draw the carrier from the whole ambient group; localities arising from
localizable pairs keep the parent's tracker and draw from the parent partial
subgroup, which realizes the partial group of the pair construction.
"""

from __future__ import annotations

import random

from .errors import (
    CollectionOutOfRange,
    ExpansionNotProper,
    ForeignElement,
    NotFClosed,
    NotInDomain,
    NotLocalizable,
    PreconditionViolated,
)
from .fusion import SubgroupCollection, fusion_system
from .groups import (
    Subgroup,
    centralizer,
    p_part,
    sub_p_core,
    subgroup_closure,
)
from .report import CertReport

ASSOC_SAMPLE_DEFAULT = 2000
ASSOC_EXHAUSTIVE_CARRIER = 40


class Locality:
    def __init__(self, group, S, p, delta_ids, pool_ids=None, track=None, name=None):
        """delta_ids: iterable of frozensets (member-id sets of subgroups of S)."""
        self.group = group
        self.S = S
        self.p = p
        self.track = track if track is not None else S
        self.pool = frozenset(pool_ids) if pool_ids is not None else None
        self.name = name or f"L({group.name})"
        delta = frozenset(frozenset(d) for d in delta_ids)
        if S.ids not in delta:
            raise NotFClosed("S itself must be an object")
        if not all(d <= S.ids for d in delta):
            raise PreconditionViolated("objects must be subgroups of S")
        self.delta_ids = delta
        self.delta_min = _minimal_sets(delta)
        self._sg = {}
        self._cache = {}
        # track-index tables: stepwise word tracking runs on small int arrays
        self._tlist = tuple(sorted(self.track.ids))
        self._tpos = {x: k for k, x in enumerate(self._tlist)}
        self._smask_bits = 0
        for x in self.S.ids:
            self._smask_bits |= 1 << self._tpos[x]
        self._dmin_masks = tuple(
            self._bits_of(m) for m in self.delta_min
        )
        self._rows = {}
        self.carrier = self._compute_carrier()

    def _bits_of(self, ids):
        b = 0
        for x in ids:
            b |= 1 << self._tpos[x]
        return b

    def _row_of(self, g):
        """Track-index map of conjugation by g (-1 where the image leaves track)."""
        row = self._rows.get(g)
        if row is None:
            import numpy as np

            G = self.group
            row = np.empty(len(self._tlist), dtype=np.int16)
            for k, x in enumerate(self._tlist):
                y = G.conj(x, g)
                row[k] = self._tpos.get(y, -1)
            self._rows[g] = row
        return row

    # -- construction helpers ---------------------------------------------------

    def _pool_iter(self):
        return self.group.all_ids() if self.pool is None else sorted(self.pool)

    def _compute_carrier(self):
        G = self.group
        pool_size = G.order if self.pool is None else len(self.pool)
        if pool_size > 2000:
            return self._compute_carrier_vectorized()
        out = set()
        for g in self._pool_iter():
            if self._sg_ids(g) is not None:
                out.add(g)
        return frozenset(out)

    def _compute_carrier_vectorized(self):
        import numpy as np

        G = self.group
        track = np.fromiter(sorted(self.track.ids), dtype=np.int64, count=self.track.order)
        rows = {
            x: np.isin(G.conj_all(x), track) for x in self.S.ids
        }
        mask = np.zeros(G.order, dtype=bool)
        for m in self.delta_min:
            sub = np.ones(G.order, dtype=bool)
            for x in m:
                sub &= rows[x]
            mask |= sub
        hits = {int(g) for g in np.nonzero(mask)[0]}
        if self.pool is not None:
            hits &= self.pool
        return frozenset(hits)

    def _sg_ids(self, g):
        """S_g = {x in S : x stays in track under g}, or None when not in delta."""
        hit = self._sg.get(g)
        if hit is not None:
            return hit if hit is not False else None
        G = self.group
        track = self.track.ids
        ids = frozenset(
            x for x in self.S.ids if G.conj(x, g) in track
        )
        ok = self._delta_has(ids)
        self._sg[g] = ids if ok else False
        return ids if ok else None

    def _delta_has(self, ids):
        return any(m <= ids for m in self.delta_min)

    # -- spec surface -------------------------------------------------------------

    def _sw_bits(self, word, check_carrier=True):
        """Bitmask (over track indices) of S-members surviving the word."""
        if check_carrier:
            for g in word:
                if g not in self.carrier:
                    raise ForeignElement(f"word entry {g} outside the carrier")
        import numpy as np

        n = len(self._tlist)
        cur = np.arange(n, dtype=np.int16)
        alive = np.ones(n, dtype=bool)
        for g in word:
            row = self._row_of(g)
            cur = np.where(alive, row[cur], np.int16(-1))
            alive = cur >= 0
            if not alive.any():
                break
        bits = int.from_bytes(
            np.packbits(alive, bitorder="little").tobytes(), "little"
        )
        return bits & self._smask_bits

    def s_w(self, word):
        """S_w as a certified Subgroup of S (empty word gives S)."""
        bits = self._sw_bits(word)
        ids = frozenset(
            self._tlist[k] for k in range(len(self._tlist)) if (bits >> k) & 1
        )
        return Subgroup(self.group, ids)

    def in_domain(self, word):
        bits = self._sw_bits(word)
        return any(m & bits == m for m in self._dmin_masks)

    def product(self, word):
        if not word:
            return self.group.identity
        if not self.in_domain(word):
            raise NotInDomain(f"word of length {len(word)} not in the domain")
        r = self.group.identity
        for g in word:
            r = self.group.mul(r, g)
        return r

    def delta_collection(self):
        F = self.ambient_fusion()
        idx = F.subgroup_index()
        return SubgroupCollection(
            F, "custom", frozenset(idx[d] for d in self.delta_ids), f_closed=True
        )

    def members(self, sub_ids):
        return Subgroup(self.group, frozenset(sub_ids))

    # -- fusion systems -----------------------------------------------------------

    def ambient_fusion(self):
        """F_S over the pool the carrier is drawn from (classes/closure backdrop)."""
        if "ambient_fusion" not in self._cache:
            movers = None if self.pool is None else tuple(sorted(self.pool))
            self._cache["ambient_fusion"] = fusion_system(
                self.group, self.S, self.p, movers=movers
            )
        return self._cache["ambient_fusion"]

    def fusion_system_of(self):
        """F_S(L): generated by conjugation by carrier elements."""
        if "fusion_of" not in self._cache:
            movers = None
            if len(self.carrier) != self.group.order:
                movers = tuple(sorted(self.carrier))
            self._cache["fusion_of"] = fusion_system(
                self.group, self.S, self.p, movers=movers
            )
        return self._cache["fusion_of"]

    # -- local subgroups ------------------------------------------------------------

    def normalizer_of(self, P):
        """N_L(P) for P an object: a genuine subgroup of the carrier."""
        key = ("NL", P.ids)
        if key not in self._cache:
            G = self.group
            gens = P.generators()
            if len(self.carrier) > 2000:
                import numpy as np

                target = np.fromiter(sorted(P.ids), dtype=np.int64, count=len(P.ids))
                mask = np.ones(G.order, dtype=bool)
                for x in gens:
                    mask &= np.isin(G.conj_all(x), target)
                ids = frozenset(
                    int(g) for g in np.nonzero(mask)[0] if int(g) in self.carrier
                )
            else:
                ids = frozenset(
                    g
                    for g in self.carrier
                    if all(G.conj(x, g) in P.ids for x in gens)
                )
            self._cache[key] = Subgroup(G, ids)
        return self._cache[key]

    def centralizer_of(self, xs):
        """C_L(xs): carrier elements g with x^g defined and equal to x for all x."""
        xs = sorted(set(xs))
        key = ("CL", tuple(xs))
        if key not in self._cache:
            G = self.group
            gen_sub = subgroup_closure(G, xs) if xs else G.trivial()
            amb = centralizer(G, gen_sub.generators() or [G.identity])
            good = set()
            for g in self.carrier & amb.ids:
                if all(self.in_domain((G.inv(g), x, g)) for x in xs):
                    good.add(g)
            self._cache[key] = frozenset(good)
        return self._cache[key]

    def conj_defined(self, x, g):
        return self.in_domain((self.group.inv(g), x, g))

    def o_p(self):
        """O_p(L): the largest subgroup of S that is partial normal in L."""
        if "o_p" not in self._cache:
            G = self.group
            cur = set(self.S.ids)
            for g in self.carrier:
                ids = self._sg_ids(g)
                cur &= ids if ids is not None else self.s_w((g,)).ids
                if len(cur) == 1:
                    break
            while True:
                nxt = {
                    x
                    for x in cur
                    if all(G.conj(x, g) in cur for g in self.carrier)
                }
                if nxt == cur:
                    break
                cur = nxt
            self._cache["o_p"] = Subgroup(G, frozenset(cur))
        return self._cache["o_p"]

    def is_proper(self):
        """F^cr contained in delta and all object normalizers of characteristic p."""
        if "proper" not in self._cache:
            self._cache["proper"] = self._proper_check()
        return self._cache["proper"]

    def _proper_check(self):
        F = self.fusion_system_of()
        fcr = F.collection("cr")
        idx = F.subgroup_index()
        dset = {idx[d] for d in self.delta_ids}
        if not fcr.indices <= dset:
            return False
        seen_classes = set()
        for d in self.delta_ids:
            P = self.members(d)
            cid = F.class_id(P)
            if cid in seen_classes:
                continue
            seen_classes.add(cid)
            NP = self.normalizer_of(P)
            if not NP.certify_closed():
                return False
            Q = sub_p_core(self.group, NP, self.p)
            C = centralizer(self.group, Q.generators() or [self.group.identity], within=NP)
            if not C.ids <= Q.ids:
                return False
        return True

    # -- restriction / expansion -----------------------------------------------------

    def restrict(self, delta0_ids):
        delta0 = frozenset(frozenset(d) for d in delta0_ids)
        if not delta0 <= self.delta_ids:
            raise CollectionOutOfRange("restriction objects must lie inside delta")
        F = self.fusion_system_of()
        if not set(F.collection("cr").member_ids()) <= delta0:
            raise CollectionOutOfRange("restriction dropped below F^cr")
        _check_f_closed(self.ambient_fusion(), delta0)
        return Locality(
            self.group, self.S, self.p, delta0,
            pool_ids=self.pool, track=self.track, name=self.name + "|restricted",
        )

    def expand(self, delta_plus_ids, require_proper=True):
        delta_plus = frozenset(frozenset(d) for d in delta_plus_ids)
        if not self.delta_ids <= delta_plus:
            raise CollectionOutOfRange("expansion must contain the current objects")
        _check_f_closed(self.ambient_fusion(), delta_plus)
        big = Locality(
            self.group, self.S, self.p, delta_plus,
            pool_ids=self.pool, track=self.track, name=self.name + "+",
        )
        if require_proper and not big.is_proper():
            raise ExpansionNotProper(
                "the expanded object set is not proper in the ambient model"
            )
        return big

    def subcentric_model(self):
        """The expansion of this locality to the subcentric object set.

        Quantities tied to the subcentric representative of a partial normal
        subgroup are computed here; raises ExpansionNotProper when the ambient
        pool cannot realize a proper locality on those objects.
        """
        if "subcentric" not in self._cache:
            scoll = self.ambient_fusion().collection("s").member_ids()
            if scoll == self.delta_ids:
                self._cache["subcentric"] = self
            else:
                self._cache["subcentric"] = self.expand(
                    scoll | self.delta_ids, require_proper=True
                )
        return self._cache["subcentric"]

    # -- localizable pairs --------------------------------------------------------------

    def localizable_pair_check(self, H_ids, gamma_ids, word_samples=400, rng_seed=0):
        """Definition clauses for (H, Gamma); returns a CertReport."""
        G = self.group
        H_ids = frozenset(H_ids)
        rep = CertReport("localizable-pair")
        T = Subgroup(G, H_ids & self.S.ids)
        gamma = frozenset(frozenset(g) for g in gamma_ids)
        if not all(g <= T.ids for g in gamma):
            raise PreconditionViolated("Gamma must consist of subgroups of T")
        h_gamma = frozenset(
            h for h in H_ids if any(m <= (self._carrier_sg(h) & T.ids) for m in _minimal_sets(gamma))
        )
        E = fusion_system(G, T, self.p, movers=tuple(sorted(h_gamma)))
        # (1) Gamma is E-closed
        ok1 = True
        idx = E.subgroup_index()
        gset = {idx[g] for g in gamma if g in idx}
        if len(gset) != len(gamma):
            ok1 = False
        else:
            for g in gamma:
                P = Subgroup(G, g)
                for Q in E.f_class(P):
                    if idx[Q.ids] not in gset:
                        ok1 = False
                for X in E.subgroups():
                    if g <= X.ids and idx[X.ids] not in gset:
                        ok1 = False
        rep.add("gamma_E_closed", ok1)
        # (2) T maximal p-subgroup of H
        ok2 = self._t_maximal(H_ids, T)
        rep.add("T_maximal_p_subgroup", ok2)
        # (3) words over H with S_w cap T in Gamma are in the domain of L
        ok3, witness = self._pair_clause3(H_ids, T, gamma, word_samples, rng_seed)
        rep.add("words_enter_domain", ok3, witness)
        return rep, T, h_gamma, gamma

    def _carrier_sg(self, h):
        ids = self._sg.get(h)
        if ids not in (None, False):
            return ids
        return self.s_w((h,)).ids if h in self.carrier else frozenset(
            x for x in self.S.ids if self.group.conj(x, h) in self.track.ids
        )

    def _t_maximal(self, H_ids, T):
        G = self.group
        for g in sorted(H_ids):
            if g in T.ids:
                continue
            o = G.element_order(g)
            if p_part(o, self.p) != o:
                continue
            cand = subgroup_closure(G, list(T.generators()) + [g])
            if cand.is_p_group(self.p) and cand.ids <= H_ids:
                ex = _partial_group_check(self, cand.ids)
                if ex:
                    return False
        return True

    def _pair_clause3(self, H_ids, T, gamma, word_samples, rng_seed):
        mins = _minimal_sets(gamma)
        Hs = sorted(H_ids)
        words = [(a, b) for a in Hs for b in Hs] if len(Hs) <= 60 else []
        rng = random.Random(rng_seed)
        for _ in range(word_samples):
            n = rng.randint(1, 4)
            words.append(tuple(rng.choice(Hs) for _ in range(n)))
        for w in words:
            swt = self._track_sw(w) & T.ids
            if any(m <= swt for m in mins):
                sw = self._track_sw(w) & self.S.ids
                if not self._delta_has(sw):
                    return False, f"word of length {len(w)}"
        return True, None

    def _track_sw(self, word):
        G = self.group
        track = self.track.ids
        out = set()
        for x in track:
            y = x
            ok = True
            for g in word:
                y = G.conj(y, g)
                if y not in track:
                    ok = False
                    break
            if ok:
                out.add(x)
        return frozenset(out)

    def sub_locality(self, H_ids, gamma_ids, word_samples=400):
        """The locality (H_Gamma, Gamma, T) of a localizable pair; certified."""
        rep, T, h_gamma, gamma = self.localizable_pair_check(H_ids, gamma_ids, word_samples)
        for i, c in enumerate(rep.clauses, start=1):
            if not c.passed:
                raise NotLocalizable(i, c.name)
        sub = Locality(
            self.group, T, self.p, gamma,
            pool_ids=frozenset(H_ids), track=self.track,
            name=self.name + "|pair",
        )
        return sub

    # -- axioms -------------------------------------------------------------------------

    def verify_axioms(self, assoc_samples=ASSOC_SAMPLE_DEFAULT, rng_seed=0):
        G = self.group
        rep = CertReport(f"locality-axioms {self.name}")
        carrier = sorted(self.carrier)

        ok = all(G.inv(g) in self.carrier for g in carrier)
        rep.add("carrier_closed_under_inversion", ok)

        ok = True
        witness = None
        for g in carrier:
            sg = self.s_w((g,)).ids
            sgi = self.s_w((G.inv(g),)).ids
            if frozenset(G.conj(x, g) for x in sg) != sgi:
                ok, witness = False, f"g={g}"
                break
        rep.add("S_g_inversion_identity", ok, witness)

        rep.add("S_in_delta", self.S.ids in self.delta_ids)

        ok = True
        witness = None
        for d in self.delta_ids:
            P = self.members(d)
            for X in self._overgroups_in_S(P):
                if X not in self.delta_ids:
                    ok, witness = False, f"overgroup of order {len(X)} missing"
                    break
            if not ok:
                break
        rep.add("delta_overgroup_closed", ok, witness)

        ok = True
        witness = None
        for d in self.delta_ids:
            P = self.members(d)
            for g in carrier:
                sg = self._sg_ids(g)
                if sg is not None and d <= sg:
                    img = frozenset(G.conj(x, g) for x in d)
                    if img <= self.S.ids and img not in self.delta_ids:
                        ok, witness = False, f"conjugate of object escaped delta (g={g})"
                        break
            if not ok:
                break
        rep.add("delta_conjugation_closed", ok, witness)

        words = self._sample_words(assoc_samples, rng_seed)
        ok = True
        witness = None
        for w in words:
            if self.in_domain(w):
                for cut in range(1, len(w)):
                    if not (self.in_domain(w[:cut]) and self.in_domain(w[cut:])):
                        ok, witness = False, f"subword of {w}"
                        break
                if not ok:
                    break
        rep.add("subword_domain_closure", ok, witness)

        ok = True
        witness = None
        for w in words:
            if self.in_domain(w):
                full = self.product(w)
                for cut in range(1, len(w)):
                    lhs = self.product((self.product(w[:cut]), self.product(w[cut:])))
                    if lhs != full:
                        ok, witness = False, f"assoc failed on {w}"
                        break
                sw = self.s_w(w).ids
                if not sw <= self.s_w((full,)).ids:
                    ok, witness = False, f"S_w <= S_Pi(w) failed on {w}"
                if not ok:
                    break
        rep.add("domain_associativity_and_Sw_bound", ok, witness)

        ok = True
        for w in words:
            if self.in_domain(w):
                inv_w = tuple(G.inv(g) for g in reversed(w))
                if self.product(inv_w + w) != G.identity:
                    ok = False
                    break
        rep.add("inversion_axiom", ok)

        ok = True
        witness = None
        for g in carrier:
            if g in self.S.ids:
                continue
            o = G.element_order(g)
            if p_part(o, self.p) != o:
                continue
            cand = subgroup_closure(G, list(self.S.generators()) + [g])
            if cand.is_p_group(self.p) and cand.ids <= self.carrier:
                if _partial_group_check(self, cand.ids):
                    ok, witness = False, f"p-element {g} extends S"
                    break
        rep.add("S_maximal_p_subgroup", ok, witness)
        if len(carrier) > ASSOC_EXHAUSTIVE_CARRIER:
            rep.note(f"word checks sampled ({len(words)} words, seed {rng_seed})")
        return rep

    def _overgroups_in_S(self, P):
        F = self.ambient_fusion()
        return [X.ids for X in F.subgroups() if P.ids <= X.ids]

    def _sample_words(self, n_samples, rng_seed):
        carrier = sorted(self.carrier)
        words = []
        if len(carrier) <= ASSOC_EXHAUSTIVE_CARRIER:
            words += [(a, b) for a in carrier for b in carrier]
            if len(carrier) <= 16:
                words += [
                    (a, b, c) for a in carrier for b in carrier for c in carrier
                ]
        rng = random.Random(rng_seed)
        for _ in range(n_samples):
            k = rng.randint(2, 4)
            words.append(tuple(rng.choice(carrier) for _ in range(k)))
        return words

    # -- im-partial comparison --------------------------------------------------------

    def is_im_partial_in(self, other, word_samples=500, rng_seed=0):
        """Whether self's domain embeds in other's with matching products."""
        if not self.carrier <= other.carrier:
            return False
        carrier = sorted(self.carrier)
        words = []
        if len(carrier) <= 60:
            words += [(a, b) for a in carrier for b in carrier]
        rng = random.Random(rng_seed)
        for _ in range(word_samples):
            k = rng.randint(2, 4)
            words.append(tuple(rng.choice(carrier) for _ in range(k)))
        for w in words:
            if self.in_domain(w):
                if not other.in_domain(w):
                    return False
                if self.product(w) != other.product(w):
                    return False
        return True

    def report_data(self):
        return {
            "carrier_size": len(self.carrier),
            "delta_size": len(self.delta_ids),
            "proper": self.is_proper(),
            "O_p": sorted(self.o_p().ids),
        }

    def __repr__(self):
        return (
            f"Locality({self.name}: carrier {len(self.carrier)}, "
            f"|S|={self.S.order}, |delta|={len(self.delta_ids)})"
        )


def _minimal_sets(sets):
    out = []
    for s in sorted(sets, key=len):
        if not any(m <= s for m in out):
            out.append(s)
    return tuple(out)


def _check_f_closed(F, delta_ids):
    idx = F.subgroup_index()
    dset = set()
    for d in delta_ids:
        if d not in idx:
            raise NotFClosed("object is not a subgroup of S")
        dset.add(idx[d])
    for i in dset:
        H = F.subgroups()[i]
        for K in F.f_class(H):
            if F.find(K) not in dset:
                raise NotFClosed("object set is not conjugacy-closed")
        for X in F.subgroups():
            if H.ids <= X.ids and F.find(X) not in dset:
                raise NotFClosed("object set is not overgroup-closed")


def _partial_group_check(L, ids):
    """Whether ids forms a genuine subgroup of the partial group L."""
    if not ids <= L.carrier:
        return False
    return all(L.in_domain((a, b)) for a in ids for b in ids)


def build_locality(G, S, p, delta_seed, name=None, require_S=True):
    """L_delta(G) for the F-closure of delta_seed (ambient fusion system)."""
    F = fusion_system(G, S, p)
    seeds = [Subgroup(G, frozenset(d)) if not isinstance(d, Subgroup) else d for d in delta_seed]
    coll = F.f_closure(seeds)
    return Locality(G, S, p, coll.member_ids(), name=name or f"L({G.name})")
