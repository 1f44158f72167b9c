"""Partial normal subgroups of a locality: certification, enumeration,
centers and centralizers, products, O^p_L / O^{p'}_L, and N-perp."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    ConditionFailed,
    HypothesisNotMet,
    InvariantViolation,
    LambdaDomainIncomplete,
    NotConjugationStable,
    NotPartialSubgroup,
    SizeGuardExceeded,
)
from .fusion import fusion_system
from .groups import (
    Subgroup,
    centralizer,
    normal_subgroups,
    p_part,
    product_set,
    span_of,
    sub_p_residual,
    sub_p_prime_residual,
    subgroup_closure,
)
from .locality import Locality

EXHAUSTIVE_CARRIER_GUARD = 5000


@dataclass(frozen=True)
class PartialNormal:
    """A certified partial normal subgroup: member set plus T = S cap N."""

    host: Locality
    ids: frozenset
    T: Subgroup
    via_ambient: Subgroup | None = None
    _derived: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def order(self):
        return len(self.ids)

    def key(self):
        return (len(self.ids), tuple(sorted(self.ids)))

    def fusion(self):
        """E = F_T(N), generated by conjugation along members."""
        if "E" not in self._derived:
            self._derived["E"] = fusion_system(
                self.host.group, self.T, self.host.p, movers=tuple(sorted(self.ids))
            )
        return self._derived["E"]

    def as_locality(self, gamma_ids=None):
        """(N, Gamma, T) as a locality; Gamma defaults to delta cut down to T."""
        L = self.host
        if gamma_ids is None:
            gamma_ids = frozenset(d for d in L.delta_ids if d <= self.T.ids)
        return Locality(
            L.group, self.T, L.p, gamma_ids,
            pool_ids=self.ids, track=L.track,
            name=L.name + f"|N({len(self.ids)})",
        )

    def __repr__(self):
        return f"PartialNormal(|N|={len(self.ids)}, |T|={self.T.order} in {self.host.name})"


def certify_partial_normal(L, candidate_ids, via_ambient=None, scan_guard=400_000):
    """Certify candidate_ids as a partial normal subgroup of L.

    With `via_ambient` = an ambient subgroup K that is invariant under
    conjugation by the carrier and satisfies K cap carrier = candidate, the
    product/conjugation stability follows from S_w <= S_Pi(w) and the scan is
    skipped; otherwise everything is checked exhaustively.
    """
    G = L.group
    ids = frozenset(candidate_ids)
    if not ids <= L.carrier:
        raise NotPartialSubgroup("candidate is not contained in the carrier")
    if any(G.inv(x) not in ids for x in ids):
        raise NotPartialSubgroup("candidate is not inversion-closed")

    if via_ambient is None and len(ids) * len(L.carrier) > scan_guard:
        # try to derive an ambient witness before giving up on the scan
        sp = span_of(G, ids)
        if sp.ids & L.carrier == ids:
            via_ambient = sp
    fast_ok = False
    if via_ambient is not None:
        K = via_ambient
        if K.ids & L.carrier == ids:
            cgens = _carrier_generators(L)
            if K.is_conjugation_invariant_under(cgens):
                fast_ok = True
    if not fast_ok:
        if len(ids) * len(L.carrier) > scan_guard:
            raise SizeGuardExceeded(
                "partial-normal certification scan too large; supply via_ambient"
            )
        for x in ids:
            for y in ids:
                if L.in_domain((x, y)) and G.mul(x, y) not in ids:
                    raise NotPartialSubgroup(f"product escapes: ({x},{y})")
        for x in ids:
            for g in L.carrier:
                if L.in_domain((G.inv(g), x, g)) and G.conj(x, g) not in ids:
                    raise NotConjugationStable(f"witness (x={x}, g={g})")

    T = Subgroup(G, ids & L.S.ids)
    sylow_cert = via_ambient is not None and p_part(via_ambient.order, L.p) == T.order
    if not sylow_cert and not _max_p_in_partial(L, ids, T):
        raise InvariantViolation("T is not maximal among p-subgroups of N")
    # ambient strong closure implies strong closure in the smaller F_S(L)
    if not L.ambient_fusion().is_strongly_closed(T):
        if not L.fusion_system_of().is_strongly_closed(T):
            raise InvariantViolation("T = S cap N is not strongly closed")
    return PartialNormal(host=L, ids=ids, T=T, via_ambient=via_ambient)


def _carrier_generators(L):
    """A small generating set of <carrier> as an ambient subgroup."""
    key = ("carrier_gens",)
    if key not in L._cache:
        G = L.group
        gens = []
        have = {G.identity}
        for x in sorted(L.carrier):
            if x in have:
                continue
            gens.append(x)
            have = subgroup_closure(G, gens).ids
            if L.carrier <= have:
                break
        L._cache[key] = tuple(gens)
    return L._cache[key]


def carrier_span(L):
    """<carrier> as an ambient subgroup."""
    key = ("carrier_span",)
    if key not in L._cache:
        L._cache[key] = subgroup_closure(L.group, _carrier_generators(L))
    return L._cache[key]


def _max_p_in_partial(L, n_ids, T):
    G = L.group
    for g in sorted(n_ids):
        if g in T.ids:
            continue
        o = G.element_order(g)
        if p_part(o, L.p) != o:
            continue
        cand = subgroup_closure(G, list(T.generators()) + [g])
        if cand.is_p_group(L.p) and cand.ids <= n_ids:
            if all(L.in_domain((a, b)) for a in cand.ids for b in cand.ids):
                return False
    return True


def enumerate_partial_normals(L, mode="fast", guard=EXHAUSTIVE_CARRIER_GUARD):
    """Certified partial normal subgroups of L.

    fast: candidates are K cap carrier over ambient normals K of <carrier>,
    plus O_p(L); complete for the group case, a completeness disclaimer
    applies otherwise.  exhaustive: join-closure over orbit closures, complete
    for carriers within the guard.
    """
    key = ("pnormals", mode)
    if key in L._cache:
        return L._cache[key]
    G = L.group
    found = {}
    span = carrier_span(L)
    for K in normal_subgroups(G, within=span):
        ids = K.ids & L.carrier
        try:
            N = certify_partial_normal(L, ids, via_ambient=K)
        except (NotPartialSubgroup, NotConjugationStable, InvariantViolation):
            continue
        found.setdefault(ids, N)
    op = L.o_p()
    if op.ids not in found:
        try:
            found[op.ids] = certify_partial_normal(L, op.ids, via_ambient=op)
        except (NotPartialSubgroup, NotConjugationStable, InvariantViolation):
            pass
    if mode == "exhaustive":
        if len(L.carrier) > guard:
            raise SizeGuardExceeded(
                f"exhaustive partial-normal search guard: carrier {len(L.carrier)}"
            )
        irreducibles = []
        done = set()
        for x in sorted(L.carrier):
            if x in done:
                continue
            orb = _conjugation_orbit(L, x)
            done |= orb
            ids = _partial_normal_closure(L, orb)
            irreducibles.append(ids)
            found.setdefault(ids, None)
        current = set(found)
        while True:
            new = set()
            for a in current:
                for b in irreducibles:
                    if b <= a:
                        continue
                    j = _partial_normal_closure(L, a | b)
                    if j not in current:
                        new.add(j)
            if not new:
                break
            current |= new
        for ids in current:
            if found.get(ids) is None:
                found[ids] = certify_partial_normal(L, ids)
    out = tuple(
        sorted((N for N in found.values() if N is not None), key=lambda N: N.key())
    )
    L._cache[key] = out
    return out


def _conjugation_orbit(L, x):
    G = L.group
    orb = {x, G.inv(x)}
    frontier = list(orb)
    while frontier:
        new = []
        for y in frontier:
            for g in L.carrier:
                if L.in_domain((G.inv(g), y, g)):
                    z = G.conj(y, g)
                    if z not in orb:
                        orb.add(z)
                        new.append(z)
        frontier = new
    return orb


def _partial_normal_closure(L, seed):
    G = L.group
    cur = set(seed)
    while True:
        add = set()
        for x in cur:
            ix = G.inv(x)
            if ix not in cur:
                add.add(ix)
        lst = sorted(cur)
        for x in lst:
            for y in lst:
                if L.in_domain((x, y)):
                    z = G.mul(x, y)
                    if z not in cur:
                        add.add(z)
        for x in lst:
            for g in L.carrier:
                if L.in_domain((G.inv(g), x, g)):
                    z = G.conj(x, g)
                    if z not in cur:
                        add.add(z)
        if not add:
            return frozenset(cur)
        cur |= add


def generated_partial_subgroup(L, seed_ids, upper=None):
    """Smallest subset containing seed closed under inverses and defined products.

    `upper` may give a known superset of the closure (ambient span cut to the
    carrier): the loop then exits as soon as the bound is reached, skipping
    the final full verification pass.
    """
    G = L.group
    seed_ids = set(seed_ids)
    if upper is None:
        span = span_of(G, seed_ids)
        upper = span.ids & L.carrier
    cur = set(seed_ids)
    cur.add(G.identity)
    while True:
        if len(cur) == len(upper):
            return frozenset(cur)
        add = set()
        for x in list(cur):
            ix = G.inv(x)
            if ix not in cur:
                add.add(ix)
        lst = sorted(cur)
        saturated = False
        for x in lst:
            for y in lst:
                if L.in_domain((x, y)):
                    z = G.mul(x, y)
                    if z not in cur:
                        add.add(z)
                        if len(cur) + len(add) == len(upper):
                            saturated = True
                            break
            if saturated:
                break
        if saturated:
            return frozenset(cur | add)
        if not add:
            return frozenset(cur)
        cur |= add


# -- centers / centralizers ----------------------------------------------------


def z_of(N):
    """Z(N): members acting trivially on all of N; certified equal to C_T(N)."""
    if "Z" in N._derived:
        return N._derived["Z"]
    L, G = N.host, N.host.group
    zs = set()
    for z in N.ids:
        if all(
            L.in_domain((G.inv(z), h, z)) and G.conj(h, z) == h for h in N.ids
        ):
            zs.add(z)
    ct = {
        t
        for t in N.T.ids
        if all(L.in_domain((G.inv(t), h, t)) and G.conj(h, t) == h for h in N.ids)
    }
    if zs != ct:
        raise InvariantViolation("Z(N) != C_T(N)")
    res = Subgroup(G, frozenset(zs))
    N._derived["Z"] = res
    return res


def c_s_of(N, check_formula=False):
    """C_S(N^s), computed over the subcentric representative of N when the
    expansion exists (C_S is stable across object changes above Sigma_T)."""
    if "CS" not in N._derived:
        from .errors import ExpansionNotProper, ModelLimitation

        L, G = N.host, N.host.group
        members = N.ids
        try:
            Ls = L.subcentric_model()
            if Ls is not L:
                span = N.via_ambient or span_of(G, N.ids)
                members = span.ids & Ls.carrier
        except (ExpansionNotProper, ModelLimitation):
            pass
        span = span_of(G, members)
        amb = centralizer(G, span.generators() or [G.identity], within=L.S)
        N._derived["CS"] = amb
    res = N._derived["CS"]
    if check_formula:
        from .decomp import sigma_t

        L, G = N.host, N.host.group
        sig = sigma_t(L, N.T)
        cst = centralizer(G, N.T.generators() or [G.identity], within=L.S)
        inter = set(L.S.ids)
        for X in sig:
            if cst.ids <= X.ids:
                nn = n_n_of(N, X)
                c = centralizer(G, nn.generators() or [G.identity], within=L.S)
                inter &= c.ids
        if frozenset(inter) != res.ids:
            raise InvariantViolation("C_S(N) local-intersection formula failed")
    return res


def n_n_of(N, X):
    """N_N(X) = {n in N : X^n = X}, certified as a group."""
    G = N.host.group
    gens = X.generators()
    ids = frozenset(
        n for n in N.ids if all(G.conj(x, n) in X.ids for x in gens)
    )
    sub = Subgroup(G, ids)
    if not sub.certify_closed():
        raise InvariantViolation("N_N(X) is not closed")
    return sub


def product_of_normals(L, N1, N2):
    """N1N2, certified partial normal; failure escalates (contradicts theory)."""
    ids = generated_partial_subgroup(L, N1.ids | N2.ids)
    via = None
    if N1.via_ambient is not None and N2.via_ambient is not None:
        G = L.group
        span = subgroup_closure(
            G, list(N1.via_ambient.generators()) + list(N2.via_ambient.generators())
        )
        if span.ids & L.carrier == ids:
            via = span
    try:
        N = certify_partial_normal(L, ids, via_ambient=via)
    except (NotPartialSubgroup, NotConjugationStable) as e:
        raise InvariantViolation(f"product of normals failed certification: {e}")
    lhs = frozenset(N.T.ids)
    rhs = product_set(L.group, N1.T.ids, N2.T.ids)
    if lhs != rhs:
        raise InvariantViolation("S cap N1N2 != (S cap N1)(S cap N2)")
    return N


def commute_check(L, xs, ys):
    """[X,Y] = 1 in the locality sense: both orders in-domain and equal products."""
    G = L.group
    for x in xs:
        for y in ys:
            inter = L.s_w((x, y)).ids & L.s_w((y, x)).ids
            if not L._delta_has(inter):
                return False
            if G.mul(x, y) != G.mul(y, x):
                return False
    return True


# -- M(lambda), O^p_L, O^{p'}_L ------------------------------------------------


def m_lambda(L, N, lam, check_conditions=True):
    """Partial subgroup generated by lambda(U) over U in E^cr, with the
    normality criterion's two side conditions verified."""
    E = N.fusion()
    Ecr = E.collection("cr").members()
    for U in Ecr:
        if U.ids not in lam:
            raise LambdaDomainIncomplete(f"lambda undefined on a class member of order {U.order}")
    G = L.group
    nt_ids = L.normalizer_of(N.T).ids  # may be a partial set, not a group
    if check_conditions:
        import numpy as np

        for U in Ecr:
            lu = lam[U.ids]
            NN_U = n_n_of(N, U)
            if not lu.ids <= NN_U.ids:
                raise ConditionFailed(0, "lambda(U) not inside N_N(U)")
            NL_U = L.normalizer_of(U)
            if not lu.is_conjugation_invariant_under(NL_U.generators()):
                raise ConditionFailed(0, "lambda(U) not normal in N_L(U)")
            both = sub_p_residual(G, NN_U, L.p).ids & sub_p_prime_residual(G, NN_U, L.p).ids
            if not both <= lu.ids:
                raise ConditionFailed(1, f"O^p cap O^p' not inside lambda(U) (|U|={U.order})")
        for U in Ecr:
            u_arr = np.fromiter(U.ids, dtype=np.int64, count=U.order)
            l_arr = np.fromiter(lam[U.ids].ids, dtype=np.int64, count=lam[U.ids].order)
            for h in sorted(nt_ids):
                img = frozenset(int(v) for v in G.conj_members_by(u_arr, h))
                if img not in lam:
                    raise ConditionFailed(2, "lambda domain not N_L(T)-invariant")
                moved = frozenset(int(v) for v in G.conj_members_by(l_arr, h))
                if moved != lam[img].ids:
                    raise ConditionFailed(2, "lambda(U)^h != lambda(U^h)")
    seeds = set()
    for U in Ecr:
        seeds |= lam[U.ids].ids
    ids = generated_partial_subgroup(L, seeds)
    try:
        return certify_partial_normal(L, ids)
    except SizeGuardExceeded:
        span = span_of(G, seeds)
        return certify_partial_normal(L, ids, via_ambient=span)
    except (NotPartialSubgroup, NotConjugationStable) as e:
        raise InvariantViolation(f"M(lambda) failed partial normality: {e}")


def _require_op_ecr_in_delta(L, N):
    E = N.fusion()
    op = L.o_p()
    G = L.group
    for U in E.collection("cr").members():
        X = product_set(G, op.ids, U.ids)
        if not L._delta_has(frozenset(X) & L.S.ids) or not frozenset(X) <= L.S.ids:
            raise HypothesisNotMet("O_p(L)E^cr not inside delta")


def o_p_l_of(L, N, oracle=False):
    """O^p_L(N): the smallest partial normal K of L with K T = N."""
    _require_op_ecr_in_delta(L, N)
    E = N.fusion()
    lam = {}
    for U in E.collection("cr").members():
        lam[U.ids] = sub_p_residual(L.group, n_n_of(N, U), L.p)
    K = m_lambda(L, N, lam)
    if oracle:
        best = _oracle_smallest(L, N, kind="p")
        if best is not None and best != K.ids:
            raise InvariantViolation("O^p_L(N) disagrees with the brute-force oracle")
    return K


def o_pprime_l_of(L, N, oracle=False):
    """O^{p'}_L(N): the smallest partial normal K of L inside N with T <= K."""
    _require_op_ecr_in_delta(L, N)
    E = N.fusion()
    lam = {}
    for U in E.collection("cr").members():
        lam[U.ids] = sub_p_prime_residual(L.group, n_n_of(N, U), L.p)
    K = m_lambda(L, N, lam)
    if not N.T.ids <= K.ids:
        raise InvariantViolation("O^{p'}_L(N) does not contain T")
    if oracle:
        best = _oracle_smallest(L, N, kind="pprime")
        if best is not None and best != K.ids:
            raise InvariantViolation("O^{p'}_L(N) disagrees with the brute-force oracle")
    return K


def _oracle_smallest(L, N, kind):
    """Scan enumerated partial normals for the defining minimality property."""
    try:
        allN = enumerate_partial_normals(L, mode="exhaustive")
    except SizeGuardExceeded:
        return None
    G = L.group
    best = None
    for K in allN:
        if not K.ids <= N.ids:
            continue
        if kind == "p":
            prod = set()
            for k in K.ids:
                for t in N.T.ids:
                    if L.in_domain((k, t)):
                        prod.add(G.mul(k, t))
            good = frozenset(prod) == N.ids
        else:
            good = N.T.ids <= K.ids
        if good and (best is None or len(K.ids) < len(best)):
            best = K.ids
    return best


# -- N-perp ---------------------------------------------------------------------


def l_t_locality(L, T):
    """(N_L(T), delta, S): the normalizer locality of a strongly closed T.

    Pooled over the ambient normalizer so it can be expanded later.
    """
    key = ("LT", T.ids)
    if key not in L._cache:
        G = L.group
        from .groups import normalizer

        pool = normalizer(G, T).ids
        if L.pool is not None:
            pool &= L.pool
        sub = Locality(
            G, L.S, L.p, L.delta_ids,
            pool_ids=pool, track=L.track, name=L.name + "|N(T)",
        )
        if sub.carrier != L.normalizer_of(T).ids:
            raise InvariantViolation("N_L(T) locality carrier mismatch")
        L._cache[key] = sub
    return L._cache[key]


def n_perp(L, N, oracle=False):
    """N^perp = O^p_{L_T}(C_T) C_S(N), certified partial normal in L."""
    key = ("nperp", N.ids)
    if key in L._cache:
        return L._cache[key]
    G = L.group
    T = N.T
    LT = l_t_locality(L, T)
    ct_ids = L.centralizer_of(sorted(T.ids))
    CT = certify_partial_normal(
        LT, ct_ids & LT.carrier,
        via_ambient=centralizer(G, T.generators() or [G.identity]),
    )
    K = o_p_l_of(LT, CT, oracle=oracle)
    cs = c_s_of(N)
    ids = generated_partial_subgroup(L, K.ids | cs.ids)
    span = None
    if K.via_ambient is not None:
        span = subgroup_closure(G, list(K.via_ambient.generators()) + list(cs.generators()))
        if span.ids & L.carrier != ids:
            span = None
    try:
        res = certify_partial_normal(L, ids, via_ambient=span)
    except (NotPartialSubgroup, NotConjugationStable) as e:
        raise InvariantViolation(f"N^perp failed partial normality: {e}")
    L._cache[key] = res
    return res


def t_perp(L, N):
    return Subgroup(L.group, n_perp(L, N).ids & L.S.ids)
