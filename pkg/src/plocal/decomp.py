"""Sylow graphs, the p-socle, conjugation families, decompositions, and the
commutator partial subgroup.

The decomposition builder follows the structure of the existence proof, made
constructive: an element g is conjugated (by recursively decomposed elements
with strictly larger S_) into the normalizer M of a fully normalized object
Q = S_g.  Inside M, either M/Q is p-connected -- then every element of M is a
product of elements with S_ strictly above Q (factorization by breadth-first
search), and the recursion bottoms out on the index of S_g -- or M/Q is
p-disconnected, and a Frattini split peels off a socle factor that is emitted
directly as a decomposition entry.  A certifier re-checks every definitional
clause through an independent code path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DecompositionStuck,
    HypothesisNotMet,
    InvariantViolation,
    NotPDisconnected,
    PreconditionViolated,
)
from .groups import (
    Subgroup,
    centralizer,
    span_of,
    normal_subgroups,
    normalizer,
    p_part,
    product_set,
    quotient_group,
    sub_p_core,
    sub_p_residual,
    sub_p_prime_residual,
    subgroup_closure,
    sylow_subgroup,
)
from .fusion import fusion_system
from .unionfind import UnionFind


# -- Sylow graph and p-socle -----------------------------------------------------


@dataclass(frozen=True)
class SylowGraph:
    group_order: int
    vertices: tuple  # frozensets of member ids
    edges: tuple  # pairs of vertex indices
    component_of: tuple

    @property
    def n_components(self):
        return len(set(self.component_of))

    @property
    def connected(self):
        return self.n_components <= 1


def sylow_graph(G, p, within=None, over=None):
    """Graph on the Sylow p-subgroups of `within`; edges join pairs whose
    intersection strictly exceeds `over` (default: the trivial group)."""
    H = within if within is not None else G.whole()
    base = over.ids if over is not None else frozenset({G.identity})
    R = sylow_subgroup(G, p, within=H)
    verts = {R.ids}
    frontier = [R.ids]
    gens = H.generators() or (G.identity,)
    while frontier:
        new = []
        for ids in frontier:
            for g in gens:
                img = frozenset(G.conj(x, g) for x in ids)
                if img not in verts:
                    verts.add(img)
                    new.append(img)
        frontier = new
    vlist = sorted(verts, key=lambda s: tuple(sorted(s)))
    uf = UnionFind()
    for i in range(len(vlist)):
        uf.add(i)
    edges = []
    for i in range(len(vlist)):
        for j in range(i + 1, len(vlist)):
            inter = vlist[i] & vlist[j]
            nontrivial = len(inter) > 1 if over is None else not inter <= base
            if nontrivial:
                edges.append((i, j))
                uf.union(i, j)
    comp = tuple(uf.find(i) for i in range(len(vlist)))
    return SylowGraph(G.order, tuple(vlist), tuple(edges), comp)


def is_p_connected(G, p, within=None, over=None):
    H = within if within is not None else G.whole()
    if H.order % p != 0:
        return True  # single-vertex convention
    return sylow_graph(G, p, within=H, over=over).connected


def p_socle(G, p, within=None):
    """The unique minimal normal K with O_p <= K and p | |K / O_p|.

    Requires the plain Sylow graph to be disconnected; uniqueness is verified
    by scanning all candidates, not assumed.
    """
    H = within if within is not None else G.whole()
    if is_p_connected(G, p, within=H):
        raise NotPDisconnected("the Sylow p-graph is connected")
    Q = sub_p_core(G, H, p)
    candidates = []
    for K in normal_subgroups(G, within=H):
        if Q.ids <= K.ids and (K.order // Q.order) % p == 0:
            candidates.append(K)
    minimal = [
        K
        for K in candidates
        if not any(K2.ids < K.ids for K2 in candidates)
    ]
    if len(minimal) != 1:
        raise InvariantViolation(
            f"p-socle is not unique ({len(minimal)} minimal members)"
        )
    return minimal[0]


# -- conjugation families ----------------------------------------------------------


def _quotient_p_disconnected(L, M, Q):
    """Whether M/Q has a disconnected Sylow graph.

    Computed directly over the core: Sylow subgroups of M/Q correspond to
    Sylow subgroups of M, and nontrivial intersection downstairs means
    intersection strictly above Q upstairs.  quotient_p_disconnected_via_group
    builds the honest quotient and is cross-checked in tests.
    """
    return not _connected_over(L.group, L.p, M, Q)


def quotient_p_disconnected_via_group(G, p, M, Q):
    Qbar, _w = quotient_group(G, M, Q, name="Mbar")
    return not is_p_connected(Qbar, p, within=Qbar.whole())


def family_a(L, T=None):
    """A(F) (and A_T(F) when T is given): members of F^cr that are fully
    normalized and are either S or have p-disconnected outer quotient."""
    key = ("family_a", None if T is None else T.ids)
    if key in L._cache:
        return L._cache[key]
    F = L.fusion_system_of()
    out = []
    for P in F.collection("cr").members():
        if not F.is_fully_normalized(P):
            continue
        M = L.normalizer_of(P)
        NS = F.n_s(P)
        if p_part(M.order, L.p) != NS.order:
            raise InvariantViolation("fully normalized P without Sylow normalizer")
        if P.ids != L.S.ids:
            if not _quotient_p_disconnected(L, M, P):
                continue
        if T is not None:
            PT = Subgroup(L.group, P.ids & T.ids)
            if not F.is_fully_normalized(PT):
                continue
        out.append(P)
    res = tuple(sorted(out, key=lambda P: P.key()))
    L._cache[key] = res
    return res


# -- decompositions ------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """A word with auxiliary object sequence witnessing a decomposition."""

    element: int
    word: tuple
    auxiliary: tuple  # subgroup id-frozensets, one per word entry (AG flavor)
    flavor: str  # "AG" | "N"
    leading: int | None = None  # N flavor: the N_L(T) prefix element

    def as_dict(self, G):
        from .perm import cycle_string

        d = {
            "g": cycle_string(G.elements[self.element]),
            "word": [cycle_string(G.elements[x]) for x in self.word],
            "flavor": self.flavor,
            "certified": True,
        }
        if self.flavor == "AG":
            d["auxiliary"] = [
                {"order": len(a)} for a in self.auxiliary
            ]
        if self.leading is not None:
            d["leading"] = cycle_string(G.elements[self.leading])
        return d


class _AGContext:
    """Shared caches for decomposing many elements of one locality."""

    def __init__(self, L, T):
        self.L = L
        self.T = T
        self.G = L.group
        self.F = L.fusion_system_of()
        self.family = {P.ids for P in family_a(L, T)}
        self.memo = {}
        self.local_data = {}
        self.pair_choice = {}

    # ---- choices -------------------------------------------------------------

    def fully_normalized_pair(self, P):
        """A conjugate Q of P with Q and Q cap T both fully normalized."""
        key = self.F.class_id(P)
        if key in self.pair_choice:
            return self.pair_choice[key]
        for Q in self.F.f_class(P):
            if self.F.is_fully_normalized(Q):
                QT = Subgroup(self.G, Q.ids & self.T.ids)
                if self.F.is_fully_normalized(QT):
                    self.pair_choice[key] = Q
                    return Q
        raise InvariantViolation(
            "no conjugate with both Q and Q cap T fully normalized"
        )

    def mover(self, A, B):
        """Some carrier element a with A^a = B and N_S(A)^a <= N_S(B)."""
        G, L = self.G, self.L
        c = None
        gens = A.generators()
        for g in L.carrier:
            if all(G.conj(x, g) in B.ids for x in gens):
                if frozenset(G.conj(x, g) for x in A.ids) == B.ids:
                    c = g
                    break
        if c is None:
            raise InvariantViolation("no carrier conjugator between class members")
        NB = L.normalizer_of(B)
        NSB = normalizer(G, B, within=L.S)
        if p_part(NB.order, L.p) != NSB.order:
            raise InvariantViolation("N_S(B) is not Sylow in N_L(B)")
        NSA = normalizer(G, A, within=L.S)
        X = frozenset(G.conj(x, c) for x in NSA.ids)
        for d in sorted(NB.ids):
            if all(G.conj(x, d) in NSB.ids for x in X):
                return G.mul(c, d)
        raise InvariantViolation("Sylow push inside N_L(B) failed")

    # ---- per-object local data --------------------------------------------------

    def local(self, Q):
        if Q.ids in self.local_data:
            return self.local_data[Q.ids]
        G, L = self.G, self.L
        M = L.normalizer_of(Q)
        if not M.certify_closed():
            raise InvariantViolation("N_L(Q) is not a group")
        if sub_p_core(G, M, L.p).ids != Q.ids:
            raise InvariantViolation("O_p(N_L(Q)) != Q at a decomposition object")
        big = {}
        for x in M.ids:
            sx = L.s_w((x,)).ids
            if sx > Q.ids:
                big[x] = sx
        disconnected = not _connected_over(G, L.p, M, Q)
        entry = {
            "M": M,
            "big": big,
            "disconnected": disconnected,
            "bfs": None,
            "socle": None,
        }
        if disconnected:
            K = _socle_over(G, L.p, M, Q)
            entry["socle"] = K
            entry["opK"] = sub_p_residual(G, K, L.p)
            R = sylow_subgroup(G, L.p, within=M)
            RK = Subgroup(G, R.ids & K.ids)
            entry["NMRK"] = normalizer(G, RK, within=M)
        self.local_data[Q.ids] = entry
        return entry

    def factorize(self, x, entry):
        """x as a product of elements of M with S_ strictly above Q (BFS)."""
        if entry["bfs"] is None:
            G = self.G
            gens = sorted(entry["big"])
            parent = {G.identity: None}
            frontier = [G.identity]
            while frontier:
                new = []
                for a in frontier:
                    for g in gens:
                        b = G.mul(a, g)
                        if b not in parent:
                            parent[b] = (a, g)
                            new.append(b)
                frontier = new
            entry["bfs"] = parent
        parent = entry["bfs"]
        if x not in parent:
            raise DecompositionStuck(
                "element of a p-connected local quotient is not a product of "
                "elements with larger S_"
            )
        out = []
        while parent[x] is not None:
            prev, g = parent[x]
            out.append(g)
            x = prev
        return list(reversed(out))

    # ---- the recursion -----------------------------------------------------------

    def decompose(self, g, _depth=0):
        if g in self.memo:
            return self.memo[g]
        if _depth > 200:  # pragma: no cover
            raise DecompositionStuck("recursion depth exceeded")
        G, L = self.G, self.L
        P = L.s_w((g,))
        if P.ids == L.S.ids:
            res = ((g, L.S.ids),)
            self.memo[g] = res
            return res
        Q = self.fully_normalized_pair(P)
        if P.ids == Q.ids:
            a = b = G.identity
            gp = g
        else:
            a = self.mover(P, Q)
            Pg = L.s_w((G.inv(g),))
            b = self.mover(Pg, Q)
            gp = G.mul(G.mul(G.inv(a), g), b)
        w = []
        if a != G.identity:
            if not len(L.s_w((a,)).ids) > len(P.ids):
                raise DecompositionStuck("conjugator measure did not increase")
            w += list(self.decompose(a, _depth + 1))
        sgp = L.s_w((gp,))
        if sgp.ids == Q.ids:
            w += self._decompose_local(gp, Q, _depth)
        else:
            if not len(sgp.ids) > len(P.ids):
                raise DecompositionStuck("conjugated element did not gain S_")
            w += list(self.decompose(gp, _depth + 1))
        if b != G.identity:
            if not len(L.s_w((b,)).ids) > len(P.ids):
                raise DecompositionStuck("conjugator measure did not increase")
            w += _invert_word(G, self.decompose(b, _depth + 1))
        res = tuple(w)
        self.memo[g] = res
        return res

    def _decompose_local(self, x, Q, _depth):
        G, L = self.G, self.L
        entry = self.local(Q)
        if not entry["disconnected"]:
            out = []
            for y in self.factorize(x, entry):
                out += list(self.decompose(y, _depth + 1))
            return out
        K, opK = entry["socle"], entry["opK"]
        h = None
        for cand in entry["NMRK"].sorted_ids():
            if G.mul(x, G.inv(cand)) in opK.ids:
                h = cand
                break
        if h is None:
            raise DecompositionStuck("Frattini split failed in the socle case")
        f = G.mul(x, G.inv(h))
        out = []
        sf = L.s_w((f,)).ids
        if sf == Q.ids:
            out.append((f, Q.ids))
        else:
            out += list(self.decompose(f, _depth + 1))
        if h != G.identity:
            sh = L.s_w((h,)).ids
            if not sh > Q.ids:
                raise DecompositionStuck("Frattini complement did not gain S_")
            out += list(self.decompose(h, _depth + 1))
        return out


def _invert_word(G, word):
    return [(G.inv(e), P) for (e, P) in reversed(word)]


def _connected_over(G, p, M, Q):
    if p_part(M.order // Q.order, p) == 1:
        return True
    return is_p_connected(G, p, within=M, over=Q)


def _socle_over(G, p, M, Q):
    """Minimal normal K of M with Q <= K and p | |K:Q|; unique here."""
    candidates = [
        K
        for K in normal_subgroups(G, within=M)
        if Q.ids <= K.ids and (K.order // Q.order) % p == 0
    ]
    minimal = [K for K in candidates if not any(K2.ids < K.ids for K2 in candidates)]
    if len(minimal) != 1:
        raise InvariantViolation("socle over the core is not unique")
    return minimal[0]


def ag_context(L, T):
    key = ("ag_ctx", T.ids)
    if key not in L._cache:
        L._cache[key] = _AGContext(L, T)
    return L._cache[key]


def ag_decompose(L, T, g, certify=True):
    """A certified A_T(F)-decomposition of a carrier element."""
    if g not in L.carrier:
        raise PreconditionViolated("g must be a carrier element")
    ctx = ag_context(L, T)
    word = ctx.decompose(g)
    dec = Decomposition(
        element=g,
        word=tuple(e for e, _ in word),
        auxiliary=tuple(P for _, P in word),
        flavor="AG",
    )
    if certify:
        rep = certify_ag_decomposition(L, T, dec)
        if not rep.passed:
            raise InvariantViolation(f"AG decomposition failed certification:\n{rep}")
    return dec


def certify_ag_decomposition(L, T, dec):
    """Independent re-check of every clause of the decomposition definition."""
    from .report import CertReport

    G = L.group
    rep = CertReport("AG-decomposition")
    g, word, aux = dec.element, dec.word, dec.auxiliary
    prod = G.identity
    for x in word:
        prod = G.mul(prod, x)
    rep.add("product_matches", prod == g)
    rep.add("word_in_domain", L.in_domain(word) if word else True)
    rep.add("S_w_equals_S_g", L.s_w(word).ids == L.s_w((g,)).ids)
    F = L.fusion_system_of()
    fcr = F.collection("cr")
    ok_aux = True
    ok_entry = True
    for x, P_ids in zip(word, aux):
        P = Subgroup(G, P_ids)
        if L.s_w((x,)).ids != P_ids:
            ok_aux = False
        in_family = (
            P in fcr
            and F.is_fully_normalized(P)
            and F.is_fully_normalized(Subgroup(G, P_ids & T.ids))
            and (
                P_ids == L.S.ids
                or not _connected_over(G, L.p, L.normalizer_of(P), P)
            )
        )
        if not in_family:
            ok_aux = False
        if P_ids == L.S.ids:
            continue
        M = L.normalizer_of(P)
        K = _socle_over(G, L.p, M, P)
        if x not in sub_p_residual(G, K, L.p).ids:
            ok_entry = False
    rep.add("auxiliaries_in_A_T", ok_aux)
    rep.add("entries_in_socle_residual_or_S", ok_entry)
    return rep


# -- Sigma_T(F) --------------------------------------------------------------------


def sigma_t(L, T, check_recovery=False):
    """The products O_p(L) U V over U = (P cap T)^h and V in C_F(T)^cr."""
    key = ("sigma_t", T.ids, check_recovery)
    if key in L._cache:
        return L._cache[key]
    G = L.group
    cst = centralizer(G, T.generators() or [G.identity], within=L.S)
    wt = subgroup_closure(G, list(cst.generators()) + list(T.generators()))
    H = Subgroup(G, frozenset(
        h for h in L.carrier
        if all(G.conj(x, h) in wt.ids for x in wt.generators())
        and frozenset(G.conj(x, h) for x in wt.ids) == wt.ids
    ))
    if not H.certify_closed():
        raise InvariantViolation("N_L(C_S(T)T) is not a group")
    ct_ids = L.centralizer_of(sorted(T.ids))
    CF = fusion_system(G, cst, L.p, movers=tuple(sorted(ct_ids)))
    vs = CF.collection("cr").members()
    op = L.o_p()
    us = set()
    for P in family_a(L, T):
        base = P.ids & T.ids
        seen = {base}
        frontier = [base]
        while frontier:
            new = []
            for ids in frontier:
                for h in H.generators() or (G.identity,):
                    img = frozenset(G.conj(x, h) for x in ids)
                    if img not in seen:
                        seen.add(img)
                        new.append(img)
            frontier = new
        us |= seen
    out = {}
    for u in sorted(us, key=lambda s: tuple(sorted(s))):
        for V in vs:
            ids = frozenset(product_set(G, product_set(G, op.ids, u), V.ids))
            X = Subgroup(G, ids)
            if not X.certify_closed():
                raise InvariantViolation("a Sigma_T member is not a subgroup")
            if check_recovery:
                if ids & T.ids != u:
                    raise InvariantViolation("Sigma_T recovery U = X cap T failed")
                tg = T.generators() or [G.identity]
                cxt = frozenset(
                    x for x in ids if all(G.mul(x, t) == G.mul(t, x) for t in tg)
                )
                if cxt != V.ids:
                    raise InvariantViolation("Sigma_T recovery V = C_X(T) failed")
            out[ids] = X
    res = tuple(sorted(out.values(), key=lambda s: s.key()))
    L._cache[key] = res
    return res


def sigma_t_in_delta(L, T):
    return all(L._delta_has(X.ids) for X in sigma_t(L, T))


# -- N-decompositions -----------------------------------------------------------------


def n_decompose(L, N, g, certify=True):
    """An N-decomposition (a, g_1, ..., g_n) of g, built by rewriting an
    A_T(F)-decomposition; raises HypothesisNotMet unless Sigma_T(F) <= delta."""
    G = L.group
    T = N.T
    if not sigma_t_in_delta(L, T):
        raise HypothesisNotMet("Sigma_T(F) is not contained in delta")
    base = ag_decompose(L, T, g, certify=certify)
    entries = list(zip(base.word, base.auxiliary))
    cst = centralizer(G, T.generators() or [G.identity], within=L.S).ids

    def is_prefix(item):
        _x, P = item
        return T.ids <= P

    # bubble every prefix-type entry to the front; tail entries are conjugated
    changed = True
    while changed:
        changed = False
        for i in range(len(entries) - 1):
            (c, Pc), (b, Pb) = entries[i], entries[i + 1]
            if not is_prefix(entries[i]) and is_prefix(entries[i + 1]):
                cb = G.conj(c, b)
                entries[i], entries[i + 1] = (b, Pb), (cb, frozenset(
                    L.s_w((cb,)).ids
                ))
                changed = True
    cut = 0
    while cut < len(entries) and is_prefix(entries[cut]):
        cut += 1
    if any(is_prefix(e) for e in entries[cut:]):
        raise InvariantViolation("prefix sorting failed")
    prefix = [x for x, _ in entries[:cut]]
    a = G.identity
    for x in prefix:
        a = G.mul(a, x)
    tail = entries[cut:]
    xs = []
    sig = [X for X in sigma_t(L, T) if cst <= X.ids]
    for x, _P in tail:
        X = _tail_object(L, N, x, sig)
        if X is None:
            raise InvariantViolation("no Sigma_T object certifies a tail entry")
        xs.append(X.ids)
    word = (a,) + tuple(x for x, _ in tail)
    dec = Decomposition(
        element=g, word=word, auxiliary=tuple(xs), flavor="N", leading=a
    )
    if certify:
        rep = certify_n_decomposition(L, N, dec)
        if not rep.passed:
            raise InvariantViolation(f"N-decomposition failed certification:\n{rep}")
    return dec


def _tail_object(L, N, x, sig):
    from .normals import n_n_of

    G = L.group
    for X in sig:
        gens = X.generators()
        if x not in N.ids:
            continue
        if not all(G.conj(y, x) in X.ids for y in gens):
            continue
        NN_X = n_n_of(N, X)
        if x in sub_p_residual(G, NN_X, L.p).ids and x in sub_p_prime_residual(
            G, NN_X, L.p
        ).ids:
            return X
    return None


def certify_n_decomposition(L, N, dec):
    from .normals import n_n_of
    from .report import CertReport

    G = L.group
    T = N.T
    rep = CertReport("N-decomposition")
    g = dec.element
    word = dec.word
    a = word[0]
    prod = G.identity
    for x in word:
        prod = G.mul(prod, x)
    rep.add("product_matches", prod == g)
    rep.add("word_in_domain", L.in_domain(word))
    rep.add("S_w_equals_S_g", L.s_w(word).ids == L.s_w((g,)).ids)
    rep.add(
        "leading_normalizes_T",
        a in L.carrier and frozenset(G.conj(t, a) for t in T.ids) == T.ids,
    )
    cst = centralizer(G, T.generators() or [G.identity], within=L.S).ids
    sig_ids = {X.ids for X in sigma_t(L, T)}
    ok = True
    for x, X_ids in zip(word[1:], dec.auxiliary):
        X = Subgroup(G, X_ids)
        if X_ids not in sig_ids or not L._delta_has(X_ids) or not cst <= X_ids:
            ok = False
            continue
        NN_X = n_n_of(N, X)
        if x not in sub_p_residual(G, NN_X, L.p).ids:
            ok = False
        if x not in sub_p_prime_residual(G, NN_X, L.p).ids:
            ok = False
    rep.add("tail_clause_4", ok)
    if g in N.ids:
        wt = subgroup_closure(G, sorted(cst | T.ids))
        in_nn = a in N.ids and frozenset(G.conj(x, a) for x in wt.ids) == wt.ids
        rep.add("leading_in_N_N(C_S(T)T)_for_g_in_N", in_nn)
    return rep


# -- the commutator partial subgroup ----------------------------------------------------


def commutator_subgroup(L, oracle=False):
    """[L, L]: generated by the commutators of object normalizers over A(F)."""
    from .normals import certify_partial_normal, generated_partial_subgroup

    G = L.group
    seeds = set()
    for P in family_a(L):
        M = L.normalizer_of(P)
        for x in M.ids:
            for ygen in M.generators():
                seeds.add(G.commutator(x, ygen))
    ids = generated_partial_subgroup(L, seeds)
    span = span_of(G, seeds)
    via = span if span.ids & L.carrier == ids else None
    N = certify_partial_normal(L, ids, via_ambient=via)
    if oracle:
        expected = _abelian_kernel_oracle(L)
        if expected is not None and expected != N.ids:
            raise InvariantViolation("[L,L] disagrees with the abelian-quotient oracle")
    return N


def _abelian_kernel_oracle(L):
    """Intersection of partial normals K with L/K an abelian group."""
    from .errors import SizeGuardExceeded
    from .normals import carrier_span, enumerate_partial_normals

    G = L.group
    try:
        allN = enumerate_partial_normals(L, mode="exhaustive")
    except SizeGuardExceeded:
        return None
    span = carrier_span(L)
    inter = None
    for K in allN:
        kspan = span_of(G, K.ids)
        # the image of the carrier in span/<K> must be an abelian group
        if not all(
            G.commutator(x, y) in kspan.ids
            for x in span.generators()
            for y in span.generators()
        ):
            continue
        _q, wit = quotient_group(G, span, kspan)
        img = {wit.mapping[x] for x in L.carrier}
        qg = _q
        if not all(qg.mul(u, v) in img for u in img for v in img):
            continue
        inter = K.ids if inter is None else (inter & K.ids)
    return inter
