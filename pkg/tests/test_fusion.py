import pytest

from plocal.errors import EmptyInput, NotFullyNormalized, PreconditionViolated
from plocal.fusion import fusion_system, fusion_systems_agree
from plocal.groups import Subgroup, p_core, sylow_subgroup, subgroup_closure
from plocal.lattice import subgroups_of_p_group


def test_lattice_d8(S4):
    S = sylow_subgroup(S4, 2)
    subs = subgroups_of_p_group(S4, S)
    assert len(subs) == 10
    assert [H.order for H in subs] == [1, 2, 2, 2, 2, 2, 4, 4, 4, 8]


def test_f_class_of_sylow_is_singleton(F_S4):
    assert F_S4.f_class(F_S4.S) == (F_S4.S,)


def test_f_class_trivial(F_S4):
    t = F_S4.group.trivial()
    assert F_S4.f_class(t) == (t,)


def test_f_class_a5_involutions(F_A5):
    # the three order-2 subgroups of the four-group fuse
    P = next(H for H in F_A5.subgroups() if H.order == 2)
    cls = F_A5.f_class(P)
    assert len(cls) == 3 and all(H.order == 2 for H in cls)


def test_fully_normalized_top(F_S4):
    assert F_S4.is_fully_normalized(F_S4.S)
    assert F_S4.is_fully_centralized(F_S4.S)


def test_fully_normalized_a5_order2(F_A5):
    for H in F_A5.subgroups():
        if H.order == 2:
            assert F_A5.is_fully_normalized(H)  # abelian S


def test_fully_normalized_s4_contrast(F_S4):
    # a non-central order-2 subgroup whose class contains the center
    center = [H for H in F_S4.subgroups() if H.order == 2 and F_S4.n_s(H).order == 8]
    assert len(center) == 1
    moved = [
        H
        for H in F_S4.subgroups()
        if H.order == 2 and F_S4.class_id(H) == F_S4.class_id(center[0]) and H != center[0]
    ]
    assert moved and all(not F_S4.is_fully_normalized(H) for H in moved)


def test_collections_s4(F_S4):
    cr = F_S4.collection("cr")
    c = F_S4.collection("c")
    assert sorted(H.order for H in cr.members()) == [4, 8]
    assert sorted(H.order for H in c.members()) == [4, 4, 4, 8]
    assert len(F_S4.collection("s")) == 10  # everything, ambient char-2


def test_collections_a5(F_A5):
    assert [H.order for H in F_A5.collection("cr").members()] == [4]
    # the trivial subgroup is not subcentric here: the ambient p-core is trivial
    s = F_A5.collection("s")
    assert F_A5.group.trivial() not in s
    assert len(s) == 4


def test_chain_on_catalog():
    from plocal.catalog import catalog_group, catalog_names, default_prime

    for name in ("C2", "D8", "A4", "S4", "SL23", "A5", "PSL27"):
        G = catalog_group(name)
        p = default_prime(name)
        F = fusion_system(G, sylow_subgroup(G, p), p)
        cr, c, q, s = (F.collection(k).indices for k in ("cr", "c", "q", "s"))
        assert cr <= c <= q <= s, name


def test_collection_conjugacy_closed(F_S4):
    for kind in ("cr", "c", "q", "s"):
        coll = F_S4.collection(kind)
        for H in coll.members():
            for K in F_S4.f_class(H):
                assert K in coll


def test_p_group_every_collection_contains_s(D8):
    F = fusion_system(D8, D8.whole(), 2)
    S = Subgroup(D8, frozenset(range(D8.order)))
    for kind in ("cr", "c", "q", "s"):
        assert S in F.collection(kind)
    # F^c = self-centralizing subgroups
    for H in F.subgroups():
        expected = F.c_s(H).ids <= H.ids
        assert (H in F.collection("c")) == expected


def test_f_closure_top(F_S4):
    coll = F_S4.f_closure([F_S4.S])
    assert len(coll) == 1


def test_f_closure_trivial_gives_all(F_S4):
    coll = F_S4.f_closure([F_S4.group.trivial()])
    assert len(coll) == len(F_S4.subgroups())


def test_f_closure_a5_order2(F_A5):
    P = next(H for H in F_A5.subgroups() if H.order == 2)
    coll = F_A5.f_closure([P])
    assert len(coll) == 4  # the three lines and the top


def test_f_closure_idempotent_monotone(F_S4):
    P = next(H for H in F_S4.subgroups() if H.order == 2)
    once = F_S4.f_closure([P])
    twice = F_S4.f_closure(list(once.members()))
    assert once.indices == twice.indices
    bigger = F_S4.f_closure([P, F_S4.S])
    assert once.indices <= bigger.indices


def test_f_closure_empty(F_S4):
    with pytest.raises(EmptyInput):
        F_S4.f_closure([])


def test_strongly_closed(F_S4, S4):
    assert F_S4.is_strongly_closed(F_S4.S)
    assert F_S4.is_strongly_closed(S4.trivial())
    assert F_S4.is_strongly_closed(p_core(S4, 2))
    # a single transposition subgroup is not strongly closed
    P = next(
        H for H in F_S4.subgroups() if H.order == 2 and len(F_S4.f_class(H)) > 1
    )
    assert not F_S4.is_strongly_closed(P)


def test_local_fusion_trivial_is_self(F_S4):
    loc = F_S4.local_fusion(F_S4.group.trivial(), "normalizer")
    assert loc.S.ids == F_S4.S.ids
    assert len(loc.subgroups()) == len(F_S4.subgroups())


def test_local_fusion_a5_involution(F_A5, A5):
    P = next(H for H in F_A5.subgroups() if H.order == 2)
    loc = F_A5.local_fusion(P, "normalizer")
    assert loc.pool_group.order == 4  # the normalizer is the four-group
    assert loc.S.order == 4


def test_local_fusion_sylow_s4(F_S4):
    loc = F_S4.local_fusion(F_S4.S, "normalizer")
    assert loc.pool_group.order == 8  # self-normalizing Sylow


def test_local_fusion_requires_fully_normalized(F_S4):
    moved = next(
        H
        for H in F_S4.subgroups()
        if H.order == 2 and not F_S4.is_fully_normalized(H)
    )
    with pytest.raises(NotFullyNormalized):
        F_S4.local_fusion(moved, "normalizer")


def test_lemma_local_subcentrics_land_in_subcentrics(F_S4, F_A5):
    # for fully normalized X and X <= P <= N_S(X): P subcentric locally
    # implies P subcentric globally
    for F in (F_S4, F_A5):
        s_global = F.collection("s")
        for X in F.subgroups():
            if not F.is_fully_normalized(X):
                continue
            FX = F.local_fusion(X, "normalizer")
            s_local = FX.collection("s")
            for P in FX.subgroups():
                if X.ids <= P.ids and P in s_local:
                    assert P in s_global


def test_fusion_systems_agree_identity(F_S4):
    ident = {x: x for x in F_S4.S.ids}
    assert fusion_systems_agree(F_S4, F_S4, ident)


def test_fusion_agree_a5_a4(A5, A4):
    # the alternating ambient group and its Sylow normalizer induce the same
    # fusion system on the four-group (abelian-Sylow control of fusion)
    from plocal.groups import find_conjugator
    from plocal.perm import from_cycles

    SA = sylow_subgroup(A5, 2)
    F1 = fusion_system(A5, SA, 2)
    S4b = sylow_subgroup(A4, 2)
    F2 = fusion_system(A4, S4b, 2)
    # conjugate the Sylow onto the point-stabilizer copy, then match actions
    std = Subgroup(
        A5,
        frozenset(
            A5.index[from_cycles(c, 5)]
            for c in ([], [[1, 2], [3, 4]], [[1, 3], [2, 4]], [[1, 4], [2, 3]])
        ),
    )
    g = find_conjugator(A5, SA, std)
    mapping = {}
    for x in SA.ids:
        perm = A5.elements[A5.conj(x, g)][:4]
        mapping[x] = A4.index[perm]
    assert fusion_systems_agree(F1, F2, mapping)
