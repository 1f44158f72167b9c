import pytest

from plocal.errors import ExpansionNotProper, NotCentral, NotProper
from plocal.fusion import fusion_system
from plocal.groups import Subgroup, p_core, product_set, sylow_subgroup
from plocal.locality import build_locality
from plocal.normals import (
    c_s_of,
    certify_partial_normal,
    commute_check,
    enumerate_partial_normals,
    n_perp,
    z_of,
)
from plocal.regular import (
    build_regular,
    del_f,
    delta_f,
    f_star,
    find_components,
    is_large,
    large_normals,
    locality_at,
    normal_sub_locality,
    quotient_by_central,
    subcentric_locality,
    enumerate_subnormals,
    verify_e_balance,
    verify_theorem_c,
    verify_theorem_d,
    z_of_locality,
)


def test_is_large_s4(L_S4):
    sizes = {len(M.ids): is_large(L_S4, M) for M in enumerate_partial_normals(L_S4)}
    assert sizes == {1: False, 4: True, 12: True, 24: True}


def test_is_large_whole_always(L_S4, L_A5, L_PSL27):
    for L in (L_S4, L_A5, L_PSL27):
        whole = certify_partial_normal(L, L.carrier)
        assert is_large(L, whole)


def test_is_large_op_in_char_p(S4):
    S = sylow_subgroup(S4, 2)
    F = fusion_system(S4, S, 2)
    L = build_locality(S4, S, 2, F.collection("s").members())
    op = certify_partial_normal(L, L.o_p().ids)
    assert is_large(L, op)


def test_is_large_factor_fails():
    from plocal.catalog import catalog_group

    G = catalog_group("PSL27xPSL27")
    reg = build_regular(G, 2)
    L = reg.locality
    for M in enumerate_partial_normals(L):
        if len(M.ids) == 104:
            assert not is_large(L, M)  # the other factor centralizes it


def test_del_f_chain(L_S4, L_A5, L_PSL27):
    for L in (L_S4, L_A5, L_PSL27):
        F = L.fusion_system_of()
        dl = del_f(L)
        assert F.collection("cr").indices <= dl.indices <= F.collection("s").indices


def test_del_f_s4_value(L_S4):
    dl = del_f(L_S4)
    assert sorted(H.order for H in dl.members()) == [4, 8]


def test_f_star_values(L_S4, reg_A5, reg_PSL27):
    assert len(f_star(L_S4).ids) == 4  # the p-core slice
    assert len(reg_A5.fstar.ids) == 4
    assert reg_PSL27.fstar.ids == reg_PSL27.locality.carrier


def test_f_star_smallest_large(L_S4):
    star = f_star(L_S4)
    op = L_S4.o_p()
    for M in large_normals(L_S4):
        if op.ids <= M.ids:
            assert star.ids <= M.ids


def test_delta_f_p_group(D8):
    L = build_locality(D8, D8.whole(), 2, [D8.whole()])
    d = delta_f(L)
    assert len(d) == len(L.ambient_fusion().subgroups())  # every subgroup


def test_delta_f_s4_all_subgroups(S4):
    reg = build_regular(S4, 2)
    assert len(reg.locality.delta_ids) == 10
    assert S4.trivial().ids in reg.locality.delta_ids


def test_delta_f_chain_and_closure(L_S4, L_A5, L_PSL27):
    for L in (L_S4, L_A5, L_PSL27):
        F = L.fusion_system_of()
        dl = del_f(L)
        d = delta_f(L)
        assert F.collection("cr").indices <= dl.indices <= d.indices
        assert d.indices <= F.collection("s").indices


def test_delta_independent_of_objects(S4, PSL27):
    # recompute del and delta from two different starting object sets
    for G in (S4, PSL27):
        S = sylow_subgroup(G, 2)
        F = fusion_system(G, S, 2)
        L1 = build_locality(G, S, 2, F.collection("cr").members())
        L2 = build_locality(G, S, 2, F.collection("c").members())
        assert del_f(L1).member_ids() == del_f(L2).member_ids()
        assert delta_f(L1).member_ids() == delta_f(L2).member_ids()


def test_delta_absorbs_op(L_S4, L_PSL27):
    # O_p(L) P among the objects forces P among the objects
    from plocal.groups import product_set

    for L in (L_S4, L_PSL27):
        d = delta_f(L).member_ids()
        op = L.o_p()
        F = L.ambient_fusion()
        for P in F.subgroups():
            prod = frozenset(product_set(L.group, op.ids, P.ids))
            if prod in d:
                assert P.ids in d


def test_build_regular_s4(reg_S4, S4):
    L = reg_S4.locality
    assert L.carrier == frozenset(range(S4.order))
    assert reg_S4.delta_report.passed
    assert len(reg_S4.fstar.ids) == 4


def test_build_regular_a5_reduces(reg_A5):
    assert reg_A5.reduction_notes  # the ambient model cannot stay proper
    assert len(reg_A5.locality.carrier) == 12
    assert reg_A5.delta_report.passed


def test_build_regular_psl27(reg_PSL27):
    assert not reg_PSL27.reduction_notes
    assert len(reg_PSL27.locality.carrier) == 104
    assert reg_PSL27.delta_report.passed
    assert reg_PSL27.locality.group.trivial().ids not in reg_PSL27.locality.delta_ids


def test_build_regular_vgl32(VGL32):
    reg = build_regular(VGL32, 2)
    assert len(reg.locality.carrier) == VGL32.order  # characteristic-2 ambient
    assert len(reg.fstar.ids) == 16
    assert reg.components() == ()


def test_regular_no_reduction_flag(A5):
    with pytest.raises(NotProper):
        build_regular(A5, 2, allow_model_reduction=False)


def test_z_of_locality(SL23):
    reg = build_regular(SL23, 2)
    Z = z_of_locality(reg.locality)
    assert Z.order == 2


def test_quotient_by_central_sl23(SL23):
    reg = build_regular(SL23, 2)
    Z = z_of_locality(reg.locality)
    regq, rep = quotient_by_central(reg, Z)
    assert rep.passed, str(rep)
    assert regq.locality.group.order == 12
    assert len(regq.fstar.ids) == 4  # the image four-group


def test_quotient_by_trivial(reg_S4):
    regq, rep = quotient_by_central(reg_S4, reg_S4.group.trivial())
    assert regq is reg_S4 and rep.passed


def test_quotient_not_central(reg_S4, S4):
    with pytest.raises(NotCentral):
        quotient_by_central(reg_S4, p_core(S4, 2))


def test_subnormals_s4(reg_S4):
    subs = enumerate_subnormals(reg_S4.locality)
    assert sorted(len(s.ids) for s in subs) == [1, 2, 4, 12, 24]
    # order-2 arises from the center chain inside the four-group slice


def test_subnormals_recertify_regular(reg_S4, reg_PSL27):
    # every enumerated subnormal of a regular locality is again regular
    for reg in (reg_S4, reg_PSL27):
        for node in enumerate_subnormals(reg.locality):
            K = node.locality
            assert K.is_proper(), node.chain
            d = delta_f(K)
            assert d.member_ids() == K.delta_ids, (node.chain, len(K.carrier))


def test_components_counts(reg_S4, reg_A5, reg_PSL27):
    assert reg_S4.components() == ()
    assert reg_A5.components() == ()
    comps = reg_PSL27.components()
    assert len(comps) == 1 and comps[0].ids == reg_PSL27.locality.carrier


def test_components_product_model():
    from plocal.catalog import catalog_group

    G = catalog_group("PSL27xPSL27")
    reg = build_regular(G, 2)
    comps = reg.components()
    assert len(comps) == 2
    assert all(len(c.ids) == 104 and c.T.order == 8 for c in comps)
    assert commute_check(reg.locality, sorted(comps[0].ids), sorted(comps[1].ids))


def test_component_quotient_simplicity_criterion(reg_PSL27):
    K = reg_PSL27.components()[0].locality
    whole = certify_partial_normal(K, K.carrier)
    Z = z_of(whole)
    normals = enumerate_partial_normals(K, mode="exhaustive")
    assert {N.ids for N in normals if Z.ids <= N.ids} == {Z.ids, K.carrier}


def test_op_commutes_with_components(reg_PSL27):
    L = reg_PSL27.locality
    op = L.o_p()
    for c in reg_PSL27.components():
        assert commute_check(L, sorted(op.ids), sorted(c.ids))


def test_theorem_c_all_models(reg_S4, reg_A5, reg_PSL27):
    for reg in (reg_S4, reg_A5, reg_PSL27):
        for N in enumerate_partial_normals(reg.locality, mode="exhaustive"):
            rep = verify_theorem_c(reg, N)
            assert rep.passed, f"{reg.locality.name} |N|={len(N.ids)}\n{rep}"


def test_theorem_d_all_models(reg_S4, reg_A5, reg_PSL27):
    for reg in (reg_S4, reg_A5, reg_PSL27):
        rep = verify_theorem_d(reg)
        assert rep.passed, f"{reg.locality.name}\n{rep}"


def test_large_intersection_stability(L_S4, L_PSL27):
    # for large M, N containing O_p: O_p C_S(M cap N) <= M cap N
    for L in (L_S4, L_PSL27):
        op = L.o_p()
        bigs = [M for M in large_normals(L) if op.ids <= M.ids]
        for M in bigs:
            for N in bigs:
                inter = certify_partial_normal(L, M.ids & N.ids)
                lhs = product_set(L.group, op.ids, c_s_of(inter).ids)
                assert frozenset(lhs) <= inter.ids


def test_o_p_residuals_normal_in_regular(reg_S4):
    # O^p(N), O^{p'}(N), [N,N] stay partial normal in the ambient regular
    from plocal.normals import o_p_l_of, o_pprime_l_of

    L = reg_S4.locality
    for N in enumerate_partial_normals(L, mode="exhaustive"):
        K1 = o_p_l_of(L, N)
        K2 = o_pprime_l_of(L, N)
        assert K1.ids <= N.ids and N.T.ids <= K2.ids


def test_subcentric_locality_psl27(PSL27):
    Ls = subcentric_locality(PSL27, 2)
    assert len(Ls.carrier) == 104


def test_subcentric_locality_rejects_a5(A5):
    # with the trivial subgroup excluded the expansion exists here, so check
    # the genuinely failing case: the full subgroup family on this ambient
    Ls = subcentric_locality(A5, 2)
    assert len(Ls.carrier) == 12


def test_locality_at_trivial_is_whole(reg_PSL27):
    regX = locality_at(reg_PSL27, reg_PSL27.group.trivial())
    assert regX.locality.carrier == reg_PSL27.locality.carrier


def test_locality_at_sylow(reg_PSL27):
    regX = locality_at(reg_PSL27, reg_PSL27.S)
    # the normalizer-side regular locality on N_F(S)
    assert regX.locality.S.ids == reg_PSL27.S.ids
    assert regX.locality.carrier <= reg_PSL27.locality.carrier


def test_locality_at_subcentric_iff_no_components(reg_PSL27):
    F = reg_PSL27.locality.fusion_system_of()
    s = F.collection("s")
    for X in F.subgroups():
        if not F.is_fully_normalized(X):
            continue
        regX = locality_at(reg_PSL27, X)
        e_trivial = regX.e_subgroup() == frozenset({reg_PSL27.group.identity})
        assert e_trivial == (X in s), X.order


def test_e_balance_psl27(reg_PSL27):
    F = reg_PSL27.locality.fusion_system_of()
    for X in F.subgroups():
        if F.is_fully_normalized(X):
            rep = verify_e_balance(reg_PSL27, X)
            assert rep.passed, f"|X|={X.order}\n{rep}"


def test_e_balance_char_p(reg_S4):
    F = reg_S4.locality.fusion_system_of()
    for X in F.subgroups():
        if F.is_fully_normalized(X):
            rep = verify_e_balance(reg_S4, X)
            assert rep.passed


def test_e_of_normal_decomposes(reg_PSL27):
    # partial normals of E(L) split as components times center
    L = reg_PSL27.locality
    e_ids = reg_PSL27.e_subgroup()
    assert e_ids == L.carrier  # one component fills everything
    comps = reg_PSL27.components()
    for N in enumerate_partial_normals(L, mode="exhaustive"):
        if N.ids == frozenset({L.group.identity}):
            continue
        covered = set()
        for c in comps:
            if c.ids <= N.ids:
                covered |= c.ids
        Z = z_of(certify_partial_normal(L, e_ids))
        assert N.ids <= frozenset(
            product_set(L.group, frozenset(covered) | {L.group.identity}, Z.ids | {L.group.identity})
        ) or covered == set()
