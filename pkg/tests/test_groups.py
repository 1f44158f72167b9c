import pytest

from plocal.errors import (
    InvalidPermutation,
    NotPDisconnected,
    PreconditionViolated,
    SizeGuardExceeded,
)
from plocal.groups import (
    Subgroup,
    centralizer,
    coprime_generation_check,
    enumerate_group,
    is_characteristic_p,
    is_p_nilpotent,
    normal_subgroups,
    normalizer,
    p_core,
    p_part,
    p_prime_residual,
    p_residual,
    quotient_group,
    subgroup_closure,
    sylow_subgroup,
)
from plocal.perm import from_cycles


def brute_centralizer(G, xs):
    # independent oracle: plain commuting scan against full multiplication
    out = set()
    for g in range(G.order):
        if all(G.mul(g, x) == G.mul(x, g) for x in xs):
            out.add(g)
    return out


def test_enumerate_s4_order():
    G = enumerate_group([from_cycles([[1, 2]], 4), from_cycles([[1, 2, 3, 4]], 4)])
    assert G.order == 24


def test_enumerate_trivial_degree_one():
    G = enumerate_group([], degree=1)
    assert G.order == 1


def test_enumerate_a5_order(A5):
    assert A5.order == 60


def test_enumerate_guard():
    with pytest.raises(SizeGuardExceeded):
        enumerate_group([from_cycles([[1, 2, 3, 4, 5]], 5)], bound=3)


def test_invalid_permutation_rejected():
    with pytest.raises(InvalidPermutation):
        enumerate_group([(0, 0, 1)], degree=3)


def test_mul_table_matches_composition(S4):
    # oracle: compose image tuples directly
    for a in range(0, S4.order, 5):
        for b in range(0, S4.order, 7):
            pa, pb = S4.elements[a], S4.elements[b]
            assert S4.elements[S4.mul(a, b)] == tuple(pb[i] for i in pa)


def test_sylow_s4(S4):
    S = sylow_subgroup(S4, 2)
    assert S.order == 8
    assert normalizer(S4, S).ids == S.ids  # self-normalizing


def test_sylow_a5_elementary_abelian(A5):
    S = sylow_subgroup(A5, 2)
    assert S.order == 4 and S.is_elementary_abelian(2)


def test_sylow_trivial_when_p_absent(S4):
    assert sylow_subgroup(S4, 5).order == 1


def test_sylow_conjugates_exhaust(S4):
    # all Sylow 2-subgroups arise by conjugation and share the exact p-part
    S = sylow_subgroup(S4, 2)
    seen = {frozenset(S4.conj(x, g) for x in S.ids) for g in range(S4.order)}
    assert len(seen) == 3
    assert all(len(ids) == p_part(S4.order, 2) for ids in seen)


def test_centralizer_identity_is_whole(S4):
    assert centralizer(S4, [S4.identity]).order == S4.order


def test_centralizer_involution_a5(A5):
    inv = next(x for x in range(A5.order) if A5.element_order(x) == 2)
    C = centralizer(A5, [inv])
    assert C.order == 4
    assert C.ids == brute_centralizer(A5, [inv])


def test_p_core_s4_is_v4(S4):
    V = p_core(S4, 2)
    assert V.order == 4 and V.is_elementary_abelian(2)
    # oracle: intersect all Sylow 2-subgroups
    S = sylow_subgroup(S4, 2)
    inter = set(S.ids)
    for g in range(S4.order):
        inter &= {S4.conj(x, g) for x in S.ids}
    assert V.ids == frozenset(inter)


def test_p_residual_s4_is_a4(S4):
    R = p_residual(S4, 2)
    assert R.order == 12
    # oracle: smallest normal subgroup with 2-group quotient
    best = min(
        (N for N in normal_subgroups(S4) if p_part(S4.order // N.order, 2) == S4.order // N.order),
        key=lambda N: N.order,
    )
    assert R.ids == best.ids


def test_p_prime_residual_s4(S4):
    R = p_prime_residual(S4, 2)
    best = min(
        (N for N in normal_subgroups(S4) if (S4.order // N.order) % 2 == 1),
        key=lambda N: N.order,
    )
    assert R.ids == best.ids


def test_p_core_a5_trivial(A5):
    assert p_core(A5, 2).order == 1


def test_characteristic_p(S4, A5, D8):
    assert is_characteristic_p(S4, 2)
    assert not is_characteristic_p(A5, 2)
    assert is_characteristic_p(D8, 2)


def test_characteristic_p_matches_definition(S4, A5, SL23, A4):
    for G in (S4, A5, SL23, A4):
        Q = p_core(G, 2)
        C = centralizer(G, Q.generators() or [G.identity])
        assert is_characteristic_p(G, 2) == (C.ids <= Q.ids)


def test_normal_subgroups_s4(S4):
    orders = [N.order for N in normal_subgroups(S4)]
    assert orders == [1, 4, 12, 24]


def test_normal_subgroups_a5_simple(A5):
    assert [N.order for N in normal_subgroups(A5)] == [1, 60]


def test_normal_subgroups_abelian():
    G = enumerate_group([from_cycles([[1, 2]], 4), from_cycles([[3, 4]], 4)])
    assert len(normal_subgroups(G)) == 5  # C2xC2: every subgroup


def test_subgroup_certify_and_lagrange(S4):
    for N in normal_subgroups(S4):
        assert N.certify_closed()
        assert S4.order % N.order == 0


def test_quotient_s4_v4():
    G = enumerate_group([from_cycles([[1, 2]], 4), from_cycles([[1, 2, 3, 4]], 4)])
    Q, wit = quotient_group(G, G.whole(), p_core(G, 2))
    assert Q.order == 6
    assert wit.certify()


def test_quotient_requires_normal(S4):
    S = sylow_subgroup(S4, 2)
    with pytest.raises(PreconditionViolated):
        quotient_group(S4, S4.whole(), S)


def test_coprime_generation_trivial_x(S4):
    V = p_core(S4, 2)
    X = S4.trivial()
    assert coprime_generation_check(S4, X, V, 2)


def test_coprime_generation_c3c3_v4():
    from plocal.catalog import catalog_group

    G = catalog_group("C3C3_V4")
    X = subgroup_closure(G, [g for g in range(G.order) if G.element_order(g) == 3][:4])
    assert X.order == 9
    A = sylow_subgroup(G, 2)
    assert A.order == 4 and A.is_elementary_abelian(2)
    assert coprime_generation_check(G, X, A, 2)


def test_coprime_generation_precondition():
    from plocal.catalog import catalog_group

    G = catalog_group("C3C3_V4")
    X = subgroup_closure(G, [g for g in range(G.order) if G.element_order(g) == 3][:1])
    C2 = next(g for g in range(G.order) if G.element_order(g) == 2)
    A = subgroup_closure(G, [C2])
    with pytest.raises(PreconditionViolated):
        coprime_generation_check(G, X, A, 2)


def test_p_nilpotent(D8, S4):
    assert is_p_nilpotent(D8, D8.whole(), 2)
    assert not is_p_nilpotent(S4, S4.whole(), 2)
    # S3 is 2-nilpotent
    G = enumerate_group([from_cycles([[1, 2]], 3), from_cycles([[1, 2, 3]], 3)])
    assert is_p_nilpotent(G, G.whole(), 2)
