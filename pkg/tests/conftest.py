import pytest

from plocal.catalog import catalog_group
from plocal.fusion import fusion_system
from plocal.groups import p_core, sylow_subgroup
from plocal.locality import build_locality


@pytest.fixture(scope="session")
def S4():
    return catalog_group("S4")


@pytest.fixture(scope="session")
def A4():
    return catalog_group("A4")


@pytest.fixture(scope="session")
def A5():
    return catalog_group("A5")


@pytest.fixture(scope="session")
def D8():
    return catalog_group("D8")


@pytest.fixture(scope="session")
def SL23():
    return catalog_group("SL23")


@pytest.fixture(scope="session")
def PSL27():
    return catalog_group("PSL27")


@pytest.fixture(scope="session")
def A6():
    return catalog_group("A6")


@pytest.fixture(scope="session")
def VGL32():
    return catalog_group("V_GL32")


@pytest.fixture(scope="session")
def F_S4(S4):
    return fusion_system(S4, sylow_subgroup(S4, 2), 2)


@pytest.fixture(scope="session")
def F_A5(A5):
    return fusion_system(A5, sylow_subgroup(A5, 2), 2)


@pytest.fixture(scope="session")
def L_S4(S4):
    # objects: overgroups of the normal four-group
    return build_locality(S4, sylow_subgroup(S4, 2), 2, [p_core(S4, 2)], name="L(S4)")


@pytest.fixture(scope="session")
def L_A5(A5):
    S = sylow_subgroup(A5, 2)
    return build_locality(A5, S, 2, [S], name="L(A5)")


@pytest.fixture(scope="session")
def L_PSL27(PSL27):
    from plocal.regular import build_regular

    return build_regular(PSL27, 2).locality


@pytest.fixture(scope="session")
def reg_S4(S4):
    from plocal.regular import build_regular

    return build_regular(S4, 2)


@pytest.fixture(scope="session")
def reg_A5(A5):
    from plocal.regular import build_regular

    return build_regular(A5, 2)


@pytest.fixture(scope="session")
def reg_PSL27(PSL27):
    from plocal.regular import build_regular

    return build_regular(PSL27, 2)
