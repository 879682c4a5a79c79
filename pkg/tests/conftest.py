import pytest

from flatiso import catalog, flatcore


@pytest.fixture(scope="session")
def klein():
    return catalog.catalog_get("LT8").pvf


@pytest.fixture(scope="session")
def klein_matrices(klein):
    return flatcore.build_saito_matrices(klein)


@pytest.fixture(scope="session")
def perturbed_klein(klein):
    t1 = klein.ring.var(0)
    g = list(klein.g)
    g[2] = g[2] + t1 ** 7
    return flatcore.PotentialVF(ring=klein.ring, g=g, name="LT8-perturbed")


@pytest.fixture(scope="session")
def h3():
    return catalog.catalog_get("H3").pvf


@pytest.fixture(scope="session")
def h3p():
    return catalog.catalog_get("H3p").pvf


@pytest.fixture(scope="session")
def trivial_n2():
    """weights (1/2, 1), g = (t1 t2 + t1^3, t2^2/2 + 3/4 t1^4): B^(2) = I makes
    the single commutator vanish, so this is a solution."""
    from flatiso.ring import Ring
    ring = Ring(["1/2", "1"])
    t1, t2 = ring.gens()
    g = [t1 * t2 + t1 ** 3, t2 ** 2 / 2 + t1 ** 4 * 3 / 4]
    return flatcore.PotentialVF(ring=ring, g=g, name="n2-trivial")
