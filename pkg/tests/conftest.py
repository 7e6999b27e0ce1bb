from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from flagberg.polycore import GaussRat, Poly

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


small_fractions = st.builds(
    Fraction, st.integers(min_value=-6, max_value=6), st.integers(min_value=1, max_value=5)
)
gauss = st.builds(GaussRat, small_fractions, small_fractions)


def polys(n: int = 2, max_terms: int = 4, max_exp: int = 2):
    exps = st.tuples(*[st.integers(min_value=0, max_value=max_exp)] * (2 * n))
    return st.dictionaries(exps, gauss, max_size=max_terms).map(lambda t: Poly(n, t))


def points(n: int):
    return st.lists(gauss, min_size=n, max_size=n)


@pytest.fixture(scope="session")
def catalog_potentials():
    from flagberg.catalog import CATALOG, catalog_flag
    from flagberg.flagstruct import ke_coeffs
    from flagberg.potential import build_chart, build_potential

    out = {}
    for name in CATALOG:
        flag = catalog_flag(name)
        out[name] = build_potential(build_chart(flag), ke_coeffs(flag))
    return out
