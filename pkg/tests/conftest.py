import pytest

from clifford_lab import otsuki


@pytest.fixture(scope="session")
def profile_cache():
    cache = {}

    def get(n, lam0, step=otsuki.DEFAULT_STEP):
        key = (n, lam0, step)
        if key not in cache:
            cache[key] = otsuki.integrate_profile(n, lam0, step)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def standard_profiles(profile_cache):
    """(n, lambda0) in {3,4,5} x {0.75, 0.9, 1.1}/sqrt(n-1)."""
    out = []
    for n in (3, 4, 5):
        for fac in (0.75, 0.9, 1.1):
            out.append(profile_cache(n, fac * otsuki.equilibrium(n)))
    return out


@pytest.fixture(scope="session")
def p3(profile_cache):
    return profile_cache(3, 0.9)
