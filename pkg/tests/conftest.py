import math

import pytest

from orthotensor import Family, WeightSpec, make_family

BUILTIN_SPECS = {
    "gaussian": WeightSpec(family=Family.GAUSSIAN),
    "legendre": WeightSpec(family=Family.LEGENDRE),
    "chebyshev1": WeightSpec(family=Family.CHEBYSHEV1),
    "chebyshev2": WeightSpec(family=Family.CHEBYSHEV2),
    "fermi_dirac": WeightSpec(family=Family.FERMI_DIRAC, theta=1.0, z=0.5),
    "bose_einstein": WeightSpec(family=Family.BOSE_EINSTEIN, theta=1.0, z=0.3),
    "graphene": WeightSpec(family=Family.GRAPHENE, theta=1.0, z=0.9),
    "yukawa": WeightSpec(family=Family.YUKAWA, mu=1.0),
}

CLOSED_FORM = ("gaussian", "legendre", "chebyshev1", "chebyshev2", "yukawa")
NUMERIC_MOMENTS = ("fermi_dirac", "bose_einstein", "graphene")


def min_dim(name: str) -> int:
    return 2 if name == "yukawa" else 1


_family_cache: dict[tuple[str, int], object] = {}


def cached_family(name: str, D: int):
    """Families are immutable; reuse them across tests to keep the suite fast."""
    key = (name, D)
    if key not in _family_cache:
        _family_cache[key] = make_family(BUILTIN_SPECS[name], D)
    return _family_cache[key]


@pytest.fixture
def gaussian_1d():
    return cached_family("gaussian", 1)


@pytest.fixture
def gaussian_2d():
    return cached_family("gaussian", 2)


@pytest.fixture
def legendre_1d():
    return cached_family("legendre", 1)
