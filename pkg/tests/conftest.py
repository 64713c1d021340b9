"""Shared kits for the test suite."""

import pytest

from ffnets.construct import build_system, elliptic_kit, genus0_kit, standard_curves
from ffnets.ellcurve import EllipticFunctionField
from ffnets.genmat import build_matrices
from ffnets.gf import make_field
from ffnets.ratfunc import RationalFunctionField
from ffnets.types import Variant


@pytest.fixture(scope="session")
def f2():
    return make_field(2)


@pytest.fixture(scope="session")
def f3():
    return make_field(3)


@pytest.fixture(scope="session")
def f4():
    return make_field(2, 2)


@pytest.fixture(scope="session")
def rational_f2(f2):
    return RationalFunctionField(f2)


@pytest.fixture(scope="session")
def rational_f3(f3):
    return RationalFunctionField(f3)


@pytest.fixture(scope="session")
def curves():
    return standard_curves()


@pytest.fixture(scope="session")
def ec_f2(curves):
    """y^2 + y = x^3 over F_2."""
    return EllipticFunctionField(curves["F2"])


@pytest.fixture(scope="session")
def ec_f3(curves):
    """y^2 = x^3 - x over F_3."""
    return EllipticFunctionField(curves["F3"])


@pytest.fixture(scope="session")
def g0_system_f2(f2):
    """Genus-0 kit q=2, s=2, mu=1."""
    return build_system(genus0_kit(f2, 2))


@pytest.fixture(scope="session")
def g0_matrices_f2(g0_system_f2):
    return build_matrices(g0_system_f2, 8, 8)


@pytest.fixture(scope="session")
def gpos_system_f2(curves):
    return build_system(elliptic_kit(curves["F2"], 2, Variant.GPOS))


@pytest.fixture(scope="session")
def xing_system_f2(curves):
    return build_system(elliptic_kit(curves["F2"], 2, Variant.XING))


@pytest.fixture(scope="session")
def gpos_system_f3(curves):
    return build_system(elliptic_kit(curves["F3"], 3, Variant.GPOS))


@pytest.fixture(scope="session")
def xing_system_f3(curves):
    return build_system(elliptic_kit(curves["F3"], 3, Variant.XING))
