import numpy as np
import pytest

from prodsys import FreeAbelian, FreeProduct, ProductSystem, build_truncation


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def n2_23():
    """N^2 with generator fibres of dimensions 2 and 3."""
    return ProductSystem(FreeAbelian(2), (2, 3))


@pytest.fixture(scope="session")
def fp_22():
    """Free product of two copies of N, both generator fibres 2-dimensional."""
    return ProductSystem(FreeProduct(2), (2, 2))


@pytest.fixture(scope="session")
def trunc_n2_L2(n2_23):
    return build_truncation(n2_23, 2)


@pytest.fixture(scope="session")
def trunc_fp_L2(fp_22):
    return build_truncation(fp_22, 2)


@pytest.fixture(scope="session")
def trunc_n2_L3(n2_23):
    return build_truncation(n2_23, 3)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
