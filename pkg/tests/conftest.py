import numpy as np
import pytest

from fockalg.fock import Context
from fockalg.wiener import make_geometric, make_tau_p

K_REF = (0.8, 0.5, 0.3)


@pytest.fixture
def ref_ctx():
    """d = 3, N = 8, k = (0.8, 0.5, 0.3), tau_p(1, 0.5)."""
    return Context.build(K_REF, make_tau_p(1.0, 0.5, 8))


@pytest.fixture
def hardy_ctx():
    """d = 1, k = 1, geometric(1): the Hardy-space normalization."""
    return Context.build([1.0], make_geometric(1.0, 10))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)



def pytest_terminal_summary(terminalreporter):
    import sys
    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n][1])
