import numpy as np
import pytest

from cvwitness import fully_wit, ghz_covariance, multi_wit, swap_state, ww_state

LN2_2 = np.log(2) / 2


@pytest.fixture(scope="session")
def ghz3():
    return ghz_covariance(3, LN2_2, LN2_2)


@pytest.fixture(scope="session")
def reference_solves(ghz3):
    """The five headline solves, computed once per session."""
    swap = swap_state()
    return {
        "ww_full": fully_wit(ww_state()),
        "ghz_full": fully_wit(ghz3),
        "ghz_multi": multi_wit(ghz3),
        "swap_multi": multi_wit(swap),
        "swap_full": fully_wit(swap),
    }


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[number])
