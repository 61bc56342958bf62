from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from closroute.core import ClosDims, FlowSet

settings.register_profile("default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DEMANDS = [Fraction(k, d) for d in (1, 2, 3, 4, 6) for k in range(1, d + 1)]


@st.composite
def flowsets(draw, max_n=3, max_r=3, max_flows=8, unit=False):
    """Hose-feasible flow sets; candidate flows that would overfill a server are dropped."""
    n = draw(st.integers(1, max_n))
    r = draw(st.integers(1, max_r))
    raw = draw(
        st.lists(
            st.tuples(
                st.integers(1, r), st.integers(1, n), st.integers(1, r), st.integers(1, n),
                st.just(Fraction(1)) if unit else st.sampled_from(DEMANDS),
            ),
            max_size=max_flows,
        )
    )
    src, dst, specs = {}, {}, []
    for i, s, j, t, d in raw:
        if src.get((i, s), 0) + d <= 1 and dst.get((j, t), 0) + d <= 1:
            src[(i, s)] = src.get((i, s), 0) + d
            dst[(j, t)] = dst.get((j, t), 0) + d
            specs.append((i, s, j, t, d))
    return FlowSet.build(ClosDims(n, r), specs)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]")


@pytest.fixture
def record():
    """record(k, title) -> context manager that stores PASS/FAIL for criterion k."""
    import contextlib
    import time

    @contextlib.contextmanager
    def _record(k, title):
        t0 = time.perf_counter()
        note = {"detail": ""}
        try:
            yield note
        except BaseException as exc:
            ACCEPTANCE[k] = (False, title, f"{type(exc).__name__}: {exc}".splitlines()[0][:160])
            raise
        ACCEPTANCE[k] = (True, title, f"{note['detail']} {time.perf_counter() - t0:.2f}s".strip())

    return _record
