import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("framekit", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("framekit")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=6)

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def cgauss(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def basis(d, i):
    """1-based standard basis vector."""
    e = np.zeros(d, dtype=complex)
    e[i - 1] = 1.0
    return e


def bisection_constant(k, l):
    """Least c with K K* <= c L L*, compressed to R(L) and bisected on eigenvalues."""
    u, s, _ = np.linalg.svd(l)
    r = int(np.sum(s > 1e-9 * s[0])) if s.size and s[0] > 0 else 0
    if r == 0:
        return 0.0
    ur = u[:, :r]
    a = ur.conj().T @ k @ k.conj().T @ ur
    b = ur.conj().T @ l @ l.conj().T @ ur
    lo, hi = 0.0, 1.0
    while np.linalg.eigvalsh(hi * b - a)[0] < 0:
        hi *= 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if np.linalg.eigvalsh(mid * b - a)[0] >= -1e-14 * max(np.linalg.norm(a, 2), 1.0):
            hi = mid
        else:
            lo = mid
    return hi


@pytest.fixture
def record_acceptance():
    def record(n, ok, detail):
        ACCEPTANCE[n] = (bool(ok), detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
