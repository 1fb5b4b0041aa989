import mpmath as mp
import pytest


def mp_jacobi_sum(n, a, b, z, dps=50):
    """Terminating hypergeometric sum for P_n^(a,b)(z) in extended precision."""
    with mp.workdps(dps):
        a, b, z = mp.mpf(a), mp.mpf(b), mp.mpf(z)
        w = (1 - z) / 2
        total = mp.mpf(0)
        for m in range(n + 1):
            c = mp.mpf(1)
            for j in range(m):
                c *= (-n + j) * (n + a + b + 1 + j) / (j + 1)
            for j in range(n - m):
                c *= a + m + 1 + j
            total += c * w**m
        return total / mp.factorial(n)


def mp_laguerre_sum(n, k, z, dps=50):
    """``sum_i binom(n+k, n-i) (-z)^i / i!`` in extended precision."""
    with mp.workdps(dps):
        k, z = mp.mpf(k), mp.mpf(z)
        return mp.fsum(mp.binomial(n + k, n - i) * (-z) ** i / mp.factorial(i) for i in range(n + 1))


@pytest.fixture(scope="session")
def jacobi_oracle():
    return mp_jacobi_sum


@pytest.fixture(scope="session")
def laguerre_oracle():
    return mp_laguerre_sum


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
