"""Brute-force oracles shared by the test modules.

These work straight from the definitions with exact rationals and share
no code with the package beyond reading a truth table.
"""

from fractions import Fraction
from itertools import permutations
from math import factorial

import numpy as np
import pytest

from shapthresh import builtin_zoo


def weight(x, n, p):
    k = bin(x).count("1")
    return p**k * (1 - p) ** (n - k)


def brute_mu(table, n, p):
    return sum(weight(x, n, p) for x in range(1 << n) if table[x])


def brute_influence(table, n, k, p):
    bit = 1 << (k - 1)
    return sum(weight(x, n, p) for x in range(1 << n) if table[x] != table[x ^ bit])


def brute_shapley_perms(value, n):
    """Average marginal contribution over all n! orderings."""
    psi = [Fraction(0)] * n
    for order in permutations(range(n)):
        s = 0
        for k in order:
            psi[k] += Fraction(value(s | 1 << k)) - Fraction(value(s))
            s |= 1 << k
    return [v / factorial(n) for v in psi]


def brute_coefficient(values, n, s, p):
    """<f, chi_S>_p by direct summation."""
    sigma = (p * (1 - p)) ** 0.5
    total = 0.0
    for x in range(1 << n):
        chi = 1.0
        for i in range(n):
            if (s >> i) & 1:
                chi *= (((x >> i) & 1) - p) / sigma
        total += weight(x, n, p) * values[x] * chi
    return total


@pytest.fixture(scope="session")
def zoo():
    return builtin_zoo()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def record():
    """Log one PASS/FAIL line for an acceptance criterion."""

    def _record(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
