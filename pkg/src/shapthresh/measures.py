"""p-biased measures, influences and Russo's lemma.

Every exact quantity here is a polynomial in ``p`` written in the Bernstein
basis, with the integer layer or pivot counts of a :class:`BooleanFunction`
as coefficients. Terms are accumulated with :func:`math.fsum`, so each
evaluation is correctly rounded up to the error of the individual terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import SpecError
from .functions import BooleanFunction

Oracle = Callable[[np.ndarray], np.ndarray]

#: Sampling uses NumPy's Philox4x64-10 counter-based generator keyed by
#: ``SeedSequence([seed, stream_index])``.
PRNG_ALGORITHM = "Philox4x64-10"
STREAM_SIZE = 8192


def _check_p(p: float, closed: bool = False) -> float:
    p = float(p)
    ok = 0.0 <= p <= 1.0 if closed else 0.0 < p < 1.0
    if not ok:
        raise SpecError(f"bias p must lie in {'[0, 1]' if closed else '(0, 1)'}, got {p}")
    return p


def bernstein(counts, degree: int, p: float) -> float:
    """``sum_k counts[k] p^k (1-p)^(degree-k)``, compensated."""
    c = np.asarray(counts, dtype=np.float64)
    k = np.arange(len(c))
    terms = c * np.power(p, k) * np.power(1.0 - p, degree - k)
    return math.fsum(terms.tolist())


def bernstein_derivative(counts, degree: int, p: float) -> float:
    """Analytic ``d/dp`` of :func:`bernstein`."""
    c = np.asarray(counts, dtype=np.float64)
    k = np.arange(len(c))
    rest = degree - k
    up = k * np.power(p, np.maximum(k - 1, 0)) * np.power(1.0 - p, rest)
    down = rest * np.power(p, k) * np.power(1.0 - p, np.maximum(rest - 1, 0))
    return math.fsum((c * up).tolist() + (-c * down).tolist())


def mu(f: BooleanFunction, p: float) -> float:
    """``mu_p(f) = sum_k N_k p^k (1-p)^(n-k)``; O(n) after the cache is built."""
    p = _check_p(p)
    return bernstein(f.layer_counts, f.n, p)


def _check_k(f: BooleanFunction, k: int) -> int:
    if not 1 <= k <= f.n:
        raise SpecError(f"coordinate {k} out of range 1..{f.n}")
    return int(k)


def influence(f: BooleanFunction, k: int, p: float) -> float:
    """Probability under ``mu_p`` that flipping coordinate ``k`` changes ``f``.

    Each pivotal pair ``{x, x ^ e_k}`` is counted once and weighted by the
    measure of the other ``n - 1`` coordinates.
    """
    k = _check_k(f, k)
    p = _check_p(p)
    return bernstein(f.pivot_counts[k - 1], f.n - 1, p)


def influences(f: BooleanFunction, p: float) -> np.ndarray:
    p = _check_p(p)
    return np.array([bernstein(row, f.n - 1, p) for row in f.pivot_counts])


def signed_influence(f: BooleanFunction, k: int, p: float) -> float:
    """``E_p[f(x | e_k) - f(x & ~e_k)]``; equals :func:`influence` for monotone ``f``."""
    k = _check_k(f, k)
    p = _check_p(p, closed=True)
    return bernstein(f.signed_pivot_counts[k - 1], f.n - 1, p)


def total_influence(f: BooleanFunction, p: float) -> float:
    return math.fsum(influences(f, p).tolist())


def mu_derivative(f: BooleanFunction, p: float) -> float:
    p = _check_p(p)
    return bernstein_derivative(f.layer_counts, f.n, p)


@dataclass(frozen=True)
class BiasedMoments:
    p: float
    mu: float
    influences: np.ndarray
    total_influence: float
    mu_derivative: float


def moments(f: BooleanFunction, p: float) -> BiasedMoments:
    inf = influences(f, p)
    return BiasedMoments(
        p=float(p),
        mu=mu(f, p),
        influences=inf,
        total_influence=math.fsum(inf.tolist()),
        mu_derivative=mu_derivative(f, p),
    )


# ----------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class SampleEstimate:
    estimate: float
    stderr: float
    samples: int


def stream_rng(seed: int, stream: int) -> np.random.Generator:
    """Independent generator for one fixed-size stream of a sampled estimate."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def stream_sizes(total: int, stream_size: int = STREAM_SIZE):
    """Yield ``(stream_index, size)`` pairs partitioning ``total``."""
    for j, start in enumerate(range(0, total, stream_size)):
        yield j, min(stream_size, total - start)


def sample_cube(rng: np.random.Generator, n: int, p: float, size: int) -> np.ndarray:
    """``size`` input masks drawn from ``mu_p`` on ``{0,1}^n``."""
    bits = rng.random((size, n)) < p
    return bits.astype(np.int64) @ (np.int64(1) << np.arange(n, dtype=np.int64))


def sample_mu(oracle: Oracle, n: int, p: float, samples: int, seed: int) -> SampleEstimate:
    """Monte-Carlo estimate of ``E_p[oracle(x)]`` with its standard error.

    ``oracle`` receives an int64 array of input masks and returns their values.
    The result depends only on ``(seed, samples)``.
    """
    p = _check_p(p)
    if samples < 1:
        raise SpecError("samples must be >= 1")
    chunks = []
    for j, size in stream_sizes(samples):
        x = sample_cube(stream_rng(seed, j), n, p, size)
        chunks.append(np.asarray(oracle(x), dtype=np.float64))
    vals = np.concatenate(chunks)
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return SampleEstimate(est, se, samples)
