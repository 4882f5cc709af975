"""One-sided noise operator ``T^{p->q}``.

``N(x)`` keeps every 0-coordinate of ``x`` and turns each 1-coordinate into
a 0 with probability ``(q - p) / q``. ``(T f)(x) = E_{y ~ N(x)} f(y)``; when
``x ~ mu_q`` the noisy point ``y`` is distributed as ``mu_p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import SpecError
from .functions import split_coordinate
from .spectral import FunctionLike, RealFunction, expectation, transform, inverse_transform

MAX_SUBMASK_N = 16


@dataclass(frozen=True)
class NoisePair:
    p: float
    q: float

    def __post_init__(self):
        if not (0.0 < self.p <= self.q < 1.0):
            raise SpecError(f"noise pair needs 0 < p <= q < 1, got p={self.p}, q={self.q}")

    @property
    def rho(self) -> float:
        p, q = self.p, self.q
        return math.sqrt(p * (1.0 - q) / (q * (1.0 - p)))

    @property
    def keep(self) -> float:
        """Probability that a 1-coordinate survives."""
        return self.p / self.q


def _pair(pair, q=None) -> NoisePair:
    if isinstance(pair, NoisePair):
        return pair
    if q is not None:
        return NoisePair(float(pair), float(q))
    return NoisePair(*map(float, pair))


def apply_direct(f: FunctionLike, pair: NoisePair) -> RealFunction:
    """Exact expectation over ``N(x)``, one coordinate at a time.

    The full sum runs over sub-masks ``y <= x`` with weight
    ``keep^|y| (1-keep)^(|x|-|y|)``; it factorises over coordinates into a
    weighted subset-sum transform costing O(n 2^n).
    """
    pair = _pair(pair)
    f = RealFunction.of(f)
    keep = pair.keep
    out = f.values.copy()
    for i in range(1, f.n + 1):
        a, b = split_coordinate(out, i)
        b *= keep
        b += (1.0 - keep) * a
    return RealFunction(f.n, out)


def apply_submask(f: FunctionLike, pair: NoisePair) -> RealFunction:
    """Literal sub-mask enumeration of ``T f``; O(3^n), for cross-checking only."""
    pair = _pair(pair)
    f = RealFunction.of(f)
    if f.n > MAX_SUBMASK_N:
        raise SpecError(f"sub-mask enumeration is capped at n={MAX_SUBMASK_N}")
    keep, drop = pair.keep, 1.0 - pair.keep
    vals = f.values
    out = np.empty_like(vals)
    for x in range(1 << f.n):
        kx = x.bit_count()
        terms = []
        y = x
        while True:
            ky = y.bit_count()
            terms.append(keep**ky * drop ** (kx - ky) * vals[y])
            if y == 0:
                break
            y = (y - 1) & x
        out[x] = math.fsum(terms)
    return RealFunction(f.n, out)


def apply_spectral(f: FunctionLike, pair: NoisePair) -> RealFunction:
    """``T f = sum_S rho^|S| f^_p(S) chi^q_S``."""
    pair = _pair(pair)
    spec = transform(f, pair.p).scale_levels(pair.rho).at_bias(pair.q)
    return inverse_transform(spec)


def correlation(f: FunctionLike, g: FunctionLike, pair: NoisePair, route: str = "spectral") -> float:
    """``<T^{p->q} f, g>`` in ``L_2(mu_q)``.

    ``route="spectral"`` evaluates ``sum_S rho^|S| f^_p(S) g^_q(S)``;
    ``route="pointwise"`` integrates :func:`apply_direct` against ``g``.
    """
    pair = _pair(pair)
    if route == "spectral":
        fs = transform(f, pair.p).scale_levels(pair.rho)
        gs = transform(g, pair.q)
        return math.fsum((fs.coeffs * gs.coeffs).tolist())
    if route == "pointwise":
        tf = apply_direct(f, pair)
        return expectation(tf.values * RealFunction.of(g).values, pair.q)
    raise SpecError(f"unknown route {route!r}")


def sample_noisy(rng: np.random.Generator, x: np.ndarray, n: int, pair: NoisePair) -> np.ndarray:
    """Draw ``y ~ N(x)`` for each mask in ``x``."""
    pair = _pair(pair)
    bits = np.int64(1) << np.arange(n, dtype=np.int64)
    survive = rng.random((len(x), n)) < pair.keep
    return x & (survive.astype(np.int64) @ bits)
