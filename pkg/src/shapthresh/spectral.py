"""p-biased Fourier analysis on the cube.

Characters are ``chi_S(x) = prod_{i in S} (x_i - p) / sigma`` with
``sigma = sqrt(p (1 - p))``; coefficients are indexed by the subset bitmask
``S``, the same convention as truth-table inputs.

The transform is a tensor-product butterfly. For a single coordinate, the
pair of point values ``(a, b) = (f|x_i=0, f|x_i=1)`` maps to

    mean part       m = (1 - p) a + p b
    character part  c = sigma (b - a)

and back via ``a = m - c p / sigma``, ``b = m + c (1 - p) / sigma``.
Applying this along every coordinate costs O(n 2^n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import SpecError
from .functions import BooleanFunction, popcounts, split_coordinate
from .measures import _check_p

ZERO_TOL = 1e-12


@dataclass
class RealFunction:
    """Point values of a real function on ``{0,1}^n``."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (1 << self.n,):
            raise SpecError(f"RealFunction needs 2**{self.n} values, got {self.values.shape}")

    @classmethod
    def of(cls, f: "FunctionLike") -> "RealFunction":
        if isinstance(f, RealFunction):
            return f
        if isinstance(f, BooleanFunction):
            return cls(f.n, f.values())
        raise TypeError(f"cannot interpret {type(f).__name__} as a function on the cube")

    def __add__(self, other: "RealFunction") -> "RealFunction":
        return RealFunction(self.n, self.values + other.values)

    def __sub__(self, other: "RealFunction") -> "RealFunction":
        return RealFunction(self.n, self.values - other.values)

    def __mul__(self, c: float) -> "RealFunction":
        return RealFunction(self.n, self.values * c)

    __rmul__ = __mul__


FunctionLike = Union[RealFunction, BooleanFunction]


def point_weights(n: int, p: float) -> np.ndarray:
    """``mu_p(x)`` for every ``x`` in ``{0,1}^n``."""
    k = popcounts(n).astype(np.float64)
    return np.power(p, k) * np.power(1.0 - p, n - k)


def expectation(values: np.ndarray, p: float) -> float:
    n = int(len(values)).bit_length() - 1
    return math.fsum((point_weights(n, p) * values).tolist())


def inner(f: FunctionLike, g: FunctionLike, p: float) -> float:
    """``<f, g>`` in ``L_2(mu_p)``."""
    f, g = RealFunction.of(f), RealFunction.of(g)
    return expectation(f.values * g.values, p)


def lq_norm(f: FunctionLike, p: float, q: float) -> float:
    """``(E_p |f|^q)^(1/q)``."""
    if q < 1:
        raise SpecError(f"norm order must be >= 1, got {q}")
    p = _check_p(p)
    f = RealFunction.of(f)
    return expectation(np.abs(f.values) ** q, p) ** (1.0 / q)


@dataclass
class PBiasedSpectrum:
    """Fourier coefficients ``coeffs[S]`` of a function at bias ``p``."""

    n: int
    p: float
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if self.coeffs.shape != (1 << self.n,):
            raise SpecError(f"spectrum needs 2**{self.n} coefficients")

    def levels(self) -> np.ndarray:
        return popcounts(self.n)

    def weight(self) -> float:
        """``sum_S f^(S)^2``."""
        return math.fsum((self.coeffs**2).tolist())

    def level_weights(self) -> np.ndarray:
        return np.bincount(self.levels(), weights=self.coeffs**2, minlength=self.n + 1)

    def degree(self, tol: float = ZERO_TOL) -> int:
        """Largest ``|S|`` with ``|f^(S)| > tol``; ``-1`` for the zero function."""
        nz = np.abs(self.coeffs) > tol
        return int(self.levels()[nz].max()) if nz.any() else -1

    def truncate(self, d: int) -> "PBiasedSpectrum":
        return PBiasedSpectrum(self.n, self.p, np.where(self.levels() <= d, self.coeffs, 0.0))

    def level_part(self, d: int) -> "PBiasedSpectrum":
        return PBiasedSpectrum(self.n, self.p, np.where(self.levels() == d, self.coeffs, 0.0))

    def scale_levels(self, factor: float) -> "PBiasedSpectrum":
        """Multiply each level-``k`` coefficient by ``factor**k``."""
        return PBiasedSpectrum(self.n, self.p, self.coeffs * np.power(factor, self.levels()))

    def at_bias(self, p: float) -> "PBiasedSpectrum":
        """Same coefficients, reinterpreted in the characters of bias ``p``."""
        return PBiasedSpectrum(self.n, _check_p(p), self.coeffs.copy())

    def to_function(self) -> RealFunction:
        return inverse_transform(self)

    def rows(self) -> list[tuple[int, int, float]]:
        lv = self.levels()
        return [(s, int(lv[s]), float(c)) for s, c in enumerate(self.coeffs)]


def transform(f: FunctionLike, p: float) -> PBiasedSpectrum:
    """Coefficients ``<f, chi_S>_p`` for every ``S`` by the in-place butterfly."""
    p = _check_p(p)
    f = RealFunction.of(f)
    sigma = math.sqrt(p * (1.0 - p))
    out = f.values.copy()
    for i in range(1, f.n + 1):
        a, b = split_coordinate(out, i)
        c = sigma * (b - a)
        a *= 1.0 - p
        a += p * b
        b[...] = c
    return PBiasedSpectrum(f.n, p, out)


def inverse_transform(spec: PBiasedSpectrum) -> RealFunction:
    """Point values ``sum_S f^(S) chi_S(x)``."""
    p = spec.p
    sigma = math.sqrt(p * (1.0 - p))
    lo, hi = -p / sigma, (1.0 - p) / sigma
    out = spec.coeffs.copy()
    for i in range(1, spec.n + 1):
        m, c = split_coordinate(out, i)
        b = m + hi * c
        m += lo * c
        c[...] = b
    return RealFunction(spec.n, out)


def character(n: int, s: int, p: float) -> RealFunction:
    coeffs = np.zeros(1 << n)
    coeffs[s] = 1.0
    return inverse_transform(PBiasedSpectrum(n, _check_p(p), coeffs))


def derivative(spec: PBiasedSpectrum, i: int) -> PBiasedSpectrum:
    """``D_i f = sum_{S containing i} f^(S) chi_{S - i}``, still on ``n`` coordinates.

    Pointwise this is ``sigma (f|x_i=1 - f|x_i=0)``, constant in ``x_i``.
    """
    if not 1 <= i <= spec.n:
        raise SpecError(f"coordinate {i} out of range 1..{spec.n}")
    out = np.zeros_like(spec.coeffs)
    src0, src1 = split_coordinate(spec.coeffs, i)
    dst0, _ = split_coordinate(out, i)
    dst0[...] = src1
    return PBiasedSpectrum(spec.n, spec.p, out)


def fourier_influence(spec: PBiasedSpectrum, i: int) -> float:
    """``Inf_i = sum_{S containing i} f^(S)^2``; equals ``p (1-p) I_i^p`` for Boolean ``f``."""
    if not 1 <= i <= spec.n:
        raise SpecError(f"coordinate {i} out of range 1..{spec.n}")
    _, c1 = split_coordinate(spec.coeffs, i)
    return math.fsum((c1.ravel() ** 2).tolist())


def restriction_difference(f: FunctionLike, i: int) -> RealFunction:
    """``f|x_i=1 - f|x_i=0`` as a function on ``n`` coordinates (constant in ``x_i``)."""
    f = RealFunction.of(f)
    v0, v1 = split_coordinate(f.values, i)
    out = np.empty_like(f.values)
    o0, o1 = split_coordinate(out, i)
    o0[...] = v1 - v0
    o1[...] = v1 - v0
    return RealFunction(f.n, out)
