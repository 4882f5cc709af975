"""Shapley and Banzhaf power indices.

Three routes to the Shapley value are kept deliberately separate:

* :func:`shapley_exact` sums weighted marginal contributions over all
  coalitions, with weights ``s! (n-1-s)! / n!`` rounded once from exact
  rationals;
* :func:`shapley_owen` integrates the marginal-contribution polynomial in
  ``p`` over ``[0, 1]`` by Gauss-Legendre quadrature;
* :func:`shapley_sampled` averages marginal contributions over random
  orderings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .exceptions import SizeError, SpecError
from .functions import MAX_GAME_N, BooleanFunction, GameFunction, popcounts, split_coordinate
from .measures import bernstein, influences, stream_rng, stream_sizes

METHODS = ("subset_exact", "owen_quadrature", "permutation_sampled", "banzhaf")


@dataclass
class PowerVector:
    """Per-player index values; ``values[k-1]`` belongs to player ``k``."""

    values: np.ndarray
    method: str
    stderr: np.ndarray | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        self.values = np.asarray(self.values, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> float:
        """1-based player lookup."""
        return float(self.values[k - 1])

    def total(self) -> float:
        return math.fsum(self.values.tolist())

    def argmax(self) -> int:
        return int(np.argmax(self.values)) + 1

    def rows(self) -> list[dict]:
        out = []
        for k, v in enumerate(self.values, start=1):
            row = {"player": k, "value": float(v)}
            if self.stderr is not None:
                row["stderr"] = float(self.stderr[k - 1])
            out.append(row)
        return out


@lru_cache(maxsize=None)
def shapley_weight_fractions(n: int) -> tuple[Fraction, ...]:
    f = math.factorial
    return tuple(Fraction(f(s) * f(n - 1 - s), f(n)) for s in range(n))


@lru_cache(maxsize=None)
def shapley_weights(n: int) -> np.ndarray:
    """``w(s) = s! (n-1-s)! / n!`` for ``s = 0..n-1``, each a single rounding of the exact value."""
    w = np.array([float(q) for q in shapley_weight_fractions(n)])
    w.setflags(write=False)
    return w


def _layer_sums(values: np.ndarray, n: int, i: int) -> np.ndarray:
    """Per-layer sums of ``v(S | e_i) - v(S)`` over ``S`` not containing ``i``."""
    v0, v1 = split_coordinate(values, i)
    w0, _ = split_coordinate(popcounts(n), i)
    diff = v1.astype(np.float64) - v0.astype(np.float64)
    return np.bincount(w0.ravel(), weights=diff.ravel(), minlength=n)


def shapley_exact(g: GameFunction | BooleanFunction) -> PowerVector:
    """Shapley values by the coalition-weight formula, O(n 2^n).

    Grouping the ``n!`` orderings by the set of players preceding ``k``
    gives ``psi_k = sum_{S not containing k} w(|S|) (v(S + k) - v(S))``.
    """
    n = g.n
    if n > MAX_GAME_N:
        raise SizeError(f"exact Shapley is capped at n={MAX_GAME_N}, got n={n}")
    if isinstance(g, BooleanFunction):
        values = g.table.astype(np.int8)
    else:
        values = g.payoff
        if values[0] != 0:
            raise SpecError("payoff of the empty coalition must be 0")
    w = shapley_weights(n)
    psi = np.empty(n)
    for i in range(1, n + 1):
        sums = _layer_sums(values, n, i)
        psi[i - 1] = math.fsum((w * sums).tolist())
    return PowerVector(psi, "subset_exact")


@lru_cache(maxsize=None)
def _unit_gauss_legendre(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    return (x + 1.0) / 2.0, w / 2.0


def min_owen_nodes(n: int) -> int:
    """Fewest Gauss-Legendre nodes integrating a degree ``n-1`` polynomial exactly."""
    return max(1, math.ceil(n / 2))


def shapley_owen(f: BooleanFunction, nodes: int | None = None) -> PowerVector:
    """Shapley values as ``int_0^1 E_p[f(x | e_k) - f(x & ~e_k)] dp``.

    For monotone ``f`` the integrand is the influence ``I_k^p(f)``. It is a
    polynomial of degree ``n - 1``, so ``nodes >= ceil(n/2)`` makes the
    quadrature exact; fewer nodes are refused.
    """
    n = f.n
    need = min_owen_nodes(n)
    if nodes is None:
        nodes = need
    if nodes < need:
        raise SpecError(f"Owen quadrature needs at least {need} nodes for n={n}, got {nodes}")
    x, w = _unit_gauss_legendre(int(nodes))
    signed = f.signed_pivot_counts
    psi = np.empty(n)
    for k in range(n):
        vals = [bernstein(signed[k], n - 1, float(p)) for p in x]
        psi[k] = math.fsum((w * np.array(vals)).tolist())
    return PowerVector(psi, "owen_quadrature", info={"nodes": int(nodes)})


def banzhaf(f: BooleanFunction) -> PowerVector:
    """Banzhaf values: influences at ``p = 1/2``."""
    return PowerVector(influences(f, 0.5), "banzhaf")


def shapley_sampled(
    oracle: Callable[[np.ndarray], np.ndarray],
    n: int,
    permutations: int,
    seed: int,
) -> PowerVector:
    """Unbiased Shapley estimate from random orderings of the players.

    ``oracle`` maps an int64 array of coalition masks to payoffs. Each
    ordering contributes one marginal contribution per player, and these
    telescope to ``v(N) - v(empty)``, so the estimates satisfy efficiency up
    to the final division by ``permutations``.
    """
    if permutations < 1:
        raise SpecError("permutations must be >= 1")
    total = np.zeros(n)
    total_sq = np.zeros(n)
    bits = np.int64(1) << np.arange(n, dtype=np.int64)
    for j, size in stream_sizes(permutations, 4096):
        rng = stream_rng(seed, j)
        order = rng.permuted(np.tile(np.arange(n), (size, 1)), axis=1)
        masks = np.zeros((size, n + 1), dtype=np.int64)
        np.cumsum(bits[order], axis=1, out=masks[:, 1:])
        vals = np.asarray(oracle(masks), dtype=np.float64).reshape(size, n + 1)
        contrib = np.empty((size, n))
        np.put_along_axis(contrib, order, np.diff(vals, axis=1), axis=1)
        total += contrib.sum(axis=0)
        total_sq += (contrib * contrib).sum(axis=0)
    est = total / permutations
    if permutations > 1:
        var = np.maximum(total_sq - permutations * est * est, 0.0) / (permutations - 1)
        se = np.sqrt(var / permutations)
    else:
        se = np.zeros(n)
    return PowerVector(
        est,
        "permutation_sampled",
        stderr=se,
        info={"permutations": int(permutations), "seed": int(seed), "contribution_sums": total},
    )


# ----------------------------------------------------------------------
# axioms


def null_players(g: GameFunction) -> list[int]:
    out = []
    for i in range(1, g.n + 1):
        v0, v1 = split_coordinate(g.payoff, i)
        if np.array_equal(v0, v1):
            out.append(i)
    return out


def interchangeable_pairs(g: GameFunction) -> list[tuple[int, int]]:
    """Pairs ``(i, j)`` with ``v(S + i) = v(S + j)`` whenever ``i, j`` are not in ``S``."""
    n = g.n
    s = np.arange(1 << n)
    out = []
    for i, j in combinations(range(n), 2):
        free = s[((s >> i) & 1 == 0) & ((s >> j) & 1 == 0)]
        if np.array_equal(g.payoff[free | (1 << i)], g.payoff[free | (1 << j)]):
            out.append((i + 1, j + 1))
    return out


@dataclass
class AxiomReport:
    deviations: dict
    null_players: list
    symmetric_pairs: list

    def holds(self, tol: float = 1e-9) -> bool:
        return all(v <= tol for v in self.deviations.values())


def verify_shapley_axioms(
    g1: GameFunction | BooleanFunction,
    g2: GameFunction | BooleanFunction,
    a: float = 1.0,
    b: Sequence[float] | None = None,
) -> AxiomReport:
    """Maximum deviation from each Shapley axiom on ``g1``, ``g2`` and their combinations.

    Checks efficiency on both games, additivity on ``g1 + g2``, the
    null-player and symmetry axioms on every detected null player or
    interchangeable pair of ``g1``, and covariance under
    ``g(S) = a g1(S) + sum_{i in S} b_i``.
    """
    if isinstance(g1, BooleanFunction):
        g1 = g1.to_game()
    if isinstance(g2, BooleanFunction):
        g2 = g2.to_game()
    if g1.n != g2.n:
        raise SpecError("games must have the same number of players")
    b = np.zeros(g1.n) if b is None else np.asarray(b, dtype=np.float64)
    psi1 = shapley_exact(g1).values
    psi2 = shapley_exact(g2).values
    dev = {
        "efficiency": max(
            abs(math.fsum(psi1.tolist()) - g1.payoff[-1]),
            abs(math.fsum(psi2.tolist()) - g2.payoff[-1]),
        ),
        "additivity": float(np.max(np.abs(shapley_exact(g1 + g2).values - (psi1 + psi2)), initial=0.0)),
        "affine": float(
            np.max(np.abs(shapley_exact(g1.affine(a, b)).values - (a * psi1 + b)), initial=0.0)
        ),
    }
    nulls = null_players(g1)
    pairs = interchangeable_pairs(g1)
    dev["null_player"] = max((abs(psi1[i - 1]) for i in nulls), default=0.0)
    dev["symmetry"] = max((abs(psi1[i - 1] - psi1[j - 1]) for i, j in pairs), default=0.0)
    return AxiomReport({k: float(v) for k, v in dev.items()}, nulls, pairs)
