"""Boolean functions, cooperative games and the example-function generators.

Bit convention: coordinate ``i`` (1-based) occupies bit ``i - 1`` of an
input index, so ``x = sum(x_i * 2**(i-1))``. Coalitions of a game use the
same bitmask encoding. Subsets ``S`` indexing Fourier coefficients follow it
too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .exceptions import SizeError, SpecError

MAX_EXACT_N = 24
MAX_GAME_N = 20

KINDS = (
    "truth_table",
    "constant",
    "majority",
    "dictator",
    "and",
    "or",
    "parity",
    "tribes",
    "judge",
    "judge_or_tribes",
    "weighted_majority",
)


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """Hamming weights of ``0 .. 2**n - 1`` as a read-only uint8 array."""
    x = np.arange(1 << n, dtype=np.uint32)
    pc = np.bitwise_count(x).astype(np.uint8)
    pc.setflags(write=False)
    return pc


def _check_n(n: int, cap: int = MAX_EXACT_N) -> None:
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise SpecError(f"n must be a non-negative integer, got {n!r}")
    if n > cap:
        raise SizeError(f"n={n} exceeds the exact-mode cap of {cap}")


def split_coordinate(values: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Return views ``(v[x], v[x | e_i])`` over all ``x`` with ``x_i = 0``.

    ``i`` is 1-based. Both outputs are ordered by increasing ``x`` and have
    shape ``(2**(n-1),)`` once flattened; they are returned as 2-D views of
    shape ``(2**(n-i), 2**(i-1))`` to avoid copies.
    """
    block = 1 << (i - 1)
    v = values.reshape(-1, 2, block)
    return v[:, 0, :], v[:, 1, :]


class BooleanFunction:
    """Truth table of a function ``{0,1}^n -> {0,1}`` with cached counts.

    Parameters
    ----------
    n : int
        Number of coordinates, at most 24.
    table : array-like
        Length ``2**n``; entry ``x`` is ``f(x)``.
    name : str, optional
        Label used in reports.

    The per-layer counts ``N_k`` and the pivot counts ``P[i, k]`` drive all
    polynomial-in-``p`` evaluations. They are computed once on first use in
    O(n 2^n) and never change, since the table is read-only.
    """

    def __init__(self, n: int, table: Any, name: str | None = None):
        _check_n(n)
        arr = np.asarray(table)
        if arr.shape != (1 << n,):
            raise SpecError(f"truth table must have length 2**{n}, got shape {arr.shape}")
        if arr.dtype != bool:
            if not np.isin(arr, (0, 1)).all():
                raise SpecError("truth table entries must be 0 or 1")
            arr = arr.astype(bool)
        else:
            arr = arr.copy()
        arr.setflags(write=False)
        self.n = int(n)
        self._table = arr
        self.name = name or f"f{n}"

    def __repr__(self) -> str:
        return f"BooleanFunction(n={self.n}, name={self.name!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._table, other._table))

    def __hash__(self) -> int:
        return hash((self.n, self._table.tobytes()))

    @property
    def table(self) -> np.ndarray:
        return self._table

    def values(self) -> np.ndarray:
        """Point values as float64 (a fresh array)."""
        return self._table.astype(np.float64)

    def __call__(self, x):
        """Vectorised evaluation; ``x`` is an int or an integer array of masks."""
        return self._table[x].astype(np.int8) if np.ndim(x) else int(self._table[x])

    def evaluate(self, x: int) -> int:
        if not 0 <= x < (1 << self.n):
            raise SpecError(f"input {x} out of range for n={self.n}")
        return int(self._table[x])

    @property
    def ones(self) -> int:
        return int(np.count_nonzero(self._table))

    @cached_property
    def layer_counts(self) -> np.ndarray:
        """``N_k = #{x : |x| = k, f(x) = 1}`` for ``k = 0..n``."""
        return np.bincount(popcounts(self.n)[self._table], minlength=self.n + 1).astype(np.int64)

    def _pivot_tables(self):
        n = self.n
        pc = popcounts(n)
        up = np.zeros((n, n), dtype=np.int64)
        down = np.zeros((n, n), dtype=np.int64)
        for i in range(1, n + 1):
            t0, t1 = split_coordinate(self._table, i)
            w0, _ = split_coordinate(pc, i)
            up[i - 1] = np.bincount(w0[t1 & ~t0], minlength=n)
            down[i - 1] = np.bincount(w0[t0 & ~t1], minlength=n)
        return up + down, up - down

    @cached_property
    def _pivots(self):
        return self._pivot_tables()

    @property
    def pivot_counts(self) -> np.ndarray:
        """``P[i-1, k] = #{x : x_i = 0, |x| = k, f(x) != f(x ^ e_i)}``."""
        return self._pivots[0]

    @property
    def signed_pivot_counts(self) -> np.ndarray:
        """``M[i-1, k] = sum over x_i = 0, |x| = k of f(x | e_i) - f(x)``.

        Coincides with :attr:`pivot_counts` when ``f`` is monotone.
        """
        return self._pivots[1]

    def audit(self) -> bool:
        """Recompute the cached counts by brute force and compare."""
        n = self.n
        layers = np.zeros(n + 1, dtype=np.int64)
        piv = np.zeros((n, n), dtype=np.int64)
        tab = self._table
        for x in range(1 << n):
            k = x.bit_count()
            if tab[x]:
                layers[k] += 1
            for i in range(n):
                if not (x >> i) & 1 and tab[x] != tab[x | (1 << i)]:
                    piv[i, k] += 1
        ok = np.array_equal(layers, self.layer_counts) and np.array_equal(piv, self.pivot_counts)
        ok = ok and int(layers.sum()) == self.ones
        return ok and all(0 <= layers[k] <= math.comb(n, k) for k in range(n + 1))

    def is_monotone(self) -> bool:
        for i in range(1, self.n + 1):
            t0, t1 = split_coordinate(self._table, i)
            if np.any(t0 & ~t1):
                return False
        return True

    def is_constant(self) -> bool:
        return self.ones in (0, 1 << self.n)

    def dualize(self) -> "BooleanFunction":
        """``g(x) = f(complement of x)``; the table reversed."""
        return BooleanFunction(self.n, self._table[::-1], name=f"dual({self.name})")

    def complement(self) -> "BooleanFunction":
        return BooleanFunction(self.n, ~self._table, name=f"not({self.name})")

    def is_odd_rule(self) -> bool:
        """True iff ``f(1 - x) = 1 - f(x)`` for every ``x``."""
        return bool(np.all(self._table[::-1] != self._table))

    def null_players(self) -> list[int]:
        return [i + 1 for i in range(self.n) if not self.pivot_counts[i].any()]

    def to_hex(self) -> str:
        """Table as lowercase hex of ``sum f(x) 2**x`` (bit 0 = input 0)."""
        packed = np.packbits(self._table, bitorder="little").tobytes()
        return format(int.from_bytes(packed, "little"), "x")

    @classmethod
    def from_hex(cls, n: int, text: str, name: str | None = None) -> "BooleanFunction":
        _check_n(n)
        try:
            value = int(text, 16)
        except (TypeError, ValueError) as exc:
            raise SpecError(f"invalid hex truth table {text!r}") from exc
        size = 1 << n
        if value < 0 or value.bit_length() > size:
            raise SpecError(f"hex truth table has more than 2**{n} bits")
        raw = np.frombuffer(value.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[:size].astype(bool)
        return cls(n, bits, name=name)

    def extend(self, n: int) -> "BooleanFunction":
        """The same function viewed on ``n >= self.n`` coordinates (extra ones are null)."""
        if n < self.n:
            raise SpecError(f"cannot extend from n={self.n} down to n={n}")
        return BooleanFunction(n, np.tile(self._table, 1 << (n - self.n)), name=f"{self.name}_on_{n}")

    def to_game(self) -> "GameFunction":
        return GameFunction(self.n, self.values(), name=self.name)


class GameFunction:
    """Cooperative game: a real payoff for each coalition bitmask, with ``v(empty) = 0``."""

    def __init__(self, n: int, payoff: Any, name: str | None = None):
        _check_n(n, MAX_GAME_N)
        if isinstance(payoff, Mapping):
            arr = np.zeros(1 << n)
            for key, val in payoff.items():
                arr[_coalition_mask(key)] = val
        elif callable(payoff):
            arr = np.array([payoff(s) for s in range(1 << n)], dtype=np.float64)
        else:
            arr = np.array(payoff, dtype=np.float64)
        if arr.shape != (1 << n,):
            raise SpecError(f"payoff must have 2**{n} entries, got shape {arr.shape}")
        if arr[0] != 0:
            raise SpecError(f"payoff of the empty coalition must be 0, got {arr[0]}")
        arr.setflags(write=False)
        self.n = int(n)
        self.payoff = arr
        self.name = name or f"game{n}"

    def __repr__(self) -> str:
        return f"GameFunction(n={self.n}, name={self.name!r})"

    def __call__(self, s):
        return self.payoff[s]

    def __add__(self, other: "GameFunction") -> "GameFunction":
        if other.n != self.n:
            raise SpecError("games must have the same number of players")
        return GameFunction(self.n, self.payoff + other.payoff)

    def affine(self, a: float, b: Sequence[float]) -> "GameFunction":
        """``g(S) = a v(S) + sum_{i in S} b_i``."""
        b = np.asarray(b, dtype=np.float64)
        if b.shape != (self.n,):
            raise SpecError(f"b must have length {self.n}")
        s = np.arange(1 << self.n)
        bits = (s[:, None] >> np.arange(self.n)) & 1
        return GameFunction(self.n, a * self.payoff + bits @ b)


def _coalition_mask(key) -> int:
    if isinstance(key, (int, np.integer)):
        return int(key)
    # iterable of 1-based players
    mask = 0
    for i in key:
        mask |= 1 << (int(i) - 1)
    return mask


# ----------------------------------------------------------------------
# generators


def _cube(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def constant(n: int, value: int = 1) -> BooleanFunction:
    _check_n(n)
    return BooleanFunction(n, np.full(1 << n, bool(value)), name=f"const{int(bool(value))}_{n}")


def majority(n: int) -> BooleanFunction:
    """Strict majority ``|x| > n/2``. Even ``n`` is allowed here (ties map to 0)."""
    _check_n(n)
    if n < 1:
        raise SpecError("majority needs n >= 1")
    return BooleanFunction(n, 2 * popcounts(n).astype(np.int64) > n, name=f"majority_{n}")


def dictator(n: int, k: int = 1) -> BooleanFunction:
    _check_n(n)
    if not 1 <= k <= n:
        raise SpecError(f"dictator coordinate {k} out of range 1..{n}")
    return BooleanFunction(n, (_cube(n) >> (k - 1)) & 1, name=f"dictator_{k}_of_{n}")


def and_(n: int) -> BooleanFunction:
    _check_n(n)
    table = np.zeros(1 << n, dtype=bool)
    table[-1] = True
    return BooleanFunction(n, table, name=f"and_{n}")


def or_(n: int) -> BooleanFunction:
    _check_n(n)
    table = np.ones(1 << n, dtype=bool)
    table[0] = False
    return BooleanFunction(n, table, name=f"or_{n}")


def parity(n: int) -> BooleanFunction:
    _check_n(n)
    return BooleanFunction(n, popcounts(n) & 1, name=f"parity_{n}")


def _tribes_table(m: int, w: int) -> np.ndarray:
    n = m * w
    x = _cube(n)
    out = np.zeros(1 << n, dtype=bool)
    full = (1 << w) - 1
    for j in range(m):
        mask = full << (j * w)
        out |= (x & mask) == mask
    return out


def tribes(m: int, w: int) -> BooleanFunction:
    """OR over ``m`` disjoint blocks of the AND of their ``w`` coordinates.

    Tribe ``j`` (0-based) holds coordinates ``j*w + 1 .. (j+1)*w``.
    """
    if m < 1 or w < 1:
        raise SpecError("tribes needs m >= 1 and w >= 1")
    _check_n(m * w)
    return BooleanFunction(m * w, _tribes_table(m, w), name=f"tribes_{m}x{w}")


def suggest_tribe_width(n: int) -> int:
    """Desk-scale width ``round(log2 n - log2 log2 n)``; a convenience only."""
    if n < 4:
        return 1
    return max(1, round(math.log2(n) - math.log2(math.log2(n))))


def judge(n: int, g: int) -> BooleanFunction:
    """Majority unless the vote gap ``|2|x| - n|`` is below ``g``, then voter 1 decides."""
    _check_n(n)
    if n < 1:
        raise SpecError("judge needs n >= 1")
    if not 0 <= g <= n:
        raise SpecError(f"judge gap must satisfy 0 <= g <= n, got g={g}")
    w = popcounts(n).astype(np.int64)
    gap = np.abs(2 * w - n)
    x1 = (_cube(n) & 1).astype(bool)
    table = np.where(gap >= g, 2 * w > n, x1)
    return BooleanFunction(n, table, name=f"judge_{n}_g{g}")


def judge_or_tribes(n: int, delta: float, m: int, w: int) -> BooleanFunction:
    """``(x_1 = 1 and |x| > (1/2 + delta) n)`` or ``tribes(m, w)(x)``, with ``m*w = n``."""
    _check_n(n)
    if m * w != n:
        raise SpecError(f"judge_or_tribes needs m*w == n, got {m}*{w} != {n}")
    if not 0 <= delta <= 0.5:
        raise SpecError(f"delta must lie in [0, 1/2], got {delta}")
    w_x = popcounts(n).astype(np.float64)
    x1 = (_cube(n) & 1).astype(bool)
    table = (x1 & (w_x > (0.5 + delta) * n)) | _tribes_table(m, w)
    return BooleanFunction(n, table, name=f"judge_or_tribes_{n}")


def weighted_majority(weights: Sequence[float], quota: float) -> BooleanFunction:
    """Weighted voting game: ``f(x) = 1`` iff the weight of ``{i : x_i = 1}`` reaches ``quota``."""
    w = np.asarray(weights, dtype=np.float64)
    n = len(w)
    _check_n(n)
    if n < 1 or np.any(w < 0):
        raise SpecError("weighted_majority needs at least one non-negative weight")
    bits = (_cube(n)[:, None] >> np.arange(n)) & 1
    return BooleanFunction(n, bits @ w >= quota, name=f"weighted_majority_{n}")


# ----------------------------------------------------------------------
# specifications


@dataclass(frozen=True)
class FunctionSpec:
    """Declarative description of a Boolean function, serialisable as JSON.

    ``params`` holds the kind-specific fields, e.g. ``{"m": 2, "w": 2}`` for
    tribes or ``{"n": 3, "table": "e8"}`` for a truth table.
    """

    kind: str
    params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "FunctionSpec":
        if not isinstance(data, Mapping) or "kind" not in data:
            raise SpecError("function spec must be an object with a 'kind' field")
        params = {k: v for k, v in data.items() if k != "kind"}
        spec = cls(str(data["kind"]), params)
        spec.validate()
        return spec

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}

    def _get(self, key, default=None, required=True):
        if key in self.params:
            return self.params[key]
        if required and default is None:
            raise SpecError(f"{self.kind} spec is missing field {key!r}")
        return default

    def _int(self, key, default=None):
        v = self._get(key, default)
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise SpecError(f"field {key!r} must be an integer, got {v!r}")
        return int(v)

    def validate(self) -> None:
        kind = self.kind
        if kind not in KINDS:
            raise SpecError(f"unknown function kind {kind!r}; expected one of {', '.join(KINDS)}")
        if kind == "tribes":
            m, w = self._int("m"), self._int("w")
            if "n" in self.params and self._int("n") != m * w:
                raise SpecError("tribes requires m*w == n")
            if m < 1 or w < 1:
                raise SpecError("tribes needs m >= 1 and w >= 1")
            _check_n(m * w)
            return
        if kind == "weighted_majority":
            weights = self._get("weights")
            if not isinstance(weights, list) or not weights:
                raise SpecError("weighted_majority needs a non-empty 'weights' list")
            self._get("quota")
            _check_n(len(weights))
            return
        n = self._int("n")
        _check_n(n)
        if kind == "majority" and n % 2 == 0:
            raise SpecError("majority requires odd n")
        if kind == "judge":
            g = self._int("g")
            if not 0 <= g <= n:
                raise SpecError("judge gap must satisfy 0 <= g <= n")
        if kind == "judge_or_tribes":
            m, w = self._int("m"), self._int("w")
            if m * w != n:
                raise SpecError("judge_or_tribes requires m*w == n")
            float(self._get("delta"))
        if kind == "dictator":
            k = self._int("k", 1)
            if not 1 <= k <= n:
                raise SpecError("dictator coordinate out of range")
        if kind == "truth_table":
            self._get("table")

    def build(self) -> BooleanFunction:
        return build(self)


_BUILDERS: dict[str, Callable[[FunctionSpec], BooleanFunction]] = {
    "truth_table": lambda s: BooleanFunction.from_hex(s._int("n"), str(s._get("table"))),
    "constant": lambda s: constant(s._int("n"), s._int("value", 1)),
    "majority": lambda s: majority(s._int("n")),
    "dictator": lambda s: dictator(s._int("n"), s._int("k", 1)),
    "and": lambda s: and_(s._int("n")),
    "or": lambda s: or_(s._int("n")),
    "parity": lambda s: parity(s._int("n")),
    "tribes": lambda s: tribes(s._int("m"), s._int("w")),
    "judge": lambda s: judge(s._int("n"), s._int("g")),
    "judge_or_tribes": lambda s: judge_or_tribes(
        s._int("n"), float(s._get("delta")), s._int("m"), s._int("w")
    ),
    "weighted_majority": lambda s: weighted_majority(s._get("weights"), float(s._get("quota"))),
}


def build(spec: FunctionSpec | Mapping[str, Any]) -> BooleanFunction:
    """Build the truth table described by ``spec`` (a FunctionSpec or its dict form)."""
    if not isinstance(spec, FunctionSpec):
        spec = FunctionSpec.from_dict(spec)
    else:
        spec.validate()
    return _BUILDERS[spec.kind](spec)


def builtin_zoo() -> dict[str, BooleanFunction]:
    """The example functions used by sweeps and acceptance checks (all n <= 16)."""
    fs = [
        dictator(4, 1),
        dictator(1, 1),
        and_(2),
        and_(4),
        or_(2),
        or_(3),
        parity(3),
        majority(3),
        majority(5),
        majority(9),
        tribes(2, 2),
        tribes(3, 3),
        tribes(4, 4),
        judge(5, 5),
        judge(9, 3),
        judge(15, 7),
        judge_or_tribes(16, 0.1, 4, 4),
        weighted_majority([3, 2, 2, 1, 1], 5),
    ]
    return {f.name: f for f in fs}
