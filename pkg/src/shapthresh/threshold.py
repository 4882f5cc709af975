"""Critical probabilities, threshold intervals and the Shapley/Banzhaf reports.

The reports compare measured quantities with the threshold bounds, whose
absolute constants are not known. They therefore record the constant that
would make each bound tight instead of passing or failing against a guess.
The one exact inequality, ``psi_i <= 2 eps + (p_{1-eps} - p_eps)``, is
checked by :func:`shapley_interval_bound`.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq

from .exceptions import DomainError, SpecError
from .functions import BooleanFunction, MAX_GAME_N
from .measures import bernstein, influences, mu
from .power import PowerVector, banzhaf, shapley_exact, shapley_owen

P_TOL = 1e-12
DEFAULT_GRID = 101


def _require_threshold_domain(f: BooleanFunction) -> None:
    if f.is_constant():
        raise DomainError(f"{f.name} is constant; it has no critical probabilities")
    if not f.is_monotone():
        raise DomainError(f"{f.name} is not monotone; critical probabilities need not be unique")


def p_alpha(f: BooleanFunction, alpha: float) -> float:
    """The bias ``p`` with ``mu_p(f) = alpha``, to absolute tolerance 1e-12 in ``p``.

    ``mu_p`` is strictly increasing for monotone non-constant ``f`` and runs
    from 0 to 1 on ``[0, 1]``, so the bracket always contains the unique root.
    """
    if not 0.0 < alpha < 1.0:
        raise SpecError(f"alpha must lie in (0, 1), got {alpha}")
    _require_threshold_domain(f)
    counts, n = f.layer_counts, f.n
    return float(
        brentq(lambda p: bernstein(counts, n, p) - alpha, 0.0, 1.0, xtol=P_TOL / 4, maxiter=500)
    )


def shapley_values(f: BooleanFunction) -> PowerVector:
    return shapley_exact(f) if f.n <= MAX_GAME_N else shapley_owen(f)


@dataclass
class GridRow:
    p: float
    max_influence: float
    argmax: int
    total_influence: float


@dataclass
class ThresholdReport:
    function: str
    n: int
    epsilon: float
    p_lo: float
    p_hi: float
    length: float
    s: float
    grid_size: int
    grid: list = field(default_factory=list)
    witness_set: list = field(default_factory=list)
    min_max_influence: float = float("nan")
    empirical_exponent: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "max_influence", "argmax", "total_influence"])
        for r in self.grid:
            w.writerow([_g17(r.p), _g17(r.max_influence), r.argmax, _g17(r.total_influence)])
        return buf.getvalue()


def _g17(x: float) -> str:
    return format(x, ".17g")


def influence_grid(f: BooleanFunction, a: float, b: float, grid_size: int) -> list[GridRow]:
    rows = []
    for p in np.linspace(a, b, grid_size):
        inf = influences(f, float(p))
        k = int(np.argmax(inf))
        rows.append(GridRow(float(p), float(inf[k]), k + 1, math.fsum(inf.tolist())))
    return rows


def threshold_interval(f: BooleanFunction, epsilon: float, grid_size: int = DEFAULT_GRID) -> ThresholdReport:
    """The ``epsilon``-threshold interval ``[p_eps, p_{1-eps}]`` with an influence profile.

    Each grid row holds the largest influence, its coordinate, and the total
    influence. ``witness_set`` collects the argmax coordinates, and
    ``empirical_exponent`` is the ``c`` solving
    ``min_grid max_i I_i^p = eps ** (c s)``.
    """
    if not 0.0 < epsilon < 0.5:
        raise SpecError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    if grid_size < 2:
        raise SpecError("grid_size must be >= 2")
    lo = p_alpha(f, epsilon)
    hi = p_alpha(f, 1.0 - epsilon)
    length = hi - lo
    grid = influence_grid(f, lo, hi, grid_size)
    min_max = min(r.max_influence for r in grid)
    s = 1.0 / length
    exponent = math.log(min_max) / (s * math.log(epsilon)) if min_max > 0 else None
    return ThresholdReport(
        function=f.name,
        n=f.n,
        epsilon=float(epsilon),
        p_lo=lo,
        p_hi=hi,
        length=length,
        s=s,
        grid_size=int(grid_size),
        grid=grid,
        witness_set=sorted({r.argmax for r in grid}),
        min_max_influence=min_max,
        empirical_exponent=exponent,
    )


def influence_profile_scan(f: BooleanFunction, epsilon: float, grid_size: int = DEFAULT_GRID) -> ThresholdReport:
    return threshold_interval(f, epsilon, grid_size)


@dataclass
class LowInfluencePoint:
    p: float
    total_influence: float
    bound: float
    within_bound: bool


def low_influence_point(f: BooleanFunction, a: float, b: float, grid_size: int = DEFAULT_GRID) -> LowInfluencePoint:
    """Grid point of ``[a, b]`` with the smallest total influence.

    By Russo's lemma the mean of ``I^p`` over ``[a, b]`` is the increase of
    ``mu_p`` divided by ``b - a``, so some point has ``I^p <= 1/(b - a)``.
    The report compares against the looser ``6/(b - a)``.
    """
    if not 0.0 < a < b < 1.0:
        raise SpecError(f"need 0 < a < b < 1, got a={a}, b={b}")
    rows = influence_grid(f, a, b, grid_size)
    best = min(rows, key=lambda r: r.total_influence)
    bound = 6.0 / (b - a)
    return LowInfluencePoint(best.p, best.total_influence, bound, best.total_influence <= bound)


@dataclass
class ShapleyIntervalReport:
    function: str
    epsilon: float
    length: float
    max_shapley: float
    argmax_shapley: int
    vacuous: bool
    ratio: float | None
    witness_shapley_sum: float
    witness_lower_bound: float
    witness_inequality_holds: bool

    def to_dict(self) -> dict:
        return asdict(self)


def shapley_interval_report(
    f: BooleanFunction, epsilon: float, grid_size: int = DEFAULT_GRID, report: ThresholdReport | None = None
) -> ShapleyIntervalReport:
    """Interval length against the largest Shapley value ``t``.

    ``ratio = length * log(1/t) / log(1/eps)`` is the constant that would make
    ``length <= C log(1/eps) / log(1/t)`` tight. When ``t = 1`` the bound is
    vacuous and ``ratio`` is ``None``. The report also checks
    ``sum_{i in witness set} psi_i >= length * min_grid max_i I_i^p``.
    """
    rep = report or threshold_interval(f, epsilon, grid_size)
    psi = shapley_values(f)
    t = float(psi.values.max())
    vacuous = t >= 1.0
    ratio = None if vacuous else rep.length * math.log(1.0 / t) / math.log(1.0 / epsilon)
    wsum = math.fsum(psi.values[i - 1] for i in rep.witness_set)
    lower = rep.length * rep.min_max_influence
    return ShapleyIntervalReport(
        function=f.name,
        epsilon=float(epsilon),
        length=rep.length,
        max_shapley=t,
        argmax_shapley=psi.argmax(),
        vacuous=vacuous,
        ratio=ratio,
        witness_shapley_sum=wsum,
        witness_lower_bound=lower,
        witness_inequality_holds=bool(wsum >= lower - 1e-9),
    )


@dataclass
class BanzhafShapleyReport:
    function: str
    epsilon: float
    mu_half: float
    max_banzhaf: float
    argmax_banzhaf: int
    max_shapley: float
    argmax_shapley: int
    vacuous: bool
    loglog_bound: float | None
    epsilon_bound: float | None
    empirical_constant: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def banzhaf_shapley_report(f: BooleanFunction, epsilon: float) -> BanzhafShapleyReport:
    """Largest Banzhaf value ``t`` against the largest Shapley value.

    Both candidate bounds ``log log(1/t) / log(1/t)`` and
    ``log(1/eps) / log(1/t)`` are reported with constant 1 (natural logs),
    together with the constant that would make the larger one tight. A
    bound whose logarithm is not positive is reported as ``None``.
    """
    if not 0.0 < epsilon < 0.5:
        raise SpecError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    m = mu(f, 0.5)
    if not epsilon <= m <= 1.0 - epsilon:
        raise DomainError(f"need eps <= mu_1/2(f) <= 1 - eps, got mu_1/2 = {m} with eps = {epsilon}")
    b = banzhaf(f)
    psi = shapley_values(f)
    t = float(b.values.max())
    L = math.log(1.0 / t) if t > 0 else math.inf
    vacuous = L <= 0
    loglog = eps_bound = const = None
    if not vacuous:
        eps_bound = math.log(1.0 / epsilon) / L
        if L > 1.0:
            loglog = math.log(L) / L
        rhs = max(x for x in (loglog, eps_bound) if x is not None)
        const = float(psi.values.max()) / rhs if rhs > 0 else None
    return BanzhafShapleyReport(
        function=f.name,
        epsilon=float(epsilon),
        mu_half=m,
        max_banzhaf=t,
        argmax_banzhaf=b.argmax(),
        max_shapley=float(psi.values.max()),
        argmax_shapley=psi.argmax(),
        vacuous=vacuous,
        loglog_bound=loglog,
        epsilon_bound=eps_bound,
        empirical_constant=const,
    )


@dataclass
class IntervalBoundCheck:
    function: str
    epsilon: float
    max_shapley: float
    rhs: float
    slack: float
    holds: bool


def shapley_interval_bound(f: BooleanFunction, epsilon: float, tol: float = 1e-9) -> IntervalBoundCheck:
    """Exact check of ``max_i psi_i <= 2 eps + (p_{1-eps} - p_eps)``.

    Outside the interval the integral of ``I_i^p`` is at most that of the
    total influence, which is ``eps`` on each side, and inside it
    ``I_i^p <= 1``.
    """
    lo = p_alpha(f, epsilon)
    hi = p_alpha(f, 1.0 - epsilon)
    rhs = 2.0 * epsilon + (hi - lo)
    t = float(shapley_values(f).values.max())
    return IntervalBoundCheck(f.name, float(epsilon), t, rhs, rhs - t, t <= rhs + tol)
