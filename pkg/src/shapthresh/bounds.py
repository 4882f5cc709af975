"""Numerical checkers for the analytic inequalities.

Every checker returns an :class:`InequalityReport` with both sides and all
parameters that entered them (``lambda = min(p, 1-p)``, ``rho``, ``r``...).
Hypercontractivity and the derivative bound are theorems, so a violation
means a bug. The KKL checker involves an unknown constant and only
reports the ratio.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .exceptions import DomainError, SpecError
from .functions import BooleanFunction, builtin_zoo, constant, dictator, majority, tribes, and_, or_
from .measures import influence, influences, mu
from .noise import NoisePair, correlation
from .spectral import FunctionLike, RealFunction, derivative, inverse_transform, lq_norm, transform

HOLD_TOL = 1e-9
DEFAULT_SIMPLIFIED_C = 64.0


@dataclass
class InequalityReport:
    """``lhs <= rhs`` with ``holds`` decided at tolerance 1e-9."""

    name: str
    lhs: float
    rhs: float
    parameters: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return bool(self.lhs <= self.rhs + HOLD_TOL)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        d = asdict(self)
        d["holds"] = self.holds
        d["slack"] = self.slack
        return d


def _lambda(p: float) -> float:
    return min(p, 1.0 - p)


def hypercontractivity_check(f: FunctionLike, p: float, d: int) -> InequalityReport:
    """``||f||_4 <= 3^(d/2) lambda^(-d/4) ||f||_2`` for ``f`` of degree at most ``d``."""
    f = RealFunction.of(f)
    deg = transform(f, p).degree()
    if deg > d:
        raise DomainError(f"function has degree {deg} > {d}")
    lam = _lambda(p)
    factor = 3.0 ** (d / 2) * lam ** (-d / 4)
    return InequalityReport(
        "hypercontractivity",
        lq_norm(f, p, 4),
        factor * lq_norm(f, p, 2),
        {"p": p, "d": d, "lambda": lam, "degree": deg, "factor": factor},
    )


def kkl_derivative_bound_check(f: BooleanFunction, i: int, d: int, p: float, spectrum=None) -> InequalityReport:
    """``||(D_i f)^{<=d}||_2^2 <= 3^d lambda^(-d/2) sqrt(p(1-p)) I_i^p(f)^1.5``.

    ``parameters`` also records the norm identity
    ``||D_i f||_{4/3} = sqrt(p(1-p)) I_i^p(f)^(3/4)`` used in its proof.
    """
    spec = spectrum if spectrum is not None else transform(f, p)
    lam = _lambda(p)
    sigma = math.sqrt(p * (1.0 - p))
    inf = influence(f, i, p)
    d_i = derivative(spec, i)
    lhs = d_i.truncate(d).weight()
    rhs = 3.0**d * lam ** (-d / 2) * sigma * inf**1.5
    norm_lhs = lq_norm(inverse_transform(d_i), p, 4.0 / 3.0)
    norm_rhs = sigma * inf**0.75
    return InequalityReport(
        "kkl_derivative_bound",
        lhs,
        rhs,
        {
            "function": f.name,
            "i": i,
            "d": d,
            "p": p,
            "lambda": lam,
            "influence": inf,
            "norm_identity_lhs": norm_lhs,
            "norm_identity_rhs": norm_rhs,
            "norm_identity_holds": abs(norm_lhs - norm_rhs) <= 1e-10,
        },
    )


def lemma_r(rho: float, lam: float) -> float:
    """``r = max(0, -log_rho(6 rho lambda^(-1/4)))``."""
    if rho >= 1.0:
        return 0.0
    return max(0.0, -math.log(6.0 * rho * lam ** (-0.25)) / math.log(rho))


def _neg_power(x: float, k: float) -> float:
    return math.inf if x <= 0 else x ** (-k)


@dataclass
class CorrelationLemmaReport:
    variant: str
    hypothesis: InequalityReport
    conclusion: InequalityReport
    gap: float

    @property
    def hypothesis_holds(self) -> bool:
        return self.hypothesis.holds if math.isfinite(self.hypothesis.lhs) else False

    @property
    def conclusion_holds(self) -> bool:
        return self.conclusion.holds

    @property
    def implication_holds(self) -> bool:
        return self.conclusion_holds or not self.hypothesis_holds

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "hypothesis": self.hypothesis.to_dict(),
            "conclusion": self.conclusion.to_dict(),
            "gap": self.gap,
            "hypothesis_holds": self.hypothesis_holds,
            "conclusion_holds": self.conclusion_holds,
        }


def correlation_lemma_check(
    f: BooleanFunction,
    g: BooleanFunction,
    p: float,
    q: float,
    epsilon: float,
    variant: str = "primal",
    C: float = DEFAULT_SIMPLIFIED_C,
) -> CorrelationLemmaReport:
    """Hypothesis and conclusion of the noisy-correlation lemmas.

    The conclusion is ``<T^{p->q} f, g> <= mu_p(f) mu_q(g) + epsilon``.
    Hypotheses, with ``Inf_i^q[g] = q(1-q) I_i^q[g]``:

    * ``primal``: ``max_i I_i^p[f] Inf_i^q[g] <= I^p[f]^-5 (eps/2)^(8+8r)``
      with ``lambda = min(p, 1-p)``;
    * ``dual``: the same left side against ``I^q[g]^-5 (eps/2)^(8+8r)`` with
      ``lambda = min(q, 1-q)``. The correlation is evaluated on the
      complemented functions, ``<T^{1-q -> 1-p} g_dual, f_dual>``;
    * ``simplified``: ``max_i I_i^p[f] I_i^p[g] <= min(I^p[f], I^q[g])^-5 eps^(C/(q-p))``.
      The product reading ``(I^p[f] I^q[g])^-5`` is recorded alongside.
    """
    if not p < q:
        raise SpecError(f"correlation lemmas need p < q, got p={p}, q={q}")
    pair = NoisePair(p, q)
    rho = pair.rho
    inf_f_p = influences(f, p)
    inf_g_q = influences(g, q)
    tot_f, tot_g = math.fsum(inf_f_p.tolist()), math.fsum(inf_g_q.tolist())
    mu_f, mu_g = mu(f, p), mu(g, q)
    params = {
        "f": f.name,
        "g": g.name,
        "p": p,
        "q": q,
        "epsilon": epsilon,
        "rho": rho,
        "total_influence_f_p": tot_f,
        "total_influence_g_q": tot_g,
    }
    if variant in ("primal", "dual"):
        lam = _lambda(p) if variant == "primal" else _lambda(q)
        r = lemma_r(rho, lam)
        h_lhs = float(np.max(inf_f_p * q * (1.0 - q) * inf_g_q, initial=0.0))
        base = tot_f if variant == "primal" else tot_g
        h_rhs = _neg_power(base, 5) * (epsilon / 2.0) ** (8.0 + 8.0 * r)
        params.update({"lambda": lam, "r": r})
    elif variant == "simplified":
        inf_g_p = influences(g, p)
        h_lhs = float(np.max(inf_f_p * inf_g_p, initial=0.0))
        tail = epsilon ** (C / (q - p))
        h_rhs = _neg_power(min(tot_f, tot_g), 5) * tail
        params.update({"C": C, "product_reading_rhs": _neg_power(tot_f * tot_g, 5) * tail})
    else:
        raise SpecError(f"unknown variant {variant!r}")
    if variant == "dual":
        corr = correlation(g.dualize(), f.dualize(), NoisePair(1.0 - q, 1.0 - p))
    else:
        corr = correlation(f, g, pair)
    hyp = InequalityReport(f"lemma_{variant}_hypothesis", h_lhs, h_rhs, params)
    concl = InequalityReport(f"lemma_{variant}_conclusion", corr, mu_f * mu_g + epsilon, params)
    return CorrelationLemmaReport(variant, hyp, concl, corr - mu_f * mu_g)


def kkl_max_influence_check(f: BooleanFunction) -> InequalityReport:
    """``t(1-t) log(n) / n`` against ``max_k b_k`` at ``t = mu_1/2(f)``.

    ``empirical_constant = rhs / lhs`` is the constant the inequality would
    need; ``holds`` refers to the constant-1 reading and is informational.
    """
    t = mu(f, 0.5)
    n = f.n
    lhs = t * (1.0 - t) * math.log(n) / n if n > 1 else 0.0
    b = influences(f, 0.5)
    rhs = float(b.max()) if n else 0.0
    const = rhs / lhs if lhs > 0 else None
    return InequalityReport(
        "kkl_max_influence", lhs, rhs, {"function": f.name, "mu": t, "n": n, "empirical_constant": const}
    )


# ----------------------------------------------------------------------
# sweeps


def random_boolean(rng: np.random.Generator, n: int, density: float | None = None) -> BooleanFunction:
    density = rng.random() if density is None else density
    return BooleanFunction(n, rng.random(1 << n) < density, name=f"random_{n}")


def random_monotone(rng: np.random.Generator, n: int, terms: int | None = None) -> BooleanFunction:
    """Monotone DNF with random terms (an up-set generated by random minterms)."""
    terms = terms if terms is not None else int(rng.integers(1, 2 * n + 1))
    x = np.arange(1 << n, dtype=np.int64)
    table = np.zeros(1 << n, dtype=bool)
    for _ in range(terms):
        mask = int((rng.random(n) < 0.5) @ (1 << np.arange(n))) or 1
        table |= (x & mask) == mask
    return BooleanFunction(n, table, name=f"random_monotone_{n}")


def hypercontractivity_sweep(seed: int = 0, count: int = 1000, max_n: int = 10) -> list[InequalityReport]:
    """Degree truncations of random Boolean functions at ``p`` in {0.1, 0.3, 0.5}, ``d`` in {1, 2, 3}."""
    rng = np.random.default_rng(seed)
    out = []
    ps, ds = (0.1, 0.3, 0.5), (1, 2, 3)
    while len(out) < count:
        n = int(rng.integers(2, max_n + 1))
        f = random_boolean(rng, n)
        for p in ps:
            spec = transform(f, p)
            for d in ds:
                out.append(hypercontractivity_check(spec.truncate(d).to_function(), p, d))
    return out[:count]


def kkl_derivative_sweep(seed: int = 0, min_count: int = 1000) -> list[InequalityReport]:
    """Every built-in, then random functions, over all ``i``, ``d`` in {0,1,2}, ``p`` in {0.2, 0.5}."""
    rng = np.random.default_rng(seed)
    fs = list(builtin_zoo().values())
    out = []

    def run(f):
        for p in (0.2, 0.5):
            spec = transform(f, p)
            for i in range(1, f.n + 1):
                for d in (0, 1, 2):
                    out.append(kkl_derivative_bound_check(f, i, d, p, spectrum=spec))

    for f in fs:
        run(f)
    while len(out) < min_count:
        run(random_boolean(rng, int(rng.integers(2, 9))))
    return out


def correlation_sweep_functions() -> list[BooleanFunction]:
    return [
        constant(4, 1),
        constant(4, 0),
        dictator(4, 1),
        dictator(4, 2),
        and_(4),
        or_(4),
        majority(3).extend(4),
        tribes(2, 2),
    ]


def correlation_sweep(
    epsilons=(0.05, 0.3, 0.9, 1.5),
    pairs=((0.2, 0.5), (0.3, 0.7), (0.45, 0.55), (0.1, 0.9)),
    variants=("primal", "dual", "simplified"),
) -> list[CorrelationLemmaReport]:
    fs = correlation_sweep_functions()
    out = []
    for f in fs:
        for g in fs:
            for p, q in pairs:
                for eps in epsilons:
                    for v in variants:
                        out.append(correlation_lemma_check(f, g, p, q, eps, v))
    return out


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "lhs", "rhs", "holds", "slack", "parameters"])
    for r in reports:
        if isinstance(r, CorrelationLemmaReport):
            r = r.conclusion
        w.writerow(
            [r.name, format(r.lhs, ".17g"), format(r.rhs, ".17g"), r.holds, format(r.slack, ".17g"),
             json.dumps(r.parameters, sort_keys=True, default=str)]
        )
    return buf.getvalue()
