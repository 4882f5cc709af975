"""Invariant sweeps behind ``shapthresh verify``.

A check either must pass (``required=True``, an exact identity or a
theorem) or is reported only (an inequality with an unknown constant).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import bounds
from .functions import GameFunction, builtin_zoo
from .measures import influence, mu, mu_derivative, total_influence
from .noise import NoisePair, apply_direct, apply_spectral, correlation
from .power import shapley_exact, shapley_owen, verify_shapley_axioms
from .social import verify_mcgarvey
from .spectral import RealFunction, fourier_influence, inverse_transform, transform
from .threshold import shapley_interval_bound

SUITES = ("axioms", "spectral", "noise", "bounds", "mcgarvey")


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    required: bool
    value: float | str | None = None
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else ("FAIL" if self.required else "NOTE")
        val = "" if self.value is None else f" value={self.value}"
        return f"{tag} [{self.suite}] {self.name}{val} {self.detail}".rstrip()

    def to_dict(self) -> dict:
        return asdict(self)


def _max(vals) -> float:
    return float(max(vals, default=0.0))


def axioms_suite(seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    zoo = [f for f in builtin_zoo().values() if f.n <= 16]
    cross = _max(np.max(np.abs(shapley_exact(f).values - shapley_owen(f).values)) for f in zoo)
    eff = _max(
        abs(shapley_exact(f).total() - (f.evaluate((1 << f.n) - 1) - f.evaluate(0))) for f in zoo
    )
    out = [
        Check("axioms", "exact_vs_owen_max_dev", cross <= 1e-9, True, cross, "tol=1e-9"),
        Check("axioms", "efficiency_max_dev", eff <= 1e-10, True, eff, "tol=1e-10"),
    ]
    worst = 0.0
    for n in (4, 8):
        for _ in range(3):
            g1 = GameFunction(n, np.r_[0.0, rng.normal(size=(1 << n) - 1)])
            g2 = GameFunction(n, np.r_[0.0, rng.normal(size=(1 << n) - 1)])
            rep = verify_shapley_axioms(g1, g2, a=float(rng.normal()), b=rng.normal(size=n))
            worst = max(worst, max(rep.deviations.values()))
    for f in zoo:
        if f.n <= 10:
            rep = verify_shapley_axioms(f, f, a=2.0, b=np.eye(f.n)[0])
            worst = max(worst, max(rep.deviations.values()))
    out.append(Check("axioms", "axiom_max_dev", worst <= 1e-9, True, worst, "tol=1e-9"))
    return out


def spectral_suite(seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    rt = pars = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 13))
        f = bounds.random_boolean(rng, n)
        for p in (0.1, 0.5, 0.9):
            spec = transform(f, p)
            rt = max(rt, float(np.max(np.abs(inverse_transform(spec).values - f.values()))))
            pars = max(pars, abs(spec.weight() - mu(f, p)))
    inf_dev = 0.0
    for f in builtin_zoo().values():
        if f.n > 12:
            continue
        for p in (0.2, 0.5, 0.8):
            spec = transform(f, p)
            for i in range(1, f.n + 1):
                inf_dev = max(inf_dev, abs(fourier_influence(spec, i) - p * (1 - p) * influence(f, i, p)))
    return [
        Check("spectral", "round_trip_max_dev", rt <= 1e-10, True, rt, "tol=1e-10"),
        Check("spectral", "parseval_max_dev", pars <= 1e-10, True, pars, "tol=1e-10"),
        Check("spectral", "fourier_influence_max_dev", inf_dev <= 1e-10, True, inf_dev, "tol=1e-10"),
    ]


def noise_suite(seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    pairs = [NoisePair(0.2, 0.5), NoisePair(0.3, 0.7), NoisePair(0.49, 0.51)]
    dev = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 11))
        f = RealFunction(n, rng.normal(size=1 << n))
        for pr in pairs:
            dev = max(dev, float(np.max(np.abs(apply_direct(f, pr).values - apply_spectral(f, pr).values))))
    ident = 0.0
    for f in builtin_zoo().values():
        if not f.is_monotone():
            continue
        for pr in pairs + [NoisePair(0.1, 0.9), NoisePair(0.4, 0.6)]:
            ident = max(ident, abs(correlation(f, f, pr) - mu(f, pr.p)))
    return [
        Check("noise", "direct_vs_spectral_max_dev", dev <= 1e-10, True, dev, "tol=1e-10"),
        Check("noise", "monotone_identity_max_dev", ident <= 1e-10, True, ident, "tol=1e-10"),
    ]


def bounds_suite(seed: int) -> list[Check]:
    hyp = bounds.hypercontractivity_sweep(seed)
    kkl = bounds.kkl_derivative_sweep(seed)
    corr = bounds.correlation_sweep()
    primal = [r for r in corr if r.variant == "primal"]
    out = [
        Check("bounds", "hypercontractivity_violations", all(r.holds for r in hyp), True,
              sum(not r.holds for r in hyp), f"instances={len(hyp)}"),
        Check("bounds", "derivative_bound_violations", all(r.holds for r in kkl), True,
              sum(not r.holds for r in kkl), f"instances={len(kkl)}"),
        Check("bounds", "correlation_lemma_implication", all(r.implication_holds for r in primal), True,
              sum(not r.implication_holds for r in primal),
              f"hypothesis_true={sum(r.hypothesis_holds for r in primal)}/{len(primal)}"),
    ]
    zoo = [f for f in builtin_zoo().values() if f.is_monotone() and not f.is_constant()]
    worst = math.inf
    for f in zoo:
        for eps in (0.05, 0.1, 0.2):
            worst = min(worst, shapley_interval_bound(f, eps).slack)
    out.append(Check("bounds", "shapley_interval_bound_min_slack", worst >= -1e-9, True, worst, "psi_i <= 2eps + length"))
    russo = 0.0
    for f in zoo:
        for k in range(1, 100):
            p = k / 100
            russo = max(russo, abs(mu_derivative(f, p) - total_influence(f, p)))
    out.append(Check("bounds", "russo_max_dev", russo <= 1e-9, True, russo, "tol=1e-9"))
    consts = [bounds.kkl_max_influence_check(f).parameters["empirical_constant"] for f in zoo]
    consts = [c for c in consts if c is not None]
    out.append(Check("bounds", "kkl_min_empirical_constant", True, False, min(consts), "reported only"))
    return out


def mcgarvey_suite(seed: int) -> list[Check]:
    out = []
    for m in (2, 3, 4):
        ok, total = verify_mcgarvey(m)
        out.append(Check("mcgarvey", f"m={m}", ok == total, True, None, f"{ok}/{total} tournaments realized (m={m})"))
    return out


_RUNNERS = {
    "axioms": axioms_suite,
    "spectral": spectral_suite,
    "noise": noise_suite,
    "bounds": bounds_suite,
    "mcgarvey": mcgarvey_suite,
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    names = SUITES if name == "all" else (name,)
    out = []
    for s in names:
        out.extend(_RUNNERS[s](seed))
    return out
