"""Pairwise tournaments from voting rules, Condorcet cycles and McGarvey profiles."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Mapping, Sequence

import numpy as np

from .exceptions import SpecError
from .functions import BooleanFunction, majority


@dataclass(frozen=True)
class PreferenceProfile:
    """``rankings[v]`` lists the candidates ``0..m-1`` in voter ``v``'s order, best first."""

    m: int
    rankings: tuple

    def __post_init__(self):
        rankings = tuple(tuple(int(c) for c in r) for r in self.rankings)
        for r in rankings:
            if sorted(r) != list(range(self.m)):
                raise SpecError(f"ranking {r} is not a permutation of 0..{self.m - 1}")
        object.__setattr__(self, "rankings", rankings)

    @classmethod
    def from_rankings(cls, rankings: Sequence[Sequence[int]]) -> "PreferenceProfile":
        rankings = [list(r) for r in rankings]
        if not rankings:
            raise SpecError("a profile needs at least one voter")
        return cls(len(rankings[0]), tuple(rankings))

    @property
    def n(self) -> int:
        return len(self.rankings)

    def positions(self) -> np.ndarray:
        """``pos[v, c]`` is the rank of candidate ``c`` for voter ``v`` (0 = top)."""
        pos = np.empty((self.n, self.m), dtype=np.int64)
        for v, r in enumerate(self.rankings):
            pos[v, list(r)] = np.arange(self.m)
        return pos

    def relabel(self, perm: Sequence[int]) -> "PreferenceProfile":
        """Rename candidate ``c`` to ``perm[c]``."""
        return PreferenceProfile(self.m, tuple(tuple(perm[c] for c in r) for r in self.rankings))

    def to_json(self) -> str:
        return json.dumps([list(r) for r in self.rankings])

    @classmethod
    def from_json(cls, text: str) -> "PreferenceProfile":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid profile JSON: {exc}") from exc
        return cls.from_rankings(data)


@dataclass(frozen=True)
class Tournament:
    """Complete asymmetric relation: ``edges[(a, b)]`` (with ``a < b``) is the winner of the pair."""

    m: int
    edges: Mapping

    def __post_init__(self):
        edges = {}
        for (a, b), w in dict(self.edges).items():
            a, b, w = int(a), int(b), int(w)
            if a > b:
                a, b = b, a
            if w not in (a, b):
                raise SpecError(f"winner {w} of pair ({a}, {b}) is not in the pair")
            edges[(a, b)] = w
        if set(edges) != set(combinations(range(self.m), 2)):
            raise SpecError("a tournament needs exactly one winner for every pair of candidates")
        object.__setattr__(self, "edges", edges)

    def beats(self, a: int, b: int) -> bool:
        key = (min(a, b), max(a, b))
        return self.edges[key] == a

    def arcs(self) -> list[tuple[int, int]]:
        """Directed ``(winner, loser)`` pairs in pair order."""
        return [(w, b if w == a else a) for (a, b), w in sorted(self.edges.items())]

    def is_transitive(self) -> bool:
        return all(
            not (self.beats(a, b) and self.beats(b, c) and self.beats(c, a))
            for a, b, c in product(range(self.m), repeat=3)
            if len({a, b, c}) == 3
        )

    def relabel(self, perm: Sequence[int]) -> "Tournament":
        return Tournament(self.m, {(perm[a], perm[b]): perm[w] for (a, b), w in self.edges.items()})

    def to_text(self) -> str:
        """One ``a>b`` line per arc."""
        return "".join(f"{w}>{l}\n" for w, l in self.arcs())

    @classmethod
    def from_text(cls, m: int, text: str) -> "Tournament":
        edges = {}
        for line in text.split():
            try:
                w, l = map(int, line.split(">"))
            except ValueError as exc:
                raise SpecError(f"bad tournament line {line!r}") from exc
            edges[(w, l)] = w
        return cls(m, edges)

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "Tournament":
        """The transitive tournament of a ranking."""
        pos = {c: k for k, c in enumerate(order)}
        return cls(len(order), {(a, b): (a if pos[a] < pos[b] else b) for a, b in combinations(range(len(order)), 2)})


def pairwise_tournament(profile: PreferenceProfile, rule: BooleanFunction, require_odd: bool = True) -> Tournament:
    """Aggregate ``profile`` pair by pair with ``rule``.

    For the pair ``(a, b)`` voter ``v`` contributes bit ``v+1`` set iff they
    rank ``a`` above ``b``; ``a`` wins iff ``rule`` returns 1. An odd rule
    always yields an asymmetric relation. With ``require_odd=False`` any
    rule is accepted, but every pair must still get exactly one winner
    (e.g. strict majority over an even electorate without ties).
    """
    if rule.n != profile.n:
        raise SpecError(f"rule has {rule.n} variables but the profile has {profile.n} voters")
    if require_odd and not rule.is_odd_rule():
        raise SpecError(f"{rule.name} is not an odd rule; pairwise outcomes may be symmetric")
    pos = profile.positions()
    weights = np.int64(1) << np.arange(profile.n, dtype=np.int64)
    full = (1 << profile.n) - 1
    edges = {}
    for a, b in combinations(range(profile.m), 2):
        x = int(((pos[:, a] < pos[:, b]).astype(np.int64) * weights).sum())
        a_wins, b_wins = rule.evaluate(x), rule.evaluate(full ^ x)
        if a_wins == b_wins:
            raise SpecError(f"rule gives no unique winner for pair ({a}, {b})")
        edges[(a, b)] = a if a_wins else b
    return Tournament(profile.m, edges)


def mcgarvey_construct(target: Tournament) -> PreferenceProfile:
    """A profile of ``2 * C(m, 2)`` voters whose strict-majority tournament is ``target``.

    For each arc ``a -> b`` two voters are added: ``(a, b, rest...)`` and
    ``(reversed(rest)..., a, b)``, with ``rest`` the other candidates in
    increasing order. The pair ranks ``a`` over ``b`` twice and splits every
    other pair evenly, so each arc wins by a margin of exactly 2.
    """
    if target.m < 2:
        raise SpecError("McGarvey construction needs at least 2 candidates")
    rankings = []
    for a, b in target.arcs():
        rest = [c for c in range(target.m) if c not in (a, b)]
        rankings.append([a, b, *rest])
        rankings.append([*reversed(rest), a, b])
    return PreferenceProfile(target.m, tuple(tuple(r) for r in rankings))


def verify_realization(profile: PreferenceProfile, rule: BooleanFunction, target: Tournament, require_odd: bool = True) -> bool:
    try:
        return pairwise_tournament(profile, rule, require_odd=require_odd) == target
    except SpecError:
        return False


def all_tournaments(m: int) -> Iterator[Tournament]:
    pairs = list(combinations(range(m), 2))
    for choice in product((0, 1), repeat=len(pairs)):
        yield Tournament(m, {(a, b): (a, b)[c] for (a, b), c in zip(pairs, choice)})


def verify_mcgarvey(m: int) -> tuple[int, int]:
    """Realize every tournament on ``m`` candidates; returns ``(realized, total)``."""
    ok = total = 0
    rule = majority(m * (m - 1))
    for t in all_tournaments(m):
        total += 1
        ok += verify_realization(mcgarvey_construct(t), rule, t, require_odd=False)
    return ok, total


def condorcet_profile() -> PreferenceProfile:
    """Three voters with cyclic rankings ``(0,1,2), (1,2,0), (2,0,1)``."""
    return PreferenceProfile(3, ((0, 1, 2), (1, 2, 0), (2, 0, 1)))
