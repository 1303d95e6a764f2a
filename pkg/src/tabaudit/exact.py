"""Exact hypergeometric and binomial kernels in rational arithmetic.

Probabilities are computed as :class:`fractions.Fraction` built on Python's
arbitrary-precision integers, so binomial coefficients such as C(1029, 142)
and tails down to 1e-10 carry no rounding error. Conversion to float happens
only at the rendering boundary (``float(Fraction)`` is correctly rounded, so
every rendered value is within half an ulp of the exact one).

Hypergeometric convention: a population of ``population`` shifts contains
``successes`` incident shifts; the suspect works ``draws`` of them and is
observed on ``observed`` incidents. The pmf is::

    C(successes, x) * C(population - successes, draws - x) / C(population, draws)

The one-sided Fisher statistic of a 2x2 table is the upper tail
P(X >= a) of that distribution with population = total, draws = row 1 sum,
successes = column 1 sum. No two-sided variant is provided.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import NamedTuple

from .tables import Table2x2


class SupportError(ValueError):
    """An outcome lies outside the distribution's support."""


@dataclass(frozen=True)
class HypergeomParams:
    """Parameters and observed outcome of a hypergeometric draw."""

    population: int     # total shifts
    draws: int          # suspect's shifts
    successes: int      # total incidents
    observed: int       # incidents on the suspect's shifts

    def __post_init__(self):
        n, r, k, x = self.population, self.draws, self.successes, self.observed
        if n < 0:
            raise ValueError(f"population {n} is negative")
        if not 0 <= r <= n:
            raise ValueError(f"draws {r} outside [0, {n}]")
        if not 0 <= k <= n:
            raise ValueError(f"successes {k} outside [0, {n}]")
        lo, hi = max(0, r + k - n), min(r, k)
        if not lo <= x <= hi:
            raise SupportError(f"observed {x} outside support [{lo}, {hi}]")

    @property
    def support(self) -> range:
        lo = max(0, self.draws + self.successes - self.population)
        return range(lo, min(self.draws, self.successes) + 1)


def _hyper_pmf(population: int, draws: int, successes: int, x: int) -> Fraction:
    return Fraction(
        comb(successes, x) * comb(population - successes, draws - x),
        comb(population, draws),
    )


def hypergeom_pmf(params: HypergeomParams) -> Fraction:
    """Exact probability of the observed outcome."""
    return _hyper_pmf(params.population, params.draws, params.successes, params.observed)


def hypergeom_upper_tail(population: int, draws: int, successes: int, k: int) -> Fraction:
    """P(X >= k) for the hypergeometric; 1 below the support, 0 above it."""
    if not 0 <= draws <= population:
        raise ValueError(f"draws {draws} outside [0, {population}]")
    if not 0 <= successes <= population:
        raise ValueError(f"successes {successes} outside [0, {population}]")
    hi = min(draws, successes)
    if k > hi:
        return Fraction(0)
    return sum(
        (_hyper_pmf(population, draws, successes, x) for x in range(max(k, 0), hi + 1)),
        start=Fraction(0),
    )


def fisher_upper_tail(t: Table2x2) -> Fraction:
    """P(X >= a) under the hypergeometric null with the table's margins fixed."""
    return hypergeom_upper_tail(t.total, t.row1, t.col1, t.a)


@dataclass(frozen=True)
class BinomialParams:
    """Number of draws and an exact rational success probability."""

    draws: int
    rate: Fraction

    def __post_init__(self):
        if self.draws < 0:
            raise ValueError(f"draws {self.draws} is negative")
        rate = Fraction(self.rate)
        if not 0 <= rate <= 1:
            raise ValueError(f"rate {rate} outside [0, 1]")
        object.__setattr__(self, "rate", rate)


def binomial_pmf(params: BinomialParams, x: int) -> Fraction:
    """Exact probability of exactly ``x`` successes in ``draws`` draws."""
    n, p = params.draws, params.rate
    if not 0 <= x <= n:
        raise SupportError(f"outcome {x} outside support [0, {n}]")
    return comb(n, x) * p**x * (1 - p) ** (n - x)


def binomial_upper_tail(params: BinomialParams, k: int) -> Fraction:
    """P(X >= k), computed as 1 minus the probability of 0..k-1 successes."""
    n = params.draws
    if not 0 <= k <= n + 1:
        raise SupportError(f"threshold {k} outside [0, {n + 1}]")
    below = sum((binomial_pmf(params, x) for x in range(k)), start=Fraction(0))
    return 1 - below


class TailRow(NamedTuple):
    threshold: int
    exact: Fraction
    value: float


@dataclass(frozen=True)
class TailTable:
    """Upper-tail probabilities P(X >= k) for a consecutive range of thresholds."""

    rows: tuple[TailRow, ...]

    def __post_init__(self):
        prev = None
        for row in self.rows:
            if not 0 <= row.exact <= 1:
                raise ValueError(f"tail at {row.threshold} outside [0, 1]")
            if prev is not None and row.exact > prev:
                raise ValueError(f"tail increases at threshold {row.threshold}")
            prev = row.exact

    def at(self, threshold: int) -> Fraction:
        for row in self.rows:
            if row.threshold == threshold:
                return row.exact
        raise KeyError(threshold)


def tail_table(params: BinomialParams, k_min: int, k_max: int) -> TailTable:
    """Tail rows for thresholds ``k_min`` through ``k_max`` inclusive.

    Thresholds are taken literally: the row for k is P(X >= k).
    """
    n = params.draws
    if not 0 <= k_min <= k_max <= n + 1:
        raise SupportError(f"threshold range [{k_min}, {k_max}] outside [0, {n + 1}]")
    below = sum((binomial_pmf(params, x) for x in range(k_min)), start=Fraction(0))
    rows = []
    for k in range(k_min, k_max + 1):
        tail = 1 - below
        rows.append(TailRow(k, tail, float(tail)))
        if k <= n:
            below += binomial_pmf(params, k)
    return TailTable(tuple(rows))
