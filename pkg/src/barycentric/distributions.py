"""Exact rational weights and finite probability distributions.

Rationals are :class:`fractions.Fraction`, which is already kept in lowest
terms with a positive denominator. Indices are 0-based throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DegenerateError, DimensionError

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce ``value`` to a Fraction, refusing floats.

    Strings may be ``"num/den"`` or an integer literal.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def as_weight(value) -> Fraction:
    w = as_rational(value)
    if not 0 <= w <= 1:
        raise ValueError(f"weight {w} outside [0, 1]")
    return w


def format_rational(q: Fraction) -> str:
    """Serialize as ``"num/den"``, always with an explicit denominator."""
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str):
        raise TypeError(f"expected a 'num/den' string, got {text!r}")
    return Fraction(text.strip())


def grid_order(w: Fraction):
    """Sort key putting simpler weights first: 0, 1, 1/2, 1/3, 2/3, 1/4, ..."""
    return (w.denominator, w.numerator)


def dyadic_thirds_grid(max_level: int = 2) -> tuple[Fraction, ...]:
    """The weight grid ``{k/2^m : m <= max_level} | {1/3, 2/3}``."""
    weights = {Fraction(k, 2**m) for m in range(max_level + 1) for k in range(2**m + 1)}
    weights |= {Fraction(1, 3), Fraction(2, 3)}
    return tuple(sorted(weights, key=grid_order))


def interior(grid: Iterable[Fraction]) -> tuple[Fraction, ...]:
    return tuple(w for w in grid if 0 < w < 1)


@dataclass(frozen=True)
class ProbDist:
    """A probability distribution on ``{0, ..., n-1}`` with exact weights."""

    weights: tuple[Fraction, ...]

    def __init__(self, weights: Iterable):
        ws = tuple(as_weight(w) for w in weights)
        if not ws:
            raise DimensionError("a distribution needs at least one entry")
        if sum(ws) != 1:
            raise ValueError(f"weights sum to {sum(ws)}, not 1")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def dirac(cls, n: int, i: int) -> "ProbDist":
        return cls(Fraction(int(j == i)) for j in range(n))

    @classmethod
    def uniform(cls, n: int) -> "ProbDist":
        return cls([Fraction(1, n)] * n)

    @classmethod
    def binary(cls, lam) -> "ProbDist":
        lam = as_weight(lam)
        return cls((lam, 1 - lam))

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def dirac_index(self):
        """Index carrying all the mass, or None."""
        for i, w in enumerate(self.weights):
            if w == 1:
                return i
        return None

    def __repr__(self):
        return "ProbDist(" + ", ".join(str(w) for w in self.weights) + ")"


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., n-1}``; ``images[i]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __init__(self, images: Iterable[int]):
        imgs = tuple(int(i) for i in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"{imgs} is not a permutation of 0..{len(imgs) - 1}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def swap(cls, n: int, i: int, j: int) -> "Permutation":
        imgs = list(range(n))
        imgs[i], imgs[j] = imgs[j], imgs[i]
        return cls(imgs)

    def __len__(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, s in enumerate(self.images):
            inv[s] = i
        return Permutation(inv)

    def apply(self, items: Sequence):
        """Return ``[items[sigma(0)], ..., items[sigma(n-1)]]``."""
        if len(items) != len(self.images):
            raise DimensionError(f"permutation of length {len(self)} applied to {len(items)} items")
        return [items[s] for s in self.images]


def l1_distance(mu: ProbDist, nu: ProbDist) -> Fraction:
    if len(mu) != len(nu):
        raise DimensionError(f"distributions of length {len(mu)} and {len(nu)}")
    return sum((abs(a - b) for a, b in zip(mu, nu)), Fraction(0))


def permute(mu: ProbDist, sigma: Permutation) -> ProbDist:
    """``mu o sigma``: entry ``i`` of the result is ``mu(sigma(i))``."""
    if len(mu) != len(sigma):
        raise DimensionError(f"distribution of length {len(mu)}, permutation of length {len(sigma)}")
    return ProbDist(sigma.apply(mu.weights))


def merge_first_two(mu: ProbDist) -> ProbDist:
    if len(mu) < 2:
        raise DimensionError("cannot merge the first two entries of a length-1 distribution")
    return ProbDist((mu[0] + mu[1],) + mu.weights[2:])


def product_split(nu: ProbDist, mu: ProbDist, mu_tilde: ProbDist) -> ProbDist:
    """Flatten the two-level mixture ``nu(0)*mu (+) nu(1)*mu_tilde``."""
    if len(nu) != 2:
        raise DimensionError("the outer distribution must have length 2")
    return ProbDist([nu[0] * w for w in mu] + [nu[1] * w for w in mu_tilde])


def drop_last(mu: ProbDist) -> tuple[ProbDist, Fraction]:
    """Split off the last entry: returns ``(mu[:-1] / (1 - mu[-1]), mu[-1])``."""
    if len(mu) < 2:
        raise DimensionError("need at least two entries")
    last = mu[-1]
    if last == 1:
        raise DegenerateError("last entry carries all the mass")
    rest = 1 - last
    return ProbDist(w / rest for w in mu.weights[:-1]), last


@lru_cache(maxsize=None)
def grid_distributions(grid: tuple[Fraction, ...], n: int) -> tuple[ProbDist, ...]:
    """Every length-``n`` distribution whose entries all lie in ``grid``.

    Enumerated by depth-first search on the remaining mass, in lexicographic
    order of the (sorted) grid.
    """
    values = sorted(set(grid))
    out = []

    def extend(prefix, remaining, slots):
        if slots == 1:
            if remaining in values:
                out.append(ProbDist(prefix + [remaining]))
            return
        for w in values:
            if w > remaining:
                break
            extend(prefix + [w], remaining - w, slots - 1)

    if n >= 1:
        extend([], Fraction(1), n)
    return tuple(out)


def all_permutations(n: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(n))]
