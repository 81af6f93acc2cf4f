"""Convex spaces: the binary operation ``cc``, concrete models, derived n-ary ``gamma``.

Orientation: ``cc(lam, x, y)`` stands for ``lam*x + (1-lam)*y``, so
``cc(1, x, y) == x`` and ``cc(0, x, y) == y``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Hashable, Mapping, Sequence

from .distributions import ProbDist, as_rational, as_weight, drop_last, format_rational, grid_order
from .errors import (
    DegenerateError,
    DimensionError,
    DomainError,
    NoMetricError,
    UnsupportedWeightError,
)
from .linalg import affine_dimension, in_convex_hull

Point = Hashable


class MetricName(str, enum.Enum):
    L1 = "l1"
    LINF = "linf"
    WEIGHTED_L1 = "weighted_l1"


@dataclass(frozen=True)
class MetricKind:
    """A norm on Q^d with rational values: l1, l-infinity or weighted l1."""

    name: MetricName
    weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "name", MetricName(self.name))
        if self.name is MetricName.WEIGHTED_L1:
            if not self.weights:
                raise ValueError("weighted_l1 needs a weight vector")
            ws = tuple(as_rational(w) for w in self.weights)
            if any(w <= 0 for w in ws):
                raise ValueError("weighted_l1 weights must be strictly positive")
            object.__setattr__(self, "weights", ws)
        elif self.weights is not None:
            raise ValueError(f"{self.name.value} takes no weights")

    @classmethod
    def l1(cls):
        return cls(MetricName.L1)

    @classmethod
    def linf(cls):
        return cls(MetricName.LINF)

    @classmethod
    def weighted_l1(cls, weights):
        return cls(MetricName.WEIGHTED_L1, tuple(weights))

    def norm(self, v: Sequence[Fraction]) -> Fraction:
        if self.name is MetricName.L1:
            return sum((abs(c) for c in v), Fraction(0))
        if self.name is MetricName.LINF:
            return max((abs(c) for c in v), default=Fraction(0))
        if len(v) != len(self.weights):
            raise DimensionError(f"weighted_l1 has {len(self.weights)} weights, vector has {len(v)} entries")
        return sum((w * abs(c) for w, c in zip(self.weights, v)), Fraction(0))

    def distance(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        return self.norm([a - b for a, b in zip(x, y)])


class ConvexModel:
    """Base class. Subclasses implement :meth:`combine` and :meth:`contains`."""

    kind = "abstract"
    metric_kind: MetricKind | None = None

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def carrier(self) -> tuple:
        raise TypeError(f"{self.kind} models have no finite carrier")

    def supports(self, lam: Fraction) -> bool:
        return 0 <= lam <= 1

    def contains(self, x) -> bool:
        raise NotImplementedError

    def combine(self, lam: Fraction, x, y):
        """Unchecked ``cc``; arguments are assumed to be valid."""
        raise NotImplementedError

    def distance(self, x, y) -> Fraction:
        raise NoMetricError(f"{self.kind} model has no metric")

    def check_point(self, x):
        if not self.contains(x):
            raise DomainError(f"{x!r} is not in the carrier")

    def check_weight(self, lam: Fraction):
        if not self.supports(lam):
            raise UnsupportedWeightError(f"weight {lam} is not supported by this model")

    def parse_point(self, obj):
        """Decode a JSON point representation."""
        return obj

    def point_json(self, x):
        return x


class HullModel(ConvexModel):
    """Convex hull of finitely many rational generators in Q^d."""

    kind = "hull"

    def __init__(self, generators: Sequence[Sequence], metric: MetricKind | None = None):
        gens = tuple(tuple(as_rational(c) for c in g) for g in generators)
        if not gens:
            raise ValueError("a hull model needs at least one generator")
        dims = {len(g) for g in gens}
        if len(dims) != 1:
            raise DimensionError(f"generators have mixed dimensions {sorted(dims)}")
        self.dimension = dims.pop()
        if self.dimension < 1:
            raise DimensionError("ambient dimension must be positive")
        if metric is not None and metric.weights is not None and len(metric.weights) != self.dimension:
            raise DimensionError("metric weights do not match the ambient dimension")
        self.generators = gens
        self.metric_kind = metric
        self._contains = lru_cache(maxsize=65536)(self._contains_uncached)

    def __repr__(self):
        return f"HullModel({len(self.generators)} generators in Q^{self.dimension})"

    def _contains_uncached(self, x) -> bool:
        return in_convex_hull(x, self.generators)

    def contains(self, x) -> bool:
        if not isinstance(x, tuple) or len(x) != self.dimension:
            return False
        if not all(isinstance(c, (Fraction, int)) for c in x):
            return False
        return self._contains(tuple(Fraction(c) for c in x))

    def combine(self, lam, x, y):
        if lam == 1:
            return x
        if lam == 0:
            return y
        mu = 1 - lam
        return tuple(lam * a + mu * b for a, b in zip(x, y))

    def distance(self, x, y) -> Fraction:
        if self.metric_kind is None:
            raise NoMetricError("hull model built without a metric")
        return self.metric_kind.distance(x, y)

    def affine_dimension(self) -> int:
        return affine_dimension(self.generators)

    def parse_point(self, obj):
        return tuple(as_rational(c) for c in obj)

    def point_json(self, x):
        return [format_rational(c) for c in x]


class SemilatticeModel(ConvexModel):
    """A finite meet-semilattice with ``cc`` equal to the meet on (0, 1)."""

    kind = "semilattice"

    def __init__(self, elements: Sequence[str], meet: Mapping[tuple, str]):
        elems = tuple(elements)
        if len(set(elems)) != len(elems) or not elems:
            raise ValueError("elements must be a nonempty list of distinct names")
        table = {}
        for a in elems:
            for b in elems:
                if (a, b) not in meet:
                    raise ValueError(f"meet({a}, {b}) missing")
                m = meet[(a, b)]
                if m not in elems:
                    raise DomainError(f"meet({a}, {b}) = {m!r} is not an element")
                table[(a, b)] = m
        for a in elems:
            if table[(a, a)] != a:
                raise ValueError(f"meet is not idempotent at {a}")
            for b in elems:
                if table[(a, b)] != table[(b, a)]:
                    raise ValueError(f"meet is not commutative at ({a}, {b})")
                for c in elems:
                    if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
                        raise ValueError(f"meet is not associative at ({a}, {b}, {c})")
        self.elements = elems
        self.meet = table

    @classmethod
    def from_matrix(cls, elements, rows):
        return cls(elements, {(a, b): rows[i][j] for i, a in enumerate(elements) for j, b in enumerate(elements)})

    @classmethod
    def from_order(cls, elements, less_than: Sequence[tuple[str, str]]):
        """Build from strict order relations ``(a, b)`` meaning ``a < b``.

        The order is transitively closed; the meet is the greatest common
        lower bound, which must exist for every pair.
        """
        elems = tuple(elements)
        below = {e: {e} for e in elems}
        changed = True
        pairs = list(less_than)
        while changed:
            changed = False
            for a, b in pairs:
                if not below[a] <= below[b]:
                    below[b] |= below[a]
                    changed = True
        meet = {}
        for a in elems:
            for b in elems:
                common = below[a] & below[b]
                tops = [c for c in common if all(d in below[c] for d in common)]
                if len(tops) != 1:
                    raise ValueError(f"{a} and {b} have no greatest lower bound")
                meet[(a, b)] = tops[0]
        return cls(elems, meet)

    def __repr__(self):
        return f"SemilatticeModel({list(self.elements)})"

    @property
    def is_finite(self):
        return True

    @property
    def carrier(self):
        return self.elements

    def contains(self, x):
        return x in self.elements

    def combine(self, lam, x, y):
        if lam == 1:
            return x
        if lam == 0:
            return y
        return self.meet[(x, y)]


class TableModel(ConvexModel):
    """A finite carrier with ``cc`` recorded explicitly on a declared weight grid."""

    kind = "table"

    def __init__(self, carrier: Sequence[str], table: Mapping[Fraction, Mapping[tuple, str]]):
        elems = tuple(carrier)
        if len(set(elems)) != len(elems) or not elems:
            raise ValueError("carrier must be a nonempty list of distinct names")
        cc = {}
        for lam, entries in table.items():
            lam = as_weight(lam)
            for a in elems:
                for b in elems:
                    if (a, b) not in entries:
                        raise ValueError(f"cc[{lam}]({a}, {b}) missing")
                    v = entries[(a, b)]
                    if v not in elems:
                        raise DomainError(f"cc[{lam}]({a}, {b}) = {v!r} is not in the carrier")
                    cc[(lam, a, b)] = v
        self.elements = elems
        self.grid = tuple(sorted({as_weight(w) for w in table}, key=grid_order))
        self._grid = frozenset(self.grid)
        self.table = cc

    @classmethod
    def from_model(cls, model: ConvexModel, grid):
        """Tabulate a finite model's ``cc`` over ``grid``."""
        elems = model.carrier
        return cls(elems, {lam: {(a, b): model.combine(lam, a, b) for a in elems for b in elems} for lam in grid})

    def with_entry(self, lam, x, y, value) -> "TableModel":
        """Copy of this table with one entry overwritten."""
        table = {}
        for w in self.grid:
            table[w] = {(a, b): self.table[(w, a, b)] for a in self.elements for b in self.elements}
        table[as_weight(lam)][(x, y)] = value
        return TableModel(self.elements, table)

    def __repr__(self):
        return f"TableModel({list(self.elements)}, grid={[str(w) for w in self.grid]})"

    @property
    def is_finite(self):
        return True

    @property
    def carrier(self):
        return self.elements

    def supports(self, lam):
        return lam in self._grid

    def contains(self, x):
        return x in self.elements

    def combine(self, lam, x, y):
        try:
            return self.table[(lam, x, y)]
        except KeyError:
            raise UnsupportedWeightError(f"weight {lam} is not in the declared grid") from None


def cc(model: ConvexModel, lam, x, y):
    """Binary convex combination ``lam*x + (1-lam)*y`` in ``model``."""
    lam = as_weight(lam)
    model.check_weight(lam)
    model.check_point(x)
    model.check_point(y)
    return model.combine(lam, x, y)


def nu_assoc(lam, mu) -> Fraction:
    """The inner weight making ``cc_lam(cc_mu(x, y), z) == cc_{lam*mu}(x, cc_nu(y, z))``."""
    lam, mu = as_weight(lam), as_weight(mu)
    if lam * mu == 1:
        raise DegenerateError("nu is arbitrary when lam = mu = 1")
    return lam * (1 - mu) / (1 - lam * mu)


def _gamma(model: ConvexModel, mu: ProbDist, points: Sequence):
    # peel off the last point: gamma_mu(x) = cc_{1-mu(n)}(gamma_nu(x[:-1]), x[n])
    n = len(mu)
    if mu[-1] == 1:
        return points[-1]
    if n == 1:
        return points[0]
    nu, last = drop_last(mu)
    lam = 1 - last
    if not model.supports(lam):
        raise UnsupportedWeightError(f"recursion needs weight {lam}, which the model does not support")
    return model.combine(lam, _gamma(model, nu, points[:-1]), points[-1])


def gamma(model: ConvexModel, mu: ProbDist, points: Sequence, *, validate: bool = True):
    """The n-ary combination built recursively from ``cc``."""
    if len(points) != len(mu):
        raise DimensionError(f"{len(points)} points for a distribution of length {len(mu)}")
    if validate:
        for x in points:
            model.check_point(x)
    return _gamma(model, mu, list(points))


def metric(model: ConvexModel, x, y) -> Fraction:
    if model.metric_kind is None:
        raise NoMetricError(f"{model.kind} model has no metric")
    model.check_point(x)
    model.check_point(y)
    return model.distance(x, y)
