"""Linear embedding of a finitely sampled convex space.

The free rational vector space on a finite carrier is divided by the span of
the relation vectors ``e[cc(l, x, y)] - l e[x] - (1-l) e[y]``; each point is
sent to the class of its basis vector. The map respects convex combinations
by construction, and it is injective on the sample exactly when no two points
become identified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .distributions import as_weight, interior
from .errors import DomainError
from .harness import CheckReport, Sampler, Witness, cancellation_search, encode
from .linalg import RowEchelon
from .models import ConvexModel


@dataclass
class FiniteCarrier:
    """Distinct points, in generation order, with where each came from.

    ``provenance[i]`` is None for generators and ``(lam, j, k)`` when point
    ``i`` was first produced as ``cc(lam, points[j], points[k])``.
    """

    points: list
    provenance: list
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {p: i for i, p in enumerate(self.points)}
        if len(self.index) != len(self.points):
            raise ValueError("carrier points must be distinct")

    def __len__(self):
        return len(self.points)

    def check_provenance(self, model: ConvexModel) -> bool:
        return all(
            prov is None or model.combine(prov[0], self.points[prov[1]], self.points[prov[2]]) == p
            for p, prov in zip(self.points, self.provenance)
        )


@dataclass
class RelationSet:
    """Sparse relation rows together with the triple each row encodes.

    ``triples[r] == (lam, x_index, y_index, value_index)``.
    """

    rows: list
    triples: list
    escaped: int = 0

    def __len__(self):
        return len(self.rows)


@dataclass
class EmbeddingReport:
    coordinates: list  # per carrier point, a tuple of Fractions
    dimension: int
    complement: list  # carrier indices whose classes form the quotient basis
    collision_classes: list  # lists of carrier indices, in order of first index

    @property
    def injective(self) -> bool:
        return all(len(c) == 1 for c in self.collision_classes)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "complement": self.complement,
            "coordinates": [encode(c) for c in self.coordinates],
            "collision_classes": [c for c in self.collision_classes if len(c) > 1],
            "injective_on_sample": self.injective,
        }


def generate_carrier(model: ConvexModel, generators: Sequence, grid: Sequence, depth: int) -> FiniteCarrier:
    """Close ``generators`` under ``cc`` at the interior grid weights, ``depth`` rounds."""
    for g in generators:
        if not model.contains(g):
            raise DomainError(f"generator {g!r} is not in the carrier")
    lams = interior(as_weight(w) for w in grid)
    for lam in lams:
        model.check_weight(lam)
    points = list(dict.fromkeys(generators))
    provenance: list = [None] * len(points)
    seen = set(points)
    for _ in range(depth):
        current = list(points)
        added = False
        for j, x in enumerate(current):
            for k, y in enumerate(current):
                if j == k:
                    continue
                for lam in lams:
                    p = model.combine(lam, x, y)
                    if p not in seen:
                        seen.add(p)
                        points.append(p)
                        provenance.append((lam, j, k))
                        added = True
        if not added:
            break
    return FiniteCarrier(points, provenance)


def build_relations(carrier: FiniteCarrier, model: ConvexModel, grid: Sequence) -> RelationSet:
    """One row per ``(x, y, lam)`` whose combination stays in the carrier.

    Rows for ``lam`` in {0, 1} vanish identically and are not emitted.
    """
    lams = interior(as_weight(w) for w in grid)
    rows, triples, escaped = [], [], 0
    pts = carrier.points
    for lam in lams:
        for i, x in enumerate(pts):
            for j, y in enumerate(pts):
                t = carrier.index.get(model.combine(lam, x, y))
                if t is None:
                    escaped += 1
                    continue
                row: dict = {}
                for col, coef in ((t, Fraction(1)), (i, -lam), (j, lam - 1)):
                    row[col] = row.get(col, 0) + coef
                rows.append({c: v for c, v in row.items() if v})
                triples.append((lam, i, j, t))
    return RelationSet(rows, triples, escaped)


def quotient_coordinates(relations: RelationSet, carrier: FiniteCarrier) -> EmbeddingReport:
    """Coordinates of each point's class in the quotient by the relation span."""
    ech = RowEchelon()
    for row in relations.rows:
        ech.add(row)
    pivots = set(ech.pivots)
    complement = [i for i in range(len(carrier)) if i not in pivots]
    position = {c: k for k, c in enumerate(complement)}
    coords = []
    for i in range(len(carrier)):
        vec = [Fraction(0)] * len(complement)
        if i in position:
            vec[position[i]] = Fraction(1)
        else:
            # e_i + sum_f r_f e_f lies in the span, so [e_i] = -sum_f r_f [e_f]
            for c, v in ech.rows[i].items():
                if c != i:
                    vec[position[c]] = -v
        coords.append(tuple(vec))
    classes: dict = {}
    for i, c in enumerate(coords):
        classes.setdefault(c, []).append(i)
    return EmbeddingReport(coords, len(complement), complement, list(classes.values()))


def verify_embedding(
    report: EmbeddingReport,
    carrier: FiniteCarrier,
    model: ConvexModel,
    grid: Sequence,
    relations: Optional[RelationSet] = None,
) -> CheckReport:
    """Check that coordinates respect every recorded combination, and injectivity.

    When two sample points collide a cancellation witness is searched for,
    first among the colliding pairs, then over the whole sample.
    """
    if relations is None:
        relations = build_relations(carrier, model, grid)
    out = CheckReport("embedding")
    affine = 0
    for lam, i, j, t in relations.triples:
        affine += 1
        lhs = report.coordinates[t]
        rhs = tuple(lam * a + (1 - lam) * b for a, b in zip(report.coordinates[i], report.coordinates[j]))
        if lhs != rhs:
            out.failures.append(
                Witness("embedding.affine", {"lam": lam, "x": carrier.points[i], "y": carrier.points[j]}, lhs, rhs)
            )
    out.counts["embedding.affine"] = affine
    out.counts["embedding.injective"] = 1
    out.extras["dimension"] = report.dimension
    out.extras["injective_on_sample"] = report.injective
    if not report.injective:
        for cls in report.collision_classes:
            if len(cls) > 1:
                pts = [carrier.points[i] for i in cls]
                out.failures.append(Witness("embedding.injective", {"collision": pts}, pts[0], pts[1]))
        sampler = Sampler(grid=tuple(as_weight(w) for w in grid))
        pairs = [
            (carrier.points[a], carrier.points[b])
            for cls in report.collision_classes
            for a in cls
            for b in cls
            if a != b
        ]
        witness = cancellation_search(model, sampler, bases=carrier.points, pairs=pairs)
        if witness is None:
            all_pairs = [(y, z) for y in carrier.points for z in carrier.points if y != z]
            witness = cancellation_search(model, sampler, bases=carrier.points, pairs=all_pairs)
        out.extras["cancellation_witness"] = witness.to_dict() if witness else None
    return out.canonicalize()


def embed(model: ConvexModel, generators: Sequence, grid: Sequence, depth: int):
    """Run the whole construction; returns ``(carrier, relations, report, check)``."""
    carrier = generate_carrier(model, generators, grid, depth)
    relations = build_relations(carrier, model, grid)
    report = quotient_coordinates(relations, carrier)
    check = verify_embedding(report, carrier, model, grid, relations)
    return carrier, relations, report, check
