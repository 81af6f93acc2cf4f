"""Recovering a norm from a metric that is compatible with convex combinations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .distributions import as_rational, as_weight
from .errors import InvalidQuadError, NoMetricError, PipelineError, UnrepresentableDirectionError
from .harness import CheckReport, Sampler, Witness, _Recorder, check_first_metric_condition, encode
from .models import ConvexModel, HullModel
from .embedding import embed

DEFAULT_EPSILONS = tuple(Fraction(1, 2**k) for k in range(1, 5))


def _require_metric_hull(model):
    if not isinstance(model, HullModel):
        raise TypeError(f"norm recovery needs a hull model, got {model!r}")
    if model.metric_kind is None:
        raise NoMetricError("hull model built without a metric")


def check_uniform_on_lines(model: HullModel, sampler: Sampler) -> CheckReport:
    """``d(x, (1-l) x + l y) == l d(x, y)`` on sampled pairs and grid weights."""
    _require_metric_hull(model)
    report = CheckReport("uniform-on-lines")
    rec = _Recorder(model, report)
    for x, y in sampler.tuples(model, 2, "lines"):
        for lam in sampler.weights(model):
            rec.check("lines.uniform", lam=lam, x=x, y=y)
    return report.canonicalize()


@dataclass(frozen=True)
class TranslationQuad:
    """Four hull points with ``y1 - x1 == y0 - x0`` and shrinking factors."""

    x0: tuple
    x1: tuple
    y0: tuple
    y1: tuple
    epsilons: tuple = DEFAULT_EPSILONS

    def __post_init__(self):
        pts = [tuple(as_rational(c) for c in p) for p in (self.x0, self.x1, self.y0, self.y1)]
        for name, p in zip(("x0", "x1", "y0", "y1"), pts):
            object.__setattr__(self, name, p)
        object.__setattr__(self, "epsilons", tuple(as_weight(e) for e in self.epsilons))
        if any(not 0 < e < 1 for e in self.epsilons):
            raise InvalidQuadError("shrinking factors must lie in (0, 1)")
        if len({len(p) for p in pts}) != 1:
            raise InvalidQuadError("quad points have different dimensions")
        if any(b1 - a1 != b0 - a0 for a0, a1, b0, b1 in zip(self.x0, self.x1, self.y0, self.y1)):
            raise InvalidQuadError("y1 - x1 differs from y0 - x0")


def check_translation_invariance(model: HullModel, quad: TranslationQuad) -> CheckReport:
    """Walk the parallelogram argument at each shrinking factor, then compare both sides.

    For each ``eps`` the points ``x_eps = eps x1 + (1-eps) x0``,
    ``y_eps = eps y1 + (1-eps) y0`` and ``z_eps = (1-eps) x_eps + eps y_eps``
    are formed and ``d(x_eps, z_eps) <= eps d(x1, y1)``,
    ``eps d(x_eps, y_eps) == d(x_eps, z_eps)`` and
    ``d(x_eps, y_eps) <= d(x1, y1)`` are asserted exactly.
    """
    _require_metric_hull(model)
    for p in (quad.x0, quad.x1, quad.y0, quad.y1):
        if not model.contains(p):
            raise InvalidQuadError(f"{p} is not in the hull")
    report = CheckReport("translation-invariance")
    rec = _Recorder(model, report)
    corners = dict(x0=quad.x0, x1=quad.x1, y0=quad.y0, y1=quad.y1)
    for eps in quad.epsilons:
        for name in ("translation.corner", "translation.shrink", "translation.rescale", "translation.bound"):
            rec.check(name, eps=eps, **corners)
    rec.check("translation.equal", **corners)
    # and the mirrored parallelogram, which gives the reverse inequality
    rec.check("translation.equal", x0=quad.x1, x1=quad.x0, y0=quad.y1, y1=quad.y0)
    return report.canonicalize()


def sample_quads(model: HullModel, sampler: Sampler, count: Optional[int] = None) -> list:
    """Parallelograms ``x0, x1 = x0 + u, y0 = x0 + v, y1 = x0 + u + v`` inside the hull.

    Built from sampled points: for pairs ``(a, b)``, ``(c, d)`` the corners are
    midpoints ``(a+c)/2, (b+c)/2, (a+d)/2, (b+d)/2``, which always lie in the hull.
    """
    half = Fraction(1, 2)
    out = []
    for a, b, c, d in sampler.tuples(model, 4, "quads")[: count or sampler.budget]:
        x0, x1, y0, y1 = (model.combine(half, p, q) for p, q in ((a, c), (b, c), (a, d), (b, d)))
        out.append(TranslationQuad(x0, x1, y0, y1))
    return out


@dataclass
class NormProbe:
    """The value ``N(v) = d(x, x + s v) / s`` read off at admissible base points."""

    direction: tuple
    scale: Fraction
    base_points: list
    values: list
    value: Optional[Fraction] = None

    @property
    def well_defined(self) -> bool:
        return len(set(self.values)) == 1

    def to_dict(self) -> dict:
        return {
            "direction": encode(self.direction),
            "scale": encode(self.scale),
            "base_points": encode(self.base_points),
            "value": encode(self.value),
            "well_defined": self.well_defined,
        }


def _centroid(points):
    n = len(points)
    return tuple(sum(c) / n for c in zip(*points))


def recover_norm(model: HullModel, v: Sequence, *, bases: Optional[Sequence] = None, max_halvings: int = 64) -> NormProbe:
    """Read the norm of direction ``v`` off the metric.

    Candidate bases are the generators, their centroid and any extra
    ``bases``. If no candidate ``x`` has ``x + v`` in the hull, ``v`` is
    halved until one does and the value is rescaled by positive homogeneity.
    """
    _require_metric_hull(model)
    v = tuple(as_rational(c) for c in v)
    if len(v) != model.dimension:
        raise UnrepresentableDirectionError(f"direction has {len(v)} entries, hull lives in Q^{model.dimension}")
    candidates = list(dict.fromkeys(list(model.generators) + [_centroid(model.generators)] + [tuple(b) for b in bases or ()]))
    scale = Fraction(1)
    for _ in range(max_halvings + 1):
        step = tuple(scale * c for c in v)
        admissible = [x for x in candidates if model.contains(tuple(a + b for a, b in zip(x, step)))]
        if admissible:
            values = [model.distance(x, tuple(a + b for a, b in zip(x, step))) / scale for x in admissible]
            probe = NormProbe(v, scale, admissible, values)
            if probe.well_defined:
                probe.value = values[0]
            return probe
        scale /= 2
    raise UnrepresentableDirectionError(f"no base point x with x + s*{list(map(str, v))} in the hull")


def verify_isometry(model: ConvexModel, sampler: Sampler, *, depth: int = 2, grid: Optional[Sequence] = None, max_pairs: Optional[int] = None) -> CheckReport:
    """Embed a finite sample, map coordinates back to Q^d, and compare distances.

    The map back sends the class of each complement point to that point,
    extended linearly; it must reproduce every generator and every sample
    point, and the recovered norm of each coordinate difference must equal
    the distance of the pair.
    """
    if not isinstance(model, HullModel):
        carrier, _, emb, _ = embed(model, list(model.carrier), grid or sampler.grid, 1)
        if not emb.injective:
            raise PipelineError("the embedding collapses sample points; no isometry is possible")
        raise NoMetricError(f"{model.kind} model has no metric")
    _require_metric_hull(model)
    carrier, relations, emb, check = embed(model, list(model.generators), grid or sampler.grid, depth)
    if not emb.injective:
        raise PipelineError("the embedding collapses sample points; no isometry is possible")
    report = CheckReport("isometry")
    basis_points = [carrier.points[i] for i in emb.complement]

    def back(coords):
        return tuple(sum((c * p[k] for c, p in zip(coords, basis_points)), Fraction(0)) for k in range(model.dimension))

    mapped = [back(c) for c in emb.coordinates]
    report.counts["isometry.generators"] = len(model.generators)
    report.counts["isometry.points"] = len(carrier)
    for x, image in zip(carrier.points, mapped):
        if image != x:
            report.failures.append(Witness("isometry.points", {"x": x}, image, x))
    pairs = [(i, j) for i in range(len(carrier)) for j in range(len(carrier))]
    limit = max_pairs if max_pairs is not None else max(sampler.budget, 1000)
    if len(pairs) > limit:
        rng = sampler.rng("isometry")
        pairs = sorted(rng.sample(pairs, limit))
    cache: dict = {}
    for i, j in pairs:
        x, y = carrier.points[i], carrier.points[j]
        diff = tuple(a - b for a, b in zip(mapped[i], mapped[j]))
        if diff not in cache:
            cache[diff] = recover_norm(model, diff, bases=[y])
        probe = cache[diff]
        d = model.distance(x, y)
        report.counts["isometry.distance"] = report.counts.get("isometry.distance", 0) + 1
        if not probe.well_defined or probe.value != d:
            report.failures.append(Witness("isometry.distance", {"x": x, "y": y}, d, probe.value))
    report.extras["carrier_size"] = len(carrier)
    report.extras["dimension"] = emb.dimension
    report.extras["pairs"] = len(pairs)
    report.extras["affine_consistent"] = check.passed
    if not check.passed:
        report.failures.extend(check.failures)
    return report.canonicalize()


def boundedness_constant(model: HullModel) -> Fraction:
    """A constant for the first metric condition: the smaller of ``max ||g||``
    over generators and ``max ||g - g_0||`` (first generator as origin).

    Both are valid because ``sum_i (mu_i - mu'_i) = 0`` makes the condition
    independent of the chosen origin.
    """
    _require_metric_hull(model)
    norm = model.metric_kind.norm
    g0 = model.generators[0]
    from_origin = max(norm(g) for g in model.generators)
    from_first = max(norm(tuple(a - b for a, b in zip(g, g0))) for g in model.generators)
    return min(from_origin, from_first)


def boundedness_check(model: HullModel, sampler: Sampler, constant=None) -> CheckReport:
    """First metric condition with ``C`` (default: :func:`boundedness_constant`)
    plus the diameter bound ``diam <= 2 C`` over sampled points."""
    _require_metric_hull(model)
    c0 = boundedness_constant(model)
    c = c0 if constant is None else as_rational(constant)
    report = check_first_metric_condition(model, c, sampler)
    report.name = "boundedness"
    pts = sampler.points(model)
    diameter = Fraction(0)
    far = (pts[0], pts[0])
    for i, x in enumerate(pts):
        for y in pts[i + 1 :]:
            d = model.distance(x, y)
            if d > diameter:
                diameter, far = d, (x, y)
    report.counts["diameter"] = 1
    if diameter > 2 * c:
        report.failures.append(Witness("diameter", {"x": far[0], "y": far[1]}, diameter, 2 * c))
    report.extras.update({"c0": c0, "constant": c, "diameter": diameter})
    return report.canonicalize()
