"""Seeded, budget-bounded refutation of the convex-space and barycentric axioms.

Every checked identity is registered as a :class:`Law` so that a failure can
be serialized, decoded and replayed against the model that produced it. The
harness only ever refutes: an empty failure list means "no counterexample
within budget".
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .distributions import (
    Permutation,
    ProbDist,
    as_rational,
    as_weight,
    dyadic_thirds_grid,
    format_rational,
    grid_distributions,
    grid_order,
    interior,
    l1_distance,
    merge_first_two,
    permute,
    product_split,
)
from .errors import DegenerateError, NoMetricError, UnsupportedWeightError, WitnessError
from .models import ConvexModel, HullModel, _gamma, nu_assoc

# --------------------------------------------------------------------------
# laws


@dataclass(frozen=True)
class Law:
    name: str
    params: tuple  # ((param, kind), ...) with kind in weight/rational/point/points/dist/perm
    evaluate: Callable
    relation: str = "eq"

    def holds(self, lhs, rhs) -> bool:
        return lhs == rhs if self.relation == "eq" else lhs <= rhs


LAWS: dict[str, Law] = {}


def law(name, params, relation="eq"):
    parsed = tuple(tuple(p.split(":")) for p in params.split())

    def register(fn):
        LAWS[name] = Law(name, parsed, fn, relation)
        return fn

    return register


@law("cc.unit", "x:point y:point")
def _unit(m, x, y):
    return m.combine(Fraction(0), x, y), y


@law("cc.idempotent", "lam:weight x:point")
def _idempotent(m, lam, x):
    return m.combine(lam, x, x), x


@law("cc.commutative", "lam:weight x:point y:point")
def _commutative(m, lam, x, y):
    return m.combine(lam, x, y), m.combine(1 - lam, y, x)


@law("cc.associative", "lam:weight mu:weight nu:weight x:point y:point z:point")
def _associative(m, lam, mu, nu, x, y, z):
    return m.combine(lam, m.combine(mu, x, y), z), m.combine(lam * mu, x, m.combine(nu, y, z))


@law("gamma.permutation", "mu:dist sigma:perm xs:points")
def _permutation(m, mu, sigma, xs):
    return _gamma(m, mu, xs), _gamma(m, permute(mu, sigma), sigma.apply(xs))


@law("gamma.merge", "mu:dist xs:points")
def _merge(m, mu, xs):
    # meaningful only when xs[0] == xs[1]; the checker guarantees it
    return _gamma(m, mu, xs), _gamma(m, merge_first_two(mu), xs[1:])


@law("gamma.dirac", "mu:dist xs:points")
def _dirac(m, mu, xs):
    return _gamma(m, mu, xs), xs[mu.dirac_index()]


@law("gamma.flatten", "nu:dist mu:dist mu_tilde:dist xs:points xts:points")
def _flatten(m, nu, mu, mu_tilde, xs, xts):
    inner = [_gamma(m, mu, xs), _gamma(m, mu_tilde, xts)]
    return _gamma(m, nu, inner), _gamma(m, product_split(nu, mu, mu_tilde), list(xs) + list(xts))


@law("gamma.contraction", "mu:dist xs:points ys:points", relation="le")
def _gamma_contraction(m, mu, xs, ys):
    lhs = m.distance(_gamma(m, mu, xs), _gamma(m, mu, ys))
    return lhs, sum((w * m.distance(x, y) for w, x, y in zip(mu, xs, ys)), Fraction(0))


@law("cc.contraction", "lam:weight x:point y:point z:point", relation="le")
def _cc_contraction(m, lam, x, y, z):
    return m.distance(m.combine(lam, y, x), m.combine(lam, z, x)), lam * m.distance(y, z)


@law("first-metric", "constant:rational mu:dist mu_tilde:dist xs:points", relation="le")
def _first_metric(m, constant, mu, mu_tilde, xs):
    return m.distance(_gamma(m, mu, xs), _gamma(m, mu_tilde, xs)), constant * l1_distance(mu, mu_tilde)


@law("lines.uniform", "lam:weight x:point y:point")
def _uniform(m, lam, x, y):
    return m.distance(x, m.combine(lam, y, x)), lam * m.distance(x, y)


@law("cancel.propagation", "lam:weight x:point y:point z:point")
def _propagation(m, lam, x, y, z):
    return m.combine(lam, y, x), m.combine(lam, z, x)


def _shrunk_quad(m, eps, x0, x1, y0, y1):
    x_eps = m.combine(eps, x1, x0)
    y_eps = m.combine(eps, y1, y0)
    z_eps = m.combine(eps, y_eps, x_eps)
    return x_eps, y_eps, z_eps


@law("translation.corner", "eps:weight x0:point x1:point y0:point y1:point")
def _corner(m, eps, x0, x1, y0, y1):
    # the point on the x_eps--y_eps segment is also on the x0--y1 diagonal
    return _shrunk_quad(m, eps, x0, x1, y0, y1)[2], m.combine(eps, y1, x0)


@law("translation.shrink", "eps:weight x0:point x1:point y0:point y1:point", relation="le")
def _shrink(m, eps, x0, x1, y0, y1):
    x_eps, _, z_eps = _shrunk_quad(m, eps, x0, x1, y0, y1)
    return m.distance(x_eps, z_eps), eps * m.distance(x1, y1)


@law("translation.rescale", "eps:weight x0:point x1:point y0:point y1:point")
def _rescale(m, eps, x0, x1, y0, y1):
    x_eps, y_eps, z_eps = _shrunk_quad(m, eps, x0, x1, y0, y1)
    return eps * m.distance(x_eps, y_eps), m.distance(x_eps, z_eps)


@law("translation.bound", "eps:weight x0:point x1:point y0:point y1:point", relation="le")
def _bound(m, eps, x0, x1, y0, y1):
    x_eps, y_eps, _ = _shrunk_quad(m, eps, x0, x1, y0, y1)
    return m.distance(x_eps, y_eps), m.distance(x1, y1)


@law("translation.equal", "x0:point x1:point y0:point y1:point")
def _translation_equal(m, x0, x1, y0, y1):
    return m.distance(x0, y0), m.distance(x1, y1)


# --------------------------------------------------------------------------
# witnesses and reports


def encode(value):
    """JSON-ready form: rationals become ``"num/den"`` strings."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, ProbDist):
        return [format_rational(w) for w in value]
    if isinstance(value, Permutation):
        return list(value.images)
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, dict):
        return {k: encode(v) for k, v in value.items()}
    raise TypeError(f"cannot encode {value!r}")


def _decode_param(model: ConvexModel, kind: str, obj):
    if kind == "weight":
        return as_weight(obj)
    if kind == "rational":
        return as_rational(obj)
    if kind == "point":
        return model.parse_point(obj)
    if kind == "points":
        return [model.parse_point(o) for o in obj]
    if kind == "dist":
        return ProbDist(obj)
    if kind == "perm":
        return Permutation(obj)
    raise ValueError(f"unknown parameter kind {kind!r}")


@dataclass(frozen=True)
class Witness:
    """A concrete instance where a law's two sides disagree."""

    law: str
    inputs: dict
    lhs: object
    rhs: object

    def to_dict(self) -> dict:
        return {"law": self.law, "inputs": encode(self.inputs), "lhs": encode(self.lhs), "rhs": encode(self.rhs)}

    @classmethod
    def from_dict(cls, model: ConvexModel, obj: dict) -> "Witness":
        spec = LAWS[obj["law"]]
        inputs = {name: _decode_param(model, kind, obj["inputs"][name]) for name, kind in spec.params}
        return cls(obj["law"], inputs, obj.get("lhs"), obj.get("rhs"))

    def sort_key(self):
        return (self.law, json.dumps(encode(self.inputs), sort_keys=True))


def replay(model: ConvexModel, witness: Witness) -> bool:
    """Re-evaluate a witness; True iff the violation is reproduced."""
    spec = LAWS[witness.law]
    lhs, rhs = spec.evaluate(model, **witness.inputs)
    return not spec.holds(lhs, rhs)


@dataclass
class CheckReport:
    name: str
    counts: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def tested(self) -> int:
        return sum(self.counts.values())

    def laws_failed(self) -> set:
        return {w.law for w in self.failures}

    def canonicalize(self) -> "CheckReport":
        self.failures.sort(key=Witness.sort_key)
        return self

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "tested": self.tested,
            "counts": dict(sorted(self.counts.items())),
            "skipped": dict(sorted(self.skipped.items())),
            "failures": [w.to_dict() for w in sorted(self.failures, key=Witness.sort_key)],
            "extras": encode(self.extras),
        }


def merge_reports(name: str, reports: Iterable[CheckReport]) -> CheckReport:
    """Sum counts and concatenate failures; the result is canonically sorted."""
    out = CheckReport(name)
    for r in reports:
        for k, v in r.counts.items():
            out.counts[k] = out.counts.get(k, 0) + v
        for k, v in r.skipped.items():
            out.skipped[k] = out.skipped.get(k, 0) + v
        out.failures.extend(r.failures)
        out.extras.update(r.extras)
    return out.canonicalize()


class _Recorder:
    def __init__(self, model: ConvexModel, report: CheckReport):
        self.model = model
        self.report = report

    def check(self, name: str, **inputs):
        spec = LAWS[name]
        try:
            lhs, rhs = spec.evaluate(self.model, **inputs)
        except UnsupportedWeightError:
            self.report.skipped[name] = self.report.skipped.get(name, 0) + 1
            return None
        self.report.counts[name] = self.report.counts.get(name, 0) + 1
        if not spec.holds(lhs, rhs):
            self.report.failures.append(Witness(name, dict(inputs), lhs, rhs))
            return False
        return True


# --------------------------------------------------------------------------
# sampling


DEFAULT_GRID = dyadic_thirds_grid(2)


@dataclass(frozen=True)
class Sampler:
    """Deterministic source of weights, points and tuples.

    Identical ``(seed, grid, budget, exhaustive_limit)`` and model always give
    the identical sample sequence.
    """

    seed: int = 0
    grid: tuple = DEFAULT_GRID
    budget: int = 200
    exhaustive_limit: int = 4096

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(sorted({as_weight(w) for w in self.grid}, key=grid_order)))

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.seed}/{tag}")

    def weights(self, model: ConvexModel) -> list:
        return [w for w in self.grid if model.supports(w)]

    def interior_weights(self, model: ConvexModel) -> list:
        return list(interior(self.weights(model)))

    def points(self, model: ConvexModel) -> list:
        return list(_sample_points(self, model))

    def tuples(self, model: ConvexModel, k: int, tag: str) -> list:
        pts = self.points(model)
        if model.is_finite and len(pts) ** k <= self.exhaustive_limit:
            return list(itertools.product(pts, repeat=k))
        rng = self.rng(f"tuples/{k}/{tag}")
        return [tuple(rng.choice(pts) for _ in range(k)) for _ in range(self.budget)]

    def distributions(self, model: ConvexModel, n: int) -> tuple:
        return grid_distributions(tuple(self.weights(model)), n)


@lru_cache(maxsize=64)
def _sample_points(sampler: Sampler, model: ConvexModel) -> tuple:
    if model.is_finite:
        return tuple(model.carrier)
    if not isinstance(model, HullModel):
        raise TypeError(f"cannot sample points of {model!r}")
    rng = sampler.rng("points")
    seen = dict.fromkeys(model.generators)
    gens = model.generators
    attempts = 0
    while len(seen) < sampler.budget + len(gens) and attempts < 20 * sampler.budget and len(gens) > 1:
        attempts += 1
        coeffs = [rng.randint(0, 12) for _ in gens]
        total = sum(coeffs)
        if total == 0:
            continue
        p = tuple(sum((Fraction(c, total) * g[i] for c, g in zip(coeffs, gens)), Fraction(0)) for i in range(model.dimension))
        seen.setdefault(p)
    return tuple(seen)


def _pick(rng, seq):
    return seq[rng.randrange(len(seq))]


# --------------------------------------------------------------------------
# checks


def check_convex_space_axioms(model: ConvexModel, sampler: Sampler) -> CheckReport:
    """Unit law, idempotency, commutativity and associativity of ``cc``."""
    report = CheckReport("convex-space")
    rec = _Recorder(model, report)
    ws = sampler.weights(model)
    for x, y in sampler.tuples(model, 2, "cs"):
        rec.check("cc.unit", x=x, y=y)
        for lam in ws:
            rec.check("cc.commutative", lam=lam, x=x, y=y)
    for x in sampler.points(model):
        for lam in ws:
            rec.check("cc.idempotent", lam=lam, x=x)
    for x, y, z in sampler.tuples(model, 3, "cs"):
        for lam in ws:
            for mu in ws:
                if lam * mu == 1:
                    # any inner weight must work here; try three
                    for nu in ws[:3]:
                        rec.check("cc.associative", lam=lam, mu=mu, nu=nu, x=x, y=y, z=z)
                else:
                    rec.check("cc.associative", lam=lam, mu=mu, nu=nu_assoc(lam, mu), x=x, y=y, z=z)
    return report.canonicalize()


def check_gamma_axioms(model: ConvexModel, sampler: Sampler, max_n: int = 5, max_m: int = 3) -> CheckReport:
    """Permutation invariance, merging of equal points, Dirac and flattening laws for ``gamma``."""
    report = CheckReport("gamma")
    rec = _Recorder(model, report)
    pts = sampler.points(model)
    rng = sampler.rng("gamma")
    dists = {n: sampler.distributions(model, n) for n in range(1, max(max_n, max_m) + 1)}

    def tup(n):
        return [_pick(rng, pts) for _ in range(n)]

    for n in range(1, max_n + 1):
        ds = dists[n]
        if not ds:
            continue
        rounds = max(sampler.budget, len(ds))
        for k in range(rounds):
            mu = ds[k % len(ds)]
            sigma = Permutation(rng.sample(range(n), n))
            rec.check("gamma.permutation", mu=mu, sigma=sigma, xs=tup(n))
            if n >= 2:
                xs = tup(n)
                xs[1] = xs[0]
                rec.check("gamma.merge", mu=mu, xs=xs)
        for i in range(n):
            for _ in range(max(1, sampler.budget // (n * 4))):
                rec.check("gamma.dirac", mu=ProbDist.dirac(n, i), xs=tup(n))
    nus = dists[2]
    for n in range(1, max_n + 1):
        for m in range(1, max_m + 1):
            if not (nus and dists[n] and dists[m]):
                continue
            for _ in range(max(1, sampler.budget // 5)):
                rec.check(
                    "gamma.flatten",
                    nu=_pick(rng, nus),
                    mu=_pick(rng, dists[n]),
                    mu_tilde=_pick(rng, dists[m]),
                    xs=tup(n),
                    xts=tup(m),
                )
    return report.canonicalize()


def _require_metric(model):
    if model.metric_kind is None:
        raise NoMetricError(f"{model.kind} model has no metric")


def check_metric_axiom(model: ConvexModel, sampler: Sampler, max_n: int = 4) -> CheckReport:
    """Lipschitz compatibility of ``gamma`` with the metric, and its binary form."""
    _require_metric(model)
    report = CheckReport("metric")
    rec = _Recorder(model, report)
    pts = sampler.points(model)
    rng = sampler.rng("metric")
    for n in range(1, max_n + 1):
        ds = sampler.distributions(model, n)
        for k in range(max(sampler.budget, len(ds))):
            xs = [_pick(rng, pts) for _ in range(n)]
            ys = xs if k == 0 else [_pick(rng, pts) for _ in range(n)]
            rec.check("gamma.contraction", mu=ds[k % len(ds)], xs=xs, ys=ys)
    for x, y, z in sampler.tuples(model, 3, "metric"):
        for lam in sampler.weights(model):
            rec.check("cc.contraction", lam=lam, x=x, y=y, z=z)
    return report.canonicalize()


def check_first_metric_condition(model: ConvexModel, constant, sampler: Sampler, max_n: int = 4) -> CheckReport:
    """``d(gamma_mu(x), gamma_mu'(x)) <= C * |mu - mu'|_1`` on sampled tuples.

    The report's ``max_ratio`` is the largest observed ``d / |mu - mu'|_1``,
    a lower bound on the best admissible constant.
    """
    _require_metric(model)
    constant = as_rational(constant)
    report = CheckReport("first-metric")
    rec = _Recorder(model, report)
    best = Fraction(0)

    def run(mu, mu_tilde, xs):
        nonlocal best
        if rec.check("first-metric", constant=constant, mu=mu, mu_tilde=mu_tilde, xs=xs) is None:
            return
        gap = l1_distance(mu, mu_tilde)
        if gap:
            best = max(best, model.distance(_gamma(model, mu, xs), _gamma(model, mu_tilde, xs)) / gap)

    if isinstance(model, HullModel):
        # generator tuple against every pair of grid distributions
        gens = list(model.generators)
        ds = sampler.distributions(model, len(gens))
        if len(ds) ** 2 <= sampler.exhaustive_limit:
            for mu in ds:
                for mu_tilde in ds:
                    run(mu, mu_tilde, gens)
    pts = sampler.points(model)
    rng = sampler.rng("first-metric")
    for n in range(1, max_n + 1):
        ds = sampler.distributions(model, n)
        for k in range(sampler.budget):
            mu = ds[k % len(ds)]
            mu_tilde = mu if k == 0 else _pick(rng, ds)
            run(mu, mu_tilde, [_pick(rng, pts) for _ in range(n)])
    report.extras["constant"] = constant
    report.extras["max_ratio"] = best
    return report.canonicalize()


# --------------------------------------------------------------------------
# cancellation


@dataclass(frozen=True)
class CancellationWitness:
    """``cc(lam, x, y) == cc(lam, x, z)`` with ``y != z`` and ``0 < lam < 1``."""

    x: object
    y: object
    z: object
    lam: Fraction

    def is_valid(self, model: ConvexModel) -> bool:
        if not (0 < self.lam < 1) or self.y == self.z:
            return False
        if not all(model.contains(p) for p in (self.x, self.y, self.z)):
            return False
        try:
            return model.combine(self.lam, self.x, self.y) == model.combine(self.lam, self.x, self.z)
        except UnsupportedWeightError:
            return False

    def to_dict(self) -> dict:
        return {"x": encode(self.x), "y": encode(self.y), "z": encode(self.z), "lam": format_rational(self.lam)}

    @classmethod
    def from_dict(cls, model: ConvexModel, obj: dict) -> "CancellationWitness":
        return cls(model.parse_point(obj["x"]), model.parse_point(obj["y"]), model.parse_point(obj["z"]), as_weight(obj["lam"]))


def cancellation_search(
    model: ConvexModel,
    sampler: Sampler,
    *,
    bases: Optional[list] = None,
    pairs: Optional[list] = None,
) -> Optional[CancellationWitness]:
    """First ``(x, y, z, lam)`` violating cancellation, or None within budget.

    ``bases`` restricts ``x`` and ``pairs`` restricts ``(y, z)``; by default
    finite models are scanned exhaustively and hull models by sampled triples.
    """
    lams = sampler.interior_weights(model)
    if bases is None and pairs is None and not model.is_finite:
        candidates = [(x, y, z) for x, y, z in sampler.tuples(model, 3, "cancel") if y != z]
        for lam in lams:
            for x, y, z in candidates:
                if model.combine(lam, x, y) == model.combine(lam, x, z):
                    return CancellationWitness(x, y, z, lam)
        return None
    pts = sampler.points(model)
    if bases is None:
        bases = pts
    if pairs is None:
        pairs = [(y, z) for y in pts for z in pts if y != z]
    for lam in lams:
        for x in bases:
            for y, z in pairs:
                if y != z and model.combine(lam, x, y) == model.combine(lam, x, z):
                    return CancellationWitness(x, y, z, lam)
    return None


def lambda_sequence(lam0, k: int) -> list:
    """``[l_1, ..., l_k]`` with ``l_{n+1} = 2 l_n / (1 + l_n)``, increasing to 1."""
    lam = as_weight(lam0)
    if lam in (0, 1):
        raise DegenerateError("the starting weight must lie strictly between 0 and 1")
    if k < 0:
        raise ValueError("k must be non-negative")
    out = []
    for _ in range(k):
        lam = 2 * lam / (1 + lam)
        out.append(lam)
    return out


def cancellation_propagation(
    model: ConvexModel,
    witness: CancellationWitness,
    steps: int,
    sampler: Optional[Sampler] = None,
) -> CheckReport:
    """Check that a cancellation failure at one weight recurs at the others.

    The witness ``cc(l, x, y) == cc(l, x, z)`` is read, by commutativity, as
    ``cc(1-l, y, x) == cc(1-l, z, x)``; the identity is then tested along the
    doubling sequence above ``1-l`` and at every interior grid weight below it.
    """
    if not witness.is_valid(model):
        raise WitnessError(f"{witness} is not a cancellation witness in {model!r}")
    sampler = sampler or Sampler()
    report = CheckReport("cancel-propagation")
    rec = _Recorder(model, report)
    lam0 = 1 - witness.lam
    upward = lambda_sequence(lam0, steps)
    downward = [w for w in interior(sampler.grid) if w < lam0]
    for lam in [lam0] + upward + downward:
        rec.check("cancel.propagation", lam=lam, x=witness.x, y=witness.y, z=witness.z)
    report.extras["start"] = lam0
    report.extras["upward"] = upward
    report.extras["downward"] = downward
    return report.canonicalize()
