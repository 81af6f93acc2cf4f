"""JSON model specifications.

A spec is a JSON object. Rationals are always ``"num/den"`` strings (an
integer literal string such as ``"3"`` is accepted too). Common fields::

    kind     "hull" | "semilattice" | "table"
    grid     weights used by the samplers      (default: dyadic quarters + thirds)
    seed     integer                           (default: $BARYCENTRIC_SEED, else 0)
    budget   samples per check                 (default: 200)
    depth    closure rounds for the embedding  (default: 1)
    embed_grid  weights for the embedding      (default: grid)

Hull specs add ``dimension``, ``generators`` and optionally ``metric``
(``"l1"``, ``"linf"`` or ``{"kind": "weighted_l1", "weights": [...]}``).
Semilattice specs add ``elements`` and either ``meet`` (a square matrix of
element names) or ``order`` (a list of ``[a, b]`` pairs meaning a < b).
Table specs add ``carrier`` and ``cc``, a map from weight to a square matrix.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .distributions import dyadic_thirds_grid, format_rational, grid_order
from .errors import SpecError
from .harness import Sampler
from .models import ConvexModel, HullModel, MetricKind, SemilatticeModel, TableModel

SEED_ENV = "BARYCENTRIC_SEED"


def _rational(obj, path):
    if not isinstance(obj, str):
        raise SpecError(path, f"expected a 'num/den' string, got {json.dumps(obj)}")
    try:
        return Fraction(obj.strip())
    except (ValueError, ZeroDivisionError):
        raise SpecError(path, f"invalid rational {obj!r}") from None


def _weight(obj, path):
    w = _rational(obj, path)
    if not 0 <= w <= 1:
        raise SpecError(path, f"weight {obj} outside [0, 1]")
    return w


def _int(obj, path, minimum=None):
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise SpecError(path, f"expected an integer, got {json.dumps(obj)}")
    if minimum is not None and obj < minimum:
        raise SpecError(path, f"must be at least {minimum}")
    return obj


def _list(obj, path):
    if not isinstance(obj, list):
        raise SpecError(path, f"expected a list, got {json.dumps(obj)}")
    return obj


def _names(obj, path):
    names = _list(obj, path)
    for i, n in enumerate(names):
        if not isinstance(n, str):
            raise SpecError(f"{path}[{i}]", "element names must be strings")
    if len(set(names)) != len(names) or not names:
        raise SpecError(path, "names must be nonempty and distinct")
    return names


def _matrix(obj, names, path):
    rows = _list(obj, path)
    if len(rows) != len(names):
        raise SpecError(path, f"expected {len(names)} rows, got {len(rows)}")
    out = {}
    for i, row in enumerate(_list(r, f"{path}[{k}]") for k, r in enumerate(rows)):
        if len(row) != len(names):
            raise SpecError(f"{path}[{i}]", f"expected {len(names)} entries, got {len(row)}")
        for j, v in enumerate(row):
            if v not in names:
                raise SpecError(f"{path}[{i}][{j}]", f"{json.dumps(v)} is not a declared name")
            out[(names[i], names[j])] = v
    return out


def _grid(obj, path):
    ws = [_weight(w, f"{path}[{i}]") for i, w in enumerate(_list(obj, path))]
    if not ws:
        raise SpecError(path, "grid must not be empty")
    return tuple(sorted(set(ws), key=grid_order))


def _metric(obj, dim, path):
    if obj is None:
        return None
    if isinstance(obj, str):
        obj = {"kind": obj}
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpecError(path, "expected a metric name or an object with 'kind'")
    kind = obj["kind"]
    if kind == "l1":
        return MetricKind.l1()
    if kind == "linf":
        return MetricKind.linf()
    if kind == "weighted_l1":
        ws = [_rational(w, f"{path}.weights[{i}]") for i, w in enumerate(_list(obj.get("weights"), f"{path}.weights"))]
        if len(ws) != dim:
            raise SpecError(f"{path}.weights", f"expected {dim} weights, got {len(ws)}")
        for i, w in enumerate(ws):
            if w <= 0:
                raise SpecError(f"{path}.weights[{i}]", "weights must be strictly positive")
        return MetricKind.weighted_l1(ws)
    raise SpecError(f"{path}.kind", f"unknown metric {json.dumps(kind)}")


@dataclass
class ModelSpec:
    model: ConvexModel
    grid: tuple
    embed_grid: tuple
    seed: int
    budget: int
    depth: int
    canonical: dict

    @property
    def digest(self) -> str:
        blob = json.dumps(self.canonical, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def sampler(self, seed=None) -> Sampler:
        return Sampler(seed=self.seed if seed is None else seed, grid=self.grid, budget=self.budget)

    def generators(self) -> list:
        if isinstance(self.model, HullModel):
            return list(self.model.generators)
        return list(self.model.carrier)


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SpecError(f"${SEED_ENV}", f"expected an integer, got {raw!r}") from None


def parse_spec(data) -> ModelSpec:
    """Validate a decoded JSON spec and build its model."""
    if not isinstance(data, dict):
        raise SpecError("<root>", "a spec must be a JSON object")
    kind = data.get("kind")
    canonical: dict = {"kind": kind}
    if kind == "hull":
        dim = _int(data.get("dimension"), "dimension", minimum=1)
        gens = []
        for i, g in enumerate(_list(data.get("generators"), "generators")):
            g = _list(g, f"generators[{i}]")
            if len(g) != dim:
                raise SpecError(f"generators[{i}]", f"expected {dim} coordinates, got {len(g)}")
            gens.append(tuple(_rational(c, f"generators[{i}][{j}]") for j, c in enumerate(g)))
        if not gens:
            raise SpecError("generators", "at least one generator is required")
        metric = _metric(data.get("metric"), dim, "metric")
        model = HullModel(gens, metric)
        canonical.update(
            dimension=dim,
            generators=[[format_rational(c) for c in g] for g in gens],
            metric=None if metric is None else {
                "kind": metric.name.value,
                "weights": None if metric.weights is None else [format_rational(w) for w in metric.weights],
            },
        )
    elif kind == "semilattice":
        names = _names(data.get("elements"), "elements")
        if "meet" in data:
            meet = _matrix(data["meet"], names, "meet")
            try:
                model = SemilatticeModel(names, meet)
            except ValueError as e:
                raise SpecError("meet", str(e)) from None
        elif "order" in data:
            pairs = []
            for i, p in enumerate(_list(data["order"], "order")):
                p = _list(p, f"order[{i}]")
                if len(p) != 2 or any(q not in names for q in p):
                    raise SpecError(f"order[{i}]", "expected a pair of declared names")
                pairs.append(tuple(p))
            try:
                model = SemilatticeModel.from_order(names, pairs)
            except ValueError as e:
                raise SpecError("order", str(e)) from None
        else:
            raise SpecError("meet", "a semilattice needs 'meet' or 'order'")
        canonical.update(elements=names, meet=[[model.meet[(a, b)] for b in names] for a in names])
    elif kind == "table":
        names = _names(data.get("carrier"), "carrier")
        raw = data.get("cc")
        if not isinstance(raw, dict) or not raw:
            raise SpecError("cc", "expected a nonempty map from weight to matrix")
        table = {}
        for key, mat in raw.items():
            w = _weight(key, f"cc[{json.dumps(key)}]")
            if w in table:
                raise SpecError(f"cc[{json.dumps(key)}]", "duplicate weight")
            table[w] = _matrix(mat, names, f"cc[{json.dumps(key)}]")
        model = TableModel(names, table)
        canonical.update(
            carrier=names,
            cc={format_rational(w): [[table[w][(a, b)] for b in names] for a in names] for w in model.grid},
        )
    else:
        raise SpecError("kind", f"expected 'hull', 'semilattice' or 'table', got {json.dumps(kind)}")

    grid = _grid(data["grid"], "grid") if "grid" in data else dyadic_thirds_grid(2)
    embed_grid = _grid(data["embed_grid"], "embed_grid") if "embed_grid" in data else grid
    seed = _int(data["seed"], "seed") if "seed" in data else _default_seed()
    budget = _int(data.get("budget", 200), "budget", minimum=1)
    depth = _int(data.get("depth", 1), "depth", minimum=0)
    canonical.update(
        grid=[format_rational(w) for w in grid],
        embed_grid=[format_rational(w) for w in embed_grid],
        seed=seed,
        budget=budget,
        depth=depth,
    )
    return ModelSpec(model, grid, embed_grid, seed, budget, depth, canonical)


def load_spec(path) -> ModelSpec:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"<json line {e.lineno} column {e.colno}>", e.msg) from None
    return parse_spec(data)


def fixture_path(name: str) -> Path:
    """Path to a bundled fixture spec, e.g. ``fixture_path("triangle-l1")``."""
    if not name.endswith(".json"):
        name += ".json"
    return Path(str(resources.files("barycentric") / "fixtures" / name))


def fixture_names() -> list:
    return sorted(p.stem for p in Path(str(resources.files("barycentric") / "fixtures")).glob("*.json"))


def load_fixture(name: str) -> ModelSpec:
    return load_spec(fixture_path(name))
