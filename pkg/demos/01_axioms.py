# %% [markdown]
# Checking convex-space axioms on small models
#
# A convex space only needs a binary operation cc(lam, x, y). Here we check
# the laws on three kinds of model and watch a corrupted table fail.

# %%
from fractions import Fraction as F

from barycentric import HullModel, MetricKind, ProbDist, SemilatticeModel, TableModel, gamma
from barycentric.harness import Sampler, check_convex_space_axioms, check_gamma_axioms

triangle = HullModel([(0, 0), (1, 0), (0, 1)], MetricKind.l1())
chain = SemilatticeModel.from_order(["a", "b"], [("a", "b")])
sampler = Sampler(seed=0, budget=100)

for model in (triangle, chain):
    report = check_convex_space_axioms(model, sampler)
    print(type(model).__name__, "passed" if report.passed else "FAILED", report.tested, "instances")

# %% [markdown]
# The n-ary combination is built from cc alone by peeling off the last weight.
# On a hull it agrees with the weighted sum.

# %%
mu = ProbDist([F(1, 2), F(1, 4), F(1, 4)])
print([str(c) for c in gamma(triangle, mu, list(triangle.generators))])
print(check_gamma_axioms(triangle, sampler).passed)

# %% [markdown]
# Flip one entry of a valid table and the checker names it.

# %%
table = TableModel.from_model(chain, [F(0), F(1, 3), F(1, 2), F(2, 3), F(1)])
broken = table.with_entry(F(1, 2), "a", "b", "b")
report = check_convex_space_axioms(broken, Sampler(grid=broken.grid))
for w in report.failures[:3]:
    print(w.law, {k: str(v) for k, v in w.inputs.items()}, w.lhs, "!=", w.rhs)
