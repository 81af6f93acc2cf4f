# %% [markdown]
# Reading a norm off a compatible metric
#
# If the metric is translation invariant and uniform along segments, the
# length of a direction v is just d(b, b + v) for any base b that keeps the
# segment inside the space. Short segments are scaled back up.

# %%
from fractions import Fraction as F

from barycentric import HullModel, MetricKind, recover_norm, verify_isometry
from barycentric.harness import Sampler
from barycentric.norms import boundedness_check

square = HullModel([(0, 0), (1, 0), (0, 1), (1, 1)], MetricKind.linf())
for v in ([F(1, 2), F(1, 4)], [F(3), F(-5)], [0, 0]):
    probe = recover_norm(square, v)
    print([str(c) for c in v], "->", probe.value)

# %% [markdown]
# Embedding coordinates plus the recovered norm reproduce every distance.

# %%
report = verify_isometry(square, Sampler(seed=3), depth=2, grid=[F(1, 2)])
print(report.passed, report.extras["pairs"], "pairs")

# %% [markdown]
# Bounded spaces satisfy a Lipschitz bound on distributions. A long segment
# with a constant that is too small does not.

# %%
segment = HullModel([(0,), (5,)], MetricKind.l1())
print(boundedness_check(segment, Sampler()).extras["c0"])
bad = boundedness_check(segment, Sampler(), constant=1)
print(bad.passed, bad.failures[0].lhs, ">", bad.failures[0].rhs)
