# %% [markdown]
# Embedding a convex space into a vector space
#
# Close the generators under cc, then divide the free vector space on the
# resulting points by every relation e_cc(lam,x,y) = lam e_x + (1-lam) e_y.
# Cancellative models embed injectively. Semilattices collapse.

# %%
from fractions import Fraction as F

from barycentric import HullModel, SemilatticeModel, embed
from barycentric.harness import Sampler, cancellation_propagation, cancellation_search

square = HullModel([(0, 0), (1, 0), (0, 1), (1, 1)])
carrier, relations, report, check = embed(square, list(square.generators), [F(1, 2)], 2)
print(len(carrier), "points,", len(relations), "relations")
print("dimension", report.dimension, "injective", report.injective, "verified", check.passed)

# %% [markdown]
# The two-element chain a < b with cc = meet. Both points land on the same
# coordinate, and the collision comes with a cancellation counterexample.

# %%
chain = SemilatticeModel.from_order(["a", "b"], [("a", "b")])
carrier, relations, report, check = embed(chain, ["a", "b"], [F(1, 3), F(1, 2)], 1)
print(report.coordinates, report.collision_classes)
print(check.extras["cancellation_witness"])

# %% [markdown]
# One failure of cancellation spreads to a whole sequence of weights.

# %%
witness = cancellation_search(chain, Sampler())
prop = cancellation_propagation(chain, witness, 6)
print([str(lam) for lam in prop.extras["upward"]], prop.passed)
