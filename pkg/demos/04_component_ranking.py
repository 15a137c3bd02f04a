"""Rank gas-network components by Birnbaum importance.

A component's Birnbaum importance is the difference between the
plant's survival probability with that component pinned up and pinned
down.  Both conditional probabilities are estimated with the same
per-sample random numbers (common random numbers), which makes the
difference far less noisy than two independent runs would be.

The ranking splits into clear tiers: the single-corridor assets a
failure of which is unsurvivable, the delivery chain through station
55, the intake pair, and the heavily redundant storage stations whose
individual loss barely registers.
"""

from plantflow import datasets
from plantflow.reliability import ReliabilityQuery, birnbaum_importance, rank_components

doc = datasets.builtin("gas")
q = ReliabilityQuery(target_flow=0.5, samples=20_000, seed=42)
report = birnbaum_importance(doc.network, doc.model, q)

emap = {e.edge_id: e for e in doc.network.edges}
by_id = {rv.rv_id: rv for rv in doc.model.rvs}


def describe(rv_id: str) -> str:
    assets = by_id[rv_id].assets
    parts = []
    for a in assets:
        if isinstance(a, int):
            parts.append(f"station n{a}")
        else:
            e = emap[a]
            parts.append(f"({e.tail},{e.head})")
    return ", ".join(parts)


top = rank_components(report, limit=9)
print("highest Birnbaum importance:")
for e in top.entries:
    print(f"  {e.rv_id:>4}  {e.importance:+.4f} +/- {e.std_error:.4f}"
          f"   {describe(e.rv_id)}")

bottom = rank_components(report, limit=6, smallest=True)
print()
print("lowest (most redundant):")
for e in bottom.entries:
    print(f"  {e.rv_id:>4}  {e.importance:+.4f} +/- {e.std_error:.4f}"
          f"   {describe(e.rv_id)}")

print()
print("Every estimate sits within 3 standard errors of the nonnegative")
print("range, as it must for a plant where repairs never hurt:")
worst = min(e.importance + 3 * e.std_error for e in report.entries)
print(f"  min over components of (BI + 3 se) = {worst:+.4f}")
