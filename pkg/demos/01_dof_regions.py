"""Secure d.o.f. of the diamond-wiretap channel as a function of the link d.o.f.

The source reaches the relays over orthogonal links carrying ``alpha_k``
d.o.f. each; the relays then share a Gaussian MAC towards the destination
while an eavesdropper listens.  This script walks through the closed forms,
the time-sharing plans that achieve them and the effect of losing the
eavesdropper's CSI.

Run: python demos/01_dof_regions.py
"""
from fractions import Fraction as F

from diamond_wiretap.dof import (FULL, NO_EVE, ds_full, ds_multi_bounds, ds_multi_nocsi,
                                 ds_nocsi, plan_timeshare, plan_timeshare_multi)


def show_plan(a1, a2, csi):
    plan = plan_timeshare(a1, a2, csi)
    parts = ", ".join(f"{e.scheme} {e.fraction}" for e in plan.entries)
    print(f"  ({a1}, {a2}) {csi:>6}: d_s = {plan.achieved_ds}  [{parts}]  case: {plan.case}")


print("Symmetric links, two relays")
print("  alpha   full CSI   no eavesdropper CSI")
for k in range(0, 13):
    a = F(k, 8)
    print(f"  {str(a):>5}   {str(ds_full(a, a)):>8}   {str(ds_nocsi(a, a)):>8}")
print("The full-CSI curve doubles up to alpha = 1/3 and the blind one up to 1/4;")
print("both reach one secure d.o.f. at alpha = 1.\n")

print("Time-sharing plans (exact fractions)")
for a1, a2 in [(F(1, 5), F(1, 10)), (F(1, 2), F(1, 4)), (F(3, 4), F(1, 2)), (2, 2)]:
    show_plan(a1, a2, FULL)
for a1, a2 in [(F(1, 5), F(1, 10)), (F(1, 2), F(1, 2)), (F(3, 2), F(1, 2)), (1, 1)]:
    show_plan(a1, a2, NO_EVE)

print("\nMore relays, symmetric links")
for M in (2, 3, 4, 6):
    row = []
    for a in (F(1, 10), F(1, 4), F(1, 2)):
        lo, hi = ds_multi_bounds(M, a)
        row.append(f"alpha={a}: full in [{float(lo):.3f}, {float(hi):.3f}], "
                   f"blind {float(ds_multi_nocsi(M, a)):.3f}")
    print(f"  M={M}: " + "; ".join(row))

plan = plan_timeshare_multi(3, F(5, 9), FULL)
print(f"\nM=3, alpha=5/9 with full CSI: {plan.fractions()} -> d_s = {plan.achieved_ds}")
plan = plan_timeshare_multi(3, F(2, 9), NO_EVE)
print(f"M=3, alpha=2/9 without eavesdropper CSI: {plan.fractions()} -> d_s = {plan.achieved_ds}")
