"""The integer floor model and the entropy step behind the converse.

On the deterministic model the relays send integers ``x_k`` in
``{0, ..., floor(sqrt(P))}`` and receivers see ``sum_k floor(c_k x_k)``.
The converse relies on ``H(Y2) >= H(X1|X2) - H(X1|floor(g1 X1))`` and on
the last term being bounded by a constant.  Both are checked here by
exhaustive enumeration.

Run: python demos/04_deterministic_oracle.py
"""
from diamond_wiretap.channel import sample_fading
from diamond_wiretap.oracle import det_entropy_check, floor_preimage_bound, random_joint_pmf

print("Largest number of inputs sharing one value of floor(g x), x in 0..31")
for g in (1.0, 0.75, 0.5, 1 / 3, 0.25):
    mult, bound = floor_preimage_bound(g, 31 ** 2, L=4)
    print(f"  g = {g:.3f}: multiplicity {mult}, so H(X | floor(gX)) <= {bound:.3f} bits")

print("\nRandom fades and joint input laws, floor(sqrt P) = 7")
worst = None
for i in range(200):
    rep = det_entropy_check(sample_fading((1, i)), 49, random_joint_pmf((2, i), 7))
    assert rep.holds
    if worst is None or rep.slack < worst.slack:
        worst = rep
print(f"  200 instances, no violation; tightest slack {worst.slack:.4f} bits")
print(f"  (H(Y2) = {worst.H_Y2:.4f}, H(X1|X2) = {worst.H_X1_given_X2:.4f}, "
      f"H(X1|floor) = {worst.H_X1_given_floor:.4f})")
