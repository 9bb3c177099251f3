"""Secrecy rates at finite power and the d.o.f. they point to.

For Schemes 3 and 5 we evaluate the exact mutual information per fade
(numerical integration, no sampling), average over fades and fit the
slope against half the log of the power.  The secure d.o.f. of both
schemes is one; at these powers the slopes sit somewhat below it, and the
leakage stays bounded.  Then the destination's symbol error rate of the
minimum-distance decoder for Scheme 5.

Run: python demos/03_finite_power_rates.py   (about a second)
"""
from diamond_wiretap.analysis import (error_prob_mc, estimate_rate, fit_dof_slope,
                                      pam_ser_closed_form, scheme3_leakage_bound)
from diamond_wiretap.signal import scheme_params

POWERS = [1e3, 1e4, 1e5, 1e6]

for scheme in ("S5", "S3"):
    print(f"{scheme}, delta = 0.1, 20 fades per point")
    print("       P    Q   I(V;Y1)  I(V;Y2)  rate lb")
    recs = [estimate_rate(scheme, P, 0.1, n_fades=20, seed=1) for P in POWERS]
    for r in recs:
        extra = f"  (leakage bound {scheme3_leakage_bound(r.Q):.3f})" if scheme == "S3" else ""
        print(f"  {r.P:8.0e} {r.Q:4d}  {r.I_dest:7.3f}  {r.I_eve:7.3f}  {r.rate_lb:7.3f}{extra}")
    slope = fit_dof_slope([(r.P, r.rate_lb) for r in recs])
    leak = fit_dof_slope([(r.P, r.I_eve) for r in recs])
    print(f"  fitted rate slope {slope:.3f}, leakage slope {leak:.3f}\n")

print("Scheme 5 decoding, delta = 0.4")
for P in (1e4, 1e6, 1e8):
    p = scheme_params("S5", P, 0.4)
    ser = error_prob_mc("S5", P, 0.4, trials=20_000, seed=3)
    print(f"  P = {P:.0e}: spacing a = {p.a:6.2f}, SER {ser:.4f} "
          f"(closed form {pam_ser_closed_form(p.a, p.Q):.2e})")
