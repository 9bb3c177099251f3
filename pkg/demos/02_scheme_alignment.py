"""What each relay scheme does to the signals, coefficient by coefficient.

For one random fade we print the noiseless gain of every symbol at the
destination and at the eavesdropper.  Messages are ``v*``, artificial
noise ``u*``.  Look for the zeros (beamforming) and the repeated values
(alignment).

Run: python demos/02_scheme_alignment.py
"""
import numpy as np

from diamond_wiretap.channel import sample_fading
from diamond_wiretap.signal import Scheme, SchemeParams, effective_gains, symbol_names

np.set_printoptions(precision=4, suppress=True)

STORY = {
    "S1": "noises align at the destination; each message hides under the other relay's noise",
    "S2": "message beamformed into the eavesdropper's null space",
    "S3": "common noise nulled at the destination, both messages on top of it at the eavesdropper",
    "S4": "blind jamming: both noises share one destination gain, the message another",
    "S5": "computation for jamming: noise cancels exactly at the destination",
}

f = sample_fading(42)
print(f"h = {f.h}, g = {f.g}\n")
for name, story in STORY.items():
    params = SchemeParams(Scheme(name), a=1.0, Q=1)
    dest, eve = effective_gains(params, f)
    print(f"{name}: {story}")
    for sym, d, e in zip(symbol_names(params), dest, eve):
        print(f"    {sym:>3}: destination {d:+.4f}   eavesdropper {e:+.4f}")

f3 = sample_fading(7, M=3)
print("\nThree relays, S-AB sub-scheme on relays (0, 2)")
params = SchemeParams(Scheme.SAB, a=1.0, Q=1, M=3, relays=(0, 2))
dest, eve = effective_gains(params, f3)
for sym, d, e in zip(symbol_names(params), dest, eve):
    print(f"    {sym:>3}: destination {d:+.4f}   eavesdropper {e:+.4f}")
print("Every message lands on the same eavesdropper gain as the common noise.")
