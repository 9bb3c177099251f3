"""Brute-force information measures on small discrete alphabets.

These routines enumerate every outcome; they exist to check the numerical
machinery in :mod:`diamond_wiretap.analysis` and the single-letter entropy
steps behind the converse bounds on the integer floor model.
"""
import itertools
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import _rng
from .channel import DEFAULT_L, FadingState, det_output

__all__ = ["Pmf", "exact_entropy", "conditional_entropy", "floor_preimage_bound",
           "det_entropy_check", "DetEntropyReport", "random_joint_pmf",
           "discrete_mutual_information", "MAX_DET_INPUT"]

MAX_DET_INPUT = 31


@dataclass(frozen=True)
class Pmf:
    """Finite distribution over integer tuples."""
    support: tuple
    probs: np.ndarray

    def __post_init__(self):
        support = tuple(tuple(int(v) for v in np.atleast_1d(s)) for s in self.support)
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (len(support),):
            raise ValueError(f"{len(support)} support points but probs shape {probs.shape}")
        if len(set(support)) != len(support):
            raise ValueError("support points must be distinct")
        if np.any(probs < 0):
            raise ValueError("probabilities must be nonnegative")
        if abs(probs.sum() - 1) > 1e-12:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, support):
        support = list(support)
        return cls(support, np.full(len(support), 1.0 / len(support)))

    @classmethod
    def from_mapping(cls, mapping):
        keys = list(mapping)
        return cls(keys, np.array([mapping[k] for k in keys], dtype=float))

    def push(self, fn):
        """Distribution of ``fn(outcome)``; ``fn`` must return an int or int tuple."""
        acc = defaultdict(float)
        for s, p in zip(self.support, self.probs):
            acc[fn(s)] += p
        return Pmf.from_mapping(acc)

    def marginal(self, *idx):
        return self.push(lambda s: tuple(s[i] for i in idx))


def _entropy_bits(probs):
    p = np.asarray(probs, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def exact_entropy(p):
    """Shannon entropy in bits, with ``0 log 0 = 0``."""
    if not isinstance(p, Pmf):
        raise TypeError(f"expected a Pmf, got {type(p).__name__}")
    return _entropy_bits(p.probs)


def conditional_entropy(p, target, given):
    """``H(target | given)`` in bits; both are functions of an outcome.

    Computed as ``H(target, given) - H(given)``.
    """
    joint = p.push(lambda s: (target(s), given(s)))
    cond = p.push(lambda s: given(s))
    return exact_entropy(_flatten(joint)) - exact_entropy(_flatten(cond))


def _flatten(p):
    # relabel arbitrary hashable outcomes as integer indices
    return Pmf([(i,) for i in range(len(p.support))], p.probs)


def floor_preimage_bound(g, Pmax, L=DEFAULT_L):
    """Largest preimage of ``x -> floor(g x)`` over ``x in {0, ..., floor(sqrt(Pmax))}``.

    Returns ``(max_multiplicity, log2(max_multiplicity))``.  The second value
    bounds ``H(X | floor(g X))`` for any law of ``X``; the bound is checked
    here for uniform ``X`` by exact computation.
    """
    if not 1.0 / L <= abs(g) <= L:
        raise ValueError(f"|g| = {abs(g)} outside the fading support [1/{L}, {L}]")
    if Pmax < 1:
        raise ValueError(f"Pmax must be >= 1, got {Pmax}")
    n = int(np.floor(np.sqrt(Pmax)))
    xs = np.arange(n + 1)
    ys = np.floor(g * xs).astype(np.int64)
    _, counts = np.unique(ys, return_counts=True)
    mult = int(counts.max())
    bound = float(np.log2(mult))
    h_cond = conditional_entropy(Pmf.uniform([(x,) for x in xs]),
                                 lambda s: s[0],
                                 lambda s: int(np.floor(g * s[0])))
    if h_cond > bound + 1e-12:
        raise AssertionError(f"H(X|floor(gX)) = {h_cond} exceeds log2 multiplicity {bound}")
    return mult, bound


@dataclass(frozen=True)
class DetEntropyReport:
    """Single-letter terms of the eavesdropper-entropy lower bound.

    ``holds`` is ``H(Y2) >= H(X1|X2) - H(X1|floor(g1 X1))`` up to 1e-12.
    """
    H_Y2: float
    H_Y2_given_X2: float
    H_X1_given_X2: float
    H_X1_given_floor: float
    holds: bool

    @property
    def slack(self):
        return self.H_Y2 - (self.H_X1_given_X2 - self.H_X1_given_floor)


def det_entropy_check(f, Pmax, pmf):
    """Exact entropies on the floor model for a joint law of ``(X1, X2)``.

    Parameters
    ----------
    f : FadingState
        Single two-relay state.
    Pmax : int
        Power; inputs range over ``{0, ..., floor(sqrt(Pmax))}`` and
        ``floor(sqrt(Pmax))`` may not exceed 31.
    pmf : Pmf
        Joint law over pairs ``(x1, x2)``.

    Returns
    -------
    DetEntropyReport
    """
    n = int(np.floor(np.sqrt(Pmax)))
    if n > MAX_DET_INPUT:
        raise ValueError(f"floor(sqrt(Pmax)) = {n} exceeds {MAX_DET_INPUT}; "
                         "alphabet too large for enumeration")
    if f.M != 2 or f.h.ndim != 1:
        raise ValueError("need a single two-relay FadingState")
    for s in pmf.support:
        if len(s) != 2 or not all(0 <= v <= n for v in s):
            raise ValueError(f"support point {s} outside {{0..{n}}}^2")
    g1 = f.g[0]
    y2 = {s: det_output(f, s, Pmax)[1] for s in pmf.support}
    H_Y2 = exact_entropy(pmf.push(lambda s: y2[s]))
    H_Y2_X2 = conditional_entropy(pmf, lambda s: y2[s], lambda s: s[1])
    H_X1_X2 = conditional_entropy(pmf, lambda s: s[0], lambda s: s[1])
    H_X1_fl = conditional_entropy(pmf, lambda s: s[0],
                                  lambda s: int(np.floor(g1 * s[0])))
    holds = H_Y2 >= H_X1_X2 - H_X1_fl - 1e-12
    return DetEntropyReport(H_Y2, H_Y2_X2, H_X1_X2, H_X1_fl, bool(holds))


def random_joint_pmf(rng, n, concentration=1.0):
    """Symmetric-Dirichlet joint law on ``{0..n}^2``."""
    rng = _rng.generator(rng)
    support = list(itertools.product(range(n + 1), repeat=2))
    probs = rng.dirichlet(np.full(len(support), concentration))
    probs = probs / probs.sum()
    return Pmf(support, probs)


def _as_alphabet(c):
    pts = getattr(c, "points", c)
    return np.asarray(pts, dtype=float)


def discrete_mutual_information(coeffs, alphabets, inputs=None, decimals=9):
    """``I(V_S; sum_i c_i V_i)`` in bits by full enumeration.

    The ``V_i`` are independent and uniform on their alphabets; ``inputs`` is
    a boolean mask selecting ``S`` (all symbols by default).  Output values
    equal after rounding to ``decimals`` places are treated as one outcome.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    alphabets = [_as_alphabet(a) for a in alphabets]
    if len(alphabets) != coeffs.size:
        raise ValueError("one alphabet per coefficient required")
    mask = np.ones(coeffs.size, bool) if inputs is None else np.asarray(inputs, bool)
    idx_sets = [range(a.size) for a in alphabets]
    prob = 1.0 / np.prod([a.size for a in alphabets])
    y_law = defaultdict(float)
    joint = defaultdict(float)
    for tup in itertools.product(*idx_sets):
        y = sum(c * a[t] for c, a, t in zip(coeffs, alphabets, tup))
        key = round(y, decimals) + 0.0
        sel = tuple(t for t, m in zip(tup, mask) if m)
        y_law[key] += prob
        joint[(sel, key)] += prob
    h_y = _entropy_bits(list(y_law.values()))
    h_joint = _entropy_bits(list(joint.values()))
    h_sel = float(np.sum([np.log2(a.size) for a, m in zip(alphabets, mask) if m]))
    return h_y - (h_joint - h_sel)
