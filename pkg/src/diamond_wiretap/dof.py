"""Secure degrees-of-freedom formulas and time-sharing planners.

All formulas use plain arithmetic, so :class:`fractions.Fraction` inputs
give exact rational outputs and floats give floats.
"""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .signal import Scheme

__all__ = ["FULL", "NO_EVE", "DofPoint", "PlanEntry", "TimeSharePlan",
           "ds_full", "ds_nocsi", "ds_multi_bounds", "ds_multi_nocsi",
           "plan_timeshare", "plan_timeshare_multi", "region_sweep",
           "SCHEME_DOF"]

FULL = "full"
NO_EVE = "no_eve"
_CSI = (FULL, NO_EVE)

# (per-relay link d.o.f. used, secure d.o.f. delivered) for the two-relay schemes
SCHEME_DOF = {
    Scheme.S1: ((Fraction(1, 3), Fraction(1, 3)), Fraction(2, 3)),
    Scheme.S2: ((1, 1), 1),
    Scheme.S3: ((1, 1), 1),
    Scheme.S4: ((Fraction(1, 2), 0), Fraction(1, 2)),
    Scheme.S4STAR: ((0, Fraction(1, 2)), Fraction(1, 2)),
    Scheme.S5: ((1, 1), 1),
}

# tolerance for dropping zero-length plan entries produced by float rounding
_ZERO = 1e-15


def _check_csi(csi):
    if csi not in _CSI:
        raise ValueError(f"csi must be one of {_CSI}, got {csi!r}")


def _nonneg(*alphas):
    for a in alphas:
        if a < 0:
            raise ValueError(f"link d.o.f. must be nonnegative, got {a}")


def _exact(a):
    # plain integers stay exact through the divisions below
    return Fraction(a) if isinstance(a, (int, np.integer)) and not isinstance(a, bool) else a


def _order(alpha1, alpha2):
    alpha1, alpha2 = _exact(alpha1), _exact(alpha2)
    return (alpha1, alpha2) if alpha1 >= alpha2 else (alpha2, alpha1)


@dataclass(frozen=True)
class DofPoint:
    """Link d.o.f. of the broadcast part, normalised to ``alpha1 >= alpha2``.

    ``swapped`` records that the physical relay 2 had the larger link.
    """
    alpha1: float
    alpha2: float
    M: int = 2
    symmetric_alpha: float = None
    swapped: bool = False

    @classmethod
    def normalized(cls, alpha1, alpha2):
        _nonneg(alpha1, alpha2)
        a1, a2 = _order(alpha1, alpha2)
        return cls(a1, a2, 2, a1 if a1 == a2 else None, alpha1 < alpha2)


def ds_full(alpha1, alpha2):
    """Secure d.o.f. with full CSI: ``min{a1 + a2, (a2 + 1)/2, 1}`` for a1 >= a2."""
    _nonneg(alpha1, alpha2)
    a1, a2 = _order(alpha1, alpha2)
    return min(a1 + a2, (a2 + 1) / 2, 1)


def ds_nocsi(alpha1, alpha2):
    """Secure d.o.f. without eavesdropper CSI.

    ``min{a1 + a2, (a1 + a2 + 1)/3, (a2 + 1)/2, 1}`` for a1 >= a2.
    """
    _nonneg(alpha1, alpha2)
    a1, a2 = _order(alpha1, alpha2)
    return min(a1 + a2, (a1 + a2 + 1) / 3, (a2 + 1) / 2, 1)


def _check_M(M):
    if int(M) != M or M < 2:
        raise ValueError(f"M must be an integer >= 2, got {M}")


def ds_multi_bounds(M, alpha):
    """Lower and upper bounds on the symmetric ``M``-relay secure d.o.f., full CSI.

    ``upper = min{M a, (M-1)/M (1 + a), 1}`` and
    ``lower = min{M a, (2M(M-1) + M^2 a) / (2M^2 - M + 2), 1}``.
    """
    _check_M(M)
    _nonneg(alpha)
    alpha = _exact(alpha)
    upper = min(M * alpha, Fraction(M - 1, M) * (1 + alpha), 1)
    lower = min(M * alpha, (2 * M * (M - 1) + M * M * alpha) / (2 * M * M - M + 2), 1)
    if isinstance(alpha, float):
        upper, lower = float(upper), float(lower)
    return lower, upper


def ds_multi_nocsi(M, alpha):
    """Symmetric ``M``-relay secure d.o.f. without eavesdropper CSI.

    ``min{M a, (M a + M - 1)/(M + 1), 1}``.
    """
    _check_M(M)
    _nonneg(alpha)
    alpha = _exact(alpha)
    return min(M * alpha, (M * alpha + M - 1) / (M + 1), 1)


@dataclass(frozen=True)
class PlanEntry:
    scheme: str
    fraction: float
    usage: tuple
    ds: float


@dataclass
class TimeSharePlan:
    """Fractions of the block given to each constituent scheme.

    ``usage`` vectors are in physical relay order.  The silence entry, when
    present, carries the unused remainder of the block.
    """
    entries: list
    csi: str
    alphas: tuple
    swapped: bool = False
    case: str = ""
    achieved_ds: float = field(init=False)

    def __post_init__(self):
        self.achieved_ds = sum(e.fraction * e.ds for e in self.entries)

    @property
    def M(self):
        return len(self.alphas)

    def total_fraction(self):
        return sum(e.fraction for e in self.entries)

    def link_usage(self):
        usage = [0] * self.M
        for e in self.entries:
            for k, u in enumerate(e.usage):
                usage[k] = usage[k] + e.fraction * u
        return tuple(usage)

    def link_slack(self):
        return tuple(a - u for a, u in zip(self.alphas, self.link_usage()))

    def fractions(self):
        """Mapping ``scheme label -> fraction`` (silence excluded)."""
        return {e.scheme: e.fraction for e in self.entries
                if e.scheme != Scheme.SILENCE.value}

    def validate(self, tol=1e-12):
        """Raise ``AssertionError`` if fractions or link budgets are violated."""
        for e in self.entries:
            assert e.fraction >= -tol, f"negative fraction {e}"
        assert self.total_fraction() <= 1 + tol, "fractions exceed the block"
        for k, slack in enumerate(self.link_slack()):
            assert slack >= -tol, f"link {k} over budget by {-slack}"


def _entries(pieces, M, swap=False):
    """Build plan entries from ``(scheme, fraction, usage, ds)`` tuples."""
    out = []
    total = 0
    for scheme, frac, usage, ds in pieces:
        if abs(frac) <= _ZERO:
            continue
        if frac < 0:
            raise AssertionError(f"negative fraction {frac} for {scheme}")
        label = scheme.value if isinstance(scheme, Scheme) else str(scheme)
        usage = tuple(usage)
        if swap:
            label = {"S4": "S4*", "S4*": "S4"}.get(label, label)
            usage = usage[::-1]
        out.append(PlanEntry(label, frac, usage, ds))
        total = total + frac
    rest = 1 - total
    if rest > _ZERO:
        out.append(PlanEntry(Scheme.SILENCE.value, rest, (0,) * M, 0))
    return out


def _piece(scheme, frac):
    usage, ds = SCHEME_DOF[scheme]
    return scheme, frac, usage, ds


def plan_timeshare(alpha1, alpha2, csi=FULL, mimo_scheme=Scheme.S3):
    """Time-sharing plan achieving the two-relay secure d.o.f.

    The case is chosen by the first term attaining the minimum in the
    d.o.f. formula, so boundary points use the lower-indexed case.

    Parameters
    ----------
    alpha1, alpha2 : float or Fraction
        Physical link d.o.f. of relays 1 and 2.
    csi : {"full", "no_eve"}
    mimo_scheme : Scheme
        Scheme used for the one-d.o.f. corner with full CSI (S2, S3 or S5).
    """
    _check_csi(csi)
    mimo_scheme = Scheme(mimo_scheme)
    if mimo_scheme not in (Scheme.S2, Scheme.S3, Scheme.S5):
        raise ValueError(f"full-CSI corner scheme must be S2, S3 or S5, got {mimo_scheme}")
    pt = DofPoint.normalized(alpha1, alpha2)
    a1, a2 = pt.alpha1, pt.alpha2
    if csi == FULL:
        terms = [a1 + a2, (a2 + 1) / 2, 1]
        case = int(np.argmin([float(t) for t in terms]))
        if case == 0:
            pieces = [_piece(Scheme.S1, 3 * a2), _piece(Scheme.S4, 2 * (a1 - a2))]
            name = "sum-limited"
        elif case == 1 and a2 * 3 <= 1:
            pieces = [_piece(Scheme.S1, 3 * a2), _piece(Scheme.S4, 1 - 3 * a2)]
            name = "randomness-limited, a2 <= 1/3"
        elif case == 1:
            pieces = [_piece(Scheme.S1, 3 * (1 - a2) / 2),
                      _piece(mimo_scheme, (3 * a2 - 1) / 2)]
            name = "randomness-limited, a2 > 1/3"
        else:
            pieces = [_piece(mimo_scheme, 1)]
            name = "saturated"
    else:
        terms = [a1 + a2, (a1 + a2 + 1) / 3, (a2 + 1) / 2, 1]
        case = int(np.argmin([float(t) for t in terms]))
        if case == 0:
            pieces = [_piece(Scheme.S4, 2 * a1), _piece(Scheme.S4STAR, 2 * a2)]
            name = "sum-limited"
        elif case == 1:
            l4 = 2 * (a1 - 2 * a2 + 1) / 3
            l4s = 2 * (a2 - 2 * a1 + 1) / 3
            pieces = [_piece(Scheme.S4, l4), _piece(Scheme.S4STAR, l4s),
                      _piece(Scheme.S5, 1 - l4 - l4s)]
            name = "blind-jamming-limited"
        elif case == 2:
            pieces = [_piece(Scheme.S4, 1 - a2), _piece(Scheme.S5, a2)]
            name = "randomness-limited"
        else:
            pieces = [_piece(Scheme.S5, 1)]
            name = "saturated"
    entries = _entries(pieces, 2, swap=pt.swapped)
    return TimeSharePlan(entries, csi, (alpha1, alpha2), pt.swapped, name)


def multi_corners(M, csi=FULL):
    """The two corner points ``((alpha, ds), (alpha, ds))`` behind the M-relay plans."""
    _check_M(M)
    _check_csi(csi)
    if csi == FULL:
        D = M * (M - 1) + 1
        return ((Fraction(M - 1, D), Fraction(M * (M - 1), D)),
                (Fraction(1, M) + Fraction(2, M * M), Fraction(1)))
    return ((Fraction(M - 1, M * M), Fraction(M - 1, M)),
            (Fraction(2, M), Fraction(1)))


def _low_schemes(M, csi):
    """Sub-schemes behind the first corner: ``[(label, usage, ds)]`` and weight."""
    (alpha_a, ds_a), _ = multi_corners(M, csi)
    if csi == FULL:
        return [(Scheme.CJ.value, (alpha_a,) * M, ds_a)], 1
    subs = []
    for k in range(M):
        usage = tuple(Fraction(M - 1, M) if m == k else 0 for m in range(M))
        subs.append((f"BCJ({k})", usage, ds_a))
    return subs, Fraction(1, M)


def _high_schemes(M, csi):
    subs = []
    for i in range(M):
        for j in range(i + 1, M):
            if csi == FULL:
                usage = tuple(Fraction(2, M) if m in (i, j) else Fraction(1, M)
                              for m in range(M))
                subs.append((f"SAB({i},{j})", usage, 1))
            else:
                usage = tuple(1 if m in (i, j) else 0 for m in range(M))
                subs.append((f"CoJ({i},{j})", usage, 1))
    return subs, Fraction(2, M * (M - 1))


def plan_timeshare_multi(M, alpha, csi=FULL):
    """Uniform time-sharing over the M-relay sub-schemes for symmetric ``alpha``.

    Below the first corner the low-``alpha`` sub-schemes (cooperative
    jamming with full CSI, the ``M`` blind-jamming sub-schemes otherwise)
    run for ``alpha / alpha_A`` of the block; between the corners they share
    the block with the ``M(M-1)/2`` pair sub-schemes (S-AB or CoJ); beyond
    the second corner only the pair sub-schemes run.  The achieved value is
    the lower bound with full CSI and the exact value without.
    """
    _check_M(M)
    _check_csi(csi)
    _nonneg(alpha)
    (alpha_a, ds_a), (alpha_b, _) = multi_corners(M, csi)
    if isinstance(alpha, float):
        alpha_a, ds_a, alpha_b = float(alpha_a), float(ds_a), float(alpha_b)
    low, w_low = _low_schemes(M, csi)
    high, w_high = _high_schemes(M, csi)
    if alpha <= alpha_a:
        lam_low, lam_high = alpha / alpha_a, 0
        name = "below first corner"
    elif alpha <= alpha_b:
        lam_high = (alpha - alpha_a) / (alpha_b - alpha_a)
        lam_low = 1 - lam_high
        name = "between corners"
    else:
        lam_low, lam_high = 0, 1
        name = "saturated"
    if isinstance(alpha, float):
        w_low, w_high = float(w_low), float(w_high)
    pieces = [(lbl, lam_low * w_low, usage, ds) for lbl, usage, ds in low]
    pieces += [(lbl, lam_high * w_high, usage, ds) for lbl, usage, ds in high]
    return TimeSharePlan(_entries(pieces, M), csi, (alpha,) * M, False, name)


def region_sweep(alphas, csi=FULL, M=2, symmetric=True):
    """Evaluate the secure d.o.f. over a grid of link d.o.f.

    Parameters
    ----------
    alphas : sequence of float
        Grid values (must be nonempty).
    csi : {"full", "no_eve"}
    M : int
        Number of relays.  ``M > 2`` is symmetric only.
    symmetric : bool
        For ``M = 2``, ``False`` sweeps the full product grid
        ``alphas x alphas``.

    Returns
    -------
    list of dict
        Rows with keys ``csi, M, alpha1, alpha2, ds_lower, ds_upper``; the
        two bounds coincide wherever the value is known exactly.
    """
    _check_csi(csi)
    _check_M(M)
    alphas = list(alphas)
    if not alphas:
        raise ValueError("grid must contain at least one point")
    rows = []
    if M == 2 and not symmetric:
        pairs = [(a1, a2) for a1 in alphas for a2 in alphas]
    else:
        pairs = [(a, a) for a in alphas]
    for a1, a2 in pairs:
        if M == 2:
            ds = ds_full(a1, a2) if csi == FULL else ds_nocsi(a1, a2)
            lo = hi = ds
        elif csi == FULL:
            lo, hi = ds_multi_bounds(M, a1)
        else:
            lo = hi = ds_multi_nocsi(M, a1)
        rows.append(dict(csi=csi, M=M, alpha1=a1, alpha2=a2, ds_lower=lo, ds_upper=hi))
    return rows
