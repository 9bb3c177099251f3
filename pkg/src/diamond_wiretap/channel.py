"""Fading generation and the two channel laws of the relay-to-destination
multiple-access part: the real Gaussian MAC and the integer floor model.

A :class:`FadingState` holds one realization of the legitimate gains ``h``
and eavesdropper gains ``g``.  Arrays of shape ``(M,)`` describe a single
channel use; arrays of shape ``(n, M)`` describe ``n`` independent uses and
are accepted everywhere a single state is.
"""
from dataclasses import dataclass

import numpy as np

from . import _rng

__all__ = ["FadingState", "ChannelUse", "sample_fading", "mac_output",
           "det_output", "draw_channel_use"]

DEFAULT_L = 2.0


@dataclass(frozen=True)
class FadingState:
    """Legitimate (``h``) and eavesdropper (``g``) fading coefficients.

    Parameters
    ----------
    h, g : array_like, shape (M,) or (n, M)
        Real coefficients with ``1/L <= |h_k|, |g_k| <= L``.
    L : float
        Support bound, ``L >= 1``.
    """
    h: np.ndarray
    g: np.ndarray
    L: float = DEFAULT_L

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        g = np.asarray(self.g, dtype=float)
        if h.shape != g.shape:
            raise ValueError(f"h and g shapes differ: {h.shape} vs {g.shape}")
        if h.ndim not in (1, 2) or h.shape[-1] < 2:
            raise ValueError("need at least M = 2 relays, arrays of shape "
                             f"(M,) or (n, M); got {h.shape}")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        lo, hi = 1.0 / self.L, self.L
        # 1e-12 slack keeps exact-endpoint draws (L -> 1) admissible
        for name, arr in (("h", h), ("g", g)):
            mag = np.abs(arr)
            if np.any(mag < lo * (1 - 1e-12)) or np.any(mag > hi * (1 + 1e-12)):
                raise ValueError(f"|{name}_k| outside [1/L, L] = [{lo}, {hi}]")
        h.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)

    @property
    def M(self):
        return self.h.shape[-1]

    @property
    def batch_shape(self):
        return self.h.shape[:-1]

    def __len__(self):
        if self.h.ndim == 1:
            raise TypeError("single FadingState has no length")
        return self.h.shape[0]

    def __getitem__(self, idx):
        if self.h.ndim == 1:
            raise TypeError("single FadingState is not indexable")
        return FadingState(self.h[idx], self.g[idx], self.L)

    def with_g(self, g):
        """Copy with the eavesdropper gains replaced."""
        return FadingState(self.h, g, self.L)


@dataclass(frozen=True)
class ChannelUse:
    """Relay inputs and the two unit-variance noise samples of one use."""
    x: np.ndarray
    n1: float
    n2: float


def sample_fading(seed, L=DEFAULT_L, M=2, size=None):
    """Draw fading coefficients with log-uniform magnitude on [1/L, L].

    Each of the ``2M`` coefficients is ``s * exp(U)`` with ``U`` uniform on
    ``[-log L, log L]`` and ``s`` a uniform random sign; all are independent.

    Parameters
    ----------
    seed : int, sequence of int, SeedSequence or Generator
        Randomness source; equal seeds give identical states.
    L : float
        Support bound, must exceed 1.
    M : int
        Number of relays, at least 2.
    size : int, optional
        Number of independent channel uses.  ``None`` returns a single
        state with arrays of shape ``(M,)``.

    Returns
    -------
    FadingState
    """
    if not L > 1:
        raise ValueError(f"L must be > 1 (support [1/L, L] degenerate), got {L}")
    if M < 2:
        raise ValueError(f"M must be >= 2, got {M}")
    rng = _rng.generator(seed)
    shape = (2, M) if size is None else (2, size, M)
    logmag = rng.uniform(-np.log(L), np.log(L), size=shape)
    sign = rng.choice(np.array([-1.0, 1.0]), size=shape)
    coeff = sign * np.clip(np.exp(logmag), 1.0 / L, L)
    return FadingState(coeff[0], coeff[1], L)


def draw_channel_use(x, rng):
    """Pair relay inputs ``x`` with fresh standard normal noise."""
    rng = _rng.generator(rng)
    n1, n2 = rng.standard_normal(2)
    return ChannelUse(np.asarray(x, dtype=float), float(n1), float(n2))


def mac_output(f, u):
    """Destination and eavesdropper outputs of the Gaussian MAC.

    ``y1 = sum_k h_k x_k + n1`` and ``y2 = sum_k g_k x_k + n2``.
    ``u`` is a :class:`ChannelUse` (or any object with ``x``, ``n1``,
    ``n2``); ``x`` may carry leading batch axes matching ``f``.
    """
    x = np.asarray(u.x, dtype=float)
    if x.shape[-1] != f.M:
        raise ValueError(f"input has {x.shape[-1]} relays, fading has {f.M}")
    y1 = np.sum(f.h * x, axis=-1) + u.n1
    y2 = np.sum(f.g * x, axis=-1) + u.n2
    if np.ndim(y1) == 0:
        return float(y1), float(y2)
    return y1, y2


def det_output(f, x, Pmax):
    """Noiseless integer outputs ``sum_k floor(h_k x_k)``, ``sum_k floor(g_k x_k)``.

    Inputs must be integers in ``{0, ..., floor(sqrt(Pmax))}``.
    """
    x = np.asarray(x)
    if x.shape[-1] != f.M:
        raise ValueError(f"input has {x.shape[-1]} relays, fading has {f.M}")
    if not np.all(np.equal(np.mod(x, 1), 0)):
        raise ValueError("deterministic-model inputs must be integers")
    xmax = int(np.floor(np.sqrt(Pmax)))
    if np.any(x < 0) or np.any(x > xmax):
        raise ValueError(f"inputs must lie in [0, floor(sqrt({Pmax}))] = [0, {xmax}]")
    x = x.astype(float)
    y1 = np.floor(f.h * x).sum(axis=-1).astype(np.int64)
    y2 = np.floor(f.g * x).sum(axis=-1).astype(np.int64)
    if y1.ndim == 0:
        return int(y1), int(y2)
    return y1, y2
