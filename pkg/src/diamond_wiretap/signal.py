"""PAM constellations, relay encoders and minimum-distance decoding.

Every encoder here is linear in its symbols: the relay inputs are
``x = T(h, g) @ s`` for a transmit matrix ``T`` that depends only on the
fading (and, for the blind schemes, only on ``h``).  :func:`transmit_matrix`
recovers ``T`` by encoding unit vectors, and :func:`effective_gains` gives
the per-symbol coefficients seen at the destination and the eavesdropper.

Relay indices passed to the multi-relay sub-schemes are 0-based.
"""
import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .channel import DEFAULT_L, sample_fading

__all__ = ["Scheme", "PamConstellation", "SchemeParams", "RelayInputs",
           "pam_points", "scheme_params", "symbol_names", "message_names",
           "encode", "encode_scheme1", "encode_scheme2", "encode_scheme3",
           "encode_scheme4", "encode_scheme5", "encode_sab_sub",
           "encode_coj_sub", "encode_bcj_sub", "transmit_matrix",
           "effective_gains", "min_distance_decode", "empirical_power",
           "draw_symbols"]


class Scheme(str, enum.Enum):
    S1 = "S1"        # cooperative jamming, independent partial messages
    S2 = "S2"        # message beamforming in the eavesdropper null space
    S3 = "S3"        # simultaneous alignment and beamforming (S-AB)
    S4 = "S4"        # blind cooperative jamming, relay 1 has the message
    S4STAR = "S4*"   # blind cooperative jamming, relay 2 has the message
    S5 = "S5"        # computation for jamming (CoJ)
    SAB = "SAB"      # M-relay S-AB sub-scheme on pair (i, j)
    COJ = "CoJ"      # CoJ on relay pair (i, j), other relays silent
    BCJ = "BCJ"      # M-relay blind CJ with relay k as the source
    CJ = "CJ"        # M-relay cooperative jamming (planner only, no encoder)
    SILENCE = "silence"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PamConstellation:
    """The symmetric PAM set ``a * {-Q, ..., Q}`` with uniform weights."""
    a: float
    Q: int

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"spacing a must be positive, got {self.a}")
        if int(self.Q) != self.Q or self.Q < 1:
            raise ValueError(f"half-width Q must be a positive integer, got {self.Q}")

    @property
    def points(self):
        return pam_points(self.a, self.Q)

    @property
    def size(self):
        return 2 * self.Q + 1

    @property
    def second_moment(self):
        """``E[V^2] = a^2 Q (Q + 1) / 3`` under the uniform law."""
        return self.a ** 2 * self.Q * (self.Q + 1) / 3.0

    def sample(self, rng, size=None):
        rng = _rng.generator(rng)
        return self.a * rng.integers(-self.Q, self.Q + 1, size=size).astype(float)


def pam_points(a, Q):
    """Return the ``2Q + 1`` points ``a * {-Q, ..., Q}`` in ascending order."""
    if not a > 0:
        raise ValueError(f"spacing a must be positive, got {a}")
    if int(Q) != Q or Q < 1:
        raise ValueError(f"half-width Q must be a positive integer, got {Q}")
    return a * np.arange(-int(Q), int(Q) + 1, dtype=float)


@dataclass(frozen=True)
class SchemeParams:
    """Scheme identity plus the constellation ``C(a, Q)`` used by all symbols."""
    scheme: Scheme
    a: float
    Q: int
    P: float = None
    delta: float = None
    gamma: float = None
    L: float = DEFAULT_L
    M: int = 2
    relays: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "relays", tuple(int(r) for r in self.relays))
        PamConstellation(self.a, self.Q)
        _check_relays(self.scheme, self.M, self.relays)

    @property
    def constellation(self):
        return PamConstellation(self.a, self.Q)

    @property
    def label(self):
        if self.relays:
            return f"{self.scheme.value}({','.join(map(str, self.relays))})"
        return self.scheme.value


def _check_relays(scheme, M, relays):
    if scheme in (Scheme.SAB, Scheme.COJ):
        if len(relays) != 2 or not 0 <= relays[0] < relays[1] < M:
            raise ValueError(f"{scheme.value} needs relays (i, j) with "
                             f"0 <= i < j < M={M}, got {relays}")
    elif scheme is Scheme.BCJ:
        if len(relays) != 1 or not 0 <= relays[0] < M:
            raise ValueError(f"BCJ needs one relay index k < M={M}, got {relays}")
    elif scheme in (Scheme.CJ, Scheme.SILENCE):
        raise ValueError(f"{scheme.value} has no encoder")
    elif M != 2:
        raise ValueError(f"{scheme.value} is a two-relay scheme, got M={M}")


# (streams resolved at the destination, power-normalisation gamma(L)).
# streams=None marks the single-stream family Q = P^((1-d)/2), a = gamma P^(d/2);
# otherwise Q = P^((1-d)/(2(K+d))) and a = gamma sqrt(P) / Q.
def _family(scheme, L, M):
    if scheme is Scheme.S1:
        return 3, 1.0 / (L * np.sqrt(L ** 4 + 1.0))
    if scheme is Scheme.S2:
        return None, 1.0 / L
    if scheme is Scheme.S3:
        return 2, 1.0 / (np.sqrt(5.0) * L ** 3)
    if scheme in (Scheme.S4, Scheme.S4STAR, Scheme.BCJ):
        return 2, 1.0 / np.sqrt(1.0 + L ** 2)
    if scheme in (Scheme.S5, Scheme.COJ):
        return None, 1.0 / (np.sqrt(2.0) * L)
    if scheme is Scheme.SAB:
        return M, 1.0 / (np.sqrt(5.0) * L ** 3)
    raise ValueError(f"{scheme.value} has no encoder parameters")


def scheme_params(scheme, P, delta, L=DEFAULT_L, M=2, relays=()):
    """Constellation parameters ``(a, Q)`` and power scalar ``gamma``.

    Scheme 3 and the S-AB sub-schemes use ``Q = floor(P^((1-d)/(2(K+d))))``
    and ``a = gamma sqrt(P) / Q`` with ``gamma = 1 / (sqrt(5) L^3)``; ``K`` is
    the number of message streams resolved at the destination (2 for
    Scheme 3, ``M`` for S-AB).  Scheme 5 and CoJ use
    ``Q = floor(P^((1-d)/2))`` and ``a = P^(d/2) / (sqrt(2) L)``.  Schemes 1,
    4, 4* and BCJ follow the first family with ``K`` = 3, 2, 2, 2 and Scheme 2
    the second; their ``gamma`` bounds the worst-case coefficient energy over
    the fading support so that ``E[x_k^2] <= P``.

    Raises
    ------
    ValueError
        If ``P <= 1``, ``delta`` is outside (0, 1), or the formula gives
        ``Q < 1``.
    """
    scheme = Scheme(scheme)
    if not P > 1:
        raise ValueError(f"P must exceed 1, got {P}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    _check_relays(scheme, M, tuple(relays))
    streams, gamma = _family(scheme, L, M)
    if streams is None:
        exponent = (1 - delta) / 2
    else:
        exponent = (1 - delta) / (2 * (streams + delta))
    # tiny upward nudge so exact integer powers are not floored away
    Q = int(np.floor(P ** exponent * (1 + 1e-12)))
    if Q < 1:
        raise ValueError(f"P={P} too small: {scheme.value} gives Q = "
                         f"floor({P ** exponent:.4g}) < 1")
    if streams is None:
        a = gamma * P ** (delta / 2)
    else:
        a = gamma * np.sqrt(P) / Q
    return SchemeParams(scheme, a=float(a), Q=Q, P=float(P), delta=float(delta),
                        gamma=float(gamma), L=float(L), M=int(M),
                        relays=tuple(relays))


@dataclass(frozen=True)
class RelayInputs:
    """Per-relay transmit values and the symbols that produced them."""
    x: np.ndarray
    symbols: dict = field(default_factory=dict)


def _scheme_of(p):
    return p.scheme if isinstance(p, SchemeParams) else Scheme(p)


def symbol_names(params):
    """Order of the symbols taken by ``encode`` for this scheme.

    Message symbols come first, artificial-noise symbols after.
    """
    scheme = _scheme_of(params)
    M = params.M if isinstance(params, SchemeParams) else 2
    if scheme is Scheme.S1:
        return ("v1", "v2", "u1", "u2")
    if scheme is Scheme.S2:
        return ("v",)
    if scheme is Scheme.S3:
        return ("v1", "v2", "u")
    if scheme in (Scheme.S4, Scheme.S4STAR):
        return ("v1", "u1", "u2")
    if scheme is Scheme.S5:
        return ("v1", "u")
    if scheme is Scheme.SAB:
        return tuple(f"v{k + 1}" for k in range(M)) + ("u",)
    if scheme is Scheme.COJ:
        return ("v", "u")
    if scheme is Scheme.BCJ:
        return ("v",) + tuple(f"u{k + 1}" for k in range(M))
    raise ValueError(f"{scheme.value} has no encoder")


def message_names(params):
    return tuple(n for n in symbol_names(params) if n.startswith("v"))


def _cols(f):
    return [f.h[..., k] for k in range(f.M)], [f.g[..., k] for k in range(f.M)]


def _need_two(f):
    if f.M != 2:
        raise ValueError(f"two-relay scheme needs M = 2, fading has M = {f.M}")


def encode_scheme1(f, v1, v2, u1, u2, s=1.0):
    """Cooperative jamming with independent partial messages.

    ``x_1 = mu_1 v1 + beta_1 u1`` and ``x_2 = mu_2 v2 + beta_2 u2`` with
    ``beta_k = s / h_k``, ``mu_1 = g_2 s / (g_1 h_2)``, ``mu_2 = g_1 s / (g_2 h_1)``:
    the two noises align at the destination and each message lands on the
    other relay's noise at the eavesdropper.
    """
    _need_two(f)
    (h1, h2), (g1, g2) = _cols(f)
    x1 = g2 * s / (g1 * h2) * v1 + s / h1 * u1
    x2 = g1 * s / (g2 * h1) * v2 + s / h2 * u2
    return RelayInputs(np.stack(np.broadcast_arrays(x1, x2), axis=-1),
                       dict(v1=v1, v2=v2, u1=u1, u2=u2))


def encode_scheme2(f, v, s=1.0):
    """Message beamformed along ``s (g_2, -g_1)``, the eavesdropper null space."""
    _need_two(f)
    (h1, h2), (g1, g2) = _cols(f)
    x = np.stack(np.broadcast_arrays(s * g2 * v, -s * g1 * v), axis=-1)
    return RelayInputs(x, dict(v=v))


def encode_scheme3(f, v1, v2, u):
    """Simultaneous alignment and beamforming.

    ``X_1 = (h_2 - g_2 h_1 / g_1) V_1 + h_2 U`` and
    ``X_2 = (g_1 h_2 / g_2 - h_1) V_2 - h_1 U``.  The common noise ``U``
    vanishes at the destination and both messages arrive on ``U`` at the
    eavesdropper with coefficient ``g_1 h_2 - g_2 h_1``.
    """
    _need_two(f)
    (h1, h2), (g1, g2) = _cols(f)
    x1 = (h2 - g2 / g1 * h1) * v1 + h2 * u
    x2 = (g1 / g2 * h2 - h1) * v2 - h1 * u
    return RelayInputs(np.stack(np.broadcast_arrays(x1, x2), axis=-1),
                       dict(v1=v1, v2=v2, u=u))


def encode_scheme4(f, v1, u1, u2, swapped=False, s=1.0):
    """Blind cooperative jamming; the encoder never reads ``g``.

    The message relay sends ``s v1 + (s / h_k) u_k`` and the helper sends
    ``(s / h_j) u_j``, so both noises reach the destination with the same
    coefficient ``s`` while the message arrives with ``s h_k``.
    ``swapped=True`` gives Scheme 4*, with relay 2 holding the message.
    """
    _need_two(f)
    h1, h2 = f.h[..., 0], f.h[..., 1]
    if swapped:
        x1 = s / h1 * u1
        x2 = s * v1 + s / h2 * u2
    else:
        x1 = s * v1 + s / h1 * u1
        x2 = s / h2 * u2
    return RelayInputs(np.stack(np.broadcast_arrays(x1, x2), axis=-1),
                       dict(v1=v1, u1=u1, u2=u2))


def encode_scheme5(f, v1, u):
    """Computation for jamming: ``X_1 = (V_1 + U) / h_1``, ``X_2 = -U / h_2``.

    Relay 1 forwards the sum computed at the source, relay 2 the noise
    alone; at the destination the noise cancels exactly and ``y1 = v1``.
    """
    _need_two(f)
    h1, h2 = f.h[..., 0], f.h[..., 1]
    x1 = (v1 + u) / h1
    x2 = -u / h2
    return RelayInputs(np.stack(np.broadcast_arrays(x1, x2), axis=-1),
                       dict(v1=v1, u=u))


def _message_array(v, M, name):
    v = np.asarray(v, dtype=float)
    if v.shape[-1:] != (M,):
        raise ValueError(f"{name} needs one symbol per relay (M={M}), got shape {v.shape}")
    return v


def encode_sab_sub(f, i, j, v, u):
    """``(i, j)`` S-AB sub-scheme for ``M`` relays.

    The common noise goes out on relays ``i`` and ``j`` with coefficients
    ``c_i = h_j``, ``c_j = -h_i`` (nulled at the destination); every relay
    ``k`` sends its partial message ``v[..., k]`` scaled by ``e / g_k`` with
    ``e = g_i h_j - g_j h_i``, so every message arrives at the eavesdropper
    on top of the common noise.  With ``M = 2`` this is exactly Scheme 3.
    """
    M = f.M
    _check_relays(Scheme.SAB, M, (i, j))
    v = _message_array(v, M, "v")
    h, g = f.h, f.g
    c_i, c_j = h[..., j], -h[..., i]
    e = g[..., i] * c_i + g[..., j] * c_j
    x = (e[..., None] / g) * v
    x = np.array(np.broadcast_to(x, np.broadcast_shapes(x.shape, np.shape(u) + (M,))))
    x[..., i] += c_i * u
    x[..., j] += c_j * u
    symbols = {f"v{k + 1}": v[..., k] for k in range(M)}
    symbols["u"] = u
    return RelayInputs(x, symbols)


def encode_coj_sub(f, i, j, v, u):
    """Scheme 5 run on relays ``i`` and ``j`` only; all others send zero."""
    M = f.M
    _check_relays(Scheme.COJ, M, (i, j))
    h = f.h
    xi = (v + u) / h[..., i]
    xj = -u / h[..., j]
    shape = np.broadcast_shapes(np.shape(xi), np.shape(xj))
    x = np.zeros(shape + (M,))
    x[..., i] = xi
    x[..., j] = xj
    return RelayInputs(x, dict(v=v, u=u))


def encode_bcj_sub(f, k, v, u, s=1.0):
    """Blind cooperative jamming with relay ``k`` as source, the rest as helpers.

    Relay ``k`` sends ``s v + (s / h_k) u[..., k]``; every other relay ``m``
    sends ``(s / h_m) u[..., m]``, so all ``M`` noises share the destination
    coefficient ``s``.  Only ``h`` is read.
    """
    M = f.M
    _check_relays(Scheme.BCJ, M, (k,))
    u = _message_array(u, M, "u")
    beta = s / f.h
    x = beta * u
    x = np.array(np.broadcast_to(x, np.broadcast_shapes(x.shape, np.shape(v) + (M,))))
    x[..., k] += s * np.asarray(v, dtype=float)
    symbols = {"v": v}
    symbols.update({f"u{m + 1}": u[..., m] for m in range(M)})
    return RelayInputs(x, symbols)


def encode(params, f, symbols):
    """Dispatch to the scheme encoder named by ``params``.

    ``symbols`` is a mapping from :func:`symbol_names` entries to values,
    or an array whose last axis follows that order.
    """
    names = symbol_names(params)
    if isinstance(symbols, dict):
        missing = set(names) - set(symbols)
        if missing:
            raise ValueError(f"missing symbols {sorted(missing)} for {params.label}")
        s = [symbols[n] for n in names]
    else:
        arr = np.asarray(symbols, dtype=float)
        if arr.shape[-1] != len(names):
            raise ValueError(f"{params.label} takes {len(names)} symbols, got {arr.shape[-1]}")
        s = [arr[..., n] for n in range(len(names))]
    scheme = params.scheme
    if scheme is Scheme.S1:
        return encode_scheme1(f, *s)
    if scheme is Scheme.S2:
        return encode_scheme2(f, *s)
    if scheme is Scheme.S3:
        return encode_scheme3(f, *s)
    if scheme is Scheme.S4:
        return encode_scheme4(f, *s)
    if scheme is Scheme.S4STAR:
        return encode_scheme4(f, *s, swapped=True)
    if scheme is Scheme.S5:
        return encode_scheme5(f, *s)
    M = f.M
    if scheme is Scheme.SAB:
        return encode_sab_sub(f, *params.relays, np.stack(np.broadcast_arrays(*s[:M]), axis=-1), s[M])
    if scheme is Scheme.COJ:
        return encode_coj_sub(f, *params.relays, *s)
    if scheme is Scheme.BCJ:
        return encode_bcj_sub(f, params.relays[0], s[0], np.stack(np.broadcast_arrays(*s[1:]), axis=-1))
    raise ValueError(f"{scheme.value} has no encoder")


def transmit_matrix(params, f):
    """Linear map from symbols to relay inputs, shape ``(..., M, n_symbols)``."""
    n = len(symbol_names(params))
    eye = np.eye(n)
    cols = [encode(params, f, eye[s]).x for s in range(n)]
    return np.stack(cols, axis=-1)


def effective_gains(params, f):
    """Per-symbol noiseless coefficients at the destination and eavesdropper.

    Returns ``(dest, eve)``, each of shape ``(..., n_symbols)`` in
    :func:`symbol_names` order.
    """
    T = transmit_matrix(params, f)
    dest = np.einsum("...m,...ms->...s", f.h, T)
    eve = np.einsum("...m,...ms->...s", f.g, T)
    return dest, eve


def draw_symbols(params, rng, size=None):
    """Uniform draws from ``C(a, Q)`` for every symbol, last axis in name order."""
    rng = _rng.generator(rng)
    n = len(symbol_names(params))
    shape = (n,) if size is None else (size, n)
    return params.a * rng.integers(-params.Q, params.Q + 1, size=shape).astype(float)


def _visible(dest, rel_tol=1e-9):
    dest = np.atleast_2d(np.abs(dest))
    scale = np.max(dest, axis=-1, keepdims=True)
    scale[scale == 0] = 1.0
    return np.any(dest > rel_tol * scale, axis=0)


# upper bound on (batch rows) x (candidate points) evaluated at once
_DECODE_BLOCK = 1 << 22


def min_distance_decode(y1, f, params):
    """Nearest-point decision on the destination's effective constellation.

    The candidate set is every tuple of ``C(a, Q)`` points over the symbols
    that reach the destination with a nonzero coefficient (symbols nulled
    at the destination, such as the common noise of Scheme 3, are
    excluded).  Tuples are enumerated lexicographically and the first
    minimiser wins, so exact ties go to the lexicographically smallest
    tuple.

    Parameters
    ----------
    y1 : float or array, shape (n,)
        Destination observations.
    f : FadingState
        Matching single or batched fading.
    params : SchemeParams

    Returns
    -------
    dict
        Decoded value for each visible symbol name.
    """
    names = symbol_names(params)
    dest, _ = effective_gains(params, f)
    dest2 = np.atleast_2d(dest)
    vis = _visible(dest2)
    vis_names = [n for n, keep in zip(names, vis) if keep]
    pts = pam_points(params.a, params.Q)
    grid = np.array(list(itertools.product(pts, repeat=len(vis_names))))
    y = np.atleast_1d(np.asarray(y1, dtype=float))
    coef = np.broadcast_to(dest2[:, vis], (y.shape[0], len(vis_names)))
    best = np.empty(y.shape[0], dtype=np.int64)
    rows = max(1, _DECODE_BLOCK // grid.shape[0])
    single_fade = dest2.shape[0] == 1
    if single_fade:
        cand = grid @ coef[0]
    for start in range(0, y.shape[0], rows):
        stop = min(start + rows, y.shape[0])
        if not single_fade:
            cand = coef[start:stop] @ grid.T
        best[start:stop] = np.argmin(np.abs(y[start:stop, None] - cand), axis=-1)
    decoded = grid[best]
    scalar = np.ndim(y1) == 0
    return {n: (float(decoded[0, c]) if scalar else decoded[:, c])
            for c, n in enumerate(vis_names)}


def empirical_power(params, n_draws, seed, block=1 << 15):
    """Mean of ``x_k^2`` per relay over ``n_draws`` random fades and symbols.

    Fades are drawn on ``[1/L, L]`` with ``L = params.L``, symbols
    uniformly from ``C(a, Q)``.
    """
    total = np.zeros(params.M)
    for b, start in enumerate(range(0, n_draws, block)):
        n = min(block, n_draws - start)
        f = sample_fading(_rng.generator(seed, _rng.FADING, b), params.L, params.M, size=n)
        sym = draw_symbols(params, _rng.generator(seed, _rng.SYMBOLS, b), size=n)
        total += np.sum(encode(params, f, sym).x ** 2, axis=0)
    return total / n_draws
