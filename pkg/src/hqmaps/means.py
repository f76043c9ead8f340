"""Integral means, sup-means, and the integral bounds built from them.

The p-mean M_p(r, F) = ((1/2pi) int |F(r e^{i theta})|^p dtheta)^{1/p} is
computed by the periodic trapezoid rule with grid doubling; the integrand is
smooth and periodic for r < 1, so convergence is geometric with a rate set by
the distance from the nearest singularity to the sampled circle. Circle
samples are cached per (function, radius, grid size), so doubling chains and
sweeps over p share work.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .analytic import (
    RADIUS_CAP,
    AnalyticFunction,
    ClosedForm,
    DomainError,
    NonConvergenceError,
    catalog,
)
from .csvio import join_row
from .harmonic import HarmonicMap

Evaluable = Union[AnalyticFunction, HarmonicMap]

N_START = 2**9
N_MAX = 2**20
HARDY_CUTOFF_EXP = 16  # improper r-integrals stop at 1 - 2**-16

_CACHE: "OrderedDict[tuple, np.ndarray]" = OrderedDict()
_CACHE_BYTES = 0
_CACHE_LIMIT = 512 * 2**20


def clear_sample_cache() -> None:
    global _CACHE_BYTES
    _CACHE.clear()
    _CACHE_BYTES = 0


def _store(key: tuple, arr: np.ndarray) -> None:
    global _CACHE_BYTES
    _CACHE[key] = arr
    _CACHE_BYTES += arr.nbytes
    while _CACHE_BYTES > _CACHE_LIMIT and _CACHE:
        _, old = _CACHE.popitem(last=False)
        _CACHE_BYTES -= old.nbytes


def circle_modulus(F: Evaluable, r: float, n: int) -> np.ndarray:
    """|F| sampled on the uniform n-point circle grid at radius r, cached.

    Grid levels nest: level 2n reuses level n and evaluates only midpoints.
    """
    key = (F.uid, float(r), int(n))
    hit = _CACHE.get(key)
    if hit is not None:
        _CACHE.move_to_end(key)
        return hit
    fast = getattr(F, "circle_values", None)
    if fast is not None:
        # spectral targets evaluate the whole grid at once; no midpoint merge
        out = np.abs(fast(float(r), int(n)))
        _store(key, out)
        return out
    parent = _CACHE.get((F.uid, float(r), n // 2))
    if parent is not None:
        theta = (2.0 * np.pi / n) * np.arange(1, n, 2)
        mids = np.abs(F(r * np.exp(1j * theta)))
        out = np.empty(n)
        out[0::2] = parent
        out[1::2] = mids
    else:
        theta = (2.0 * np.pi / n) * np.arange(n)
        out = np.abs(F(r * np.exp(1j * theta)))
    _store(key, out)
    return out


def _mean_pow(
    F: Evaluable,
    p: float,
    r: float,
    rel_tol: float = 1e-9,
    n_max: int = N_MAX,
):
    """Raw power mean (1/2pi) int |F|^p dtheta with doubling; p may be negative.

    Returns (value, n, converged, last_two).
    """
    n = N_START
    prev = float(np.mean(circle_modulus(F, r, n) ** p))
    while n < n_max:
        n *= 2
        cur = float(np.mean(circle_modulus(F, r, n) ** p))
        if abs(cur - prev) <= rel_tol * abs(cur):
            return cur, n, True, (prev, cur)
        prev = cur
    return prev, n, False, (prev, prev)


def integral_means(
    F: Evaluable,
    p: float,
    r: float,
    rel_tol: float = 1e-9,
    n_max: int = N_MAX,
    strict: bool = True,
) -> float:
    """M_p(r, F) by periodic trapezoid sums with grid doubling.

    Doubles from n = 2**9 until the successive relative change drops below
    rel_tol or n reaches n_max; in strict mode hitting the cap raises, with
    the last two iterates attached. Non-strict mode returns the best value
    (used by sweeps that track convergence flags themselves).
    """
    if not (0 < p < math.inf):
        raise DomainError(f"p must lie in (0, inf), got {p}")
    if not (0 < r <= RADIUS_CAP):
        raise DomainError(f"r must lie in (0, {RADIUS_CAP}], got {r}")
    value, n, converged, last_two = _mean_pow(F, p, r, rel_tol, n_max)
    if strict and not converged:
        raise NonConvergenceError(
            f"trapezoid means for {F.uid} at p={p}, r={r} hit n={n}",
            last_two=tuple(v ** (1.0 / p) for v in last_two),
        )
    return value ** (1.0 / p)


def sup_mean(F: Evaluable, r: float) -> float:
    """M_inf(r, F): grid max refined by golden-section on the best cell."""
    if not (0 < r <= RADIUS_CAP):
        raise DomainError(f"r must lie in (0, {RADIUS_CAP}], got {r}")
    n = 2**12
    theta = (2.0 * np.pi / n) * np.arange(n)
    vals = np.abs(F(r * np.exp(1j * theta)))
    i = int(np.argmax(vals))
    a = theta[i] - 2.0 * np.pi / n
    b = theta[i] + 2.0 * np.pi / n

    invphi = (math.sqrt(5.0) - 1.0) / 2.0

    def fval(t: float) -> float:
        return float(np.abs(F(r * np.exp(1j * t))))

    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fval(c), fval(d)
    while b - a > 1e-10:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fval(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fval(d)
    return max(float(vals[i]), fc, fd)


# ---------------------------------------------------------------------------
# line quadrature in the radius variable

_GL8_NODES, _GL8_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _graded_line_integral(fn, lo: float, hi: float, depth: int) -> float:
    """int_lo^hi fn via 8-node Gauss-Legendre panels graded toward hi."""
    breaks = np.concatenate(
        [[lo], hi - (hi - lo) * 2.0 ** -np.arange(1, depth + 1), [hi]]
    )
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        total += half * float(_GL8_WEIGHTS @ fn(mid + half * _GL8_NODES))
    return total


def _line_integral(fn, lo: float, hi: float, rel_tol: float = 1e-7) -> float:
    depth = 6
    prev = _graded_line_integral(fn, lo, hi, depth)
    while depth <= 48:
        depth *= 2
        cur = _graded_line_integral(fn, lo, hi, depth)
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    raise NonConvergenceError("radius-line quadrature stalled", last_two=(prev, cur))


_COROLLARY_CACHE: dict = {}


def corollary_bound(k: float, p: float, r: float, extremal: str = "H") -> float:
    """(1 + k) * int_0^r M_p(s, E_k) ds for E in {H, scrH}.

    The precondition p >= 1 mirrors the Minkowski step the bound rests on;
    smaller p is a domain error by contract.
    """
    if p < 1:
        raise DomainError(f"cumulative bound requires p >= 1, got {p}")
    if not (0.0 <= k < 1.0):
        raise DomainError(f"k must lie in [0, 1), got {k}")
    if extremal not in ("H", "scrH"):
        raise DomainError(f"extremal must be 'H' or 'scrH', got {extremal!r}")
    if not (0 < r <= RADIUS_CAP):
        raise DomainError(f"r must lie in (0, {RADIUS_CAP}], got {r}")
    key = (float(k), float(p), float(r), extremal)
    hit = _COROLLARY_CACHE.get(key)
    if hit is not None:
        return hit
    E = catalog(extremal, k)

    def fn(s: np.ndarray) -> np.ndarray:
        return np.array([integral_means(E, p, float(x), rel_tol=1e-8) for x in s])

    value = (1.0 + k) * _line_integral(fn, 0.0, r, rel_tol=1e-7)
    _COROLLARY_CACHE[key] = value
    return value


def lemmaF_integral(p: float, r: float) -> float:
    """int_0^{2pi} dtheta / |1 - r e^{i theta}|^p, no normalization."""
    if p <= 1:
        raise DomainError(f"the boundary-kernel integral needs p > 1, got {p}")
    if not (0 <= r < 1.0 - 2.0**-20):
        raise DomainError(f"r must lie in [0, 1 - 2^-20), got {r}")
    if r == 0:
        return 2.0 * math.pi
    one_minus = ClosedForm("one-minus-z", lambda z: 1.0 - z)
    value, n, converged, last_two = _mean_pow(one_minus, -p, r, rel_tol=1e-10)
    if not converged:
        raise NonConvergenceError(
            f"boundary-kernel integral stalled at p={p}, r={r}", last_two=last_two
        )
    return 2.0 * math.pi * value


def lemmaF_ratio(p: float, r: float) -> float:
    """The integral normalized by its predicted growth (1-r)^{1-p}."""
    return lemmaF_integral(p, r) * (1.0 - r) ** (p - 1.0)


def envelope_ratio(k: float, p: float, r: float, extremal: str = "H") -> float:
    """M_p(r, E_k) * (1-k) * (1-r)^e with e = 2 - 1/p (H) or 3 - 1/p (scrH).

    Boundedness of this ratio over r is the growth-envelope claim; the value
    at r -> 0 is 1 - k since both extremals equal 1 at the origin.
    """
    if p <= 1:
        raise DomainError(f"envelope exponents need p > 1, got {p}")
    if extremal not in ("H", "scrH"):
        raise DomainError(f"extremal must be 'H' or 'scrH', got {extremal!r}")
    e = (2.0 if extremal == "H" else 3.0) - 1.0 / p
    E = catalog(extremal, k)
    return integral_means(E, p, r, rel_tol=1e-8) * (1.0 - k) * (1.0 - r) ** e


@dataclass
class HardyBound:
    """Result of the weighted h'-integral: value, tail behavior, flags."""

    value: float
    tail_exponent: float
    divergent: bool
    all_converged: bool

    def __float__(self) -> float:
        return math.inf if self.divergent else float(self.value)


def hardy_norm_bound(f: HarmonicMap, p: float) -> HardyBound:
    """int_0^{1 - 2^-16} (1-r)^{p-1} M_p^p(r, h') dr with the constant set to 1.

    The full integral to r = 1 is classified by a log-log fit of the
    integrand over the last six dyadic radii: fitted exponent alpha <= -1
    means the improper integral diverges. Values of M_p^p beyond the
    trapezoid cap are used best-effort and flagged via all_converged.
    """
    if not (0.0 < p < 1.0):
        raise DomainError(f"the weighted h' integral needs p in (0, 1), got {p}")
    z0 = np.asarray(0.0, dtype=complex)
    if abs(f(z0)) > 1e-12:
        raise DomainError("normalization f(0) = 0 required")
    hp = f.h_prime
    all_converged = True

    def integrand_one(r: float) -> float:
        nonlocal all_converged
        value, _, converged, _ = _mean_pow(hp, p, r, rel_tol=1e-7)
        if not converged:
            all_converged = False
        return (1.0 - r) ** (p - 1.0) * value

    def integrand(rs: np.ndarray) -> np.ndarray:
        return np.array([integrand_one(float(x)) for x in rs])

    bulk_hi = 1.0 - 2.0**-6
    total = _line_integral(integrand, 0.0, bulk_hi, rel_tol=1e-6)
    for j in range(6, HARDY_CUTOFF_EXP):
        lo, hi = 1.0 - 2.0**-j, 1.0 - 2.0 ** -(j + 1)
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        total += half * float(_GL8_WEIGHTS @ integrand(mid + half * _GL8_NODES))

    tail_js = np.arange(HARDY_CUTOFF_EXP - 5, HARDY_CUTOFF_EXP + 1)
    logs = np.array([math.log(integrand_one(1.0 - 2.0**-j)) for j in tail_js])
    x = -tail_js * math.log(2.0)  # log(1 - r) at the dyadic radii
    slope = float(np.polyfit(x, logs, 1)[0])
    return HardyBound(
        value=total,
        tail_exponent=slope,
        divergent=slope <= -1.0,
        all_converged=all_converged,
    )


@dataclass
class MeansCurve:
    """M_p(r) along a radius grid for one target function."""

    p: float
    radii: np.ndarray
    values: np.ndarray
    target: str
    converged: Optional[np.ndarray] = None

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if np.any(np.diff(self.radii) <= 0):
            raise DomainError("curve radii must be strictly increasing")
        if self.radii[-1] > RADIUS_CAP:
            raise DomainError(f"curve radii capped at {RADIUS_CAP}")

    def csv_rows(self) -> list:
        return [
            join_row([self.target, f"{self.p:.12g}", f"{r:.12g}", f"{v:.12g}"])
            for r, v in zip(self.radii, self.values)
        ]

    @staticmethod
    def csv_header() -> str:
        return "target_id,p,r,value"


def dyadic_means_curve(
    F: Evaluable, p: float, depth: int, rel_tol: float = 1e-7
) -> MeansCurve:
    """M_p at radii 1 - 2^-j, j = 1..depth, best-effort past the grid cap.

    The per-radius convergence mask lets downstream fits discard radii whose
    trapezoid chains hit the cap before stabilizing.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    radii = 1.0 - 2.0 ** -np.arange(1, depth + 1)
    values, flags = [], []
    for r in radii:
        value, _, converged, _ = _mean_pow(F, p, float(r), rel_tol=rel_tol)
        values.append(value ** (1.0 / p))
        flags.append(converged)
    return MeansCurve(
        p=p, radii=radii, values=np.array(values), target=getattr(F, "uid", "?"),
        converged=np.array(flags, dtype=bool),
    )
