"""Analytic functions on the unit disk: closed forms, power series, radial integrals.

Every evaluator is vectorized over numpy arrays of complex points. Three
representations cover the whole library:

``ClosedForm``
    explicit formula with an exact derivative formula and (optionally) an
    exact Taylor coefficient generator.
``PowerSeries``
    truncated Taylor series; calculus is term-wise.
``RadialIntegral``
    antiderivative of a given integrand along the segment [0, z], evaluated
    by composite Gauss-Legendre panels graded toward the endpoint.

Evaluation is capped at |z| <= 1 - 2**-20; all the closed forms of interest
blow up at z = 1 and double precision carries no information beyond that.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

RADIUS_CAP = 1.0 - 2.0**-20
SERIES_CAP = 4096
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class DomainError(ValueError):
    """Argument outside the domain a precondition demands."""


class NonConvergenceError(RuntimeError):
    """Iterative refinement stalled; carries the last two iterates."""

    def __init__(self, message: str, last_two: Optional[tuple] = None):
        if last_two is not None:
            message = f"{message} (last two iterates: {last_two[0]!r}, {last_two[1]!r})"
        super().__init__(message)
        self.last_two = last_two


def _check_radius(z: np.ndarray) -> None:
    if np.max(np.abs(z)) > RADIUS_CAP + 1e-15:
        raise DomainError(f"evaluation requires |z| <= {RADIUS_CAP}")


# ---------------------------------------------------------------------------
# power series arithmetic


def series_mul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """First n coefficients of the Cauchy product of two coefficient arrays."""
    a = np.asarray(a, dtype=complex)[:n]
    b = np.asarray(b, dtype=complex)[:n]
    out = np.convolve(a, b)[:n]
    if out.size < n:
        out = np.pad(out, (0, n - out.size))
    return out


def series_reciprocal(c: np.ndarray, n: int) -> np.ndarray:
    """First n coefficients of 1/C(z) where C has nonzero constant term."""
    c = np.asarray(c, dtype=complex)
    if c.size == 0 or c[0] == 0:
        raise DomainError("reciprocal needs a nonzero constant term")
    c = np.pad(c[:n], (0, max(0, n - c.size)))
    b = np.zeros(n, dtype=complex)
    b[0] = 1.0 / c[0]
    for m in range(1, n):
        b[m] = -(c[1 : m + 1] @ b[m - 1 :: -1]) / c[0]
    return b


def series_integrate(c: np.ndarray, n: int) -> np.ndarray:
    """Coefficients of the antiderivative vanishing at 0, truncated to n."""
    c = np.asarray(c, dtype=complex)[: max(n - 1, 0)]
    out = np.zeros(n, dtype=complex)
    out[1 : c.size + 1] = c / np.arange(1, c.size + 1)
    return out


def series_differentiate(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    if c.size <= 1:
        return np.zeros(1, dtype=complex)
    return c[1:] * np.arange(1, c.size)


def geometric_coefficients(a: complex, power: int, n: int) -> np.ndarray:
    """Coefficients of (1 - a z)**(-power) for integer power >= 1.

    The binomial identity gives coefficient C(m + power - 1, power - 1) a**m;
    computed by a stable running product.
    """
    out = np.empty(n, dtype=complex)
    out[0] = 1.0
    for m in range(1, n):
        out[m] = out[m - 1] * a * (m + power - 1) / m
    return out


# ---------------------------------------------------------------------------
# function kinds


class AnalyticFunction:
    """Evaluatable analytic map on the disk with derivative access."""

    kind: str = "abstract"

    def __init__(self, uid: str):
        self.uid = uid

    def __call__(self, z):
        raise NotImplementedError

    def derivative(self, z):
        raise NotImplementedError

    def derivative_function(self) -> "AnalyticFunction":
        """The derivative as a first-class AnalyticFunction."""
        raise NotImplementedError

    def taylor(self, n: int) -> np.ndarray:
        """First n Taylor coefficients at the origin."""
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.uid}>"


class ClosedForm(AnalyticFunction):
    kind = "rational-closed-form"

    def __init__(
        self,
        uid: str,
        fn: Callable,
        dfn: Optional[Callable] = None,
        taylor_fn: Optional[Callable[[int], np.ndarray]] = None,
    ):
        super().__init__(uid)
        self._fn = fn
        self._dfn = dfn
        self._taylor_fn = taylor_fn

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        _check_radius(z)
        return self._fn(z)

    def derivative(self, z):
        if self._dfn is None:
            raise DomainError(f"{self.uid} carries no derivative formula")
        z = np.asarray(z, dtype=complex)
        _check_radius(z)
        return self._dfn(z)

    def derivative_function(self) -> "ClosedForm":
        if self._dfn is None:
            raise DomainError(f"{self.uid} carries no derivative formula")
        dtaylor = None
        if self._taylor_fn is not None:
            base = self._taylor_fn
            dtaylor = lambda n: series_differentiate(base(n + 1))[:n]
        return ClosedForm(self.uid + "'", self._dfn, taylor_fn=dtaylor)

    def taylor(self, n: int) -> np.ndarray:
        if n < 1:
            raise DomainError("need n >= 1 coefficients")
        if self._taylor_fn is None:
            raise NonConvergenceError(
                f"{self.uid} has no coefficient expansion; use series resampling"
            )
        out = np.asarray(self._taylor_fn(n), dtype=complex)
        if out.size < n:
            out = np.pad(out, (0, n - out.size))
        return out[:n]


class PowerSeries(AnalyticFunction):
    kind = "power-series"

    def __init__(self, coeffs: Sequence[complex], uid: str = "series"):
        super().__init__(uid)
        self.coeffs = np.asarray(coeffs, dtype=complex)
        if self.coeffs.size > SERIES_CAP:
            raise DomainError(f"series truncation exceeds hard cap {SERIES_CAP}")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        _check_radius(z)
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        _check_radius(z)
        return np.polynomial.polynomial.polyval(z, series_differentiate(self.coeffs))

    def derivative_function(self) -> "PowerSeries":
        return PowerSeries(series_differentiate(self.coeffs), self.uid + "'")

    def taylor(self, n: int) -> np.ndarray:
        if n < 1:
            raise DomainError("need n >= 1 coefficients")
        out = np.zeros(n, dtype=complex)
        m = min(n, self.coeffs.size)
        out[:m] = self.coeffs[:m]
        return out

    def tail_bound(self, r: float) -> float:
        """|a_N| r^N at the truncation order, a cheap truncation certificate."""
        nn = self.coeffs.size - 1
        return float(abs(self.coeffs[-1]) * r**nn)


def _radial_fixed(fn: Callable, z: np.ndarray, depth: int) -> np.ndarray:
    """Integral of fn along [0, z] with panels dyadically graded toward z."""
    breaks = np.concatenate([[0.0], 1.0 - 2.0 ** -np.arange(1, depth + 1), [1.0]])
    mid = 0.5 * (breaks[1:] + breaks[:-1])
    half = 0.5 * (breaks[1:] - breaks[:-1])
    t = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    vals = fn(t[:, None] * z[None, :])
    return z * (w @ vals)


def radial_path_integral(
    fn: Callable, z, rel_tol: float = 1e-12, max_depth: int = 48
) -> np.ndarray:
    """Antiderivative of ``fn`` at each z, integrating along the radial segment.

    Panel count doubles (via grading depth) until successive values agree to
    rel_tol; the integrand is analytic on the segment so convergence is
    geometric once the grading resolves the boundary approach.
    """
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    depth = 6
    prev = _radial_fixed(fn, flat, depth)
    while depth <= max_depth:
        depth *= 2
        cur = _radial_fixed(fn, flat, depth)
        scale = np.maximum(np.abs(cur), 1.0)
        if np.max(np.abs(cur - prev) / scale) < rel_tol:
            return cur.reshape(z.shape) if z.shape else cur[0]
        prev = cur
    raise NonConvergenceError(
        "radial path integral did not stabilize", last_two=(prev, cur)
    )


class RadialIntegral(AnalyticFunction):
    """F(z) = integral of a given derivative along [0, z].

    The derivative is exact (it is the integrand); values come from graded
    Gauss-Legendre quadrature. A Taylor expansion is available only when a
    coefficient series was attached at construction time.
    """

    kind = "radial-path-integral"

    def __init__(
        self,
        integrand: AnalyticFunction,
        uid: str,
        series: Optional[PowerSeries] = None,
    ):
        super().__init__(uid)
        self.integrand = integrand
        self.series = series

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        _check_radius(z)
        if self.series is not None and np.max(np.abs(z)) <= self._series_radius():
            return self.series(z)
        return radial_path_integral(self.integrand, z)

    def _series_radius(self) -> float:
        # largest radius at which the attached truncation still certifies 1e-12;
        # two extra digits of headroom absorb the tail beyond the last term
        nn = self.series.coeffs.size - 1
        a = abs(self.series.coeffs[-1])
        if a == 0:
            return RADIUS_CAP
        r = (1e-14 / a) ** (1.0 / nn) if a > 1e-14 else 1.0
        return min(r, RADIUS_CAP)

    def derivative(self, z):
        return self.integrand(z)

    def circle_values(self, r: float, n: int) -> np.ndarray:
        """F on the uniform n-point circle grid via spectral integration.

        FFT of the integrand samples recovers its aliased Taylor data on the
        circle; dividing mode m by m+1 and rotating once integrates term by
        term. Aliasing error matches the trapezoid error at the same n, so
        the callers' doubling loops see the usual convergence signal.
        """
        theta = (2.0 * np.pi / n) * np.arange(n)
        z = r * np.exp(1j * theta)
        _check_radius(z)
        if self.series is not None and r <= self._series_radius():
            return self.series(z)
        coeffs = np.fft.fft(self.integrand(z)) / n
        coeffs *= r / np.arange(1.0, n + 1.0)
        return np.fft.ifft(coeffs) * n * np.exp(1j * theta)

    def derivative_function(self) -> AnalyticFunction:
        return self.integrand

    def taylor(self, n: int) -> np.ndarray:
        if self.series is None:
            raise NonConvergenceError(
                f"{self.uid} is a path integral without an attached expansion; "
                "use series resampling"
            )
        return self.series.taylor(n)


# ---------------------------------------------------------------------------
# the extremal catalog


def _poly_over_pole_taylor(num: Sequence[float], pole_order: int, n: int) -> np.ndarray:
    """Taylor coefficients of P(z)/(1-z)**pole_order."""
    return series_mul(np.asarray(num, dtype=complex), geometric_coefficients(1.0, pole_order, n), n)


def _H_taylor(k: float, n: int) -> np.ndarray:
    out = series_mul([1.0, 1.0], geometric_coefficients(1.0, 2, n), n)
    if k != 0.0:
        out = series_mul(out, geometric_coefficients(k, 1, n), n)
    return out


def _scrH_taylor(k: float, n: int) -> np.ndarray:
    out = series_mul([1.0, 2.0, 1.0], geometric_coefficients(1.0, 3, n), n)
    if k != 0.0:
        out = series_mul(out, geometric_coefficients(k, 1, n), n)
    return out


def _shift_up(coeff_fn: Callable[[int], np.ndarray], factor: float):
    """Taylor generator for factor * z * F(z) given F's generator."""

    def gen(n: int) -> np.ndarray:
        out = np.zeros(n, dtype=complex)
        if n > 1:
            out[1:] = factor * coeff_fn(n - 1)
        return out

    return gen


def catalog(name: str, k: float = 0.0) -> AnalyticFunction:
    """Closed-form extremal and classical comparison functions.

    Parametrized entries (H, G, scrH, scrG) require 0 <= k < 1; the classical
    entries ignore k. Returned objects carry exact derivatives and exact
    coefficient generators.
    """
    if name in ("H", "G", "scrH", "scrG") and not (0.0 <= k < 1.0):
        raise DomainError(f"catalog({name!r}) needs k in [0, 1), got {k}")
    kk = float(k)

    if name == "identity":
        return ClosedForm(
            "identity",
            lambda z: z,
            dfn=lambda z: np.ones_like(z),
            taylor_fn=lambda n: np.array([0.0, 1.0][:n], dtype=complex),
        )
    if name == "koebe":
        return ClosedForm(
            "koebe",
            lambda z: z / (1 - z) ** 2,
            dfn=lambda z: (1 + z) / (1 - z) ** 3,
            taylor_fn=lambda n: np.arange(n, dtype=complex),
        )
    if name == "half-plane":
        return ClosedForm(
            "half-plane",
            lambda z: z / (1 - z),
            dfn=lambda z: 1 / (1 - z) ** 2,
            taylor_fn=lambda n: np.concatenate([[0.0], np.ones(n - 1)]).astype(complex),
        )
    if name == "strip-like":
        def strip_taylor(n: int) -> np.ndarray:
            out = np.zeros(n, dtype=complex)
            out[1::2] = 1.0
            return out

        return ClosedForm(
            "strip-like",
            lambda z: z / (1 - z**2),
            dfn=lambda z: (1 + z**2) / (1 - z**2) ** 2,
            taylor_fn=strip_taylor,
        )
    if name == "H":
        uid = f"H[k={kk:g}]"

        def H(z):
            return (1 + z) / ((1 - z) ** 2 * (1 - kk * z))

        def dH(z):
            num = (1 - z) * (1 - kk * z) + 2 * (1 + z) * (1 - kk * z) + kk * (1 - z**2)
            return num / ((1 - z) ** 3 * (1 - kk * z) ** 2)

        return ClosedForm(uid, H, dfn=dH, taylor_fn=lambda n: _H_taylor(kk, n))
    if name == "G":
        uid = f"G[k={kk:g}]"
        Hf = catalog("H", kk)
        return ClosedForm(
            uid,
            lambda z: kk * z * Hf(z),
            dfn=lambda z: kk * Hf(z) + kk * z * Hf.derivative(z),
            taylor_fn=_shift_up(lambda n: _H_taylor(kk, n), kk),
        )
    if name == "scrH":
        uid = f"scrH[k={kk:g}]"

        def scrH(z):
            return (1 + z) ** 2 / ((1 - z) ** 3 * (1 - kk * z))

        def dscrH(z):
            num = (
                2 * (1 - z) * (1 - kk * z)
                + 3 * (1 + z) * (1 - kk * z)
                + kk * (1 - z**2)
            )
            return (1 + z) * num / ((1 - z) ** 4 * (1 - kk * z) ** 2)

        return ClosedForm(uid, scrH, dfn=dscrH, taylor_fn=lambda n: _scrH_taylor(kk, n))
    if name == "scrG":
        uid = f"scrG[k={kk:g}]"
        Sf = catalog("scrH", kk)
        return ClosedForm(
            uid,
            lambda z: kk * z * Sf(z),
            dfn=lambda z: kk * Sf(z) + kk * z * Sf.derivative(z),
            taylor_fn=_shift_up(lambda n: _scrH_taylor(kk, n), kk),
        )
    raise DomainError(f"unknown catalog name {name!r}")


CATALOG_NAMES = ("identity", "koebe", "half-plane", "strip-like", "H", "G", "scrH", "scrG")


def taylor_coefficients(F: AnalyticFunction, n: int) -> np.ndarray:
    """First n Taylor coefficients of F at the origin."""
    if n < 1:
        raise DomainError("need n >= 1")
    return F.taylor(n)
