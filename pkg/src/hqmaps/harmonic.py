"""Harmonic mappings f = h + conj(g): construction, evaluation, and the corpus.

A harmonic map is stored as its canonical pair (h, g) of analytic functions
together with declared class tags and, when quasiconformal, the dilatation
bound. Shears are built from a conformal slice phi and a dilatation omega by
h' = phi'/(1 - omega), g = h - phi; values of h come from a power series at
moderate radii and from radial quadrature near the boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .analytic import (
    SERIES_CAP,
    AnalyticFunction,
    ClosedForm,
    DomainError,
    PowerSeries,
    RadialIntegral,
    catalog,
    geometric_coefficients,
    series_integrate,
    series_mul,
    series_reciprocal,
)

CLASS_TAGS = ("convex", "close-to-convex", "starlike", "convex-in-one-direction", "analytic")


@dataclass
class HarmonicMap:
    """f = h + conj(g) with class tags and an optional quasiconformal bound."""

    h: AnalyticFunction
    g: AnalyticFunction
    uid: str
    class_tags: frozenset = frozenset()
    qc_k: Optional[float] = None
    meta: dict = field(default_factory=dict)

    def __call__(self, z):
        return self.h(z) + np.conj(self.g(z))

    @property
    def h_prime(self) -> AnalyticFunction:
        return self.h.derivative_function()

    @property
    def g_prime(self) -> AnalyticFunction:
        return self.g.derivative_function()

    def is_analytic(self) -> bool:
        return "analytic" in self.class_tags

    def circle_values(self, r: float, n: int) -> np.ndarray:
        """f on the uniform n-point circle grid, via component fast paths."""
        return _component_circle(self.h, r, n) + np.conj(_component_circle(self.g, r, n))

    def __repr__(self):
        return f"<HarmonicMap {self.uid}>"


def _component_circle(F: AnalyticFunction, r: float, n: int) -> np.ndarray:
    fast = getattr(F, "circle_values", None)
    if fast is not None:
        return np.asarray(fast(r, n))
    return np.asarray(F(r * np.exp(2j * np.pi * np.arange(n) / n)))


def eval_harmonic(f: HarmonicMap, z):
    """h(z) + conj(g(z)); domain-checked by the underlying evaluators."""
    return f(z)


def jacobian(f: HarmonicMap, z):
    """|h'|^2 - |g'|^2, positive exactly where f is sense-preserving."""
    return np.abs(f.h.derivative(z)) ** 2 - np.abs(f.g.derivative(z)) ** 2


def analytic_dilatation(f: HarmonicMap, z):
    """omega = g'/h'; errors where h' underflows to an effective zero."""
    hp = np.asarray(f.h.derivative(z))
    if np.min(np.abs(hp)) < 1e-300:
        raise DomainError("h' vanishes at an evaluation point")
    return f.g.derivative(z) / hp


def k_of_K(K: float) -> float:
    """Dilatation bound k = (K-1)/(K+1) of a K-quasiconformal map."""
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    return (K - 1.0) / (K + 1.0)


def K_of_k(k: float) -> float:
    """Maximal dilatation K = (1+k)/(1-k) from the bound on |omega|."""
    if not (0.0 <= k < 1.0):
        raise DomainError(f"k must lie in [0, 1), got {k}")
    return (1.0 + k) / (1.0 - k)


# ---------------------------------------------------------------------------
# shears


def _adaptive_length(coeffs_fn, r_target: float = 0.995, tol: float = 1e-13) -> int:
    """Shortest truncation whose last term passes the tail bound at r_target."""
    n = 64
    while n <= SERIES_CAP:
        c = coeffs_fn(n)
        if abs(c[-1]) * r_target ** (n - 1) < tol:
            return n
        n *= 2
    return SERIES_CAP


def make_shear(phi: AnalyticFunction, omega: AnalyticFunction, uid: Optional[str] = None) -> HarmonicMap:
    """Shear construction: h - g = phi, g' = omega h'.

    Requires the usual normalization phi(0) = 0, phi'(0) = 1, omega(0) = 0 and
    |omega| < 1 on the closed probe disk. The result is tagged
    convex-in-one-direction and close-to-convex. qc_k is the exact sup of
    |omega| over the disk when omega declares one (the monomial family does),
    otherwise the sampled grid sup.
    """
    z0 = np.asarray(0.0, dtype=complex)
    if abs(phi(z0)) > 1e-12 or abs(phi.derivative(z0) - 1.0) > 1e-12:
        raise DomainError("shear needs phi(0) = 0 and phi'(0) = 1")
    if abs(omega(z0)) > 1e-12:
        raise DomainError("shear needs omega(0) = 0")
    grid = 0.99 * np.exp(2j * np.pi * np.arange(1024) / 1024)
    sup_omega = float(np.max(np.abs(omega(grid))))
    if sup_omega >= 1.0:
        raise DomainError(f"|omega| reaches {sup_omega:.6f} >= 1 on the probe grid")
    qc = getattr(omega, "exact_sup", None)
    if qc is None:
        qc = sup_omega
    elif sup_omega > qc + 1e-10:
        raise DomainError("declared sup of |omega| contradicted on the probe grid")

    if uid is None:
        uid = f"shear[phi={phi.uid},omega={omega.uid}]"
    phi_prime = phi.derivative_function()

    def hp_fn(z):
        return phi.derivative(z) / (1.0 - omega(z))

    def hp_taylor(m: int) -> np.ndarray:
        one_minus = -omega.taylor(m)
        one_minus[0] += 1.0
        return series_mul(phi_prime.taylor(m), series_reciprocal(one_minus, m), m)

    def gp_taylor(m: int) -> np.ndarray:
        return series_mul(omega.taylor(m), hp_taylor(m), m)

    n = _adaptive_length(hp_taylor)
    h_series = PowerSeries(series_integrate(hp_taylor(n), n), uid + ":h-series")

    hp = ClosedForm(uid + ":h'", hp_fn, taylor_fn=hp_taylor)
    h = RadialIntegral(hp, uid + ":h", series=h_series)

    g = ClosedForm(
        uid + ":g",
        lambda z: h(z) - phi(z),
        dfn=lambda z: omega(z) * hp_fn(z),
        taylor_fn=lambda m: series_integrate(gp_taylor(m), m),
    )
    # g inherits h's spectral circle path; phi itself is a cheap closed form
    g.circle_values = lambda r, n: h.circle_values(r, n) - phi(
        r * np.exp(2j * np.pi * np.arange(n) / n)
    )
    return HarmonicMap(
        h=h,
        g=g,
        uid=uid,
        class_tags=frozenset({"convex-in-one-direction", "close-to-convex"}),
        qc_k=qc,
        meta={"phi": phi.uid, "omega": omega.uid},
    )


def normalize_to_S0(f: HarmonicMap) -> HarmonicMap:
    """Renormalize so that g'(0) = 0, keeping h(0) = g(0) = 0, h'(0) = 1.

    h0 = (h - conj(alpha) g)/(1 - |alpha|^2), g0 = (g - alpha h)/(1 - |alpha|^2)
    with alpha = g'(0); requires |alpha| < 1 (sense-preserving at 0).
    """
    z0 = np.asarray(0.0, dtype=complex)
    alpha = complex(f.g.derivative(z0))
    if abs(alpha) >= 1.0:
        raise DomainError(f"|g'(0)| = {abs(alpha):.6f} >= 1: not sense-preserving at 0")
    if alpha == 0:
        return f
    denom = 1.0 - abs(alpha) ** 2
    ca = np.conj(alpha)

    h0 = ClosedForm(
        f.uid + ":h0",
        lambda z: (f.h(z) - ca * f.g(z)) / denom,
        dfn=lambda z: (f.h.derivative(z) - ca * f.g.derivative(z)) / denom,
        taylor_fn=lambda n: (f.h.taylor(n) - ca * f.g.taylor(n)) / denom,
    )
    g0 = ClosedForm(
        f.uid + ":g0",
        lambda z: (f.g(z) - alpha * f.h(z)) / denom,
        dfn=lambda z: (f.g.derivative(z) - alpha * f.h.derivative(z)) / denom,
        taylor_fn=lambda n: (f.g.taylor(n) - alpha * f.h.taylor(n)) / denom,
    )
    return HarmonicMap(
        h=h0,
        g=g0,
        uid=f.uid + ":normalized",
        class_tags=f.class_tags,
        qc_k=f.qc_k,
        meta=dict(f.meta, normalized=True),
    )


# ---------------------------------------------------------------------------
# named harmonic maps


def harmonic_koebe() -> HarmonicMap:
    """The harmonic Koebe map: dilatation z, image the slit plane.

    Not quasiconformal (|omega| -> 1 at the boundary); the canonical contrast
    case for membership thresholds.
    """
    h = ClosedForm(
        "harmonic-koebe:h",
        lambda z: (z - z**2 / 2 + z**3 / 6) / (1 - z) ** 3,
        dfn=lambda z: (1 + z) / (1 - z) ** 4,
        taylor_fn=lambda n: series_mul(
            np.array([0, 1.0, -0.5, 1.0 / 6]), geometric_coefficients(1.0, 3, n), n
        ),
    )
    g = ClosedForm(
        "harmonic-koebe:g",
        lambda z: (z**2 / 2 + z**3 / 6) / (1 - z) ** 3,
        dfn=lambda z: z * (1 + z) / (1 - z) ** 4,
        taylor_fn=lambda n: series_mul(
            np.array([0, 0, 0.5, 1.0 / 6]), geometric_coefficients(1.0, 3, n), n
        ),
    )
    return HarmonicMap(
        h=h,
        g=g,
        uid="harmonic-koebe",
        class_tags=frozenset({"close-to-convex", "starlike"}),
        qc_k=None,
    )


def analytic_map(name: str) -> HarmonicMap:
    """Wrap a conformal catalog entry as a HarmonicMap with g = 0."""
    F = catalog(name)
    tags = {"analytic", "close-to-convex", "starlike"}
    if name in ("identity", "half-plane"):
        tags.add("convex")
    if name == "strip-like":
        tags.add("convex-in-one-direction")
    zero = ClosedForm(
        "zero",
        lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
        dfn=lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
        taylor_fn=lambda n: np.zeros(n, dtype=complex),
    )
    return HarmonicMap(h=F, g=zero, uid=name, class_tags=frozenset(tags), qc_k=0.0)


_SHEAR_PHI = {"identity": "identity", "halfplane": "half-plane", "strip": "strip-like"}


def shear_omega(kappa: float, power: int) -> AnalyticFunction:
    """omega(z) = kappa z**power for power in {1, 2}."""
    if power not in (1, 2):
        raise DomainError("omega power must be 1 or 2")
    if not (0.0 <= kappa < 1.0):
        raise DomainError(f"omega coefficient must lie in [0, 1), got {kappa}")

    def taylor(n: int) -> np.ndarray:
        out = np.zeros(n, dtype=complex)
        if n > power:
            out[power] = kappa
        return out

    F = ClosedForm(
        f"{kappa:g}z" + ("^2" if power == 2 else ""),
        lambda z: kappa * z**power,
        dfn=lambda z: kappa * power * z ** (power - 1),
        taylor_fn=taylor,
    )
    F.exact_sup = kappa
    return F


def corpus_shear(phi_name: str, kappa: float, power: int) -> HarmonicMap:
    """Shear of a named slice by omega = kappa z**power."""
    if phi_name not in _SHEAR_PHI:
        raise DomainError(f"phi must be one of {sorted(_SHEAR_PHI)}, got {phi_name!r}")
    phi = catalog(_SHEAR_PHI[phi_name])
    omega = shear_omega(kappa, power)
    uid = f"shear[phi={phi_name},omega={omega.uid}]"
    if kappa == 0.0:
        f = analytic_map(_SHEAR_PHI[phi_name])
        return HarmonicMap(
            h=f.h, g=f.g, uid=uid, class_tags=f.class_tags, qc_k=0.0,
            meta={"phi": phi_name, "omega": omega.uid},
        )
    return make_shear(phi, omega, uid=uid)


def build_corpus(certify_convex: bool = True) -> list:
    """The built-in corpus: analytic references, shears, harmonic Koebe.

    Shears span the three slices, both dilatation shapes, and the dilatation
    strengths {0.25, 0.5, 0.8}; strength 0 collapses onto the analytic slice
    entries, so those appear once under their analytic names. Shears of the
    identity slice are candidates for the convex tag; the tag is added only
    when the convexity probe certifies the image at every probe radius.
    """
    maps = [
        analytic_map("identity"),
        analytic_map("koebe"),
        analytic_map("half-plane"),
        analytic_map("strip-like"),
    ]
    for phi_name in ("identity", "halfplane", "strip"):
        for power in (1, 2):
            for kappa in (0.25, 0.5, 0.8):
                maps.append(corpus_shear(phi_name, kappa, power))
    maps.append(harmonic_koebe())
    if certify_convex:
        from .probes import convexity_probe

        for f in maps:
            if f.meta.get("phi") == "identity" and "convex" not in f.class_tags:
                if all(convexity_probe(f, r).ok for r in (0.5, 0.9, 0.99)):
                    f.class_tags = f.class_tags | {"convex"}
    return maps


def corpus_manifest(maps: list) -> str:
    """Deterministic JSON manifest of corpus entries."""
    entries = []
    for f in maps:
        entries.append(
            {
                "id": f.uid,
                "kind": "analytic" if f.is_analytic() else "harmonic",
                "parameters": {k: v for k, v in sorted(f.meta.items()) if k in ("phi", "omega")},
                "class_tags": sorted(f.class_tags),
                "qc_k": f.qc_k,
            }
        )
    return json.dumps(entries, indent=2, sort_keys=True)
