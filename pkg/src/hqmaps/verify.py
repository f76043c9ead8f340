"""Inequality harness: domination sweeps, growth fits, membership verdicts.

Every check produces rows of a common shape (mapping, inequality, parameters,
lhs, rhs, margin) so reports serialize uniformly and reruns are byte-stable.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .analytic import DomainError, catalog
from .csvio import join_row
from .harmonic import HarmonicMap, K_of_k, build_corpus, corpus_manifest, k_of_K
from .means import (
    HardyBound,
    MeansCurve,
    corollary_bound,
    dyadic_means_curve,
    hardy_norm_bound,
    integral_means,
)
from .probes import qc_certify
from .star import sample_log_modulus, star_dominates, star_function, star_grid_size

R_GRID = (0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99)
P_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)
K_GRID = (1.0, 1.5, 2.0, 3.0, 5.0)
CUMULATIVE_P_GRID = (1.0, 2.0, 4.0)
CUMULATIVE_R_GRID = (0.5, 0.9, 0.99)
REL_TOL = 1e-6
CLASSIC_TOL = 1e-8
STAR_TOL = 1e-8
MEMBER_BETA = 0.02
DIVERGENT_BETA = 0.05
CERT_TAIL = -0.95
DEFAULT_DEPTH = 13

# any of these marks eligibility for the close-to-convex extremal family
_CTC_TAGS = frozenset(
    {"close-to-convex", "starlike", "convex-in-one-direction", "convex"}
)


class ClassTagError(DomainError):
    """The mapping lacks the class tag an inequality requires."""


class CertificationError(DomainError):
    """The quasiconformal certificate for (f, k) did not pass."""


# ---------------------------------------------------------------------------
# rows and reports


CSV_HEADER = "inequality_id,mapping_id,k,p,r,lhs,rhs,margin,tol,verdict"


@dataclass
class VerificationRow:
    mapping_id: str
    inequality_id: str
    k: float
    p: float
    r: float
    lhs: float
    rhs: float
    tol: float
    detail: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def verdict(self) -> str:
        return "pass" if self.margin >= -self.tol else "fail"

    def sort_key(self) -> tuple:
        return (self.inequality_id, self.mapping_id, self.k, self.p, self.r)

    def as_dict(self) -> dict:
        return {
            "mapping_id": self.mapping_id,
            "inequality_id": self.inequality_id,
            "k": self.k,
            "p": self.p,
            "r": self.r,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "tol": self.tol,
            "verdict": self.verdict,
            "detail": self.detail,
        }

    def csv_line(self) -> str:
        return join_row(
            [
                self.inequality_id,
                self.mapping_id,
                f"{self.k:.12g}",
                f"{self.p:.12g}",
                f"{self.r:.12g}",
                f"{self.lhs:.12g}",
                f"{self.rhs:.12g}",
                f"{self.margin:.12g}",
                f"{self.tol:.12g}",
                self.verdict,
            ]
        )


def _row(mapping_id, inequality_id, k, p, r, lhs, rhs, tol, detail=None):
    return VerificationRow(
        mapping_id=str(mapping_id),
        inequality_id=str(inequality_id),
        k=float(k),
        p=float(p),
        r=float(r),
        lhs=float(lhs),
        rhs=float(rhs),
        tol=float(tol),
        detail=dict(detail or {}),
    )


@dataclass
class VerificationReport:
    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=VerificationRow.sort_key)

    @property
    def failures(self) -> list:
        return [row for row in self.rows if row.verdict != "pass"]

    def to_json(self) -> str:
        doc = {
            "metadata": self.metadata,
            "rows": [row.as_dict() for row in self.rows],
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        return "\n".join([CSV_HEADER] + [row.csv_line() for row in self.rows]) + "\n"

    def exit_status(self) -> int:
        return 0 if not self.failures else 1


# ---------------------------------------------------------------------------
# preconditions


def _require_tags(f: HarmonicMap, extremal: str) -> str:
    """Return the inequality-id prefix for the extremal family, or raise."""
    if extremal == "H":
        if "convex" not in f.class_tags:
            raise ClassTagError(
                f"{f.uid}: comparison against the convex extremal needs the convex tag"
            )
        return "convex"
    if extremal == "scrH":
        if not (_CTC_TAGS & f.class_tags):
            raise ClassTagError(
                f"{f.uid}: comparison against the close-to-convex extremal needs a "
                "close-to-convex-family tag"
            )
        return "ctc"
    raise DomainError(f"extremal must be 'H' or 'scrH', got {extremal!r}")


def _require_certificate(f: HarmonicMap, k: float):
    cert = qc_certify(f, k)
    if not cert.ok:
        raise CertificationError(
            f"{f.uid}: sup|g'/h'| = {cert.sup_dilatation:.6f} is not certified at k = {k:g}"
        )
    return cert


def _k_values(f: HarmonicMap, K_grid: Sequence[float] = K_GRID) -> list:
    """Own declared k plus every grid k at or above it; [] if not QC."""
    if f.qc_k is None or f.qc_k >= 1.0:
        return []
    grid = {round(k_of_K(K), 12) for K in K_grid}
    return sorted({float(f.qc_k)} | {k for k in grid if k >= f.qc_k - 1e-12})


# ---------------------------------------------------------------------------
# inequality checks


def check_means_domination(
    f: HarmonicMap,
    extremal: str,
    k: float,
    p_grid: Sequence[float] = P_GRID,
    r_grid: Sequence[float] = R_GRID,
    tol: float = REL_TOL,
) -> list:
    """Rows for M_p(r, h') vs the extremal and M_p(r, g') vs its companion."""
    prefix = _require_tags(f, extremal)
    _require_certificate(f, k)
    E = catalog(extremal, k)
    C = catalog("G" if extremal == "H" else "scrG", k)
    hp, gp = f.h_prime, f.g_prime
    rows = []
    for p in p_grid:
        for r in r_grid:
            lhs = integral_means(hp, p, r, rel_tol=1e-8)
            rhs = integral_means(E, p, r, rel_tol=1e-8)
            rows.append(
                _row(
                    f.uid, f"means-{prefix}-hprime", k, p, r, lhs, rhs,
                    tol * max(abs(lhs), abs(rhs), 1.0),
                )
            )
            glhs = integral_means(gp, p, r, rel_tol=1e-8)
            grhs = integral_means(C, p, r, rel_tol=1e-8)
            rows.append(
                _row(
                    f.uid, f"means-{prefix}-gprime", k, p, r, glhs, grhs,
                    tol * max(abs(glhs), abs(grhs), 1.0),
                )
            )
    return rows


def check_star_chain(
    f: HarmonicMap,
    k: float,
    r: float,
    extremal: Optional[str] = None,
    tol: float = STAR_TOL,
) -> list:
    """Star-function domination of log|h'| (and log|g'|) by the extremal pair.

    Pointwise on the star grid this is strictly stronger than any single
    means comparison. Rows carry p = 0 as a sentinel; lhs is the largest
    violation, so margin = -lhs.
    """
    if extremal is None:
        extremal = "H" if "convex" in f.class_tags else "scrH"
    prefix = _require_tags(f, extremal)
    _require_certificate(f, k)
    n = star_grid_size(r)
    E = catalog(extremal, k)
    rows = []

    star_h = star_function(sample_log_modulus(f.h_prime, r, n))
    star_E = star_function(sample_log_modulus(E, r, n))
    scale = max(1.0, float(np.max(np.abs(star_E.values))))
    v = star_dominates(star_h, star_E, tol=tol * scale)
    rows.append(
        _row(
            f.uid, f"star-{prefix}-hprime", k, 0.0, r,
            v.max_violation, 0.0, tol * scale,
            detail={"n": n, "at_theta": float(v.theta_at_max)},
        )
    )

    # the companion row needs log|g'|; skip it when g vanishes identically
    if k > 0 and not f.is_analytic():
        C = catalog("G" if extremal == "H" else "scrG", k)
        star_g = star_function(sample_log_modulus(f.g_prime, r, n))
        star_C = star_function(sample_log_modulus(C, r, n))
        scale = max(1.0, float(np.max(np.abs(star_C.values))))
        v = star_dominates(star_g, star_C, tol=tol * scale)
        rows.append(
            _row(
                f.uid, f"star-{prefix}-gprime", k, 0.0, r,
                v.max_violation, 0.0, tol * scale,
                detail={"n": n, "at_theta": float(v.theta_at_max)},
            )
        )
    return rows


# ---------------------------------------------------------------------------
# growth and membership


def growth_exponent(curve: MeansCurve) -> float:
    """Least-squares slope of log M vs -log(1-r) over the last 6 dyadic radii."""
    radii = np.asarray(curve.radii, dtype=float)
    if radii.size < 6:
        raise DomainError("growth fit needs at least six dyadic radii")
    js = np.log2(1.0 / (1.0 - radii))
    if float(np.max(np.abs(js - np.round(js)))) > 1e-9:
        raise DomainError("growth fit needs radii of the form 1 - 2**-j")
    x = -np.log(1.0 - radii[-6:])
    y = np.log(np.asarray(curve.values, dtype=float)[-6:])
    A = np.vstack([x, np.ones_like(x)]).T
    slope = np.linalg.lstsq(A, y, rcond=None)[0][0]
    return float(slope)


def _thresholds(f: HarmonicMap) -> dict:
    """Membership thresholds for context: this work, the earlier unconditioned
    bounds, and the distortion-only bound 1/(2K)."""
    convex = "convex" in f.class_tags
    ctc = bool(_CTC_TAGS & f.class_tags)
    theorem = 1.0 if convex else (0.5 if ctc else None)
    nowak = 0.5 if convex else (1.0 / 3.0 if ctc else None)
    ak = None
    if f.qc_k is not None and f.qc_k < 1.0:
        ak = 1.0 / (2.0 * K_of_k(f.qc_k))
    return {"theorem": theorem, "nowak": nowak, "astala_koskela": ak}


@dataclass
class MembershipVerdict:
    mapping_id: str
    p: float
    verdict: str  # member | divergent | inconclusive
    beta: float  # fitted exponent of M_p over converged dyadic radii
    beta_pp: float  # same fit for M_p^p, i.e. p * beta
    cauchy: bool
    certificate: Optional[HardyBound]
    thresholds: dict
    curve: MeansCurve


def hardy_membership_verdict(
    f: HarmonicMap, p: float, depth: int = DEFAULT_DEPTH
) -> MembershipVerdict:
    """Classify boundedness of M_p(r, f) as r -> 1.

    Order of evidence: a flat fitted exponent together with a Cauchy-like
    increment tail certifies membership outright; otherwise, for p < 1, the
    weighted h'-integral certificate decides (its integrand tail must beat
    exponent -1 with margin); only then does a steep exponent mean divergent.
    The fit uses converged radii only, so targets whose trapezoid chains hit
    the sample cap at deep radii are judged on trustworthy data.
    """
    if not (0.0 < p < math.inf):
        raise DomainError(f"p must lie in (0, inf), got {p}")
    curve = dyadic_means_curve(f, p, depth)
    mask = (
        curve.converged
        if curve.converged is not None
        else np.ones(curve.radii.size, dtype=bool)
    )
    radii = curve.radii[mask]
    vals = curve.values[mask]
    if vals.size < 6:
        raise DomainError(
            f"{f.uid}: only {vals.size} converged dyadic radii at p = {p}; "
            "increase depth"
        )
    m = min(6, vals.size)
    x = -np.log(1.0 - radii[-m:])
    y = np.log(vals[-m:])
    A = np.vstack([x, np.ones_like(x)]).T
    beta = float(np.linalg.lstsq(A, y, rcond=None)[0][0])

    rel_inc = np.diff(vals) / vals[1:]
    tail = rel_inc[-2:]
    literal = bool(np.all(np.abs(tail) < 1e-4))
    flat = bool(tail[-1] <= 1e-12)
    geometric = bool(tail[0] > 0 and 0 < tail[1] <= 0.97 * tail[0])
    cauchy = literal or flat or geometric

    verdict = None
    certificate = None
    if abs(beta) < MEMBER_BETA and cauchy:
        verdict = "member"
    elif p < 1.0:
        certificate = hardy_norm_bound(f, p)
        if not certificate.divergent and certificate.tail_exponent > CERT_TAIL:
            verdict = "member"
    if verdict is None:
        verdict = "divergent" if beta > DIVERGENT_BETA else "inconclusive"
    return MembershipVerdict(
        mapping_id=f.uid,
        p=float(p),
        verdict=verdict,
        beta=beta,
        beta_pp=float(p * beta),
        cauchy=cauchy,
        certificate=certificate,
        thresholds=_thresholds(f),
        curve=curve,
    )


def membership_row(
    f: HarmonicMap, p: float, expected: str, depth: int = DEFAULT_DEPTH
) -> VerificationRow:
    """Pattern row: lhs is 0/1 mismatch against the expected verdict."""
    v = hardy_membership_verdict(f, p, depth)
    detail = {
        "expected": expected,
        "actual": v.verdict,
        "beta": v.beta,
        "beta_pp": v.beta_pp,
        "cauchy": v.cauchy,
        "threshold_theorem": v.thresholds["theorem"],
        "threshold_nowak": v.thresholds["nowak"],
        "threshold_astala_koskela": v.thresholds["astala_koskela"],
        "certificate_tail": (
            v.certificate.tail_exponent if v.certificate is not None else None
        ),
    }
    return _row(
        f.uid,
        "membership-hardy",
        f.qc_k if f.qc_k is not None else 1.0,
        p,
        float(v.curve.radii[-1]),
        0.0 if v.verdict == expected else 1.0,
        0.0,
        0.5,
        detail,
    )


# ---------------------------------------------------------------------------
# suites


def suite_means(
    corpus,
    p_grid=P_GRID,
    r_grid=R_GRID,
    K_grid=K_GRID,
    tol=REL_TOL,
    families=("H", "scrH"),
):
    rows = []
    for f in corpus:
        for extremal in families:
            try:
                _require_tags(f, extremal)
            except ClassTagError:
                continue
            for k in _k_values(f, K_grid):
                rows += check_means_domination(f, extremal, k, p_grid, r_grid, tol)
    return rows


def suite_star(
    corpus, r_grid=R_GRID, K_grid=K_GRID, tol=STAR_TOL, families=("H", "scrH")
):
    rows = []
    for f in corpus:
        for extremal in families:
            try:
                _require_tags(f, extremal)
            except ClassTagError:
                continue
            for k in _k_values(f, K_grid):
                for r in r_grid:
                    rows += check_star_chain(f, k, r, extremal=extremal, tol=tol)
    return rows


def suite_cumulative(
    corpus,
    p_grid=CUMULATIVE_P_GRID,
    r_grid=CUMULATIVE_R_GRID,
    tol=REL_TOL,
    force_family: Optional[str] = None,
):
    """M_p(r, f) against (1+k) int_0^r M_p(s, extremal) ds at the map's own k.

    By default convex members are held to the tighter convex-family bound;
    force_family pins every member to one family (used by class filters).
    """
    rows = []
    for f in corpus:
        if f.qc_k is None or f.qc_k >= 1.0:
            continue
        if force_family == "H" or (force_family is None and "convex" in f.class_tags):
            extremal, prefix = "H", "convex"
            if "convex" not in f.class_tags:
                continue
        elif _CTC_TAGS & f.class_tags:
            extremal, prefix = "scrH", "ctc"
        else:
            continue
        k = float(f.qc_k)
        _require_certificate(f, k)
        for p in p_grid:
            for r in r_grid:
                lhs = integral_means(f, p, r, rel_tol=1e-8)
                rhs = corollary_bound(k, p, r, extremal=extremal)
                rows.append(
                    _row(
                        f.uid, f"cumulative-bound-{prefix}", k, p, r, lhs, rhs,
                        tol * max(abs(lhs), abs(rhs), 1.0),
                    )
                )
    return rows


def suite_classic(corpus, p_grid=P_GRID, r_grid=R_GRID, tol=CLASSIC_TOL):
    """Analytic starlike members against the slit-plane extremal and its
    derivative; tolerance is absolute by contract."""
    K = catalog("koebe")
    Kd = K.derivative_function()
    rows = []
    for f in corpus:
        if not ({"analytic", "starlike"} <= f.class_tags):
            continue
        for p in p_grid:
            for r in r_grid:
                lhs = integral_means(f.h, p, r, rel_tol=1e-9)
                rhs = integral_means(K, p, r, rel_tol=1e-9)
                rows.append(_row(f.uid, "means-classic-koebe", 0.0, p, r, lhs, rhs, tol))
                lhs = integral_means(f.h_prime, p, r, rel_tol=1e-9)
                rhs = integral_means(Kd, p, r, rel_tol=1e-9)
                rows.append(
                    _row(f.uid, "means-classic-koebe-deriv", 0.0, p, r, lhs, rhs, tol)
                )
    return rows


def suite_membership(corpus, depth=DEFAULT_DEPTH):
    """Expected verdict pattern: QC close-to-convex members below 1/2, QC
    convex-certified members below 1, the non-QC contrast case divergent."""
    rows = []
    for f in corpus:
        if f.uid == "harmonic-koebe":
            rows.append(membership_row(f, 0.4, "divergent", depth))
            continue
        qc = f.qc_k is not None and f.qc_k < 1.0
        if not qc:
            continue
        if _CTC_TAGS & f.class_tags:
            for p in (0.25, 0.45):
                rows.append(membership_row(f, p, "member", depth))
        if "convex" in f.class_tags:
            rows.append(membership_row(f, 0.9, "member", depth))
    return rows


SUITES = ("means", "star", "cumulative", "classic", "membership")


def run_suite(
    name: str = "all",
    corpus: Optional[list] = None,
    p_grid: Sequence[float] = P_GRID,
    r_grid: Sequence[float] = R_GRID,
    K_grid: Sequence[float] = K_GRID,
    tol: float = REL_TOL,
    depth: int = DEFAULT_DEPTH,
    class_filter: Optional[str] = None,
) -> VerificationReport:
    """Assemble the named suite (or all of them) into one report.

    A class filter narrows the corpus to one family and drops the suites
    whose statements concern the other classes.
    """
    if name == "all":
        # a class filter means "the rows about that family's theorem and
        # corollary"; the proof-mechanism and classifier suites stay out
        names = ("means", "cumulative") if class_filter is not None else SUITES
    else:
        names = (name,)
    for nm in names:
        if nm not in SUITES:
            raise DomainError(f"unknown suite {nm!r}; choose from {SUITES + ('all',)}")
    if corpus is None:
        corpus = build_corpus()
    families = ("H", "scrH")
    force_family = None
    if class_filter is not None:
        if class_filter == "convex":
            corpus = [f for f in corpus if "convex" in f.class_tags]
            families, force_family = ("H",), "H"
        elif class_filter in ("ctc", "close-to-convex"):
            corpus = [f for f in corpus if _CTC_TAGS & f.class_tags]
            families, force_family = ("scrH",), "scrH"
        else:
            raise DomainError(
                f"unknown class filter {class_filter!r}; use 'convex' or 'ctc'"
            )
    rows = []
    if "means" in names:
        rows += suite_means(corpus, p_grid, r_grid, K_grid, tol, families=families)
    if "star" in names:
        rows += suite_star(corpus, r_grid, K_grid, families=families)
    if "cumulative" in names:
        rows += suite_cumulative(corpus, tol=tol, force_family=force_family)
    if "classic" in names and class_filter is None:
        rows += suite_classic(corpus, p_grid, r_grid)
    if "membership" in names and class_filter is None:
        rows += suite_membership(corpus, depth)
    metadata = {
        "corpus_hash": hashlib.sha256(corpus_manifest(corpus).encode()).hexdigest(),
        "corpus_size": len(corpus),
        "grid": {"p": list(p_grid), "r": list(r_grid), "K": list(K_grid)},
        "tolerances": {
            "inequality_rel": tol,
            "star_rel": STAR_TOL,
            "classic_abs": CLASSIC_TOL,
            "membership_beta": [MEMBER_BETA, DIVERGENT_BETA],
            "certificate_tail": CERT_TAIL,
        },
        "depth": depth,
        "suites": list(names),
        "class_filter": class_filter,
        "timestamp": None,
    }
    return VerificationReport(rows=rows, metadata=metadata)
