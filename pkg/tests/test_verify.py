"""Verification layer: rows, reports, growth fits, membership verdicts."""

import json

import numpy as np
import pytest

from hqmaps.analytic import DomainError, catalog
from hqmaps.harmonic import analytic_map, corpus_shear, harmonic_koebe
from hqmaps.means import MeansCurve, dyadic_means_curve
from hqmaps.verify import (
    CertificationError,
    ClassTagError,
    K_GRID,
    P_GRID,
    R_GRID,
    VerificationReport,
    VerificationRow,
    check_means_domination,
    check_star_chain,
    growth_exponent,
    hardy_membership_verdict,
    run_suite,
)


def test_check_means_domination_rows(corpus_by_uid):
    # the convex tag comes from the corpus-level probe pass
    f = corpus_by_uid["shear[phi=identity,omega=0.25z]"]
    rows = check_means_domination(f, "H", 0.25, p_grid=(1.0, 2.0), r_grid=(0.5, 0.9))
    assert len(rows) == 8  # (h', g') x p x r
    assert {r.inequality_id for r in rows} == {
        "means-convex-hprime",
        "means-convex-gprime",
    }
    assert all(r.verdict == "pass" for r in rows)
    assert all(r.margin >= -1e-6 for r in rows)


def test_check_means_domination_class_tag_error():
    with pytest.raises(ClassTagError):
        check_means_domination(harmonic_koebe(), "H", 0.5)
    # scrH needs a close-to-convex tag; every corpus member has one, so force
    # the failure with a bare analytic wrapper
    f = corpus_shear("halfplane", 0.5, 1)
    stripped = type(f)(
        h=f.h, g=f.g, uid="untagged", class_tags=frozenset(), qc_k=f.qc_k
    )
    with pytest.raises(ClassTagError):
        check_means_domination(stripped, "scrH", 0.5)


def test_check_means_domination_certification_error(corpus_by_uid):
    f = corpus_by_uid["shear[phi=identity,omega=0.25z]"]
    with pytest.raises(CertificationError):
        check_means_domination(f, "H", 0.1)  # true sup dilatation is 0.25


def test_check_means_domination_unknown_family():
    f = corpus_shear("identity", 0.25, 1)
    with pytest.raises(DomainError):
        check_means_domination(f, "Q", 0.25)


def test_check_star_chain_rows():
    f = corpus_shear("halfplane", 0.5, 1)
    rows = check_star_chain(f, 0.5, 0.7)
    assert len(rows) == 2
    assert all(r.verdict == "pass" for r in rows)
    assert all(r.lhs <= 1e-8 for r in rows)


def test_check_star_chain_skips_trivial_g():
    rows = check_star_chain(analytic_map("identity"), 0.0, 0.5)
    assert len(rows) == 1
    assert rows[0].inequality_id.endswith("hprime")


def test_growth_exponent_synthetic():
    radii = 1.0 - 2.0 ** -np.arange(1, 11)
    curve = MeansCurve(
        p=1.0, radii=radii, values=(1.0 - radii) ** -2.0, target="synthetic"
    )
    beta = growth_exponent(curve)
    assert abs(beta - 2.0) < 1e-3


def test_growth_exponent_H0_M2():
    curve = dyadic_means_curve(catalog("H", 0.0), 2.0, 12)
    assert abs(growth_exponent(curve) - 1.5) < 0.05


def test_growth_exponent_identity():
    curve = dyadic_means_curve(catalog("identity"), 1.0, 14)
    assert abs(growth_exponent(curve)) < 1e-3


def test_growth_exponent_needs_six_radii():
    radii = 1.0 - 2.0 ** -np.arange(1, 5)
    curve = MeansCurve(p=1.0, radii=radii, values=np.ones(4), target="short")
    with pytest.raises(DomainError):
        growth_exponent(curve)


def test_membership_identity():
    v = hardy_membership_verdict(analytic_map("identity"), 0.5)
    assert v.verdict == "member"
    assert abs(v.beta) < 0.02
    assert v.thresholds["theorem"] == 1.0
    assert v.thresholds["astala_koskela"] == 0.5


def test_membership_harmonic_koebe_divergent():
    v = hardy_membership_verdict(harmonic_koebe(), 0.4)
    assert v.verdict == "divergent"
    assert abs(v.beta_pp - 0.2) <= 0.1
    assert v.thresholds["theorem"] == 0.5  # close-to-convex, no QC certificate
    assert v.thresholds["astala_koskela"] is None


def test_membership_ctc_shear():
    v = hardy_membership_verdict(corpus_shear("halfplane", 0.5, 1), 0.45)
    assert v.verdict == "member"
    assert abs(v.thresholds["astala_koskela"] - 1.0 / 6.0) < 1e-12


def test_membership_certificate_path():
    # raw slope at p = 0.9 sits above the divergence cutoff; the integral
    # certificate rescues the verdict
    v = hardy_membership_verdict(analytic_map("half-plane"), 0.9)
    assert v.verdict == "member"
    assert v.beta > 0.05
    assert v.certificate is not None
    assert v.certificate.tail_exponent > -0.95


def test_membership_needs_valid_p():
    with pytest.raises(DomainError):
        hardy_membership_verdict(analytic_map("identity"), 0.0)


def test_row_margin_and_verdict():
    row = VerificationRow(
        mapping_id="m", inequality_id="i", k=0.0, p=1.0, r=0.5,
        lhs=1.0, rhs=2.0, tol=1e-6,
    )
    assert row.margin == 1.0
    assert row.verdict == "pass"
    bad = VerificationRow(
        mapping_id="m", inequality_id="i", k=0.0, p=1.0, r=0.5,
        lhs=2.0, rhs=1.0, tol=1e-6,
    )
    assert bad.verdict == "fail"
    assert bad.margin == -1.0


def test_report_sorting_and_serialization():
    rows = [
        VerificationRow("b", "z", 0.5, 1.0, 0.5, 0.0, 1.0, 1e-6),
        VerificationRow("a", "z", 0.5, 1.0, 0.5, 0.0, 1.0, 1e-6),
        VerificationRow("a", "a", 0.5, 1.0, 0.5, 0.0, 1.0, 1e-6),
    ]
    rep = VerificationReport(rows=rows, metadata={"timestamp": None})
    keys = [(r.inequality_id, r.mapping_id) for r in rep.rows]
    assert keys == sorted(keys)
    doc = json.loads(rep.to_json())
    assert len(doc["rows"]) == 3
    assert rep.to_json() == rep.to_json()
    csv = rep.to_csv().splitlines()
    assert csv[0].startswith("inequality_id,mapping_id")
    assert rep.exit_status() == 0


def test_report_exit_status_on_failure():
    rows = [VerificationRow("m", "i", 0.0, 1.0, 0.5, 2.0, 1.0, 1e-9)]
    rep = VerificationReport(rows=rows, metadata={})
    assert rep.exit_status() == 1
    assert len(rep.failures) == 1


def test_run_suite_star_small():
    f = corpus_shear("halfplane", 0.5, 1)
    rep = run_suite("star", corpus=[f], r_grid=(0.5,), K_grid=(1.0, 3.0))
    # rows at own k = 0.5 only (grid k values 0 and 0.5; 0 < own sup)
    ks = sorted({r.k for r in rep.rows})
    assert ks == [0.5]
    assert rep.metadata["corpus_size"] == 1
    assert rep.metadata["timestamp"] is None
    assert len(rep.failures) == 0


def test_run_suite_unknown_name():
    with pytest.raises(DomainError):
        run_suite("everything")
    with pytest.raises(DomainError):
        run_suite("means", class_filter="starlike")


def test_run_suite_grid_defaults():
    assert K_GRID == (1.0, 1.5, 2.0, 3.0, 5.0)
    assert P_GRID == (0.25, 0.5, 1.0, 2.0, 4.0)
    assert R_GRID == (0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99)
