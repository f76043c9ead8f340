"""Geometry probes: dilatation certificates, Schwarz bound, convexity."""

import numpy as np
import pytest

from hqmaps.analytic import ClosedForm, DomainError
from hqmaps.harmonic import (
    HarmonicMap,
    analytic_map,
    corpus_shear,
    harmonic_koebe,
    shear_omega,
)
from hqmaps.probes import (
    ProbeGrid,
    SenseReversalError,
    convexity_probe,
    cs_positivity_probe,
    qc_certify,
    schwarz_check,
)


def test_qc_certify_at_declared_k():
    f = corpus_shear("halfplane", 0.5, 1)
    v = qc_certify(f, 0.5)
    assert v.ok
    assert v.sup_dilatation <= 0.5 + 1e-10
    assert v.implied_K <= 3.0 + 1e-6


def test_qc_certify_fails_below_true_sup():
    f = corpus_shear("halfplane", 0.5, 1)
    v = qc_certify(f, 0.4)
    assert not v.ok
    assert v.sup_dilatation > 0.4


def test_qc_certify_analytic_map():
    v = qc_certify(analytic_map("koebe"), 0.0)
    assert v.ok
    assert v.sup_dilatation == 0.0
    assert abs(v.implied_K - 1.0) < 1e-12


def test_harmonic_koebe_never_certifies():
    f = harmonic_koebe()
    v = qc_certify(f, 0.95)
    assert not v.ok  # |omega| = |z| climbs to the probe rim


def test_sense_reversal_detected():
    base = corpus_shear("halfplane", 0.5, 1)
    flipped = HarmonicMap(
        h=base.g, g=base.h, uid="flipped", class_tags=frozenset(), qc_k=None
    )
    with pytest.raises(SenseReversalError):
        qc_certify(flipped, 0.99)


def test_schwarz_bound_monomials():
    assert schwarz_check(shear_omega(0.5, 1), 0.5).ok
    assert schwarz_check(shear_omega(0.8, 2), 0.8).ok
    v = schwarz_check(shear_omega(0.5, 1), 0.4)
    assert not v.ok
    assert abs(v.max_excess - 0.099) < 1e-9  # (0.5 - 0.4) * max grid radius


def test_schwarz_requires_vanishing_origin():
    with pytest.raises(DomainError):
        schwarz_check(ClosedForm("const", lambda z: 0.3 + 0.0 * z), 0.5)


def test_convexity_probe_koebe_radius():
    # classical convexity radius 2 - sqrt(3) ~ 0.268
    koebe = analytic_map("koebe")
    assert convexity_probe(koebe, 0.25).ok
    assert not convexity_probe(koebe, 0.9).ok


def test_convexity_probe_convex_maps():
    assert convexity_probe(analytic_map("identity"), 0.99).ok
    assert convexity_probe(analytic_map("half-plane"), 0.99).ok


def test_convexity_probe_shears():
    assert convexity_probe(corpus_shear("identity", 0.25, 1), 0.9).ok
    assert not convexity_probe(corpus_shear("halfplane", 0.5, 1), 0.9).ok


def test_cs_positivity_identity():
    assert cs_positivity_probe(analytic_map("identity"), 0.9) == (0.0, 0.0)


def test_cs_positivity_convex_shear():
    assert cs_positivity_probe(corpus_shear("identity", 0.25, 1), 0.9) == (0.0, 0.0)


def test_cs_positivity_nonconvex_range():
    f = corpus_shear("halfplane", 0.5, 1)
    # witness exists inside the convex range of the image, none beyond it
    assert cs_positivity_probe(f, 0.3) == (0.0, 0.0)
    assert cs_positivity_probe(f, 0.9) is None


def test_cs_positivity_koebe_none():
    assert cs_positivity_probe(analytic_map("koebe"), 0.95) is None


def test_probe_grid_validation():
    g = ProbeGrid()
    assert g.points().ndim == 1
    assert np.max(np.abs(g.points())) < 1.0
    with pytest.raises(DomainError):
        ProbeGrid(radii=(0.5, 1.0))
