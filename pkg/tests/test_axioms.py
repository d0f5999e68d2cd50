"""The randomized axiom suite and its negative controls."""

import random

from conftest import load_pipeline, load_sequence

from nangulator.angulation import AngleSequence, certify_angle, standard_angle
from nangulator.axioms import (
    corrupted_suspension_sequence,
    random_module,
    sample_commuting_square,
    verify_axioms,
)
from nangulator.modules import projective_module


def test_loop_suite_all_pass():
    seq = load_sequence("loop_p3", 3)
    report = verify_axioms(seq.engine, seq, samples=8, seed=41)
    assert report.all_pass
    for axiom, count in report.passes.items():
        assert count == 8, axiom


def test_nakayama_suite_all_pass():
    seq = load_sequence("nakayama_2_2", 4)
    report = verify_axioms(seq.engine, seq, samples=8, seed=42)
    assert report.all_pass
    assert report.uncertified_angles == 0
    assert report.certified_angles > 0


def test_report_serialization_shape():
    seq = load_sequence("loop_p3", 3)
    report = verify_axioms(seq.engine, seq, samples=2, seed=0)
    d = report.to_dict()
    assert d["schema"] == "1"
    assert set(d["axioms"]) == {"N1a", "N1b", "N1c", "N2", "N3", "N4"}
    assert d["first_failure"] is None


def test_same_seed_same_report():
    seq = load_sequence("loop_p3", 3)
    r1 = verify_axioms(seq.engine, seq, samples=4, seed=9)
    r2 = verify_axioms(seq.engine, seq, samples=4, seed=9)
    assert r1.to_dict() == r2.to_dict()


def test_corrupted_suspension_fails_checks():
    seq = load_sequence("nakayama_2_2", 4)
    bad = corrupted_suspension_sequence(seq)
    t = standard_angle(seq, projective_module(seq.algebra, 0))
    t_bad = AngleSequence(t.objects, t.maps, bad.suspension)
    cert = certify_angle(bad, t_bad)
    assert not cert.verdict
    assert cert.reason == "maps-not-module-morphisms"
    report = verify_axioms(bad.engine, bad, samples=2, seed=7)
    assert not report.all_pass
    assert report.first_failure is not None


def test_random_module_generator_is_seeded():
    algebra, _, eng, _ = load_pipeline("nakayama_2_2")
    m1 = random_module(algebra, eng, random.Random(3))
    m2 = random_module(algebra, eng, random.Random(3))
    assert m1.dim == m2.dim
    assert all(a == b for a, b in zip(m1.action, m2.action))


def test_sampled_squares_commute():
    seq = load_sequence("nakayama_2_2", 4)
    t1 = standard_angle(seq, projective_module(seq.algebra, 0))
    t2 = standard_angle(seq, projective_module(seq.algebra, 1))
    for seed in range(4):
        phi1, phi2 = sample_commuting_square(seq.engine, t1, t2,
                                             random.Random(seed))
        assert (t1.maps[0].matrix @ phi2.matrix) == (
            phi1.matrix @ t2.maps[0].matrix)
