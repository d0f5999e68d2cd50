#!/usr/bin/env python3
"""End-to-end walkthrough on one fixture: scan for quasi-periodicity, build
the angulated structure, certify a few angles and run a short axiom suite.

    python scripts/angulation_demo.py [fixture-name] [multiplier] [samples]
"""

import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from nangulator.algebra import check_self_injective, compute_basis
from nangulator.angulation import (
    certify_angle,
    complete_morphism,
    functor_sequence,
    standard_angle,
)
from nangulator.axioms import verify_axioms
from nangulator.homology import Homology
from nangulator.modules import projective_module
from nangulator.periodicity import quasi_period_scan
from nangulator.quiver import load_algebra_file

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def main() -> None:
    name = sys.argv[1] if len(sys.argv) > 1 else "nakayama_2_2"
    desc = load_algebra_file(FIXTURES / f"{name}.json")
    algebra = compute_basis(desc)
    nakayama = check_self_injective(algebra)
    print(f"{name}: dim {algebra.dim}, Nakayama permutation "
          f"{list(nakayama.permutation)}")
    rep = quasi_period_scan(algebra)
    print(f"quasi-period {rep.quasi_period}, twist order {rep.twist_order}, "
          f"period {rep.period}")
    default_m = max(1, -(-3 // rep.quasi_period))  # smallest m with mn >= 3
    m = int(sys.argv[2]) if len(sys.argv) > 2 else default_m
    engine = Homology(algebra, nakayama)
    seq = functor_sequence(engine, rep, m)
    print(f"built the exact endofunctor sequence of length {seq.length} "
          f"(identity suspension: {seq.suspension.is_identity()})")
    for pos in range(len(algebra.idempotents)):
        p = projective_module(algebra, pos)
        t = standard_angle(seq, p)
        cert = certify_angle(seq, t)
        print(f"standard angle at projective {pos}: dims "
              f"{[o.dim for o in t.objects]}, certified {cert.verdict}")
    f1 = engine.hom_from_projective(projective_module(algebra, 0),
                                    projective_module(algebra, 0))[0]
    x = complete_morphism(seq, f1)
    print(f"completed a morphism to an angle with dims "
          f"{[o.dim for o in x.objects]}, certified "
          f"{certify_angle(seq, x).verdict}")
    samples = int(sys.argv[3]) if len(sys.argv) > 3 else 10
    t0 = time.time()
    report = verify_axioms(engine, seq, samples=samples, seed=7)
    print(f"axiom suite ({samples} samples, {time.time() - t0:.1f}s): "
          f"all pass = {report.all_pass}")
    for axiom in ("N1a", "N1b", "N1c", "N2", "N3", "N4"):
        print(f"  {axiom}: {report.passes[axiom]}/{samples}")


if __name__ == "__main__":
    main()
