#!/usr/bin/env python3
"""Timing sweep over the heavier symbolic checks.

Useful when touching the Groebner kernel: prints wall times for the
checks that dominate suite runtime so regressions are visible at a
glance.
"""

import time

from ribetkit.genmat import Word, det_congruence_check, trace_congruence_check
from ribetkit.groebner import buchberger
from ribetkit.brcomplex import br_complexes, build_cd_morphism, check_d2, generic_2xn
from ribetkit.ribet.formal import build_ideals, check_e_tau_invariance, check_example_r2
from ribetkit.ribet.shapes import corpus, shape_one_place_type4, shape_sigma_type3


def timed(label, thunk):
    start = time.monotonic()
    result = thunk()
    print(f"{label:55s} {time.monotonic() - start:8.3f}s  -> {result}")


def main():
    timed("example-r2 (positive)", check_example_r2)
    timed("example-r2 (negative control)", lambda: check_example_r2(omit_relation=7))
    timed("trace X1.X2.X3 over r=3", lambda: trace_congruence_check(Word.parse("X1.X2.X3"), 3))
    timed("det pair cap 2", lambda: det_congruence_check(2, [1, 2], word_cap=2))
    timed("tau-invariance one-place shape", lambda: check_e_tau_invariance(shape_one_place_type4()))
    timed(
        "tau-invariance negative control",
        lambda: check_e_tau_invariance(shape_one_place_type4(), drop_pair_generator=True),
    )
    timed("GB of the full relation ideal (small shape)", lambda: len(buchberger(build_ideals(shape_sigma_type3()).J).basis))
    timed("BR complexes 2x5 full length + d2", lambda: all(
        check_d2(c) for c in (lambda b: (b.Rf, b.Rdetf))(br_complexes(generic_2xn(5)))
    ))
    for sh in corpus():
        timed(f"cd-morphism cap 2 [{sh.name}]", lambda s=sh: build_cd_morphism(s, cap=2).all_pass())


if __name__ == "__main__":
    main()
