"""Smoke test for the pykoszulate extension.

Build and run from the repository root:

    cargo build --release -p pykoszulate
    cp target/release/libpykoszulate.so python/pykoszulate.so
    python3 python/smoke_test.py
"""
import json
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pykoszulate as kz


def main():
    w5 = kz.Subspace.weyman(5)
    assert (w5.n, w5.dim, w5.field) == (5, 7, "Q")
    assert w5.hilbert(3) == [3, 5, 0, 0]
    assert w5.wq(1, route="presentation") == 5
    assert w5.resonance() == {"trivial": True, "q": 2, "dim": 0}
    assert w5.same_span(kz.Subspace.gaussian_rnc(5))

    c4 = kz.Subspace.codim_one(4)
    assert c4.hilbert(3) == [1, 2, 3, 4]
    assert not c4.resonance_trivial()
    assert c4.fiber_dimension(["1", "0", "0", "0"]) == 2
    assert c4.isotropy([["1", "0", "0", "0"], ["0", "1", "0", "0"]]) == (True, True)

    quad = kz.Subspace.split_p1(1, 1, prime=3)
    assert quad.points() == 16

    again = kz.Subspace.from_json(w5.to_json())
    assert again.basis() == w5.basis()
    assert json.loads(w5.to_json())["pairs_order"] == "lex"

    assert kz.Subspace.random(5, 7, seed=1, prime=101).basis() == kz.Subspace.random(5, 7, seed=1, prime=101).basis()
    assert kz.Subspace.resonant_perturbation(5, seed=2).wq(2) >= 3

    assert kz.koszul_divisor_degree(6) == 56
    assert kz.chow_degree(6) == 14
    assert kz.degree_identity(60)
    assert kz.wq_bound(5, 1) == 5
    assert kz.resonance_class(4) == {"c1F": 2, "c1E": -5}
    assert kz.canonical_pencil_class(4) == {"lambda": -5, "psi_sum": 6}
    assert kz.voisin_class(6) == {"hhat": Fraction(429, 2)}
    assert kz.mukai_pairing((3, 1, 2), (3, 1, 2), 6) == -2
    assert kz.sym_mukai(2, 2, 4, 2, spherical=True) == (3, 3, 6)
    assert kz.h1_sym_dim(3, 2) == 3

    for bad in (lambda: kz.Subspace.weyman(4, prime=9), lambda: kz.chow_degree(2)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    try:
        kz.Subspace.weyman(7, prime=0).points()
    except RuntimeError:
        pass
    else:
        raise AssertionError("expected RuntimeError for the enumeration budget")

    results = kz.verify("fast")
    assert sorted(results) == list(range(1, 14))
    assert all(passed for passed, _ in results.values()), results
    print("pykoszulate smoke test passed")


if __name__ == "__main__":
    main()
