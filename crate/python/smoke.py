"""Smoke test for the sumsq extension module.

Build and install into an active virtualenv first:

    pip install maturin
    maturin develop --release -m crates/python/Cargo.toml

then run `python python/smoke.py`.
"""

import sumsq


def main() -> None:
    assert sumsq.is_prime(2**127 - 1)
    assert sumsq.factor(2**64 + 1) == [(274177, 1), (67280421310721, 1)]
    assert sumsq.is_sum_of_two_squares(25) and not sumsq.is_sum_of_two_squares(21)

    targets = sumsq.generate("thm1", 3, 10**6)
    print(f"thm1 k=3 up to 1e6: {[t.target for t in targets]}")
    for t in targets:
        assert t.verify()["found"] is None
        witnesses = [t.witness(z) for z in t.window_z()]
        print(f"  {t.target}: {len(witnesses)} witnesses, primes {sorted({int(w['q']) for w in witnesses})}")
        assert t.local_report()["verdict"] == "no_obstruction_found"

    thm2 = sumsq.generate("thm2", 4, 10**4)
    assert [(t.cofactor_n, t.p) for t in thm2][:3] == [(1, 7), (1, 23), (1, 31)]

    control = sumsq.local_report(7, 4, sumsq.ResidueClass(0, 2))
    assert control["verdict"] == "obstructed"

    row = sumsq.density_report("thm1", 3, [10**12])[0]
    print(f"thm1 k=3 count to 1e12: {row['actual']} (predicted {row['predicted']:.1f})")
    print("ok")


if __name__ == "__main__":
    main()
