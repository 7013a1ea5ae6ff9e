"""Smoke test for the permlat extension module.

Build and run from the repository root:

    cargo build --release -p permlat-py --features extension-module
    cp target/release/libpermlat.so python/permlat.so
    python3 python/smoke_test.py
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import permlat  # noqa: E402


def check(label, condition):
    print(f"{'ok  ' if condition else 'FAIL'} {label}")
    return bool(condition)


def main():
    results = []

    chain3 = permlat.Lattice.chain(3)
    results.append(check("3-chain is distributive", chain3.is_distributive()))
    results.append(check("M3 is not distributive", not permlat.Lattice.m3().is_distributive()))
    b2 = permlat.Lattice.boolean(2)
    results.append(check("meet of atoms is bottom", b2.meet("a", "b") == "0"))
    results.append(check("B2 needs 4 orders", b2.bounds() == (4, 4)))
    round_trip = permlat.Lattice.from_text(b2.to_text())
    results.append(check("lattice text round trip", round_trip.names == b2.names))

    s = permlat.Structure.generate(chain3, [("0", "e1"), ("e1", "1")], size=30, depth=2, seed=1)
    results.append(check("generated 30 points", len(s) == 30))
    again = permlat.Structure.generate(chain3, [("0", "e1"), ("e1", "1")], size=30, depth=2, seed=1)
    results.append(check("generation is deterministic", s.to_text() == again.to_text()))
    results.append(check("structure text round trip", permlat.Structure.from_text(s.to_text()).to_text() == s.to_text()))
    ext = s.extension_check(1)
    results.append(check("extension report has a ratio", 0.0 < ext["ratio"] <= 1.0))

    perm = s.encode(seed=0)
    results.append(check("3-chain structure uses 2 orders", perm.dimension == 2))
    decoded = perm.decode()
    results.append(check("decoding finds 3 relations", len(decoded["relations"]) == 3))
    results.append(check("decoded lattice is distributive", decoded["distributive"] is True))

    ident = permlat.Perm([[0, 1, 2, 3], [0, 1, 2, 3]])
    prof = ident.profile(2)
    results.append(check("identity pair profile", prof == {"01|01": 6, "10|10": 6}))

    try:
        permlat.Perm([[0, 0]])
        results.append(check("invalid permutation rejected", False))
    except permlat.PermlatError:
        results.append(check("invalid permutation rejected", True))

    bad = "elements: 0 e 1\ncover: 0 < e\ncover: e < 1\npoints: 0 1 2\nd: 0 1 e\nd: 0 2 1\nd: 1 2 e\n"
    results.append(check("triangle violation reported", len(permlat.space_violations(bad)) > 0))

    report = permlat.cameron(40, 0)
    results.append(check("two-order sweep keeps 5 distinct profiles",
                         report["kept"] == 5 and report["distinct_profiles"] == 5))

    failed = results.count(False)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
