"""Smoke test for the bornbox_py extension module.

Build it with `maturin develop -m crates/python/Cargo.toml`, or copy
target/<profile>/libbornbox_py.so next to this file as bornbox_py.so.
"""

import bornbox_py as bb

GHZ = """family prod
qubits 3
measure 3
gate H 0
gate CNOT 0 1
gate CNOT 1 2
"""


def main():
    c = bb.Circuit(GHZ)
    assert (c.family, c.measured) == ("prod", 3)
    assert abs(c.probability("11*") - 0.5) < 1e-12
    assert dict(c.distribution()).keys() == {"000", "111"}

    value, used = c.estimate("1*1", eps=0.05, delta=0.01, seed=1)
    assert used == bb.hoeffding(0.05, 0.01) == 4239
    assert abs(value - 0.5) < 0.05

    for method in ("sparse", "cdf", "chain"):
        draws = c.sample(50, method=method, seed=3)
        assert set(draws) <= {"000", "111"}, method
        assert draws == c.sample(50, method=method, seed=3)

    t = bb.CliffordTableau(2, [("H", [0]), ("CNOT", [0, 1])])
    assert t.apply("ZI") == "+XX"
    assert t.inverse().apply(t.apply("IZ")) == "+IZ"
    assert bb.CliffordTableau.random(3, seed=5) == bb.CliffordTableau.random(3, seed=5)

    p = bb.distinguish(c, bob="corrupted", l1=0.4, trials=20000, seed=2)
    assert abs(p - 0.6) < 0.02, p

    ok, checks = bb.selftest(seed=0)
    assert ok, [ch for ch in checks if not ch[1]]

    try:
        c.probability("2*")
    except ValueError:
        pass
    else:
        raise AssertionError("bad pattern accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
