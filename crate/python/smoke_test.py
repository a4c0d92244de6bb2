"""Smoke test for the Python bindings. Build first with
`pip install --no-build-isolation -e crates/py`."""

import cohomconn as cc


def main():
    # vertices are 0-based here
    g = cc.Complex(5, 2, [[0, 1, 2], [0, 3, 4]])
    assert g.f_vector() == [5, 6, 2], g.f_vector()
    assert g.betti(1) == 0
    assert g.is_j_cohom_connected(1)
    assert len(cc.find_mj_minus(g, 1)) > 0
    assert cc.find_mj(g, 1) == []

    g1 = g.add_simplex([1, 2, 3])
    assert g1.betti(1) == 1
    assert not g1.is_j_cohom_connected(1)
    assert len(cc.find_mj(g1, 1)) > 0

    g2 = g1.add_simplex([0, 2, 3])
    assert g2.betti(1) == 0
    assert cc.find_mj(g2, 1) == []

    r = cc.scan_process(12, 2, 1, seed=7, trace=True)
    assert len(r["trace"]) == 220
    assert "p_mj" in r["hitting"]

    t = cc.thresholds_for(100, 2, 1)
    assert 0 < t["pj"] < 1

    h = cc.sample_gp(20, 2, 0.3, seed=1)
    assert h.n == 20 and h.k == 2
    assert h.f_vector()[2] > 0

    w, b, holds = cc.meshulam_wallach_check(5, 1, [[0, 1]])
    assert holds, (w, b)

    assert cc.verify()["passed"]
    print("ok")


if __name__ == "__main__":
    main()
