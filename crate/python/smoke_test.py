"""Smoke test for the carathe_py extension module."""

import json

import carathe_py as cp


def main():
    square = cp.PointConfig.from_json(
        '{"dim":2,"points":[["1","1"],["-1","1"],["-1","-1"],["1","-1"]]}'
    )
    assert square.dim == 2 and len(square) == 4
    assert square.in_interior()
    assert not square.in_conv([0, 1])
    assert square.in_relint([0, 2])

    za = square.zero_avoiding()
    assert cp.betti(za) == [0, 0, 1], cp.betti(za)
    dual = json.loads(square.zero_avoiding_dual())
    assert sorted(map(sorted, dual["facets"])) == [[0, 2], [1, 3]]
    assert cp.betti(cp.alexander_dual(za)) == [0, 1]

    rows = json.loads(square.lemma_suite([0, 2]))
    assert rows and not any(r["hypothesis_held"] and not r["conclusion_held"] for r in rows)

    inst = json.dumps({
        "config": {"dim": 1, "points": [["1"], ["-1"], ["2"], ["-2"]]},
        "variant": {"tag": "CC1", "classes": [[0, 1], [2, 3]]},
    })
    assert json.loads(cp.check_hypotheses(inst))["passed"]
    cert = cp.solve(inst)
    assert len(json.loads(cert)["face"]) == 2
    assert cp.verify_certificate(inst, cert)
    assert json.loads(cp.covering_check(inst))["transversals_convert"]

    bad = json.dumps({
        "config": {"dim": 1, "points": [["1"], ["2"]]},
        "variant": {"tag": "CC1", "classes": [[0], [1]]},
    })
    try:
        cp.solve(bad)
        raise AssertionError("expected NoSelectionError")
    except cp.NoSelectionError:
        pass

    line = cp.PointConfig.from_json('{"dim":1,"points":[["1"],["2"],["3"]]}')
    sol = json.loads(cp.solve_tverberg(line, 2))
    assert sol["labeling"] == [1, 2, 1] and sol["point"] == ["2"]
    sol = json.loads(cp.solve_tverberg(line, 2, edges=[(1, 1), (2, 1), (2, 2)]))
    assert sol["labeling"] == [2, 1, 2]

    try:
        cp.PointConfig.from_json('{"dim":1,"points":[["0"]]}')
        raise AssertionError("expected ValueError")
    except ValueError:
        pass

    print("carathe_py smoke test passed")


if __name__ == "__main__":
    main()
