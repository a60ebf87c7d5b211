import pytest

import prismcheck


def test_q_analogues():
    assert prismcheck.q_int(3) == [1, 1, 1]
    assert prismcheck.q_binomial(4, 2) == [1, 1, 2, 1, 1]
    assert sum(prismcheck.q_factorial(5)) == 120


def test_frobenius_factorial():
    c = prismcheck.frobenius_factorial(2, 2)
    assert c["cofactor"] == [1, 1, 1]
    assert c["value_at_one"] == 3
    assert c["unit"]


def test_witt_vectors():
    assert prismcheck.witt_mul(2, [0, 1], [0, 1]) == [0, 2]
    # Ghost w_1 = x0^p + p x1 is additive.
    s = prismcheck.witt_add(3, [1, 2], [4, 5])
    assert s[0] ** 3 + 3 * s[1] == (1 + 3 * 2) + (4 ** 3 + 3 * 5)


def test_tate_twist():
    t = prismcheck.tate_twist(2, 2, 0)
    assert t["length"] == 2
    assert t["h0"] == {"free": 1, "torsion": []}


def test_nygaard():
    r = prismcheck.nygaard(2, K=1, degree=6, n=1)
    assert r["ok"]
    assert sorted(tuple(d) for d in r["image_degrees"]) == [(0,), (2,), (4,), (6,)]


def test_cli_round_trip():
    code, report, _ = prismcheck.run("verify", "--suite", "qanalog", "--p", "3", "--prec", "3")
    assert code == 0
    assert report["summary"]["status"] == "pass"
    code, report, err = prismcheck.run("verify", "--bogus")
    assert code == 2
    assert report is None and err


def test_errors_raise():
    with pytest.raises(Exception):
        prismcheck.witt_add(2, [1], [1, 2])
