import pytest

from qsuperplane.algebra import DX, THETA, X, XINV, differential_algebra, normalize
from qsuperplane.consistency import (verify_associativity, verify_classical_limit, verify_confluence,
                                     verify_consistency, verify_grading, verify_ideal_membership,
                                     verify_inverse_consistency, verify_tables, verify_termination)


@pytest.mark.parametrize("family", ["I", "II"])
def test_rewrite_system_is_sound(family):
    alg = differential_algebra(family)
    for rec in (verify_ideal_membership(alg), verify_termination(alg, 200, 1), verify_confluence(alg, 500, 1),
                verify_associativity(alg, 50, 1), verify_grading(alg, 50, 1), verify_inverse_consistency(alg),
                verify_tables(family)):
        assert rec.status == "pass", rec.witness


def test_confluence_covers_long_words():
    rec = verify_confluence(differential_algebra("I"), 500, 9, max_len=12)
    assert rec.status == "pass" and "500" in rec.name


def test_classical_limit():
    recs = verify_classical_limit(100, 0)
    assert len(recs) == 4
    assert all(r.status == "pass" for r in recs)
    alg = differential_algebra("I", {"q": 1, "p": 1})
    assert normalize(alg.word(X, THETA)) == normalize(alg.word(THETA, X))
    assert not normalize(alg.word(THETA, THETA))
    assert normalize(alg.word(X, DX)) == normalize(alg.word(DX, X))


def test_deformed_algebra_is_not_classical():
    alg = differential_algebra("I")
    assert normalize(alg.word(X, THETA)) != normalize(alg.word(THETA, X))


def test_tables_and_inverse_at_a_numeric_point():
    rec = verify_tables("I")
    assert rec.status == "pass"
    alg = differential_algebra("II", {"q": 2, "r": 3, "s": 5})
    assert verify_inverse_consistency(alg).status == "pass"
    assert normalize(alg.word(XINV, X)) == alg.one()


def test_suite_runs_whole():
    recs = verify_consistency("I", fuel=100, seed=4)
    assert not [r for r in recs if r.status == "fail"]
    assert any(r.name.startswith("classical limit") for r in recs)
    recs = verify_consistency("II", fuel=100, seed=4)
    assert not [r for r in recs if r.status == "fail"]
