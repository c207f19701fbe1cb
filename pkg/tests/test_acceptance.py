"""One test per acceptance criterion; the summary prints PASS/FAIL for each."""

import json

import pytest

from qsuperplane.algebra import differential_algebra, family_table, normalize, relation_elements
from qsuperplane.calculus import derive_two_form_relations, verify_leibniz, verify_nilpotency
from qsuperplane.cli import run
from qsuperplane.coeffs import ONE, ZERO, p, q, r, s
from qsuperplane.consistency import verify_classical_limit, verify_confluence
from qsuperplane.forms import (derive_cross_relations, derive_form_form_relations, omega_costructures,
                               printed_cross_relations, printed_form_form_relations)
from qsuperplane.hopf import verify_axioms
from qsuperplane.rmatrix import (ConsistencyCoefficients, braid_check, build_C, default_convention,
                                 relations_from_matrix, solve_consistency, verify_braid, verify_coherence)

KEYS = ("A", "B", "F11", "F12", "F21", "F22")
FAMILIES = ("I", "II")


def failures(checks):
    return [f"{c.name}: {c.witness}" for c in checks if c.status == "fail"]


@pytest.mark.criterion(1, "consistency solver finds both families")
def test_criterion_01_solver():
    sols = solve_consistency()
    assert len(sols) == 2
    tables = [sol.table() for sol in sols]
    for fam in FAMILIES:
        want = family_table(fam)
        assert sum(all(t[k] == want[k] for k in KEYS) for t in tables) == 1
    assert {tuple(sorted(sol.renaming.items())) for sol in sols} == {
        (("A", p),), (("A", s), ("F12", q * r - 1))}
    for t in tables:
        assert t["B"] - ONE == ZERO
        assert t["F11"] + q * t["F22"] - q == ZERO
        assert t["F12"] + q * t["F21"] + ONE == ZERO
        assert t["F12"] * t["F22"] == ZERO
        assert (t["F11"] - q * t["A"]) * t["F22"] == ZERO


@pytest.mark.criterion(2, "two-form relations")
def test_criterion_02_twoforms():
    assert derive_two_form_relations("I") == {("dx", "dx"): {}, ("dx", "dth"): {("dth", "dx"): p * q}}
    assert derive_two_form_relations("II") == {("dx", "dx"): {}, ("dx", "dth"): {("dth", "dx"): r.inverse()}}


@pytest.mark.criterion(3, "d² = 0 and graded Leibniz on 200 elements per family")
def test_criterion_03_nilpotency_leibniz():
    for fam in FAMILIES:
        for rec in (verify_nilpotency(fam, 200, 3, max_len=8), verify_leibniz(fam, 200, 3, max_len=8)):
            assert rec.status == "pass", rec.witness


@pytest.mark.criterion(4, "rewrite soundness and confluence")
def test_criterion_04_rewrite_soundness():
    for fam in FAMILIES:
        alg = differential_algebra(fam)
        labels = [label for label, _ in relation_elements(alg)]
        assert len(labels) == 8
        for label, rel in relation_elements(alg):
            assert not normalize(rel), label
        rec = verify_confluence(alg, 500, 4, max_len=12)
        assert rec.status == "pass", rec.witness


@pytest.mark.criterion(5, "Hopf axioms on the superplane, S² = 1")
def test_criterion_05_hopf_superplane():
    checks = [c for c in verify_axioms("I", 200, 5) if "superplane" in c.name]
    assert any(c.name.startswith("S∘S") for c in checks)
    assert len(checks) >= 10
    assert failures(checks) == []


@pytest.mark.criterion(6, "Hopf axioms on Γ, φ identities, relation invariance")
def test_criterion_06_hopf_gamma():
    bad = {}
    for fam in FAMILIES:
        checks = verify_axioms(fam, 200, 6)
        assert any(c.name == "antipode convention" and c.status == "n/a" for c in checks)
        bad[fam] = failures(checks)
    assert bad == {"I": [], "II": []}


@pytest.mark.criterion(7, "Ω relations as printed and Ω co-structures")
def test_criterion_07_forms():
    mismatches = []
    for fam in FAMILIES:
        if derive_cross_relations(fam) != printed_cross_relations(fam):
            mismatches.append(f"cross relations of family {fam}")
        if derive_form_form_relations(fam) != printed_form_form_relations(fam):
            mismatches.append(f"form-form relations of family {fam}")
        _, checks = omega_costructures(fam, None, 60, 7)
        mismatches += [f"family {fam}: {f}" for f in failures(checks)]
    assert mismatches == []


@pytest.mark.criterion(8, "braid identities")
def test_criterion_08_braid():
    conv, signed = default_convention()
    C_I = build_C(ConsistencyCoefficients.family("I"))
    assert all(res.holds for res in braid_check(C_I, conv, signed))
    C_II = build_C(ConsistencyCoefficients.family("II"))
    generic = braid_check(C_II, conv, signed)
    assert not all(res.holds for res in generic)
    for res in generic:
        assert res.residual.substitute({"s": q * r}).is_zero()
    C_tied = build_C(ConsistencyCoefficients.family("II", {"s": q * r}))
    assert all(res.holds for res in braid_check(C_tied, conv, signed))
    info = [c for c in verify_braid("I") if c.status == "n/a"]
    assert any("(4,4)" in c.name or "4,4" in (c.witness or "") for c in info)
    assert any("convention" in c.name for c in info)
    assert failures(verify_braid("I")) == []


@pytest.mark.criterion(9, "matrix and rewrite rules coincide")
def test_criterion_09_coherence():
    for fam in FAMILIES:
        assert failures(verify_coherence(fam)) == []
        rel = relations_from_matrix(build_C(ConsistencyCoefficients.family(fam)))
        alg = differential_algebra(fam)
        for lhs, rhs in rel.items():
            assert dict(alg.rules[lhs]) == rhs


@pytest.mark.criterion(10, "classical limit q = p = 1")
def test_criterion_10_classical_limit():
    recs = verify_classical_limit(100, 10)
    assert [r.status for r in recs] == ["pass"] * len(recs)


@pytest.mark.criterion(11, "CLI determinism")
def test_criterion_11_determinism():
    argv = ["verify", "all", "--family", "I", "--fuel", "100", "--seed", "42", "--json"]
    first, code1, _ = run(argv)
    second, code2, _ = run(argv)
    assert code1 == code2 == 0
    assert first.to_json() == second.to_json()
    assert json.loads(first.to_json())["seed"] == 42
