import json
import os

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from numrad import catalog as cat
from numrad import linalg as la
from numrad.catalog import Kind, Role
from numrad.harness import T_GRID
from tests.conftest import ginibre
from tests.strategies import complex_matrices, vectors

# Displayed relations that fail on concrete input (see test_displayed_forms_fail_on_witness).
KNOWN_FALSE = {"T2.5-t", "T2.5-min", "R-I", "R-II"}

J2 = np.array([[0, 1], [0, 0]], dtype=complex)
J2T = J2.T.copy()
I2 = np.eye(2, dtype=complex)
O2 = np.zeros((2, 2), dtype=complex)


def test_registry_size_and_ids():
    ids = [e.id for e in cat.list_entries()]
    assert len(ids) == 35
    assert len(set(ids)) == 35
    assert "L1.1a-eq10" in ids and "T2.8-aluthge" in ids


def test_registry_json_fields():
    data = cat.registry_json()
    json.dumps(data)
    for row in data:
        assert set(row) >= {"id", "anchor", "arity", "kind"}
        assert row["kind"] in {"INEQUALITY", "IDENTITY", "ORDERING"}
        assert row["anchor"]["quote"]


def test_kinds():
    kinds = {e.id: e.kind for e in cat.list_entries()}
    assert {k for k, v in kinds.items() if v is Kind.IDENTITY} == {
        "EQ-supR", "L-block", "C-nilp", "E4-identity", "R-zero",
    }
    assert {k for k, v in kinds.items() if v is Kind.ORDERING} == {"EQ-yam2", "R-chain1", "R-chain2"}


@pytest.mark.skipif("NUMRAD_ANCHOR_SOURCE" not in os.environ, reason="anchor source text not provided")
def test_anchor_quotes_are_verbatim():
    with open(os.environ["NUMRAD_ANCHOR_SOURCE"], encoding="utf-8") as fh:
        text = fh.read()
    missing = [e.id for e in cat.list_entries() if e.quote not in text]
    assert not missing


def test_identity_operands_tight_for_product_bound():
    r = cat.evaluate("L1.1a-eq10", [I2, I2])
    assert r.lhs == pytest.approx(1.0, abs=1e-9)
    assert r.rhs == pytest.approx(1.0, abs=1e-12)
    assert abs(r.margin) <= 1e-8 and r.passed


def test_jordan_block_tight_for_eq19():
    r = cat.evaluate("C-eq19", [J2])
    assert r.lhs == 0 and r.rhs == 0 and r.margin == 0 and r.passed


def test_e4_on_jordan_block():
    r = cat.evaluate("E4-identity", [J2, 0.3])
    assert r.lhs == pytest.approx(2.0) and r.rhs == pytest.approx(2.0)
    assert r.passed


def test_chain_on_unitary(rng):
    q, _ = np.linalg.qr(ginibre(rng, 3))
    links = cat.evaluate_chain("EQ-yam2", [q])
    assert len(links) == 3
    assert all(r.passed for r in links)
    assert np.allclose(cat.evaluate("EQ-yam2", [q]).values, 1.0, atol=1e-8)


def test_chain_on_jordan_block():
    r = cat.evaluate("R-chain1", [J2, 0.5])
    assert r.values[-1] == pytest.approx(0.5, abs=1e-12)
    assert r.values[0] == pytest.approx(0.5, abs=1e-9)
    assert r.passed


def test_random_chain_margins(rng):
    for _ in range(5):
        for r in cat.evaluate_chain("R-chain1", [ginibre(rng, 4), 0.5]):
            assert r.scaled_margin >= -1e-8


def test_min_form_reports_both_branches(rng):
    a, b = ginibre(rng, 3), ginibre(rng, 3)
    r = cat.evaluate("C2-prod", [a, b])
    assert set(r.branches) == {"alpha0", "beta0"}
    assert r.rhs == pytest.approx(min(r.values[1:]))
    assert len(cat.evaluate_chain("C2-prod", [a, b])) == 2


def test_to_dict_is_json(rng):
    r = cat.evaluate("T2.1p", [ginibre(rng, 2), ginibre(rng, 2), -1])
    assert json.loads(json.dumps(r.to_dict()))["entry"] == "T2.1p"


@pytest.mark.parametrize(
    "entry_id, operands",
    [
        ("L1.1a-eq10", [I2]),
        ("L1.1a-eq10", [I2, np.eye(3)]),
        ("L1.1a-eq10", [I2, np.ones((2, 3))]),
        ("L-pos-sum", [I2, J2]),
        ("L-buzano", [np.ones(2), np.ones(2), np.ones(2)]),
        ("T2.1p", [I2, I2, 0.5]),
        ("L-kato", [I2, np.ones(3), np.ones(2), 0.5]),
        ("EQ-equiv-lo", [[[np.nan]]]),
    ],
)
def test_signature_mismatch(entry_id, operands):
    with pytest.raises(cat.SignatureMismatch):
        cat.evaluate(entry_id, operands)


@pytest.mark.parametrize(
    "entry_id, operands",
    [
        ("T2.7-bal", [O2, I2]),
        ("T2.7-bal", [I2, O2]),
        ("E4-identity", [O2, 0.5]),
        ("T2.8-aluthge", [O2, 0.5]),
    ],
)
def test_zero_norm_operand(entry_id, operands):
    with pytest.raises(cat.ZeroNormOperand):
        cat.evaluate(entry_id, operands)


def test_hypothesis_not_met(rng):
    with pytest.raises(cat.HypothesisNotMet):
        cat.evaluate("C-nilp", [ginibre(rng, 2)])
    with pytest.raises(cat.HypothesisNotMet):
        cat.evaluate("R-zero", [I2, 0.5])


def test_t_out_of_range_and_unknown_entry():
    with pytest.raises(ValueError):
        cat.evaluate("T2.8-aluthge", [J2, 1.2])
    with pytest.raises(cat.UnknownEntry):
        cat.evaluate("NOPE", [])
    with pytest.raises(ValueError):
        cat.evaluate("EQ-equiv-lo", [J2], tol=0)


# The displayed forms of the six-operator bound and its two special cases
# pair a |B*|-weighted A*...A factor inside w with A...A* in the norm factor.
# With A = J2, C = J2^T and B = E = I the left side is 1 and both displayed
# right-hand sides are 1/2; pairing A...A* in both places gives exactly 1.
def _witness(t=0.5):
    return [J2, I2, J2T, O2, I2, O2, t]


@pytest.mark.parametrize("t", [0.05, 0.5, 0.95])
def test_displayed_forms_fail_on_witness(t):
    r = cat.evaluate("T2.5-t", _witness(t))
    assert r.lhs == pytest.approx(1.0) and r.rhs == pytest.approx(0.5)
    assert not r.passed
    assert not cat.evaluate("T2.5-min", _witness()[:-1]).passed
    assert not cat.evaluate("R-I", [J2, J2T, O2, O2]).passed
    rem2 = cat.evaluate_chain("R-II", [J2, I2, J2T])
    assert [r.passed for r in rem2] == [False, False]


def _corrected_t25(a, b, c, d, e, f, t):
    ctx = cat._Ctx(1e-8)
    p, q_norm, _ = cat._t25_factors(a, b, c, d, e, f, t)
    lhs = ctx.w(a @ b @ c + d @ e @ f).value ** 2
    rhs = 0.5 * ctx.w(q_norm @ p).value + 0.5 * la.spectral_norm(p) * la.spectral_norm(q_norm)
    return lhs, rhs


def test_corrected_pairing_holds_on_witness_and_random(rng):
    lhs, rhs = _corrected_t25(*_witness())
    assert lhs == pytest.approx(1.0) and rhs == pytest.approx(1.0)
    for _ in range(40):
        n = int(rng.integers(2, 5))
        ops = [ginibre(rng, n) for _ in range(6)]
        lhs, rhs = _corrected_t25(*ops, float(rng.choice(T_GRID)))
        assert lhs <= rhs + 1e-8 * max(1.0, rhs)


# ---------------------------------------------------------------------------
# property tests: every relation not known to be false holds on arbitrary input

_SETTINGS = settings(max_examples=25, deadline=None)


@st.composite
def operand_tuples(draw, entry):
    n = draw(st.integers(1, 3)) if len(entry.arity) <= 4 else draw(st.integers(1, 2))
    ops = []
    for role in entry.arity:
        if role is Role.MATRIX:
            ops.append(draw(complex_matrices(dim=n)))
        elif role is Role.PSD:
            x = draw(complex_matrices(dim=n))
            ops.append((x @ x.conj().T + (x @ x.conj().T).conj().T) / 2)
        elif role is Role.VECTOR:
            ops.append(draw(vectors(n)))
        elif role is Role.UNIT:
            v = draw(vectors(n))
            assume(np.linalg.norm(v) > 0)
            ops.append(v / np.linalg.norm(v))
        elif role is Role.T:
            ops.append(draw(st.sampled_from((0.0, 1.0) + T_GRID)))
        else:
            ops.append(draw(st.sampled_from((1.0, -1.0))))
    return ops


_CHECKED = [e for e in cat.list_entries() if e.id not in KNOWN_FALSE and e.hypothesis is None]


@pytest.mark.parametrize("entry", _CHECKED, ids=lambda e: e.id)
def test_relation_holds_on_generated_operands(entry):
    @_SETTINGS
    @given(operand_tuples(entry))
    def check(ops):
        try:
            r = cat.evaluate(entry.id, ops)
        except cat.ZeroNormOperand:
            assume(False)
        assert r.passed, r

    check()


@_SETTINGS
@given(complex_matrices(dim=2), st.sampled_from(T_GRID))
def test_hypothesis_entries_on_square_zero_input(a, t):
    a = np.triu(a, 1)
    assume(la.spectral_norm(a) > 0)
    assert cat.evaluate("C-nilp", [a]).passed
    assert cat.evaluate("R-zero", [a, t]).passed
