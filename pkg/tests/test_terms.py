"""Term parsing, formatting and vectorized evaluation."""

import itertools

import numpy as np
import pytest

from commwb.terms import (TermError, eval_term, format_term, parse_identity,
                          parse_term, term_vars)
from commwb.varieties import chain_hslat, symmetric_group


def test_parse_format_round_trip():
    s3 = symmetric_group(3)
    sig = s3.signature
    for text in ("x0", "e", "e()", "inv(x0)", "mul(mul(x0, x1), inv(x0))",
                 "mul(e, mul(x1, x0))"):
        term = parse_term(text, sig)
        again = parse_term(format_term(term), sig)
        assert again == term


def test_term_vars_first_appearance_order():
    sig = symmetric_group(3).signature
    term = parse_term("mul(x2, mul(x0, mul(x2, x1)))", sig)
    assert term_vars(term) == ("x2", "x0", "x1")


@pytest.mark.parametrize("bad", [
    "mul(x0", "mul(x0,)", "unknownop(x0)", "mul(x0, x1, x2)", "",
    "inv()", "x0 x1",
])
def test_parse_rejects_malformed(bad):
    sig = symmetric_group(3).signature
    with pytest.raises(TermError):
        parse_term(bad, sig)


def test_scalar_eval_matches_table_composition():
    s3 = symmetric_group(3)
    mul, inv = s3.tables["mul"], s3.tables["inv"]
    term = parse_term("mul(mul(x0, inv(x1)), x2)", s3.signature)
    for a, b, c in itertools.product(range(6), repeat=3):
        want = int(mul[mul[a, inv[b]], c])
        got = int(eval_term(s3, term, {"x0": a, "x1": b, "x2": c}))
        assert got == want


def test_vectorized_eval_matches_pointwise():
    alg = chain_hslat(3)
    term = parse_term("imp(meet(x, y), imp(y, x))", alg.signature)
    grids = np.indices((3, 3))
    env = {"x": grids[0], "y": grids[1]}
    vec = np.broadcast_to(eval_term(alg, term, env), (3, 3))
    for a, b in itertools.product(range(3), repeat=2):
        assert vec[a, b] == int(eval_term(alg, term, {"x": a, "y": b}))


def test_nullary_eval_and_unbound_variable():
    s3 = symmetric_group(3)
    assert int(eval_term(s3, parse_term("e", s3.signature), {})) == 0
    with pytest.raises(TermError):
        eval_term(s3, parse_term("x0", s3.signature), {})


def test_parse_identity_splits_once():
    sig = symmetric_group(3).signature
    lhs, rhs = parse_identity("mul(x0, e) = x0", sig)
    assert format_term(lhs) == "mul(x0, e)"
    assert format_term(rhs) == "x0"
    with pytest.raises(TermError):
        parse_identity("x0 = x1 = x2", sig)
    with pytest.raises(TermError):
        parse_identity("mul(x0, x1)", sig)
