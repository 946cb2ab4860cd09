from __future__ import annotations

import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_invertible
from oracles import stabilizer_dim_float
from tensym.bform import (
    InfeasibleProfile,
    KTooSmall,
    SingularForm,
    canonical_form,
    case_label,
    classify,
    expected_dims,
    matrix_from_json_obj,
    matrix_to_json_obj,
    profile,
    random_with_profile,
    split,
    stabilizer,
    stabilizer_dim,
)
from tensym.exact import Matrix, Span


def J(k: int) -> Matrix:
    data = {}
    for i in range(0, k, 2):
        data[(i, i + 1)] = 1
        data[(i + 1, i)] = -1
    return Matrix(k, k, data)


def test_split_reconstructs():
    B = random_with_profile(6, 2, 2, 2, 1, seed=3)
    Q, L = split(B)
    assert Q + L == B
    assert Q.transpose() == Q and L.transpose() == -L


def test_profile_examples():
    p = profile(Matrix.identity(12))
    assert (p.e, p.l, p.f) == (12, 0, 0) and case_label(12, p.e, p.l, p.f) == "A2"
    p = profile(J(12))
    assert (p.e, p.l, p.f) == (0, 0, 12)
    p = profile(Matrix.block_diag(Matrix.identity(1), J(12)))
    assert (p.e, p.l, p.f, p.q_restricted) == (1, 0, 12, 1)


def test_singular_rejected():
    with pytest.raises(SingularForm):
        profile(Matrix.from_rows([[1, 1], [1, 1]]))
    with pytest.raises(SingularForm):
        stabilizer(Matrix.zeros(2, 3))


def test_stabilizer_examples():
    dim, basis = stabilizer(Matrix.identity(2))
    assert dim == 1
    assert stabilizer_dim(J(12)) == 78
    assert stabilizer_dim(Matrix.block_diag(Matrix.identity(1), J(12))) == 78


def test_stabilizer_basis_solves_and_closes():
    B = random_with_profile(7, 1, 1, 5, 1, seed=2)
    dim, basis = stabilizer(B)
    assert dim == stabilizer_dim_float(B)
    for X in basis:
        assert (X @ B + B @ X.transpose()).is_zero()
    span = Span([X.entries for X in basis], 49)
    for i, X in enumerate(basis):
        for Y in basis[i + 1 :]:
            assert (X @ Y - Y @ X).entries in span


@pytest.mark.parametrize(
    "k,e,l,f,q", [(12, 0, 1, 11, 0), (12, 0, 2, 10, 0), (12, 2, 0, 10, 2), (13, 1, 1, 11, 1), (12, 2, 2, 8, 1)]
)
def test_stabilizer_dim_against_float_oracle(k, e, l, f, q):
    B = random_with_profile(k, e, l, f, q, seed=1)
    assert stabilizer_dim(B) == stabilizer_dim_float(B)


def test_classify_labels_and_expected_sets():
    assert expected_dims("B1", 12) == {57, 56}
    assert expected_dims("B3", 12) == {55, 56}
    assert expected_dims("A3", 12) == {67}
    assert expected_dims("Other", 12) == frozenset()
    p = classify(random_with_profile(12, 2, 0, 10, 2, seed=0))
    assert p.case_label == "B3" and p.stab_dim == 56 and p.match


def test_a3_value_is_binom_k_2():
    # sp(Lambda) acts transitively on the nonzero squares v^2, an orbit of dimension k
    for k in (12, 14):
        p = classify(random_with_profile(k, 0, 1, k - 1, 0, seed=k))
        assert p.case_label == "A3"
        assert p.stab_dim == comb(k, 2)


def test_b1_both_subcases_equal():
    dims = {sub: classify(random_with_profile(12, 0, 2, 10, 0, subcase=sub, seed=4)).stab_dim
            for sub in ("default", "isotropic")}
    assert dims == {"default": 56, "isotropic": 56}


def test_b2_isotropic_e_is_infeasible():
    # Q|_E = 0 with f odd forces B(e, .) and B(w, .) to be proportional for some w in ker Q
    with pytest.raises(InfeasibleProfile):
        canonical_form(13, 1, 1, 11, 0)
    assert classify(random_with_profile(13, 1, 1, 11, 1, seed=0)).stab_dim == comb(13, 2) - 13 + 1


def test_small_k_warns_and_is_advisory():
    with pytest.warns(KTooSmall):
        p = classify(J(4))
    assert p.advisory and p.stab_dim == comb(5, 2)


@pytest.mark.parametrize("k,e,f", [(6, 2, 4), (7, 3, 4), (8, 4, 4), (5, 1, 4)])
def test_block_diagonal_formula(k, e, f):
    B = Matrix.block_diag(Matrix.identity(e), J(f))
    assert stabilizer_dim(B) == comb(e, 2) + comb(f + 1, 2)


@given(st.integers(0, 10**6))
def test_full_rank_forms_have_even_skew_rank(seed):
    rng = random.Random(seed)
    k = rng.randint(2, 6)
    B = Matrix.from_rows([[rng.randint(-2, 2) for _ in range(k)] for _ in range(k)])
    try:
        p = profile(B)
    except SingularForm:
        return
    assert (p.l + p.f) % 2 == 0 and p.e + p.l + p.f == k
    assert p.q_restricted <= p.e


@pytest.mark.parametrize("k,e,l,f,q", [(6, 0, 2, 4, 0), (7, 1, 1, 5, 1), (6, 2, 0, 4, 2), (9, 3, 2, 4, 2)])
def test_congruence_invariance(k, e, l, f, q):
    B = canonical_form(k, e, l, f, q)
    base = profile(B)
    rng = random.Random(k * 100 + e)
    for _ in range(10):
        S = random_invertible(rng, k)
        p = profile(S @ B @ S.transpose())
        assert (p.e, p.l, p.f, p.q_restricted, p.stab_dim) == (base.e, base.l, base.f, base.q_restricted, base.stab_dim)


def test_generator_reproduces_profile_and_seed():
    for args in [(12, 0, 0, 12, 0), (13, 1, 0, 12, 1), (9, 3, 2, 4, 2)]:
        p = profile(random_with_profile(*args, seed=5))
        assert (p.k, p.e, p.l, p.f, p.q_restricted) == args
    assert random_with_profile(8, 2, 2, 4, 1, seed=1) == random_with_profile(8, 2, 2, 4, 1, seed=1)


@pytest.mark.parametrize("args", [(5, 0, 0, 5, 0), (6, 3, 0, 3, 3), (6, 1, 1, 4, 2), (6, 3, 1, 2, 1)])
def test_generator_rejects_infeasible(args):
    with pytest.raises(InfeasibleProfile):
        random_with_profile(*args)


def test_other_profiles_below_headline_bound():
    rng = random.Random(12)
    k = 12
    special = {(0, 0, 12), (12, 0, 0), (0, 1, 11), (1, 0, 11), (0, 2, 10), (1, 1, 10), (2, 0, 10)}
    checked = 0
    while checked < 6:
        e = rng.randint(0, k)
        l = rng.randint(0, k - e)
        f = k - e - l
        if (e, l, f) in special:
            continue
        try:
            B = random_with_profile(k, e, l, f, rng.randint(max(0, e - l), e), seed=checked)
        except InfeasibleProfile:
            continue
        p = classify(B)
        assert p.case_label == "Other" and p.match
        assert p.stab_dim <= comb(k, 2) - k - 1
        checked += 1


def test_json_roundtrip():
    B = random_with_profile(4, 0, 2, 2, 0, seed=1)
    obj = matrix_to_json_obj(B)
    assert obj["k"] == 4 and all(isinstance(x, str) for r in obj["rows"] for x in r)
    assert matrix_from_json_obj(obj) == B
    with pytest.raises(ValueError):
        matrix_from_json_obj({"k": 2, "rows": [["1"]]})
