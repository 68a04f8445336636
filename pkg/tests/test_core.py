import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flowercode.core import (FRCode, build_code, code_from_matrix, incidence_matrix, matrix_from_csv, matrix_to_csv,
                             profiles, validate, validate_matrix, wrap)
from flowercode.errors import ParameterError, RangeError
from flowercode.flower import single_ring
from flowercode.sequences import decode_dropping

# rows follow the node lists; the printed matrix has [0, 1, 0, 1, 0] in row 3,
# which contradicts U3 = {P2, P3} and the stated replication counts
TABLE1_MATRIX = [
    [1, 0, 0, 0, 1],
    [1, 1, 0, 0, 0],
    [0, 1, 1, 0, 0],
    [1, 0, 1, 1, 0],
    [0, 1, 0, 1, 1],
    [0, 0, 1, 0, 1],
    [1, 0, 0, 1, 0],
]


@st.composite
def codes(draw, max_n=8, max_theta=8):
    n = draw(st.integers(1, max_n))
    theta = draw(st.integers(1, max_theta))
    nodes = draw(st.lists(st.lists(st.integers(1, theta), max_size=6), min_size=n, max_size=n))
    return build_code(nodes, theta, strict=False)


def test_wrap_maps_zero_residue_to_modulus():
    assert [wrap(x, 4) for x in range(0, 9)] == [4, 1, 2, 3, 4, 1, 2, 3, 4]


def test_table1_profiles(table1):
    prof = profiles(table1)
    assert (table1.n, table1.theta, table1.alpha, table1.rho) == (7, 5, 3, 4)
    assert prof.rho_vec == (4, 3, 3, 3, 3)
    assert prof.alpha_vec == (2, 2, 2, 3, 3, 2, 2)


def test_minimal_and_symmetric_codes():
    c = build_code([[1]], 1)
    assert (c.n, c.alpha, c.rho) == (1, 1, 1)
    c = build_code([[1, 2], [2, 1]], 2)
    assert profiles(c).rho_vec == (2, 2) and profiles(c).alpha_vec == (2, 2)
    c = build_code([[1], [1]], 1)
    assert (c.rho, c.alpha) == (2, 1)


def test_table3_alpha_vec_from_cells(table3_plan):
    # cells of the printed table give U2 four packets; its capacity column says 3
    code, _ = single_ring(table3_plan)
    assert profiles(code).alpha_vec == (3, 4, 2, 2, 3, 3, 3, 1)


def test_insertion_order_kept():
    c = build_code([[3, 1, 2]], 3)
    assert c.nodes == ((3, 1, 2),)


def test_build_errors():
    with pytest.raises(RangeError):
        build_code([[1, 6]], 5)
    with pytest.raises(RangeError):
        build_code([[0]], 5)
    with pytest.raises(ParameterError):
        build_code([], 3)
    with pytest.raises(ParameterError, match="rho_3 = 0"):
        build_code([[1, 2]], 3, strict=True)
    assert not build_code([[1, 2]], 3, strict=False).is_strict


def test_incidence_matrix_table1(table1):
    m = incidence_matrix(table1)
    assert m.tolist() == TABLE1_MATRIX
    assert m.sum(axis=1).tolist() == list(profiles(table1).alpha_vec)
    assert m.sum(axis=0).tolist() == list(profiles(table1).rho_vec)


def test_incidence_matrix_non_binary():
    c = build_code([[1, 1]], 1)
    assert incidence_matrix(c).tolist() == [[2]]
    assert not c.binary


def test_incidence_matrix_figure1(fig1_dropping):
    m = incidence_matrix(decode_dropping(fig1_dropping))
    assert m.shape == (4, 6)
    assert set(np.unique(m)) <= {0, 1}
    assert m.sum(axis=1).tolist() == [3, 3, 3, 3]
    assert m.sum(axis=0).tolist() == [2] * 6


def test_validate(table1):
    assert validate(table1) == []
    assert validate(build_code([[1], [2]], 3, strict=False), strict=True) == ["rho_3 = 0"]
    assert validate(build_code([[1], [2]], 3, strict=False), strict=False) == []


def test_validate_matrix_forged_column_sum(table1):
    m = incidence_matrix(table1)
    assert validate_matrix(m, rho_vec=[4, 3, 3, 3, 3]) == []
    problems = validate_matrix(m, rho_vec=[4, 3, 3, 3, 4])
    assert any("identity violation" in p for p in problems)


def test_uniform_replication_tag(table1, fig1_code):
    assert not table1.uniform_replication
    assert fig1_code.uniform_replication


def test_json_round_trip(table1):
    text = table1.to_json()
    assert json.loads(text) == {"n": 7, "theta": 5, "nodes": [[1, 5], [1, 2], [2, 3], [1, 3, 4], [2, 4, 5], [3, 5], [1, 4]]}
    assert FRCode.from_json(text) == table1


def test_json_declared_n_mismatch():
    with pytest.raises(ParameterError):
        FRCode.from_dict({"n": 3, "theta": 1, "nodes": [[1]]})


def test_csv_round_trip(table1):
    text = matrix_to_csv(incidence_matrix(table1))
    assert text.splitlines()[0] == "node,P1,P2,P3,P4,P5"
    assert text.splitlines()[1] == "U1,1,0,0,0,1"
    assert code_from_matrix(matrix_from_csv(text)).same_distribution(table1)


@given(codes())
def test_counting_identity(code):
    prof = profiles(code)
    assert sum(prof.rho_vec) == sum(prof.alpha_vec)


@given(codes())
def test_alpha_is_row_sum(code):
    m = incidence_matrix(code)
    assert m.sum(axis=1).tolist() == list(code.profiles().alpha_vec)
    assert m.sum(axis=0).tolist() == list(code.profiles().rho_vec)


@given(codes(), st.randoms())
def test_matrix_determines_multisets(code, rnd):
    shuffled = [rnd.sample(node, len(node)) for node in code.nodes]
    other = build_code(shuffled, code.theta, strict=False)
    assert np.array_equal(incidence_matrix(code), incidence_matrix(other))
    assert code_from_matrix(incidence_matrix(code)).canonical() == code.canonical()
