import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowercode.core import build_code
from flowercode.dress import DressSystem, build_system, mds_subset_check, run_scenario
from flowercode.errors import (CoverageError, FieldSizeError, InsufficientDataError, ParameterError, PlacementError,
                               UnrepairableError)
from flowercode.gf256 import FileBlob, MDSCode
from flowercode.sequences import decode_chi
from oracles import brute_min_k

PAYLOAD = bytes(range(256)) * 3


@pytest.fixture
def fig1_system(fig1_code):
    return build_system(fig1_code, FileBlob(PAYLOAD, 5))


def test_build_figure1(fig1_system):
    assert fig1_system.code.n == 4
    assert [len(s) for s in fig1_system.node_store] == [3, 3, 3, 3]
    assert fig1_system.stored_blocks() == 12


def test_build_table1(table1):
    system = build_system(table1, FileBlob(b"xyz" * 10, 3))
    assert system.stored_blocks() == 16


def test_build_single_node_holds_everything():
    system = build_system(build_code([[1, 2, 3]], 3), FileBlob(b"data!", 2))
    assert system.collect([1]).payload == b"data!"
    assert system.min_reconstruction_degree() == 1


def test_build_errors(fig1_code):
    with pytest.raises(PlacementError):
        build_system(build_code([[1, 2]], 3, strict=False), FileBlob(b"a", 2))
    with pytest.raises(ParameterError):
        build_system(fig1_code, FileBlob(b"a", 5), MDSCode(7, 5))
    with pytest.raises(FieldSizeError):
        build_system(build_code([list(range(1, 258))], 257), FileBlob(b"a", 2))


def test_repair_u1_min_contact(fig1_system):
    before = fig1_system.contents(1)
    fig1_system.fail_node(1)
    assert fig1_system.contents(1) == []
    result = fig1_system.repair_node(1, "min_contact")
    assert result.helpers == (2, 4)
    assert result.blocks_transferred == 3
    assert result.contents == before
    assert fig1_system.contents(1) == before


def test_repair_every_node(fig1_system):
    for i in range(1, 5):
        before = fig1_system.contents(i)
        fig1_system.fail_node(i)
        assert fig1_system.repair_node(i).contents == before


def test_repair_sdr_and_fixed(table1):
    system = build_system(table1, FileBlob(PAYLOAD, 3))
    before = system.contents(4)
    system.fail_node(4)
    result = system.repair_node(4, "sdr")
    assert len(result.helpers) == 3 and result.blocks_transferred == 3
    assert result.contents == before
    system.fail_node(4)
    assert system.repair_node(4, "fixed_set", helpers=[3, 7]).contents == before
    with pytest.raises(CoverageError):
        system.repair_node(4, "fixed_set", helpers=[1, 2])


def test_sdr_unavailable_on_figure1(fig1_system):
    fig1_system.fail_node(1)
    with pytest.raises(CoverageError):
        fig1_system.repair_node(1, "sdr")


def test_repair_empty_node():
    system = build_system(build_code([[1, 2], [], [1, 2]], 2, strict=False), FileBlob(b"hi", 2))
    system.fail_node(2)
    result = system.repair_node(2)
    assert result.helpers == () and result.contents == [] and result.blocks_transferred == 0


def test_unrepairable_table5(table5_chi):
    code = decode_chi(table5_chi)
    system = build_system(code, FileBlob(b"abcdef", 3))
    system.fail_node(4)
    with pytest.raises(UnrepairableError, match="P3"):
        system.repair_node(4)


def test_repair_avoids_other_failed_nodes(table1):
    system = build_system(table1, FileBlob(PAYLOAD, 3))
    before = system.contents(7)
    system.fail_node(4)
    system.fail_node(7)
    result = system.repair_node(7)
    assert 4 not in result.helpers
    assert result.contents == before


def test_collect(fig1_system):
    assert fig1_system.collect([1, 2, 3]).payload == PAYLOAD
    with pytest.raises(InsufficientDataError) as err:
        fig1_system.collect([1, 2])
    assert err.value.have == 4
    assert fig1_system.collect(range(1, 5)).payload == PAYLOAD


def test_min_reconstruction_degree(fig1_system, table1):
    assert fig1_system.min_reconstruction_degree() == 3
    system = build_system(table1, FileBlob(PAYLOAD, 5))
    assert system.min_reconstruction_degree() == brute_min_k([list(n) for n in table1.nodes], 5)
    full = build_system(build_code([[1, 2, 3]] * 3, 3), FileBlob(PAYLOAD, 2))
    assert full.min_reconstruction_degree() == 1


@st.composite
def strict_codes(draw):
    n = draw(st.integers(1, 6))
    theta = draw(st.integers(1, 6))
    nodes = draw(st.lists(st.lists(st.integers(1, theta), max_size=4), min_size=n, max_size=n))
    for p in range(1, theta + 1):
        if not any(p in node for node in nodes):
            nodes[draw(st.integers(0, n - 1))].append(p)
    return build_code(nodes, theta, strict=False)


@settings(max_examples=60, deadline=None)
@given(strict_codes(), st.binary(min_size=1, max_size=64), st.data())
def test_exact_repair_invariant(code, payload, data):
    B = data.draw(st.integers(1, code.theta))
    system = build_system(code, FileBlob(payload, B))
    for i in range(1, code.n + 1):
        before = system.contents(i)
        system.fail_node(i)
        try:
            result = system.repair_node(i)
        except UnrepairableError:
            system.node_store[i - 1] = before
            system.failed.discard(i)
            continue
        assert result.contents == before


@settings(max_examples=60, deadline=None)
@given(strict_codes(), st.data())
def test_collect_iff_union_oracle(code, data):
    B = data.draw(st.integers(1, code.theta))
    system = build_system(code, FileBlob(b"payload!", B))
    nodes = data.draw(st.sets(st.integers(1, code.n)))
    union = set().union(*(set(code.node(j)) for j in nodes)) if nodes else set()
    if len(union) >= B:
        assert system.collect(sorted(nodes)).payload == b"payload!"
    else:
        with pytest.raises(InsufficientDataError):
            system.collect(sorted(nodes))
    assert system.min_reconstruction_degree() == brute_min_k([list(n) for n in code.nodes], B)


@settings(max_examples=60, deadline=None)
@given(strict_codes(), st.data())
def test_adding_replicas_never_raises_k(code, data):
    B = data.draw(st.integers(1, code.theta))
    k = build_system(code, FileBlob(b"x", B)).min_reconstruction_degree()
    i = data.draw(st.integers(1, code.n))
    p = data.draw(st.integers(1, code.theta))
    nodes = [list(n) for n in code.nodes]
    nodes[i - 1].append(p)
    bigger = build_code(nodes, code.theta, strict=False)
    assert build_system(bigger, FileBlob(b"x", B)).min_reconstruction_degree() <= k


def test_snapshot_round_trip(fig1_system):
    fig1_system.fail_node(2)
    data = fig1_system.to_bytes()
    assert data[:4] == b"FRDS"
    restored = DressSystem.from_bytes(data)
    assert restored.failed == {2}
    assert restored.node_store == fig1_system.node_store
    assert restored.code == fig1_system.code
    restored.repair_node(2)
    assert restored.collect([1, 2, 3]).payload == PAYLOAD
    with pytest.raises(ParameterError):
        DressSystem.from_bytes(b"XXXX" + data[4:])
    with pytest.raises(ParameterError):
        DressSystem.from_bytes(data + b"\0")


def test_mds_subset_check():
    mds = MDSCode(6, 5)
    ok, checked = mds_subset_check(mds, FileBlob(PAYLOAD, 5).message())
    assert ok and checked == 6


def test_run_scenario(fig1_code):
    t = run_scenario(fig1_code, PAYLOAD, 5, 1)
    assert t["helpers"] == [2, 4]
    assert t["blocks_transferred"] == 3
    assert t["k_star"] == 3
    assert set(t["checks"].values()) == {"pass"}


def test_every_k_subset_figure1(fig1_system):
    for k in (3, 4):
        for nodes in itertools.combinations(range(1, 5), k):
            assert fig1_system.collect(nodes).payload == PAYLOAD
