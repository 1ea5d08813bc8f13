import numpy as np
import pytest

from aground.bn import (
    ConditionalTable,
    DiscreteNode,
    category_states,
    construct_network,
    interval_states,
    to_dot,
)
from aground.errors import CycleDetected, MissingTable, NonStochasticRow, UnknownNode


def binary(nid, parents=()):
    return DiscreteNode(id=nid, states=category_states(["yes", "no"]), parents=tuple(parents))


def uniform_table(child, n_rows, card=2):
    return ConditionalTable(child=child, probs=np.full((n_rows, card), 1.0 / card))


def test_mass_speed_damage_survey_network():
    # collider M -> D <- V with survey child D -> Z
    nodes = [binary("M"), binary("V"), binary("D", ["M", "V"]), binary("Z", ["D"])]
    tables = [uniform_table("M", 1), uniform_table("V", 1),
              uniform_table("D", 4), uniform_table("Z", 2)]
    net = construct_network(nodes, tables)
    assert set(net.nodes) == {"M", "V", "D", "Z"}
    assert len(net.tables) == 4
    assert net.order.index("M") < net.order.index("D") < net.order.index("Z")


def test_single_root_network():
    net = construct_network([binary("A")], [uniform_table("A", 1)])
    assert net.joint_size() == 2


def test_cycle_rejected():
    nodes = [binary("A", ["B"]), binary("B", ["A"])]
    tables = [uniform_table("A", 2), uniform_table("B", 2)]
    with pytest.raises(CycleDetected):
        construct_network(nodes, tables)


def test_dangling_parent_rejected():
    with pytest.raises(UnknownNode):
        construct_network([binary("A", ["ghost"])], [uniform_table("A", 2)])


def test_missing_table_rejected():
    with pytest.raises(MissingTable):
        construct_network([binary("A"), binary("B", ["A"])], [uniform_table("A", 1)])


def test_non_stochastic_row_names_offender():
    probs = np.array([[0.5, 0.5], [0.6, 0.6]])
    with pytest.raises(NonStochasticRow, match="row 1"):
        ConditionalTable(child="A", probs=probs)


def test_negative_entry_rejected():
    with pytest.raises(NonStochasticRow):
        ConditionalTable(child="A", probs=np.array([[1.2, -0.2]]))


def test_table_shape_checked():
    nodes = [binary("A"), binary("B", ["A"])]
    tables = [uniform_table("A", 1), uniform_table("B", 1)]  # B needs 2 rows
    with pytest.raises(ValueError, match="shape"):
        construct_network(nodes, tables)


def test_interval_states_contiguous():
    states = interval_states([0.0, 1.0, 2.0, 4.0], unit="m")
    assert [s.lo for s in states] == [0.0, 1.0, 2.0]
    assert states[2].width == 2.0
    with pytest.raises(ValueError):
        interval_states([0.0, 1.0, 0.5])


def test_node_requires_two_states():
    with pytest.raises(ValueError):
        DiscreteNode(id="X", states=category_states(["only"]))


def test_duplicate_parents_rejected():
    with pytest.raises(ValueError):
        DiscreteNode(id="X", states=category_states(["a", "b"]), parents=("P", "P"))


def test_bin_of_half_open_with_inclusive_top():
    node = DiscreteNode(id="X", states=interval_states([0, 1, 2, 3], unit="m"))
    assert node.bin_of(0.0) == 0
    assert node.bin_of(1.0) == 1
    assert node.bin_of(2.999) == 2
    assert node.bin_of(3.0) == 2  # top edge folds into last bin
    with pytest.raises(ValueError):
        node.bin_of(3.0001)


def test_dot_export_lists_edges():
    nodes = [binary("A"), binary("B", ["A"])]
    net = construct_network(nodes, [uniform_table("A", 1), uniform_table("B", 2)])
    dot = to_dot(net)
    assert '"A" -> "B";' in dot
    assert dot.startswith("digraph")
