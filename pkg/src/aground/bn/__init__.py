"""Discrete Bayesian networks with exact junction-tree inference."""

from .inference import brute_force_marginals, infer_marginals
from .junction import JunctionTree, compile_network
from .network import (
    ConditionalTable,
    DiscreteNode,
    Network,
    State,
    category_states,
    construct_network,
    interval_states,
    to_dot,
)

__all__ = [
    "ConditionalTable",
    "DiscreteNode",
    "JunctionTree",
    "Network",
    "State",
    "brute_force_marginals",
    "category_states",
    "compile_network",
    "construct_network",
    "infer_marginals",
    "interval_states",
    "to_dot",
]
