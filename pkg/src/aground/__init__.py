"""Probabilistic ship grounding damage assessment.

Estimates the 2D extent and location of bottom damage after a hard grounding
as posterior distributions, fusing crashworthiness, hydraulic, hydrostatic and
inspection information in a discrete Bayesian network.
"""

__version__ = "0.1.0"
