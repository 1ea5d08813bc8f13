"""Grounding physics: crashworthiness, hydraulic flow and hydrostatic relations.

All functions accept scalars or numpy arrays. Units are SI except displacement
and ground reaction (tonnes) and speed (knots).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .bn.network import ConditionalTable
from .errors import DivisionByZeroLength, GroundReactionExceedsWeight, SingleHullUnsupported
from .ship import GRAVITY, KNOT, BottomLayer, DamageStateSpec

# Empirical tearing-resistance formula constants.
RESISTANCE_COEFF = 0.77
WIDTH_EXPONENT = 0.83


def kinetic_energy(mass_t, speed_kn, added_mass_fraction: float = 0.05):
    """Impact kinetic energy in joules, including the hydrodynamic added mass."""
    mass_kg = np.asarray(mass_t, dtype=float) * 1000.0
    speed_ms = np.asarray(speed_kn, dtype=float) * KNOT
    if np.any(mass_kg <= 0):
        raise ValueError("mass must be positive")
    if np.any(speed_ms < 0):
        raise ValueError("speed must be nonnegative")
    out = 0.5 * (1.0 + added_mass_fraction) * mass_kg * speed_ms ** 2
    return out if out.ndim else float(out)


def horizontal_force(energy_j, damage_length_m):
    """Median horizontal grounding force: the impact energy dissipated over the
    stopping length (the multiplicative force error enters as table noise)."""
    length = np.asarray(damage_length_m, dtype=float)
    if np.any(length <= 0):
        raise DivisionByZeroLength("damage length must be positive")
    out = np.asarray(energy_j, dtype=float) / length
    return out if out.ndim else float(out)


def layer_resistance(layer: BottomLayer) -> float:
    return layer.sigma0 * layer.eps_f ** 0.71 * layer.t_eq ** 1.17


def width_to_force(width_m, layers: Sequence[BottomLayer]):
    """Tearing force needed to open a given damage width (forward form)."""
    k = RESISTANCE_COEFF * sum(layer_resistance(l) for l in layers)
    out = k * np.asarray(width_m, dtype=float) ** WIDTH_EXPONENT
    return out if out.ndim else float(out)


def damage_width(force_n, layers: Sequence[BottomLayer]):
    """Damage width from the horizontal grounding force, inverting the
    empirical tearing-resistance formula for the given resisting layers."""
    if not layers:
        raise ValueError("at least one bottom layer is required")
    force = np.asarray(force_n, dtype=float)
    if np.any(force < 0):
        raise ValueError("force must be nonnegative")
    k = RESISTANCE_COEFF * sum(layer_resistance(l) for l in layers)
    out = (force / k) ** (1.0 / WIDTH_EXPONENT)
    return out if out.ndim else float(out)


def ihb_table(spec: DamageStateSpec) -> ConditionalTable:
    """P(inner hull breach | vertical damage state); states (yes, no)."""
    if not spec.vertical_labels or spec.vertical_labels[0] != "OB":
        raise SingleHullUnsupported("inner-hull-breach table needs double-bottom damage states")
    rows = []
    for label in spec.vertical_labels:
        p = spec.ihb_yes_probability(label)
        rows.append([p, 1.0 - p])
    return ConditionalTable(child="IHB", probs=np.asarray(rows))


def detection_tables(loading_states: Sequence[str] = ("loaded", "ballast")) -> tuple[ConditionalTable, ConditionalTable]:
    """Deterministic detection tables given (IHB, LC), rows row-major with IHB
    varying slowest.

    Water ingress states are (ballast_tank, cargo_tank): water reaches a cargo
    tank only through a breached inner bottom on a ship in ballast. Oil spill
    states are (yes, no): oil escapes only from a loaded ship with a breached
    inner bottom.
    """
    if tuple(loading_states) != ("loaded", "ballast"):
        raise ValueError("loading states must be ('loaded', 'ballast')")
    wi = np.array([
        [1.0, 0.0],  # IHB=yes, loaded
        [0.0, 1.0],  # IHB=yes, ballast
        [1.0, 0.0],  # IHB=no,  loaded
        [1.0, 0.0],  # IHB=no,  ballast
    ])
    os_ = np.array([
        [1.0, 0.0],  # IHB=yes, loaded
        [0.0, 1.0],  # IHB=yes, ballast
        [0.0, 1.0],  # IHB=no,  loaded
        [0.0, 1.0],  # IHB=no,  ballast
    ])
    return ConditionalTable(child="WI", probs=wi), ConditionalTable(child="OS", probs=os_)


def flooding_rate(c_d, tank_length_m, width_m, head_m, g: float = GRAVITY):
    """Sea-water flooding rate through the damage opening (orifice law)."""
    area = np.asarray(tank_length_m, dtype=float) * np.asarray(width_m, dtype=float)
    head = np.asarray(head_m, dtype=float)
    if np.any(area < 0) or np.any(head < 0):
        raise ValueError("opening area and head must be nonnegative")
    out = np.asarray(c_d, dtype=float) * area * np.sqrt(2.0 * g * head)
    return out if out.ndim else float(out)


def oil_head(oil_level_m, head_m, rho_water: float = 1025.0, rho_oil: float = 900.0):
    """Net driving head for oil outflow; <= 0 means hydrostatic equilibrium."""
    return np.asarray(oil_level_m, dtype=float) - (rho_water / rho_oil) * np.asarray(head_m, dtype=float)


def oil_outflow_rate(c_d, tank_length_m, width_m, oil_level_m, head_m,
                     rho_water: float = 1025.0, rho_oil: float = 900.0, g: float = GRAVITY):
    """Oil outflow rate through the inner bottom opening; returns 0 at or below
    hydrostatic equilibrium (no driving head)."""
    area = np.asarray(tank_length_m, dtype=float) * np.asarray(width_m, dtype=float)
    head = oil_head(oil_level_m, head_m, rho_water, rho_oil)
    out = np.asarray(c_d, dtype=float) * area * np.sqrt(2.0 * g * np.maximum(head, 0.0))
    out = np.where(head > 0, out, 0.0)
    return out if out.ndim else float(out)


def heel_tangent(reaction_t, displacement_t, gm_m, y_d_m):
    """Heel tangent from the moment balance of the ground reaction against the
    righting moment; positive when the rock is on the port side."""
    r = np.asarray(reaction_t, dtype=float)
    w = np.asarray(displacement_t, dtype=float)
    if np.any(r < 0):
        raise ValueError("ground reaction must be nonnegative")
    if np.any(r >= w):
        raise GroundReactionExceedsWeight("ground reaction must stay below the displacement")
    if np.any(np.asarray(gm_m, dtype=float) <= 0):
        raise ValueError("metacentric height must be positive")
    out = r * np.asarray(y_d_m, dtype=float) / ((w - r) * np.asarray(gm_m, dtype=float))
    return out if out.ndim else float(out)


def starboard_draft(port_draft_m, tan_heel, breadth_m):
    """Starboard draft from the port draft and heel tangent."""
    out = np.asarray(port_draft_m, dtype=float) + np.asarray(breadth_m, dtype=float) * np.asarray(tan_heel, dtype=float)
    return out if out.ndim else float(out)


def rock_draft(port_draft_m, stbd_draft_m, y_d_m, breadth_m):
    """Draft at the rock transverse position from the cross-section geometry."""
    tp = np.asarray(port_draft_m, dtype=float)
    ts = np.asarray(stbd_draft_m, dtype=float)
    out = 0.5 * (tp + ts) - np.asarray(y_d_m, dtype=float) * (ts - tp) / np.asarray(breadth_m, dtype=float)
    return out if out.ndim else float(out)


def penetration(rock_draft_m, water_depth_m):
    """Vertical damage extent: draft over the rock minus the water depth,
    clamped at zero (small-heel approximation; a rock below the keel means no
    contact)."""
    out = np.maximum(np.asarray(rock_draft_m, dtype=float) - np.asarray(water_depth_m, dtype=float), 0.0)
    return out if out.ndim else float(out)
