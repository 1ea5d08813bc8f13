"""Assembly of the damage-assessment network from ship and incident data.

Node identifiers follow the usual symbols: latent quantities (M, V, E, L_D,
F_H, D_t, IHB, Q, M_prime, R, Y_D, phi, T_p, T_s, T_D, H, D_v) and their
observable counterparts (M_r, V_r, L_D_r, Q_m, R_c, H_r, T_p_m, T_s_m, Z_t,
Z_v, Z_y) plus the categorical context nodes (LC, WI, OS, Q_eps, Vis).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import physics
from .bn.network import (
    ConditionalTable,
    DiscreteNode,
    Network,
    category_states,
    construct_network,
    interval_states,
)
from .dists import Distribution, LognormalMedianCov, Normal, Uniform
from .errors import ConfigurationIncomplete, InvalidParameter
from .ship import (
    DamageStateSpec,
    IncidentConfig,
    ModelConfig,
    ShipParticulars,
    default_damage_length_prior,
    default_speed_prior,
)
from .synthesis import BinningPolicy, NoiseModel, SynthesisConfig, functional_cpt, prior_table

OBSERVABLE_NODES = (
    "M_r", "V_r", "L_D_r", "R_c", "H_r", "T_p_m", "T_s_m", "Q_m",
    "WI", "OS", "LC", "Q_eps", "Vis", "Z_t", "Z_v", "Z_y",
)

QUERY_NODES = ("D_t", "D_v", "Y_D")

# Table-6 style grouping: observable twins belong to their latent variable.
VARIABLE_GROUPS = {
    "L_D": ("L_D", "L_D_r"), "M_prime": ("M_prime",), "M": ("M", "M_r"),
    "T_p": ("T_p", "T_p_m"), "T_s": ("T_s", "T_s_m"), "T_D": ("T_D",),
    "Q": ("Q", "Q_m"), "Q_eps": ("Q_eps",), "R": ("R", "R_c"), "phi": ("phi",),
    "F_H": ("F_H",), "V": ("V", "V_r"), "E": ("E",), "IHB": ("IHB",),
    "Vis": ("Vis",), "LC": ("LC",), "OS": ("OS",), "Z_t": ("Z_t",),
    "Z_y": ("Z_y",), "Z_v": ("Z_v",), "D_t": ("D_t",), "Y_D": ("Y_D",),
    "D_v": ("D_v",), "H": ("H", "H_r"), "WI": ("WI",),
}


def support_range(dist: Distribution) -> tuple[float, float]:
    lo = float(dist.quantile(0.0))
    hi = float(dist.quantile(1.0))
    if not np.isfinite(lo):
        lo = float(dist.quantile(1e-9))
    if not np.isfinite(hi):
        hi = float(dist.quantile(1.0 - 1e-9))
    return lo, hi


@dataclass
class _Builder:
    ship: ShipParticulars
    model: ModelConfig
    incident: IncidentConfig
    spec: DamageStateSpec

    def __post_init__(self):
        self.nodes: list[DiscreteNode] = []
        self.tables: list[ConditionalTable] = []
        self.bins: dict[str, BinningPolicy] = {}
        self.cfg = SynthesisConfig(samples_per_cell=self.model.samples_per_cell,
                                   seed=self.model.seed)

    # -- node helpers -----------------------------------------------------------

    def interval(self, nid: str, bins: BinningPolicy, unit: str,
                 parents=(), labels=None) -> BinningPolicy:
        self.nodes.append(DiscreteNode(
            id=nid, states=interval_states(bins.edges, unit=unit, labels=labels),
            parents=tuple(parents)))
        self.bins[nid] = bins
        return bins

    def categorical(self, nid: str, labels, parents=()) -> None:
        self.nodes.append(DiscreteNode(id=nid, states=category_states(labels),
                                       parents=tuple(parents)))

    def prior(self, nid: str, dist: Distribution) -> None:
        self.tables.append(ConditionalTable(
            child=nid, probs=prior_table(dist, self.bins[nid])[None, :]))

    def append_table(self, table: ConditionalTable) -> None:
        self.tables.append(table)

    def cpt(self, nid: str, parents, f, noise, aux=()) -> None:
        parent_bins = [self.bins[p] if isinstance(p, str) else p for p in parents]
        self.append_table(functional_cpt(self.bins[nid], parent_bins, f, noise,
                                         self.cfg, tag=nid, aux=aux))

    def reported_range(self, lo: float, hi: float, noise: Distribution,
                       multiplicative: bool, clamp_lo: float | None = None) -> tuple[float, float]:
        """Widen a latent range so 3-sigma reported values stay in-grid."""
        if multiplicative:
            cov = noise.cov
            out = (lo * max(0.0, 1.0 - 3.0 * cov), hi * (1.0 + 3.0 * cov))
        else:
            sd = noise.sd()
            out = (lo - 3.0 * sd, hi + 3.0 * sd)
        if clamp_lo is not None:
            out = (max(out[0], clamp_lo), out[1])
        return out


def _missing_inputs(ship: ShipParticulars, model: ModelConfig, incident: IncidentConfig) -> list[str]:
    missing = []
    m = model.modules
    if m.crashworthiness and model.priors.displacement is None:
        missing.append("priors.displacement (pre-grounding displacement range)")
    if m.hydraulic:
        if incident.tank_damage_length is None:
            missing.append("incident.tank_damage_length")
        if incident.pressure_head is None:
            missing.append("incident.pressure_head")
        if incident.oil_level is None and incident.loading_condition == "loaded":
            missing.append("incident.oil_level")
    if m.hydrostatic:
        if incident.gm is None:
            missing.append("incident.gm")
        if incident.displacement_damaged is None:
            missing.append("incident.displacement_damaged")
        if ship.max_pregrounding_draft is None and model.priors.water_depth is None:
            missing.append("ship.max_pregrounding_draft or priors.water_depth")
    return missing


def build_network(ship: ShipParticulars, model: ModelConfig, incident: IncidentConfig,
                  spec: DamageStateSpec | None = None) -> Network:
    """Assemble the full Bayesian network for the enabled modules.

    Raises ConfigurationIncomplete when an enabled module lacks its inputs.
    """
    incident.validate_against(ship)
    missing = _missing_inputs(ship, model, incident)
    if missing:
        raise ConfigurationIncomplete(missing)
    spec = spec or DamageStateSpec.for_ship(ship)

    mods = model.modules
    double = ship.is_double
    has_dt = mods.crashworthiness or mods.hydraulic or mods.inspection
    has_yd = mods.hydrostatic or mods.inspection
    has_dv = mods.hydrostatic or mods.inspection or (double and (mods.crashworthiness or mods.hydraulic))
    has_ihb = double and has_dv and (mods.crashworthiness or mods.hydraulic or mods.hydrostatic)

    b = _Builder(ship, model, incident, spec)
    err = model.errors

    # ---- damage parameters ------------------------------------------------------
    dt_bins = BinningPolicy.explicit(spec.transverse_edges)
    yd_bins = BinningPolicy.explicit(spec.location_edges)
    dv_bins = BinningPolicy.explicit(spec.vertical_edges)

    if has_dt:
        dt_parents = []
        if mods.crashworthiness:
            dt_parents = ["F_H", "IHB"] if has_ihb else ["F_H"]
        b.interval("D_t", dt_bins, "m", parents=dt_parents)
        if not mods.crashworthiness:
            b.prior("D_t", Uniform(0.0, ship.breadth))
    if has_yd:
        b.interval("Y_D", yd_bins, "m")
        b.prior("Y_D", Uniform(-ship.breadth / 2.0, ship.breadth / 2.0))
    if has_dv:
        dv_parents = ["T_D", "H"] if mods.hydrostatic else []
        b.interval("D_v", dv_bins, "m", parents=dv_parents, labels=spec.vertical_labels)
        if not mods.hydrostatic:
            b.prior("D_v", Uniform(0.0, spec.vertical_edges[-1]))
    if has_ihb:
        b.categorical("IHB", ["yes", "no"], parents=["D_v"])
        b.append_table(physics.ihb_table(spec))

    # ---- crashworthiness ----------------------------------------------------------
    if mods.crashworthiness:
        m_dist = model.priors.displacement
        m_lo, m_hi = support_range(m_dist)
        m_bins = b.interval("M", BinningPolicy.uniform(m_lo, m_hi, model.n_bins("M", 24)), "t")
        b.prior("M", m_dist)
        mr_lo, mr_hi = b.reported_range(m_lo, m_hi, err.displacement, True, clamp_lo=0.0)
        b.interval("M_r", BinningPolicy.uniform(mr_lo, mr_hi, model.n_bins("M_r", 96)), "t", parents=["M"])
        b.cpt("M_r", ["M"], lambda m: m, NoiseModel.multiplicative(err.displacement))

        v_dist = model.priors.speed or default_speed_prior(ship)
        v_lo, v_hi = support_range(v_dist)
        b.interval("V", BinningPolicy.uniform(v_lo, v_hi, model.n_bins("V", 24)), "kn")
        b.prior("V", v_dist)
        vr_lo, vr_hi = b.reported_range(v_lo, v_hi, err.speed, False)
        b.interval("V_r", BinningPolicy.uniform(vr_lo, vr_hi, model.n_bins("V_r", 96)), "kn", parents=["V"])
        b.cpt("V_r", ["V"], lambda v: v, NoiseModel.additive(err.speed))

        l_dist = model.priors.damage_length or default_damage_length_prior(ship)
        l_lo, l_hi = support_range(l_dist)
        b.interval("L_D", BinningPolicy.uniform(l_lo, l_hi, model.n_bins("L_D", 24)), "m")
        b.prior("L_D", l_dist)
        lr_lo, lr_hi = b.reported_range(l_lo, l_hi, err.damage_length, False)
        b.interval("L_D_r", BinningPolicy.uniform(lr_lo, lr_hi, model.n_bins("L_D_r", 96)), "m", parents=["L_D"])
        b.cpt("L_D_r", ["L_D"], lambda ld: ld, NoiseModel.additive(err.damage_length))

        frac = model.added_mass_fraction
        e_hi = physics.kinetic_energy(m_hi, v_hi, frac)
        b.interval("E", BinningPolicy.uniform(0.0, e_hi, model.n_bins("E", 48)), "J",
                   parents=["M", "V"])
        b.cpt("E", ["M", "V"], lambda m, v: physics.kinetic_energy(m, v, frac), NoiseModel.none())

        all_layers = ship.layers(inner_breached=double)
        f_hi = physics.width_to_force(ship.breadth, all_layers)
        b.interval("F_H", BinningPolicy.uniform(0.0, f_hi, model.n_bins("F_H", 96)), "N",
                   parents=["E", "L_D"])
        b.cpt("F_H", ["E", "L_D"], lambda e, ld: e / ld, NoiseModel.multiplicative(err.force))

        outer_only = ship.layers(inner_breached=False)

        if has_ihb:
            def width_map(fh, ihb):
                w_both = physics.damage_width(fh, all_layers)
                w_outer = physics.damage_width(fh, outer_only)
                return np.where(ihb == 0, w_both, w_outer)
            b.cpt("D_t", ["F_H", 2], width_map, NoiseModel.none())
        else:
            b.cpt("D_t", ["F_H"], lambda fh: physics.damage_width(fh, outer_only),
                  NoiseModel.none())

    # ---- hydraulic -------------------------------------------------------------------
    if mods.hydraulic:
        b.categorical("LC", ["loaded", "ballast"])
        b.append_table(ConditionalTable("LC", np.array([[0.5, 0.5]])))
        if has_ihb:
            wi, os_ = physics.detection_tables()
            b.categorical("WI", ["ballast_tank", "cargo_tank"], parents=["IHB", "LC"])
            b.append_table(wi)
            b.categorical("OS", ["yes", "no"], parents=["IHB", "LC"])
            b.append_table(os_)

        l_d = incident.tank_damage_length
        h_w = incident.pressure_head
        h_o = incident.oil_level if incident.oil_level is not None else 0.0
        rho_w, rho_o, g = model.rho_water, model.rho_oil, model.g
        cd = model.discharge_coefficient
        cd_hi = cd.mu + 3.0 * cd.sigma
        l_up = l_d + 3.0 * incident.tank_damage_length_sd
        heads = [h_w, max(physics.oil_head(h_o, h_w, rho_w, rho_o), 0.0)]
        q_hi = 1.2 * cd_hi * l_up * ship.breadth * float(np.sqrt(2 * g * max(heads)))
        q_bins = BinningPolicy.geometric(q_hi / 2000.0, q_hi, model.n_bins("Q", 96), zero_bin=True)
        aux: list[Distribution] = [cd]
        if incident.tank_damage_length_sd > 0:
            aux.append(Normal(l_d, incident.tank_damage_length_sd))

        def flow_map(dt, *rest):
            if has_ihb:
                ihb, lc, c = rest[0], rest[1], rest[2]
                length = np.maximum(rest[3], 0.0) if len(rest) > 3 else l_d
                oil = (lc == 0) & (ihb == 0)
            else:
                lc, c = rest[0], rest[1]
                length = np.maximum(rest[2], 0.0) if len(rest) > 2 else l_d
                oil = lc == 0
            q_flood = physics.flooding_rate(c, length, dt, h_w, g)
            q_oil = physics.oil_outflow_rate(c, length, dt, h_o, h_w, rho_w, rho_o, g)
            return np.where(oil, q_oil, q_flood)

        q_parents = ["D_t", 2, 2] if has_ihb else ["D_t", 2]
        q_node_parents = ["D_t", "IHB", "LC"] if has_ihb else ["D_t", "LC"]
        b.interval("Q", q_bins, "m^3/s", parents=q_node_parents)
        b.cpt("Q", q_parents, flow_map, NoiseModel.none(), aux=aux)

        qm_bins = BinningPolicy.geometric(q_bins.edges[1] * 0.5, q_hi * 2.0,
                                          model.n_bins("Q_m", 96), zero_bin=True)
        b.categorical("Q_eps", ["good", "poor"])
        b.append_table(ConditionalTable("Q_eps", np.array([list(incident.flow_quality_prior)])))
        b.interval("Q_m", qm_bins, "m^3/s", parents=["Q", "Q_eps"])

        def flow_noise(cell):
            return NoiseModel.multiplicative(err.flow_good if cell[1] == 0 else err.flow_poor)

        b.cpt("Q_m", ["Q", 2], lambda q, tag: q, flow_noise)

    # ---- hydrostatics and bathymetry ----------------------------------------------------
    if mods.hydrostatic:
        gm = incident.gm
        m_prime = incident.displacement_damaged
        bound = incident.ground_reaction_bound
        if bound >= 0.8 * m_prime:
            raise InvalidParameter("ground reaction bound must stay well below the damaged displacement")

        if incident.displacement_damaged_uncertain:
            mp_dist = LognormalMedianCov(m_prime, err.displacement.cov)
            mp_lo, mp_hi = float(mp_dist.quantile(1e-4)), float(mp_dist.quantile(1 - 1e-4))
            b.interval("M_prime", BinningPolicy.uniform(mp_lo, mp_hi, model.n_bins("M_prime", 24)), "t")
            b.prior("M_prime", mp_dist)
        else:
            delta = max(1e-6 * m_prime, 1e-6)
            b.interval("M_prime", BinningPolicy.explicit(
                [m_prime - delta, m_prime, m_prime + delta]), "t")
            b.append_table(ConditionalTable("M_prime", np.array([[0.5, 0.5]])))

        b.interval("R", BinningPolicy.uniform(0.0, bound, model.n_bins("R", 24)), "t")
        b.prior("R", Uniform(0.0, bound))
        rc_hi = bound * (1.0 + 3.0 * err.ground_reaction.cov)
        b.interval("R_c", BinningPolicy.uniform(0.0, rc_hi, model.n_bins("R_c", 96)), "t", parents=["R"])
        b.cpt("R_c", ["R"], lambda r: r, NoiseModel.multiplicative(err.ground_reaction))

        t_lo, t_hi = model.priors.draft_range or (
            max(0.5, ship.design_draft - 12.0), min(ship.depth, ship.design_draft + 8.0))
        tan_max = (t_hi - t_lo) / ship.breadth
        b.interval("phi", BinningPolicy.uniform(-tan_max, tan_max, model.n_bins("phi", 96)), "tan",
                   parents=["M_prime", "R", "Y_D"])

        def heel_map(mp, r, yd):
            return r * yd / ((mp - r) * gm)

        b.cpt("phi", ["M_prime", "R", "Y_D"], heel_map, NoiseModel.none())

        draft_bins = BinningPolicy.uniform(t_lo, t_hi, model.n_bins("T", 24))
        b.interval("T_p", draft_bins, "m")
        b.prior("T_p", Uniform(t_lo, t_hi))
        tm_lo, tm_hi = b.reported_range(t_lo, t_hi, err.draft, False)
        tm_bins = BinningPolicy.uniform(tm_lo, tm_hi, model.n_bins("T_m", 96))
        b.interval("T_p_m", tm_bins, "m", parents=["T_p"])
        b.cpt("T_p_m", ["T_p"], lambda t: t, NoiseModel.additive(err.draft))

        breadth = ship.breadth
        b.interval("T_s", draft_bins, "m", parents=["phi", "T_p"])
        b.cpt("T_s", ["phi", "T_p"], lambda tan, tp: physics.starboard_draft(tp, tan, breadth),
              NoiseModel.none())
        b.interval("T_s_m", tm_bins, "m", parents=["T_s"])
        b.cpt("T_s_m", ["T_s"], lambda t: t, NoiseModel.additive(err.draft))

        b.interval("T_D", draft_bins, "m", parents=["Y_D", "T_p", "T_s"])
        b.cpt("T_D", ["Y_D", "T_p", "T_s"],
              lambda yd, tp, ts: physics.rock_draft(tp, ts, yd, breadth), NoiseModel.none())

        h_dist = model.priors.water_depth or Uniform(0.0, ship.max_pregrounding_draft)
        h_lo, h_hi = support_range(h_dist)
        b.interval("H", BinningPolicy.uniform(h_lo, h_hi, model.n_bins("H", 24)), "m")
        b.prior("H", h_dist)
        hr_lo, hr_hi = b.reported_range(h_lo, h_hi, err.water_depth, False)
        b.interval("H_r", BinningPolicy.uniform(hr_lo, hr_hi, model.n_bins("H_r", 96)), "m", parents=["H"])
        b.cpt("H_r", ["H"], lambda h: h, NoiseModel.additive(err.water_depth))

        b.cpt("D_v", ["T_D", "H"], lambda td, h: physics.penetration(td, h), NoiseModel.none())

    # ---- inspection ---------------------------------------------------------------------
    if mods.inspection:
        b.categorical("Vis", ["good", "poor"])
        b.append_table(ConditionalTable("Vis", np.array([list(incident.visibility_prior)])))

        def extent_noise(cell):
            return NoiseModel.multiplicative(
                err.survey_extent_good if cell[1] == 0 else err.survey_extent_poor)

        def location_noise(cell):
            return NoiseModel.additive(
                err.survey_location_good if cell[1] == 0 else err.survey_location_poor)

        if has_dt:
            b.interval("Z_t", dt_bins, "m", parents=["D_t", "Vis"])
            b.cpt("Z_t", ["D_t", 2], lambda d, vis: d, extent_noise)
        if has_dv:
            b.interval("Z_v", dv_bins, "m", parents=["D_v", "Vis"])
            b.cpt("Z_v", ["D_v", 2], lambda d, vis: d, extent_noise)
        if has_yd:
            b.interval("Z_y", yd_bins, "m", parents=["Y_D", "Vis"])
            b.cpt("Z_y", ["Y_D", 2], lambda y, vis: y, location_noise)

    return construct_network(b.nodes, b.tables)


def observable_nodes(net: Network) -> tuple[str, ...]:
    return tuple(nid for nid in OBSERVABLE_NODES if nid in net.nodes)


def variable_count(net: Network) -> int:
    """Number of distinct model variables, counting a latent quantity and its
    reported twin as one."""
    present = set(net.nodes)
    count = 0
    for members in VARIABLE_GROUPS.values():
        if any(m in present for m in members):
            count += 1
    return count
