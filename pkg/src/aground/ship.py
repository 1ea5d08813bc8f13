"""Ship, incident and model configuration plus damage-state discretization.

Units follow marine practice: SI throughout except displacement in tonnes and
speed in knots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .dists import (
    Distribution,
    LognormalMedianCov,
    Normal,
    ScaledBeta,
    TruncExp,
    make_distribution,
    spec_of,
)
from .errors import InvalidParameter, SingleHullUnsupported

GRAVITY = 9.81
KNOT = 0.51444  # m/s


@dataclass(frozen=True)
class BottomLayer:
    """Smeared structural properties of one bottom shell layer."""

    t_eq: float      # equivalent plate thickness, m
    sigma0: float    # flow stress, Pa
    eps_f: float     # fracture strain

    def __post_init__(self):
        if self.t_eq <= 0 or self.sigma0 <= 0:
            raise InvalidParameter("layer thickness and flow stress must be positive")
        if not 0 < self.eps_f < 1:
            raise InvalidParameter("fracture strain must lie in (0, 1)")


@dataclass(frozen=True)
class ShipParticulars:
    length: float                 # L, m
    breadth: float                # B, m
    depth: float                  # D, m
    design_draft: float           # T, m
    service_speed: float          # V_s, kn
    hull_type: str                # "single" | "double"
    outer: BottomLayer
    inner: BottomLayer | None = None
    h_db: float | None = None     # double bottom height, m
    gm0: float | None = None      # intact metacentric height, m
    max_pregrounding_draft: float | None = None  # T_0,max, m

    def __post_init__(self):
        for name in ("length", "breadth", "depth", "design_draft", "service_speed"):
            if getattr(self, name) <= 0:
                raise InvalidParameter(f"{name} must be positive")
        if self.hull_type not in ("single", "double"):
            raise InvalidParameter(f"hull_type must be 'single' or 'double', got {self.hull_type!r}")
        if self.hull_type == "double":
            if self.inner is None or self.h_db is None or self.h_db <= 0:
                raise InvalidParameter("double hull needs an inner layer and h_db > 0")
        elif self.inner is not None or self.h_db is not None:
            raise InvalidParameter("single hull must not define an inner layer or h_db")
        if self.max_pregrounding_draft is not None and self.max_pregrounding_draft > self.depth:
            raise InvalidParameter("max pre-grounding draft cannot exceed the depth")

    @property
    def is_double(self) -> bool:
        return self.hull_type == "double"

    def layers(self, inner_breached: bool) -> tuple[BottomLayer, ...]:
        """Resisting layers for the width formula; the inner bottom counts only
        once it is breached."""
        if inner_breached:
            if not self.is_double:
                raise SingleHullUnsupported("single-hull ship has no inner bottom")
            return (self.outer, self.inner)
        return (self.outer,)


@dataclass(frozen=True)
class ErrorModels:
    """Catalog of reported/measured-value error terms (all defaults from the
    underlying measurement literature)."""

    force: LognormalMedianCov = LognormalMedianCov(1.0, 0.10)
    speed: Normal = Normal(0.0, 0.24)                       # kn
    displacement: LognormalMedianCov = LognormalMedianCov(1.0, 0.025)
    damage_length: Normal = Normal(0.0, 5.0)                # m
    flow_good: LognormalMedianCov = LognormalMedianCov(1.0, 0.10)
    flow_poor: LognormalMedianCov = LognormalMedianCov(1.0, 0.30)
    draft: Normal = Normal(0.0, 0.25)                       # m
    ground_reaction: LognormalMedianCov = LognormalMedianCov(1.0, 0.10)
    water_depth: Normal = Normal(0.0, 0.75)                 # m
    survey_extent_good: LognormalMedianCov = LognormalMedianCov(1.0, 0.10)
    survey_extent_poor: LognormalMedianCov = LognormalMedianCov(1.0, 0.30)
    survey_location_good: Normal = Normal(0.0, 1.0)         # m
    survey_location_poor: Normal = Normal(0.0, 2.0)         # m


@dataclass(frozen=True)
class Modules:
    crashworthiness: bool = True
    hydraulic: bool = True
    hydrostatic: bool = True
    inspection: bool = True

    def __post_init__(self):
        if not any((self.crashworthiness, self.hydraulic, self.hydrostatic, self.inspection)):
            raise InvalidParameter("at least one module must be enabled")

    def only(self, name: str) -> "Modules":
        return Modules(**{m: m == name for m in
                          ("crashworthiness", "hydraulic", "hydrostatic", "inspection")})

    def without(self, name: str) -> "Modules":
        kwargs = {m: getattr(self, m) for m in
                  ("crashworthiness", "hydraulic", "hydrostatic", "inspection")}
        kwargs[name] = False
        return Modules(**kwargs)


@dataclass(frozen=True)
class PriorSet:
    """Root-node priors; unset entries fall back to ship-derived defaults."""

    displacement: Distribution | None = None   # M, t
    speed: Distribution | None = None          # V, kn
    damage_length: Distribution | None = None  # L_D, m
    water_depth: Distribution | None = None    # H, m
    draft_range: tuple[float, float] | None = None  # T_p plausible range, m


@dataclass(frozen=True)
class ModelConfig:
    added_mass_fraction: float = 0.05
    g: float = GRAVITY
    rho_water: float = 1025.0
    rho_oil: float = 900.0
    discharge_coefficient: Normal = Normal(0.625, 0.02)
    errors: ErrorModels = field(default_factory=ErrorModels)
    modules: Modules = field(default_factory=Modules)
    priors: PriorSet = field(default_factory=PriorSet)
    bins: dict[str, int] = field(default_factory=dict)  # per-node bin-count overrides
    samples_per_cell: int = 256
    seed: int = 0

    def __post_init__(self):
        if self.rho_water <= 0 or self.rho_oil <= 0:
            raise InvalidParameter("densities must be positive")
        if not 0 <= self.added_mass_fraction < 1:
            raise InvalidParameter("added mass fraction must lie in [0, 1)")

    def n_bins(self, node: str, default: int) -> int:
        return int(self.bins.get(node, default))


@dataclass(frozen=True)
class IncidentConfig:
    loading_condition: str = "loaded"               # LC
    tank_damage_length: float | None = None         # l_D, m
    tank_damage_length_sd: float = 0.0              # optional additive sd on l_D
    oil_level: float | None = None                  # h_o, m
    pressure_head: float | None = None              # h_w, m
    gm: float | None = None                         # damaged metacentric height, m
    displacement_damaged: float | None = None       # M', t
    displacement_damaged_uncertain: bool = False
    ground_reaction_bound: float = 10_000.0         # R prior upper bound, t
    flow_quality_prior: tuple[float, float] = (0.5, 0.5)   # (good, poor)
    visibility_prior: tuple[float, float] = (0.5, 0.5)     # (good, poor)

    def __post_init__(self):
        if self.loading_condition not in ("loaded", "ballast"):
            raise InvalidParameter("loading_condition must be 'loaded' or 'ballast'")
        if self.gm is not None and self.gm <= 0:
            raise InvalidParameter("damaged metacentric height must be positive")
        if self.ground_reaction_bound <= 0:
            raise InvalidParameter("ground reaction bound must be positive")
        for prior in (self.flow_quality_prior, self.visibility_prior):
            if len(prior) != 2 or abs(sum(prior) - 1.0) > 1e-9 or min(prior) < 0:
                raise InvalidParameter("two-state priors must be nonnegative and sum to 1")

    def validate_against(self, ship: ShipParticulars) -> None:
        if self.tank_damage_length is not None and self.tank_damage_length > ship.length:
            raise InvalidParameter("tank damage length exceeds the ship length")
        if self.oil_level is not None and self.oil_level > ship.depth:
            raise InvalidParameter("in-tank oil level exceeds the depth")


@dataclass(frozen=True)
class DamageStateSpec:
    """Discretization of the three damage parameters."""

    transverse_edges: tuple[float, ...]             # D_t over [0, B]
    location_edges: tuple[float, ...]               # Y_D over [-B/2, B/2]
    vertical_edges: tuple[float, ...]               # D_v over (0, 0.3 D]
    vertical_labels: tuple[str, ...]

    @classmethod
    def for_ship(cls, ship: ShipParticulars, width: float = 1.0) -> "DamageStateSpec":
        b = ship.breadth
        dt_edges = _width_edges(0.0, b, width)
        yd_edges = _width_edges(-b / 2.0, b / 2.0, width)
        top = 0.3 * ship.depth
        if ship.is_double:
            h = ship.h_db
            edges = [0.0, 0.75 * h, h]
            labels = ["OB", "IB0"]
            k = 1
            while edges[-1] < top - 1e-9:
                edges.append(min(h + k * 0.2 * h, top))
                labels.append(f"IB{k}")
                k += 1
        else:
            edges = list(_width_edges(0.0, top, width))
            labels = [f"P{i}" for i in range(len(edges) - 1)]
        return cls(
            transverse_edges=tuple(dt_edges),
            location_edges=tuple(yd_edges),
            vertical_edges=tuple(edges),
            vertical_labels=tuple(labels),
        )

    def ihb_yes_probability(self, label: str) -> float:
        """Inner-hull-breach probability for a vertical damage state."""
        fixed = {"OB": 0.0, "IB0": 0.0, "IB1": 0.7, "IB2": 0.9, "IB3": 0.95}
        if label in fixed:
            return fixed[label]
        if label.startswith("IB"):
            return 1.0
        raise SingleHullUnsupported(f"no inner-hull-breach probability for state {label!r}")


def _width_edges(lo: float, hi: float, width: float) -> list[float]:
    edges = list(np.arange(lo, hi, width))
    if hi - edges[-1] < 1e-9 * width:
        edges[-1] = hi
    else:
        edges.append(hi)
    return edges


# --- JSON round trips ----------------------------------------------------------

def ship_to_json(ship: ShipParticulars) -> dict:
    out: dict[str, Any] = {
        "length_m": ship.length,
        "breadth_m": ship.breadth,
        "depth_m": ship.depth,
        "design_draft_m": ship.design_draft,
        "service_speed_kn": ship.service_speed,
        "hull_type": ship.hull_type,
        "outer_bottom": _layer_to_json(ship.outer),
    }
    if ship.inner is not None:
        out["inner_bottom"] = _layer_to_json(ship.inner)
    if ship.h_db is not None:
        out["double_bottom_height_m"] = ship.h_db
    if ship.gm0 is not None:
        out["gm0_m"] = ship.gm0
    if ship.max_pregrounding_draft is not None:
        out["max_pregrounding_draft_m"] = ship.max_pregrounding_draft
    return out


def ship_from_json(data: dict) -> ShipParticulars:
    try:
        return ShipParticulars(
            length=float(data["length_m"]),
            breadth=float(data["breadth_m"]),
            depth=float(data["depth_m"]),
            design_draft=float(data["design_draft_m"]),
            service_speed=float(data["service_speed_kn"]),
            hull_type=data["hull_type"],
            outer=_layer_from_json(data["outer_bottom"]),
            inner=_layer_from_json(data["inner_bottom"]) if "inner_bottom" in data else None,
            h_db=float(data["double_bottom_height_m"]) if "double_bottom_height_m" in data else None,
            gm0=float(data["gm0_m"]) if "gm0_m" in data else None,
            max_pregrounding_draft=(
                float(data["max_pregrounding_draft_m"]) if "max_pregrounding_draft_m" in data else None
            ),
        )
    except KeyError as exc:
        raise InvalidParameter(f"ship config missing field {exc}") from None


def _layer_to_json(layer: BottomLayer) -> dict:
    return {"t_eq_m": layer.t_eq, "sigma0_pa": layer.sigma0, "eps_f": layer.eps_f}


def _layer_from_json(data: dict) -> BottomLayer:
    return BottomLayer(t_eq=float(data["t_eq_m"]), sigma0=float(data["sigma0_pa"]),
                       eps_f=float(data["eps_f"]))


def incident_to_json(inc: IncidentConfig) -> dict:
    return {
        "loading_condition": inc.loading_condition,
        "tank_damage_length_m": inc.tank_damage_length,
        "tank_damage_length_sd_m": inc.tank_damage_length_sd,
        "oil_level_m": inc.oil_level,
        "pressure_head_m": inc.pressure_head,
        "gm_m": inc.gm,
        "displacement_damaged_t": inc.displacement_damaged,
        "displacement_damaged_uncertain": inc.displacement_damaged_uncertain,
        "ground_reaction_bound_t": inc.ground_reaction_bound,
        "flow_quality_prior": list(inc.flow_quality_prior),
        "visibility_prior": list(inc.visibility_prior),
    }


def incident_from_json(data: dict) -> IncidentConfig:
    kwargs: dict[str, Any] = {}
    mapping = {
        "loading_condition": "loading_condition",
        "tank_damage_length_m": "tank_damage_length",
        "tank_damage_length_sd_m": "tank_damage_length_sd",
        "oil_level_m": "oil_level",
        "pressure_head_m": "pressure_head",
        "gm_m": "gm",
        "displacement_damaged_t": "displacement_damaged",
        "displacement_damaged_uncertain": "displacement_damaged_uncertain",
        "ground_reaction_bound_t": "ground_reaction_bound",
    }
    for key, attr in mapping.items():
        if key in data and data[key] is not None:
            kwargs[attr] = data[key]
    for key in ("flow_quality_prior", "visibility_prior"):
        if key in data and data[key] is not None:
            kwargs[key] = tuple(data[key])
    return IncidentConfig(**kwargs)


def model_to_json(model: ModelConfig) -> dict:
    err = model.errors
    return {
        "added_mass_fraction": model.added_mass_fraction,
        "g": model.g,
        "rho_water": model.rho_water,
        "rho_oil": model.rho_oil,
        "discharge_coefficient": spec_of(model.discharge_coefficient),
        "modules": {m: getattr(model.modules, m) for m in
                    ("crashworthiness", "hydraulic", "hydrostatic", "inspection")},
        "errors": {name: spec_of(getattr(err, name)) for name in (
            "force", "speed", "displacement", "damage_length", "flow_good", "flow_poor",
            "draft", "ground_reaction", "water_depth", "survey_extent_good",
            "survey_extent_poor", "survey_location_good", "survey_location_poor")},
        "priors": {
            "displacement": spec_of(model.priors.displacement) if model.priors.displacement else None,
            "speed": spec_of(model.priors.speed) if model.priors.speed else None,
            "damage_length": spec_of(model.priors.damage_length) if model.priors.damage_length else None,
            "water_depth": spec_of(model.priors.water_depth) if model.priors.water_depth else None,
            "draft_range": list(model.priors.draft_range) if model.priors.draft_range else None,
        },
        "bins": dict(model.bins),
        "samples_per_cell": model.samples_per_cell,
        "seed": model.seed,
    }


def model_from_json(data: dict) -> ModelConfig:
    kwargs: dict[str, Any] = {}
    for key in ("added_mass_fraction", "g", "rho_water", "rho_oil", "samples_per_cell", "seed"):
        if key in data and data[key] is not None:
            kwargs[key] = data[key]
    if data.get("discharge_coefficient"):
        kwargs["discharge_coefficient"] = make_distribution(data["discharge_coefficient"])
    if data.get("modules"):
        kwargs["modules"] = Modules(**data["modules"])
    if data.get("errors"):
        kwargs["errors"] = ErrorModels(**{k: make_distribution(v) for k, v in data["errors"].items()})
    priors = data.get("priors") or {}
    kwargs["priors"] = PriorSet(
        displacement=make_distribution(priors["displacement"]) if priors.get("displacement") else None,
        speed=make_distribution(priors["speed"]) if priors.get("speed") else None,
        damage_length=make_distribution(priors["damage_length"]) if priors.get("damage_length") else None,
        water_depth=make_distribution(priors["water_depth"]) if priors.get("water_depth") else None,
        draft_range=tuple(priors["draft_range"]) if priors.get("draft_range") else None,
    )
    if data.get("bins"):
        kwargs["bins"] = {str(k): int(v) for k, v in data["bins"].items()}
    return ModelConfig(**kwargs)


def default_speed_prior(ship: ShipParticulars) -> Distribution:
    """Impact speed prior: Beta(5, 2) stretched over [0, service speed]."""
    return ScaledBeta(alpha=5.0, beta=2.0, lo=0.0, hi=ship.service_speed)


def default_damage_length_prior(ship: ShipParticulars) -> Distribution:
    """Damage length prior surrogate calibrated to a mean of 0.22 L, matching
    the accident-statistics histograms this replaces."""
    return TruncExp.from_mean(0.22 * ship.length, 0.0, ship.length)
