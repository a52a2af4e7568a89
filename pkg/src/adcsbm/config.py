"""Dataclass configs and their JSON wire format (versioned, schema 1)."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Optional

from .errors import ConfigError, InvalidParams
from .features import EdgeFeatureParams, FeatureParams, MembershipMode
from .sbm import GraphParams, PowerLawParams

SCHEMA_VERSION = 1

METHOD_NAMES = ("spectral", "kmeans", "label_prop", "nearest_centroid")
TASK_NAMES = ("unsupervised", "semisupervised")


@dataclass(frozen=True)
class SplitParams:
    """Few-shot split sizes for semi-supervised runs."""

    shots: int = 20
    val_per_class: int = 30

    def __post_init__(self):
        if self.shots < 1:
            raise InvalidParams(f"shots must be >= 1, got {self.shots}")
        if self.val_per_class < 0:
            raise InvalidParams(f"val_per_class must be >= 0, got {self.val_per_class}")


@dataclass(frozen=True)
class GeneratorConfig:
    """Full parameterization of one generated dataset."""

    graph: GraphParams = field(default_factory=GraphParams)
    features: FeatureParams = field(default_factory=FeatureParams)
    edge_features: Optional[EdgeFeatureParams] = None
    seed: int = 0

    def __post_init__(self):
        self.features.validate_against(self.graph.k)
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidParams("seed must fit in 64 bits")

    def to_dict(self) -> dict:
        d = {
            "schema": SCHEMA_VERSION,
            "seed": int(self.seed),
            "graph": {
                "n": self.graph.n,
                "k": self.graph.k,
                "d": self.graph.d,
                "d_out": self.graph.d_out,
                "power_law": {
                    "d_min": self.graph.power_law.d_min,
                    "d_max": self.graph.power_law.d_max,
                    "alpha": self.graph.power_law.alpha,
                },
            },
            "features": {
                "s": self.features.s,
                "k_f": self.features.k_f,
                "mode": self.features.mode.value,
                "sigma": self.features.sigma,
                "sigma_c": self.features.sigma_c,
            },
            "edge_features": None,
        }
        if self.edge_features is not None:
            d["edge_features"] = {
                "s_e": self.edge_features.s_e,
                "sigma_e": self.edge_features.sigma_e,
                "x_e": self.edge_features.x_e,
            }
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorConfig":
        try:
            data = dict(data)
        except TypeError as exc:
            raise ConfigError(f"config must be a mapping: {exc}") from exc
        schema = data.get("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema version {schema!r}")
        try:
            g = dict(data.get("graph", {}))
            pl = dict(g.pop("power_law", {}))
            f = dict(data.get("features", {}))
            ef = data.get("edge_features")
            graph = GraphParams(power_law=PowerLawParams(**pl), **g)
            features = FeatureParams(**f)
            edge_features = EdgeFeatureParams(**ef) if ef is not None else None
            return cls(
                graph=graph,
                features=features,
                edge_features=edge_features,
                seed=int(data.get("seed", 0)),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad config: {exc}") from exc


# Sweepable parameter paths.  "graph.d_out_over_d" is virtual: it sets the
# external fraction of a node's degree, i.e. d_out = ratio * d / (k - 1).
SWEEPABLE = (
    "graph.d_out",
    "graph.d",
    "graph.d_out_over_d",
    "graph.power_law.d_max",
    "features.sigma_c",
    "features.s",
)


def apply_parameter(config: GeneratorConfig, path: str, value: float) -> GeneratorConfig:
    """Return a copy of ``config`` with the swept parameter set to ``value``."""
    if path == "graph.d_out":
        graph = replace(config.graph, d_out=float(value))
    elif path == "graph.d":
        graph = replace(config.graph, d=float(value))
    elif path == "graph.d_out_over_d":
        if not 0 <= value <= 1:
            raise InvalidParams(f"d_out/d ratio must lie in [0, 1], got {value}")
        graph = replace(
            config.graph, d_out=float(value) * config.graph.d / (config.graph.k - 1)
        )
    elif path == "graph.power_law.d_max":
        pl = replace(config.graph.power_law, d_max=float(value))
        graph = replace(config.graph, power_law=pl)
    elif path == "features.sigma_c":
        return replace(config, features=replace(config.features, sigma_c=float(value)))
    elif path == "features.s":
        return replace(config, features=replace(config.features, s=int(value)))
    else:
        raise ConfigError(f"unknown swept parameter {path!r}; known: {SWEEPABLE}")
    return replace(config, graph=graph)


@dataclass(frozen=True)
class ScenarioConfig:
    """One sweep: a base config, a parameter grid, methods, and a task."""

    name: str
    base: GeneratorConfig
    parameter: str
    grid: tuple
    methods: tuple
    task: str = "unsupervised"
    trials: int = 20
    split: SplitParams = field(default_factory=SplitParams)

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(v) for v in self.grid))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.grid:
            raise ConfigError("grid must be nonempty")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.task not in TASK_NAMES:
            raise ConfigError(f"task must be one of {TASK_NAMES}, got {self.task!r}")
        unknown = [m for m in self.methods if m not in METHOD_NAMES]
        if unknown:
            raise ConfigError(f"unknown methods {unknown}; known: {METHOD_NAMES}")
        if not self.methods:
            raise ConfigError("methods must be nonempty")
        # fail fast if any grid value is unusable
        for v in self.grid:
            apply_parameter(self.base, self.parameter, v)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "name": self.name,
            "base": self.base.to_dict(),
            "parameter": self.parameter,
            "grid": list(self.grid),
            "methods": list(self.methods),
            "task": self.task,
            "trials": self.trials,
            "split": {"shots": self.split.shots, "val_per_class": self.split.val_per_class},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        data = dict(data)
        schema = data.get("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema version {schema!r}")
        try:
            return cls(
                name=str(data.get("name", "custom")),
                base=GeneratorConfig.from_dict(data["base"]),
                parameter=data["parameter"],
                grid=tuple(data["grid"]),
                methods=tuple(data.get("methods", ("spectral", "kmeans"))),
                task=data.get("task", "unsupervised"),
                trials=int(data.get("trials", 20)),
                split=SplitParams(**data.get("split", {})),
            )
        except KeyError as exc:
            raise ConfigError(f"missing scenario field {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad scenario config: {exc}") from exc
