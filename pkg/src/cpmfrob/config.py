"""Dataclass configs for the experiment scripts."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields


@dataclass(frozen=True)
class Tolerances:
    law: float = 1e-8
    doubling: float = 1e-8
    phase: float = 1e-9
    purity: float = 1e-8
    eig: float = 1e-9
    choi_round_trip: float = 1e-10


@dataclass
class IsometrySweep:
    n_samples: int = 200
    max_k: int = 3
    max_in_dim: int = 4
    max_out_dim: int = 12
    seed: int = 101


@dataclass
class MubSweep:
    dims: tuple[int, ...] = (2, 3)
    weights: tuple[float, ...] = (0.0, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 1.0)
    tol: float = 1e-8


@dataclass
class CorpusConfig:
    out_dir: str = "corpus"
    seed: int = 7
    spider_dims: tuple[int, ...] = (1, 2, 3, 4)
    matrix_dims: tuple[int, ...] = (2, 3)
    cyclic_orders: tuple[int, ...] = (2, 3, 4)
    n_mixtures: int = 4
    n_channels: int = 4
    tolerances: Tolerances = field(default_factory=Tolerances)


def to_dict(cfg) -> dict:
    return asdict(cfg)


def add_arguments(parser, cfg_cls) -> None:
    """Expose the scalar fields of a config dataclass as --flags."""
    defaults = cfg_cls()
    for f in fields(cfg_cls):
        value = getattr(defaults, f.name)
        if isinstance(value, (int, float, str)) and not isinstance(value, bool):
            parser.add_argument("--" + f.name.replace("_", "-"), type=type(value), default=value)


def from_namespace(cfg_cls, ns):
    known = {f.name for f in fields(cfg_cls)}
    return cfg_cls(**{k: v for k, v in vars(ns).items() if k in known})
