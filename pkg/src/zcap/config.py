"""Central defaults for every tolerance and budget used by the package."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field, fields


@dataclass(frozen=True)
class Config:
    """All numerical tolerances and search budgets in one place.

    Library functions accept ``cfg`` and fall back to ``DEFAULT``; no call
    site hard-codes its own tolerance.
    """

    # tolerances
    membership_tol: float = 1e-9
    eval_rtol: float = 1e-12
    sup_grid_factor: int = 8
    rounding_tol: float = 1e-6
    exchange_tol: float = 1e-8
    interp_tol: float = 1e-6
    fit_rcond: float = 1e-8
    # budgets
    max_iters: int = 200
    max_k: int = 1_000_000
    max_pairs_window: int = 4000
    max_base_degree: int = 400
    max_bideg: int = 40
    max_deg: int = 6
    n_cap: int = 24
    oracle_max_deg: int = 8
    oracle_coeff_bound: int = 5
    pool_size: int = 64
    max_square_power: int = 64
    fit_grid: int = 2000
    eval_grid: int = 100_000
    # small-norm construction
    delta: float = 0.15
    # fekete
    multistarts: int = 8
    ascent_tol: float = 1e-10
    seed: int = 0
    # output
    out_format: str = "json"
    precision: int = 17
    threads: int = field(default_factory=lambda: int(os.environ.get("ZCAP_THREADS", "1")))

    def __post_init__(self):
        for name in ("max_iters", "max_k", "max_bideg", "max_deg", "n_cap", "multistarts",
                     "fit_grid", "eval_grid", "pool_size", "threads", "max_pairs_window",
                     "max_base_degree", "max_square_power", "oracle_max_deg"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")
        if not 6 <= self.precision <= 17:
            raise ValueError("precision must lie in 6..17 digits")
        if self.out_format not in ("json", "csv"):
            raise ValueError("out_format must be json or csv")

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_file(cls, path, base: "Config | None" = None) -> "Config":
        """Read a ``key = value`` file (``#`` comments allowed) over ``base``."""
        base = base or cls()
        types = {f.name: type(getattr(base, f.name)) for f in fields(base)}
        changes = {}
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key = value")
                key, value = (s.strip() for s in line.split("=", 1))
                if key not in types:
                    raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
                value = value.strip("\"'")
                changes[key] = int(float(value)) if types[key] is int else types[key](value)
        return base.replace(**changes)


DEFAULT = Config()
