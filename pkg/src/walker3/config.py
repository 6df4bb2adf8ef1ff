"""Run configuration shared by the CLI and the experiment scripts."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .classify import Grid
from .jets import DEFAULT_ORDER


@dataclass(frozen=True)
class RunConfig:
    zero_tol: float = 1e-9
    ode_tol: float = 1e-10
    residual_tol: float = 1e-8
    jet_order: int = DEFAULT_ORDER
    grid: Grid = field(default_factory=Grid)
    cotton_sign: int = 1

    def __post_init__(self):
        for name in ("zero_tol", "ode_tol", "residual_tol"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.jet_order < 4:
            raise ValueError("jet_order must be at least 4")
        if self.cotton_sign not in (1, -1):
            raise ValueError("cotton_sign must be +1 or -1")

    def updated(self, **overrides) -> "RunConfig":
        """Copy with the non-None overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_json(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        g = self.grid
        out["grid"] = [g.nx, g.ny, g.x0, g.x1, g.y0, g.y1]
        return out


_CASTS = {
    "zero_tol": float,
    "ode_tol": float,
    "residual_tol": float,
    "jet_order": int,
    "grid": Grid.parse,
    "cotton_sign": int,
}


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment.  Unknown keys are an error."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CASTS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _CASTS[key](value)
    return out


def load_config(path) -> RunConfig:
    return RunConfig(**parse_config_text(Path(path).read_text()))
