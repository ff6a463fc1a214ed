"""Run-configuration schema (JSON document, unknown keys rejected)."""

from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import Config
from ..models import EventSpec, ModelSpec
from ..utils import parse_grid

Rows = List[List[float]]


def _rectangular(rows: Rows, name: str) -> Rows:
    if not rows or any(len(r) != len(rows[0]) for r in rows) or not rows[0]:
        raise ValueError(f"{name} must be a non-empty rectangular array of rows")
    return rows


class EventConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    w: List[float]
    a: float
    b: Optional[float] = None

    @model_validator(mode="after")
    def _check(self):
        if not any(x != 0 for x in self.w):
            raise ValueError("event.w must be nonzero")
        if self.b is not None and not self.b > self.a:
            raise ValueError("event.b must exceed event.a")
        return self


class McConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_paths: int = Field(default=Config.N_PATHS, ge=1)
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    A: Rows
    B: Rows
    Sigma: Rows
    x0: List[float]
    T: float = Field(gt=0)
    penalty: Optional[Rows] = None
    event: Optional[EventConfig] = None
    p0: Optional[float] = Field(default=None, gt=0, lt=1)
    p1: Optional[Union[float, str]] = None
    dt: Optional[float] = Field(default=None, gt=0)
    N: Optional[int] = Field(default=None, ge=1)
    mc: McConfig = Field(default_factory=McConfig)

    @field_validator("A", "B", "Sigma", "penalty")
    @classmethod
    def _matrix(cls, rows, info):
        return rows if rows is None else _rectangular(rows, info.field_name)

    @field_validator("p1")
    @classmethod
    def _probability_or_grid(cls, value):
        if value is None:
            return value
        if isinstance(value, str):
            grid = parse_grid(value) if ':' in value else [float(value)]
            if not all(0.0 < p < 1.0 for p in grid):
                raise ValueError("p1 grid must lie inside (0, 1)")
            return value if ':' in value else grid[0]
        if not 0.0 < value < 1.0:
            raise ValueError("p1 must lie in (0, 1)")
        return value

    @model_validator(mode="after")
    def _shapes(self):
        n = len(self.A)
        if len(self.A[0]) != n:
            raise ValueError(f"A must be square, got {n}x{len(self.A[0])}")
        if len(self.B) != n:
            raise ValueError(f"B must have {n} rows")
        if len(self.Sigma) != n or len(self.Sigma[0]) != n:
            raise ValueError(f"Sigma must be {n}x{n}")
        if len(self.x0) != n:
            raise ValueError(f"x0 must have length {n}")
        m = len(self.B[0])
        if self.penalty is not None and (len(self.penalty) != m or len(self.penalty[0]) != m):
            raise ValueError(f"penalty must be {m}x{m}")
        if self.event is not None and len(self.event.w) != n:
            raise ValueError(f"event.w must have length {n}")
        if self.dt is not None and self.N is not None:
            raise ValueError("give dt or N, not both")
        return self

    def to_model(self) -> ModelSpec:
        return ModelSpec(
            A=np.array(self.A), B=np.array(self.B), Sigma=np.array(self.Sigma),
            x0=np.array(self.x0), T=self.T,
            penalty=None if self.penalty is None else np.array(self.penalty),
        )

    def to_event(self) -> Optional[EventSpec]:
        if self.event is None:
            return None
        return EventSpec(w=np.array(self.event.w), a=self.event.a, b=self.event.b)

    def p1_grid(self) -> List[float]:
        if self.p1 is None:
            return []
        return parse_grid(self.p1) if isinstance(self.p1, str) else [self.p1]

    def discretization(self) -> Optional[dict]:
        if self.dt is not None:
            return {'dt': self.dt}
        if self.N is not None:
            return {'steps': self.N}
        return None
