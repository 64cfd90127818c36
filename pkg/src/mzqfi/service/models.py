"""Pydantic request/response models for the QFI service."""

from __future__ import annotations

import math
from typing import Any, Literal

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class QfiRequest(BaseModel):
    a: str = Field(description="port-A state spec, e.g. coherent:2i")
    b: str = Field(description="port-B state spec, e.g. cat+:1")
    tau: float = math.pi / 2
    loss_T: float | None = Field(default=None, ge=0.0, le=1.0)
    dim: int | None = Field(default=None, ge=1)


class QfiReport(BaseModel):
    f_numeric: float
    f_analytic: float | None
    rel_discrepancy: float | None
    f_matched: float | None
    matches_matched: bool | None
    pmc_residual: float | None
    pmc_satisfied: bool
    pmc_vacuous: bool
    term1: float
    term2: float
    support_rank: int
    parity_b: str | None
    nbar_a: float
    nbar_b: float
    a2_abs: float
    a2_arg: float
    b2_abs: float
    b2_arg: float
    dim_a: int
    dim_b: int
    tau: float
    loss_T: float | None


class PhaseScanRequest(BaseModel):
    a: str
    b: str
    scan: Literal["a-phase", "b-phase"] = "a-phase"
    points: int = Field(default=180, ge=2)
    phi_min: float = 0.0
    phi_max: float = math.pi
    tau: float = math.pi / 2
    loss_T: float | None = Field(default=None, ge=0.0, le=1.0)
    dim: int | None = Field(default=None, ge=1)
    seed: int = 0
    workers: int | None = Field(default=None, ge=1)


class LossScanRequest(BaseModel):
    a: str
    b: str
    t_min: float = Field(default=0.05, gt=0.0, le=1.0)
    t_max: float = Field(default=1.0, gt=0.0, le=1.0)
    points: int = Field(default=20, ge=2)
    dim: int | None = Field(default=None, ge=1)
    seed: int = 0
    workers: int | None = Field(default=None, ge=1)


class HeatmapRequest(BaseModel):
    family: Literal["squeezed", "cat"] = "squeezed"
    n_min: float = 0.5
    n_max: float = 24.0
    points: int = Field(default=50, ge=2)
    seed: int = 0


class ScanResponse(BaseModel):
    meta: dict[str, Any]
    columns: list[str]
    rows: list[list[float | None]]
    footer: dict[str, Any]
