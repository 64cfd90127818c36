"""FastAPI service wrapping the QFI engine."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import engine
from .._version import VERSION
from ..fock import TruncationError
from .models import (
    HealthResponse,
    HeatmapRequest,
    LossScanRequest,
    PhaseScanRequest,
    QfiReport,
    QfiRequest,
    ScanResponse,
)

app = FastAPI(title="mzqfi", version=VERSION)


@app.exception_handler(engine.StateSpecError)
async def _spec_error(request: Request, exc: engine.StateSpecError):
    return JSONResponse(status_code=400, content={"detail": {"kind": "usage", "message": str(exc)}})


@app.exception_handler(TruncationError)
async def _truncation_error(request: Request, exc: TruncationError):
    return JSONResponse(
        status_code=500, content={"detail": {"kind": "truncation", "message": str(exc)}}
    )


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=VERSION)


@app.post("/qfi", response_model=QfiReport)
def qfi(req: QfiRequest) -> QfiReport:
    report = engine.single_qfi_report(req.a, req.b, req.tau, req.loss_T, req.dim)
    return QfiReport(**report)


@app.post("/scan/phase", response_model=ScanResponse)
def scan_phase(req: PhaseScanRequest) -> ScanResponse:
    return ScanResponse(
        **engine.phase_scan(
            req.a, req.b, req.scan, req.points, req.phi_min, req.phi_max,
            req.tau, req.loss_T, req.dim, req.seed, req.workers,
        )
    )


@app.post("/scan/loss", response_model=ScanResponse)
def scan_loss(req: LossScanRequest) -> ScanResponse:
    return ScanResponse(
        **engine.loss_scan(
            req.a, req.b, req.t_min, req.t_max, req.points, req.dim, req.seed, req.workers
        )
    )


@app.post("/heatmap", response_model=ScanResponse)
def heatmap(req: HeatmapRequest) -> ScanResponse:
    return ScanResponse(
        **engine.heatmap(req.family, req.n_min, req.n_max, req.points, req.seed)
    )
