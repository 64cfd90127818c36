"""State-spec parsing and the computations behind the service endpoints.

State mini-grammar: ``kind:param[:dim]`` with kinds coherent, cat+, cat-,
squeezed (complex param as ``a+bi`` or ``r@phase``) and fock (integer).
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic, fock
from ._version import VERSION
from .fock import ModeState, TruncationError, mode_moments, parity_of, tensor
from .interferometer import TAU_BALANCED, InterferometerSpec, mz_generator
from .loss import LossSpec, apply_loss, lossy_qfi, lossy_qfi_phase_scan
from .qfi import qfi_mixed, qfi_pure

DISCREPANCY_WARN = 1e-4
_KINDS = ("coherent", "cat+", "cat-", "squeezed", "fock")


class StateSpecError(ValueError):
    """Unparseable or unusable state specification."""


@dataclass(frozen=True)
class StateSpec:
    kind: str
    param: complex | int
    dim: int | None


def parse_complex(token: str) -> complex:
    token = token.strip()
    if not token:
        raise StateSpecError("empty number")
    try:
        if "@" in token:
            mag, _, ang = token.partition("@")
            value = cmath.rect(float(mag), float(ang))
        else:
            value = complex(token.replace("i", "j"))
    except ValueError as exc:
        raise StateSpecError(f"bad complex number {token!r} (use a+bi or r@phase)") from exc
    if not cmath.isfinite(value):
        raise StateSpecError(f"non-finite number {token!r}")
    return value


def parse_state_spec(spec: str) -> StateSpec:
    parts = spec.strip().split(":")
    if len(parts) not in (2, 3):
        raise StateSpecError(f"bad state spec {spec!r} (expected kind:param[:dim])")
    kind = parts[0]
    if kind not in _KINDS:
        raise StateSpecError(f"unknown state kind {kind!r} (choose from {', '.join(_KINDS)})")
    dim = None
    if len(parts) == 3:
        try:
            dim = int(parts[2])
        except ValueError as exc:
            raise StateSpecError(f"bad dim {parts[2]!r} in {spec!r}") from exc
        if dim < 1:
            raise StateSpecError(f"dim must be >= 1 in {spec!r}")
    if kind == "fock":
        try:
            param: complex | int = int(parts[1])
        except ValueError as exc:
            raise StateSpecError(f"fock level must be an integer, got {parts[1]!r}") from exc
        if param < 0:
            raise StateSpecError("fock level must be nonnegative")
    else:
        param = parse_complex(parts[1])
    return StateSpec(kind, param, dim)


def build_mode_state(spec: StateSpec, dim_override: int | None = None) -> ModeState:
    dim = spec.dim if spec.dim is not None else dim_override
    try:
        if spec.kind == "coherent":
            return fock.coherent(spec.param, dim)
        if spec.kind == "cat+":
            return fock.even_cat(spec.param, dim)
        if spec.kind == "cat-":
            return fock.odd_cat(spec.param, dim)
        if spec.kind == "squeezed":
            return fock.squeezed_vacuum(spec.param, dim)
        return fock.fock_state(spec.param, dim)
    except TruncationError:
        raise
    except ValueError as exc:
        raise StateSpecError(str(exc)) from exc


def _closed_moments(spec: StateSpec) -> tuple[float, complex]:
    if spec.kind == "coherent":
        return analytic.coherent_moments(spec.param)
    if spec.kind == "cat+":
        return analytic.even_cat_moments(spec.param)
    if spec.kind == "cat-":
        return analytic.odd_cat_moments(spec.param)
    if spec.kind == "squeezed":
        return analytic.squeezed_moments(spec.param)
    return analytic.fock_moments(spec.param)


# phase response of Arg(<a^2>) per unit of parameter phase, and its value
# at zero parameter phase
_PHASE_RESPONSE = {"coherent": (2, 0.0), "cat+": (2, 0.0), "cat-": (2, 0.0), "squeezed": (1, math.pi)}


def _respec_phase(spec: StateSpec, phi: float) -> StateSpec:
    if spec.kind == "fock":
        raise StateSpecError("cannot phase-scan a fock state")
    return StateSpec(spec.kind, abs(spec.param) * cmath.exp(1j * phi), spec.dim)


def _pmap(fn, items, workers: int | None):
    if workers is None:
        workers = min(os.cpu_count() or 1, 8)
    workers = max(1, min(workers, len(items)))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _rel_diff(num: float, ref: float | None) -> float | None:
    if ref is None:
        return None
    return abs(num - ref) / max(abs(ref), 1e-300)


def _lossy_family(pa: StateSpec, pb: StateSpec) -> tuple[float, float] | None:
    """(|alpha|, phase offset) when inputs match the lossy closed-form family."""
    if pa.kind != "coherent" or pb.kind != "cat+":
        return None
    if abs(abs(pa.param) - abs(pb.param)) > 1e-9:
        return None
    offset = analytic.wrap_angle(cmath.phase(pa.param) - 0.5 * math.pi - cmath.phase(pb.param))
    return abs(pb.param), offset


# ---------------------------------------------------------------------------
# single-point report


def single_qfi_report(
    a: str,
    b: str,
    tau: float = TAU_BALANCED,
    loss_t: float | None = None,
    dim: int | None = None,
) -> dict:
    pa, pb = parse_state_spec(a), parse_state_spec(b)
    sa, sb = build_mode_state(pa, dim), build_mode_state(pb, dim)
    state = tensor(sa, sb)
    gen = mz_generator(InterferometerSpec(tau=tau), state.dims)
    if loss_t is None:
        res = qfi_pure(state, gen)
    else:
        res = qfi_mixed(apply_loss(state, LossSpec(loss_t)), gen)
    mom_a, mom_b = mode_moments(sa), mode_moments(sb)
    parity_b = parity_of(sb)
    balanced = abs(math.sin(tau) - 1.0) < 1e-12 and abs(math.cos(tau)) < 1e-12

    f_analytic = f_matched = None
    if parity_b is not None and balanced:
        inputs = analytic.AnalyticInputs(mom_a.nbar, mom_b.nbar, mom_a.a2, mom_b.a2)
        f_matched = analytic.qfi_phase_matched(inputs)
        if loss_t is None:
            f_analytic = analytic.qfi_even_odd(inputs)
    if loss_t is not None and balanced:
        fam = _lossy_family(pa, pb)
        if fam is not None:
            f_analytic = analytic.lossy_qfi_closed_form(
                analytic.LossParams(fam[0], fam[1], loss_t)
            )
    pmc = analytic.phase_match_check(mom_a.a2, mom_b.a2)
    rel = _rel_diff(res.value, f_analytic)
    return {
        "f_numeric": res.value,
        "f_analytic": f_analytic,
        "rel_discrepancy": rel,
        "f_matched": f_matched,
        "matches_matched": (
            None if f_matched is None or loss_t is not None
            else abs(res.value - f_matched) <= 1e-6 * max(1.0, abs(f_matched))
        ),
        "pmc_residual": pmc.residual,
        "pmc_satisfied": pmc.satisfied,
        "pmc_vacuous": pmc.vacuous,
        "term1": res.term1,
        "term2": res.term2,
        "support_rank": res.support_rank,
        "parity_b": parity_b,
        "nbar_a": mom_a.nbar,
        "nbar_b": mom_b.nbar,
        "a2_abs": abs(mom_a.a2),
        "a2_arg": cmath.phase(mom_a.a2) if abs(mom_a.a2) > 0 else 0.0,
        "b2_abs": abs(mom_b.a2),
        "b2_arg": cmath.phase(mom_b.a2) if abs(mom_b.a2) > 0 else 0.0,
        "dim_a": sa.dim,
        "dim_b": sb.dim,
        "tau": tau,
        "loss_T": loss_t,
    }


# ---------------------------------------------------------------------------
# scans


def _base_meta(seed: int, **kw) -> dict:
    meta = {"version": VERSION, "seed": seed}
    meta.update({k: v for k, v in kw.items() if v is not None})
    return meta


def phase_scan(
    a: str,
    b: str,
    scan: str = "a-phase",
    points: int = 180,
    phi_min: float = 0.0,
    phi_max: float = math.pi,
    tau: float = TAU_BALANCED,
    loss_t: float | None = None,
    dim: int | None = None,
    seed: int = 0,
    workers: int | None = None,
) -> dict:
    if scan not in ("a-phase", "b-phase"):
        raise StateSpecError("scan must be a-phase or b-phase")
    if points < 2:
        raise StateSpecError("points must be >= 2")
    if not phi_max > phi_min:
        raise StateSpecError("need phi_max > phi_min")
    pa, pb = parse_state_spec(a), parse_state_spec(b)
    scanned, fixed = (pa, pb) if scan == "a-phase" else (pb, pa)
    if scanned.kind == "fock":
        raise StateSpecError("cannot phase-scan a fock state")
    step = (phi_max - phi_min) / points
    grid = phi_min + step * np.arange(points)

    columns = ["phi", "f_numeric", "f_analytic", "rel_discrepancy", "trunc_warn"]
    k_resp, c0 = _PHASE_RESPONSE[scanned.kind]
    _, fixed_m2 = _closed_moments(fixed)
    predicted = None
    if abs(fixed_m2) > 0:
        period = 2.0 * math.pi / k_resp
        predicted = ((cmath.phase(fixed_m2) + math.pi - c0) / k_resp) % period

    if loss_t is None:
        fixed_state = build_mode_state(fixed, dim)
        mom_fixed = mode_moments(fixed_state)

        def point(phi: float) -> tuple[float, float | None]:
            s = build_mode_state(_respec_phase(scanned, phi), dim)
            pair = (s, fixed_state) if scan == "a-phase" else (fixed_state, s)
            state = tensor(*pair)
            gen = mz_generator(InterferometerSpec(tau=tau), state.dims)
            f_num = qfi_pure(state, gen).value
            f_ana = None
            if abs(math.sin(tau) - 1.0) < 1e-12 and abs(math.cos(tau)) < 1e-12:
                mom_s = mode_moments(s)
                mom_a, mom_b = (mom_s, mom_fixed) if scan == "a-phase" else (mom_fixed, mom_s)
                pb_state = s if scan == "b-phase" else fixed_state
                if parity_of(pb_state) is not None:
                    f_ana = analytic.qfi_even_odd(
                        analytic.AnalyticInputs(mom_a.nbar, mom_b.nbar, mom_a.a2, mom_b.a2)
                    )
            return f_num, f_ana

        results = _pmap(point, list(grid), workers)
        scanned_dim = build_mode_state(_respec_phase(scanned, 0.0), dim).dim
        dims_used = (
            (scanned_dim, fixed_state.dim) if scan == "a-phase" else (fixed_state.dim, scanned_dim)
        )
    else:
        fam = _lossy_family(pa, pb)
        if fam is None:
            raise StateSpecError(
                "lossy phase scans need the coherent:(i alpha e^{i phi}) x cat+:alpha family "
                "with equal magnitudes"
            )
        mag = fam[0]
        if scan == "a-phase":
            offsets = grid - 0.5 * math.pi - cmath.phase(pb.param)
        else:
            offsets = cmath.phase(pa.param) - 0.5 * math.pi - grid
        f_nums = lossy_qfi_phase_scan(mag, loss_t, offsets, dim)
        results = [
            (float(f), analytic.lossy_qfi_closed_form(analytic.LossParams(mag, off, loss_t)))
            for f, off in zip(f_nums, offsets)
        ]
        d_used = dim if dim is not None else fock.auto_dim(mag * mag)
        dims_used = (d_used, d_used)

    rows = []
    for phi, (f_num, f_ana) in zip(grid, results):
        rel = _rel_diff(f_num, f_ana)
        warn = 0 if rel is None or rel <= DISCREPANCY_WARN else 1
        rows.append([float(phi), f_num, f_ana, rel, warn])
    nums = [r[1] for r in rows]
    anas = [r[2] for r in rows]
    argmax_num = float(grid[int(np.argmax(nums))])
    footer = {
        "argmax_phi_numeric": argmax_num,
        "argmax_phi_analytic": (
            None if any(x is None for x in anas) else float(grid[int(np.argmax(anas))])
        ),
        "predicted_phi": predicted,
        "residual_from_predicted": (
            None if predicted is None else abs(analytic.wrap_angle(argmax_num - predicted))
        ),
        "grid_step": step,
    }
    meta = _base_meta(
        seed, a=a, b=b, scan=scan, points=points, tau=tau, loss_T=loss_t,
        dim_a=dims_used[0], dim_b=dims_used[1],
    )
    return {"meta": meta, "columns": columns, "rows": rows, "footer": footer}


def loss_scan(
    a: str,
    b: str,
    t_min: float = 0.05,
    t_max: float = 1.0,
    points: int = 20,
    dim: int | None = None,
    seed: int = 0,
    workers: int | None = None,
) -> dict:
    if points < 2:
        raise StateSpecError("points must be >= 2")
    if not (0.0 < t_min <= t_max <= 1.0):
        raise StateSpecError("need 0 < t_min <= t_max <= 1")
    pa, pb = parse_state_spec(a), parse_state_spec(b)
    fam = _lossy_family(pa, pb)
    if fam is None:
        raise StateSpecError(
            "loss scans need the coherent:(i alpha e^{i phi}) x cat+:alpha family "
            "with equal magnitudes"
        )
    mag, offset = fam
    x = mag * mag
    nbar_a = x
    n_total = x * (1.0 + math.tanh(x))
    r_c = analytic.critical_reflection(nbar_a, n_total)
    grid = np.linspace(t_min, t_max, points)

    def point(t: float) -> float:
        return lossy_qfi(mag, offset, float(t), dim)

    f_nums = _pmap(point, list(grid), workers)
    columns = [
        "transmission", "f_numeric", "f_closed_form", "f_matched", "f_small_loss",
        "shot_noise", "beats_shot_noise", "rel_discrepancy", "trunc_warn",
    ]
    rows = []
    for t, f_num in zip(grid, f_nums):
        t = float(t)
        f_closed = analytic.lossy_qfi_closed_form(analytic.LossParams(mag, offset, t))
        f_matched = analytic.lossy_qfi_matched(analytic.LossParams(mag, 0.0, t))
        f_small = analytic.lossy_qfi_small_loss(nbar_a, n_total, 1.0 - t)
        rel = _rel_diff(f_num, f_closed)
        rows.append([
            t, f_num, f_closed, f_matched, f_small, n_total,
            1 if f_num > n_total else 0, rel,
            0 if rel is None or rel <= DISCREPANCY_WARN else 1,
        ])
    d_used = dim if dim is not None else fock.auto_dim(x)
    meta = _base_meta(seed, a=a, b=b, points=points, t_min=t_min, t_max=t_max,
                      dim_a=d_used, dim_b=d_used)
    footer = {
        "critical_reflection": r_c,
        "critical_transmission": 1.0 - r_c,
        "shot_noise": n_total,
        "phase_offset": offset,
    }
    return {"meta": meta, "columns": columns, "rows": rows, "footer": footer}


def heatmap(
    family: str = "squeezed",
    n_min: float = 0.5,
    n_max: float = 24.0,
    points: int = 50,
    seed: int = 0,
) -> dict:
    if family not in ("squeezed", "cat"):
        raise StateSpecError("family must be squeezed or cat")
    if points < 2:
        raise StateSpecError("points must be >= 2")
    if not n_max > n_min >= 0:
        raise StateSpecError("need n_max > n_min >= 0")
    formula = (
        analytic.squeezed_coherent_matched_qfi if family == "squeezed"
        else analytic.cat_coherent_matched_qfi
    )
    g = np.linspace(n_min, n_max, points)
    h = float(g[1] - g[0])
    rows = []
    values = np.empty((points, points))
    for i, na in enumerate(g):
        for j, nb in enumerate(g):
            n_tot = na + nb
            ratio = formula(float(na), float(nb)) / (n_tot * n_tot)
            values[i, j] = ratio
            rows.append([float(na), float(nb), float(ratio)])
    diag_n, diag_offset, diag_within = [], [], []
    for s in range(2 * points - 1):
        ii = np.arange(max(0, s - points + 1), min(points, s + 1))
        if ii.size < 3:
            continue
        jj = s - ii
        k = int(np.argmax(values[ii, jj]))
        off = abs(float(g[ii[k]] - g[jj[k]]))
        diag_n.append(float(g[ii[0]] + g[jj[0]]))
        diag_offset.append(off)
        diag_within.append(1 if off <= 2.0 * h + 1e-12 else 0)
    meta = _base_meta(seed, family=family, n_min=n_min, n_max=n_max, points=points)
    footer = {
        "grid_step": h,
        "antidiagonal_n_total": diag_n,
        "antidiagonal_argmax_offset": diag_offset,
        "antidiagonal_within_one_cell": diag_within,
    }
    return {"meta": meta, "columns": ["nbar_a", "nbar_b", "ratio"], "rows": rows, "footer": footer}
