"""Serialization: symbol JSON, trace CSV, report JSON, SVG polylines.

All emitters are deterministic for a fixed input: keys are sorted, floats
are printed through repr (shortest round-trip form), row order is fixed.
The symbol JSON schema:

    {"m": int, "kind": "bp_psi" | "entrywise",
     "v": [[re, im], ...] rows,            # bp_psi
     "factors": [{"a": [re, im], "xi": [re, im], "P": [[[re, im], ...]]}],
     "psi": {"num": coeff-grid, "den": coeff-grid},
     "entries": [[{"num": coeffs, "den": coeffs}, ...]]}   # entrywise

Exact Gaussian-rational data uses ["p/q", "r/s"] string pairs and
round-trips losslessly.
"""

from __future__ import annotations

import json
from typing import IO

import numpy as np

from .errors import NoData
from .exact import GaussianRational, is_exact
from .polys import BivarPoly, CPoly, CRatFun
from .symbols import (BlaschkeFactorSpec, BlaschkePotapov, MatrixSymbol,
                      ScalarBivarRational, bp_build, compose_psi)


def _c2j(x) -> list:
    if is_exact(x):
        return x.to_json()
    x = complex(x)
    return [x.real, x.imag]


def _j2c(pair):
    if isinstance(pair[0], str):
        return GaussianRational.from_json(pair)
    return complex(pair[0], pair[1])


def _poly_to_json(p: CPoly) -> list:
    return [_c2j(c) for c in p.coeffs]


def _poly_from_json(data) -> CPoly:
    return CPoly([_j2c(c) for c in data])


def _grid_to_json(b: BivarPoly) -> list:
    if b.backend == "exact":
        return [[_c2j(c) for c in row] for row in b.coeffs]
    return [[_c2j(c) for c in row] for row in b.coeffs]


def _grid_from_json(data) -> BivarPoly:
    return BivarPoly([[_j2c(c) for c in row] for row in data])


def matrix_to_json(M: np.ndarray) -> list:
    return [[_c2j(x) for x in row] for row in np.asarray(M, dtype=complex)]


def matrix_from_json(data) -> np.ndarray:
    return np.array([[complex(*x) if not isinstance(x[0], str)
                      else complex(GaussianRational.from_json(x)) for x in row]
                     for row in data])


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------

def symbol_to_json(obj, psi: ScalarBivarRational | None = None,
                   bp: BlaschkePotapov | None = None) -> dict:
    """Serialize a symbol; pass (psi, bp) to keep the structured bp_psi form."""
    if bp is not None and psi is not None:
        return {
            "kind": "bp_psi",
            "m": bp.m,
            "v": matrix_to_json(bp.v),
            "factors": [{"a": _c2j(f.a), "xi": _c2j(f.xi),
                         "P": matrix_to_json(f.P)} for f in bp.factors],
            "psi": {"num": _grid_to_json(psi.num), "den": _grid_to_json(psi.den)},
        }
    F: MatrixSymbol = obj
    return {
        "kind": "entrywise",
        "m": F.m,
        "entries": [[{"num": _poly_to_json(e.num), "den": _poly_to_json(e.den)}
                     for e in row] for row in F.entries],
    }


def symbol_from_json(data: dict):
    """Inverse of symbol_to_json; returns (F, psi, bp) with None placeholders."""
    if data["kind"] == "bp_psi":
        v = matrix_from_json(data["v"])
        factors = [BlaschkeFactorSpec(_scalar(f["a"]), _scalar(f["xi"]),
                                      matrix_from_json(f["P"]))
                   for f in data["factors"]]
        bp = bp_build(v, factors)
        psi = ScalarBivarRational(_grid_from_json(data["psi"]["num"]),
                                  _grid_from_json(data["psi"]["den"]))
        return compose_psi(psi, bp), psi, bp
    entries = [[CRatFun(_poly_from_json(e["num"]), _poly_from_json(e["den"]))
                for e in row] for row in data["entries"]]
    return MatrixSymbol(entries), None, None


def _scalar(pair):
    v = _j2c(pair)
    return complex(v) if is_exact(v) else v


# ---------------------------------------------------------------------------
# traces and reports
# ---------------------------------------------------------------------------

def trace_to_csv(trace, fh: IO[str]):
    """Columns theta, branch_index, re, im; theta-major, branch-minor order."""
    fh.write("theta,branch_index,re,im\n")
    for i, th in enumerate(trace.thetas):
        for j in range(trace.m):
            z = trace.branches[j, i]
            fh.write(f"{float(th)!r},{j},{float(z.real)!r},{float(z.imag)!r}\n")


def rle_encode(arr: np.ndarray) -> list:
    """Run-length encoding of a flattened label grid: [value, count] pairs."""
    flat = np.asarray(arr).ravel()
    out = []
    if flat.size == 0:
        return out
    cur, count = int(flat[0]), 1
    for v in flat[1:]:
        v = int(v)
        if v == cur:
            count += 1
        else:
            out.append([cur, count])
            cur, count = v, 1
    out.append([cur, count])
    return out


def rle_decode(pairs: list, shape) -> np.ndarray:
    flat = np.concatenate([np.full(c, v, dtype=np.int8) for v, c in pairs]) \
        if pairs else np.zeros(0, dtype=np.int8)
    return flat.reshape(shape)


def domain_report_to_json(report) -> dict:
    return {
        "bbox": list(report.bbox),
        "nx": report.nx,
        "ny": report.ny,
        "conditions": {
            "boundary_matches_curve": bool(report.conditions[0]),
            "interior_winding_one": bool(report.conditions[1]),
            "exterior_winding_zero": bool(report.conditions[2]),
        },
        "connectivity_estimate": report.connectivity_estimate,
        "interior_count": report.interior_count,
        "exterior_count": report.exterior_count,
        "component_count": report.boundary.component_count,
        "labels_rle": rle_encode(report.labels),
        "details": {k: v for k, v in report.details.items()
                    if isinstance(v, (int, float, str, list, bool))},
    }


def params_to_json(params) -> dict:
    nodes = sorted(params.nodes, key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    return {
        "dimM": params.dimM,
        "Lambda": matrix_to_json(params.Lambda),
        "R": matrix_to_json(params.R),
        "C": matrix_to_json(params.C),
        "nodes": [[z.real, z.imag] for z in nodes],
        "area": params.area,
        "image_basis": params.image_basis,
    }


def nodes_to_json(nw) -> dict:
    return {
        "nodes": [_c2j(z) for z in nw.nodes],
        "weights": [_c2j(w) for w in nw.weights],
        "orders": list(nw.orders),
    }


def section_report_to_json(rep) -> dict:
    return {
        "N": rep.N,
        "m": rep.m,
        "rank": rep.rank,
        "singular_values": [float(s) for s in rep.singular_values],
        "identity_residual": rep.identity_residual,
    }


def write_json(data: dict, fh: IO[str]):
    json.dump(data, fh, sort_keys=True, indent=1, default=_json_default)
    fh.write("\n")


def _json_default(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if is_exact(x):
        return x.to_json()
    raise TypeError(f"not JSON serializable: {type(x)}")


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

def emit_svg(trace, fh: IO[str], mask=None, stroke: str = "#1b6ca8"):
    """One polyline per geometric component; viewBox is the bounding box
    inflated by 10%, coordinates fixed to 6 decimals."""
    polys = trace.component_polylines()
    if not polys or sum(len(p) for p in polys) == 0:
        raise NoData("empty trace")
    x0, x1, y0, y1 = trace.bounding_box(0.10)
    w, h = x1 - x0, y1 - y0
    fh.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    fh.write(f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'viewBox="{x0:.6f} {-y1:.6f} {w:.6f} {h:.6f}">\n')
    if mask is not None:
        fh.write(_mask_rects(mask))
    for poly in polys:
        pts = " ".join(f"{z.real:.6f},{-z.imag:.6f}" for z in poly)
        fh.write(f'<polyline fill="none" stroke="{stroke}" '
                 f'stroke-width="{w / 400:.6f}" points="{pts}"/>\n')
    fh.write("</svg>\n")


def _mask_rects(report) -> str:
    """Interior cells of a DomainReport as one SVG path (coarse)."""
    x0, x1, y0, y1 = report.bbox
    dx, dy = (x1 - x0) / report.nx, (y1 - y0) / report.ny
    step = max(1, report.nx // 128)
    sub = report.labels[::step, ::step] == 1
    parts = []
    for iy, ix in zip(*np.nonzero(sub)):
        x = x0 + ix * step * dx
        y = y0 + iy * step * dy
        parts.append(f"M{x:.4f} {-y - step * dy:.4f}h{step * dx:.4f}"
                     f"v{step * dy:.4f}h{-step * dx:.4f}Z")
    return ('<path fill="#cfe8f7" stroke="none" d="' + "".join(parts) + '"/>\n') \
        if parts else ""
