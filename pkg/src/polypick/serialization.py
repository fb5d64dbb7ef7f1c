"""JSON encoding of problems and reports.

Complex numbers serialize as ``[re, im]`` pairs; floats round-trip losslessly
through Python's shortest-repr (at most 17 significant digits).  Schemas are
versioned with ``schema_version`` and documented in the README.
"""

from __future__ import annotations

import numpy as np

from .classify import Classification
from .geodesic import GeodesicParams, InversionDiagnostics
from .hyperbolic import BlaschkeProduct, MobiusMap, PickProblem, ProblemTransform
from .magic import RationalInnerFunction
from .solver import (
    CoordinateInterpolant,
    ExtremalScaleInfo,
    Residuals,
    SolveReport,
)

SCHEMA_VERSION = 1


def _opt_float(value):
    return None if value is None else float(value)


def encode_complex(value) -> list:
    value = complex(value)
    return [value.real, value.imag]


def decode_complex(pair) -> complex:
    return complex(pair[0], pair[1])


def encode_cvector(values) -> list:
    return [encode_complex(v) for v in np.asarray(values, dtype=complex).ravel()]


def decode_cvector(pairs) -> np.ndarray:
    return np.array([decode_complex(p) for p in pairs], dtype=complex)


def problem_to_dict(p: PickProblem, options: dict | None = None) -> dict:
    data = {
        "schema_version": SCHEMA_VERSION,
        "n": p.n,
        "nodes": [encode_cvector(row) for row in p.nodes],
        "targets": encode_cvector(p.targets),
    }
    if options:
        data["options"] = options
    return data


def problem_from_dict(data: dict) -> PickProblem:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"unsupported schema_version {data.get('schema_version')!r}"
        )
    nodes = np.array([decode_cvector(row) for row in data["nodes"]])
    targets = decode_cvector(data["targets"])
    if nodes.shape != (3, int(data["n"])):
        raise ValueError("node array shape does not match n")
    return PickProblem(nodes, targets)


def blaschke_to_dict(b: BlaschkeProduct) -> dict:
    return {"factor": encode_complex(b.factor), "zeros": encode_cvector(b.zeros)}


def blaschke_from_dict(data: dict) -> BlaschkeProduct:
    return BlaschkeProduct(
        decode_complex(data["factor"]), tuple(decode_cvector(data["zeros"]))
    )


def geodesic_to_dict(g: GeodesicParams) -> dict:
    return {
        "x": encode_complex(g.x),
        "y": encode_complex(g.y),
        "alpha": encode_cvector(g.alpha),
        "t": [float(v) for v in g.t],
        "omega": encode_cvector(g.omega),
    }


def geodesic_from_dict(data: dict) -> GeodesicParams:
    return GeodesicParams(
        decode_complex(data["x"]),
        decode_complex(data["y"]),
        decode_cvector(data["alpha"]),
        np.array(data["t"], dtype=float),
        decode_cvector(data["omega"]),
    )


def interpolant_to_dict(f) -> dict:
    if isinstance(f, RationalInnerFunction):
        return {"type": "rational_inner", **f.to_dict()}
    if isinstance(f, CoordinateInterpolant):
        return {
            "type": "coordinate_blaschke",
            "coordinate": f.coordinate,
            "blaschke": blaschke_to_dict(f.blaschke),
        }
    raise TypeError(f"unknown interpolant type {type(f)!r}")


def interpolant_from_dict(data: dict):
    if data["type"] == "rational_inner":
        return RationalInnerFunction.from_dict(data)
    if data["type"] == "coordinate_blaschke":
        return CoordinateInterpolant(
            int(data["coordinate"]), blaschke_from_dict(data["blaschke"])
        )
    raise ValueError(f"unknown interpolant type {data['type']!r}")


def transform_to_dict(t: ProblemTransform) -> dict:
    return {
        "disc_params": encode_cvector([m.param for m in t.disc_maps]),
        "disc_prefactors": encode_cvector([m.prefactor for m in t.disc_maps]),
        "target_param": encode_complex(t.target_map.param),
        "target_prefactor": encode_complex(t.target_map.prefactor),
    }


def transform_from_dict(data: dict) -> ProblemTransform:
    params = decode_cvector(data["disc_params"])
    prefs = decode_cvector(data["disc_prefactors"])
    return ProblemTransform(
        tuple(MobiusMap(p, f) for p, f in zip(params, prefs)),
        MobiusMap(
            decode_complex(data["target_param"]),
            decode_complex(data["target_prefactor"]),
        ),
    )


def classification_to_dict(c: Classification) -> dict:
    return {
        "degenerate": c.degenerate,
        "degenerate_witness": list(c.degenerate_witness) if c.degenerate_witness else None,
        "dimension": c.dimension,
        "witness_coordinate": c.witness_coordinate,
        "witness_pair": list(c.witness_pair) if c.witness_pair else None,
        "reduced_indices": list(c.reduced_indices) if c.reduced_indices else None,
        "boundary_case": c.boundary_case,
        "notes": list(c.notes),
    }


def classification_from_dict(data: dict) -> Classification:
    return Classification(
        degenerate=bool(data["degenerate"]),
        degenerate_witness=tuple(data["degenerate_witness"]) if data["degenerate_witness"] else None,
        dimension=data["dimension"],
        witness_coordinate=data["witness_coordinate"],
        witness_pair=tuple(data["witness_pair"]) if data["witness_pair"] else None,
        reduced_indices=tuple(data["reduced_indices"]) if data["reduced_indices"] else None,
        boundary_case=bool(data["boundary_case"]),
        notes=tuple(data["notes"]),
    )


def report_to_dict(r: SolveReport) -> dict:
    diag = None
    if r.diagnostics is not None:
        diag = {
            "residual_norm": float(r.diagnostics.residual_norm),
            "iterations": int(r.diagnostics.iterations),
            "starts_used": int(r.diagnostics.starts_used),
            "sign_gauge": int(r.diagnostics.sign_gauge),
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "n": r.n,
        "problem": problem_to_dict(r.problem),
        "normalized_problem": problem_to_dict(r.normalized_problem),
        "transform": transform_to_dict(r.transform),
        "classification": classification_to_dict(r.classification),
        "geodesic": geodesic_to_dict(r.geodesic) if r.geodesic else None,
        "geodesic_variables": list(r.geodesic_variables) if r.geodesic_variables else None,
        "interpolant": interpolant_to_dict(r.interpolant),
        "phase": encode_complex(r.phase),
        "composed_blaschke": blaschke_to_dict(r.composed_blaschke),
        "extremal_scale": {
            "scale": float(r.extremal_scale_info.scale),
            "extremal_targets": encode_cvector(r.extremal_scale_info.extremal_targets),
            "phase": encode_complex(r.extremal_scale_info.phase),
        },
        "residuals": {
            "interpolation": [float(v) for v in r.residuals.interpolation],
            "left_inverse": _opt_float(r.residuals.left_inverse),
            "sup_norm_sample": _opt_float(r.residuals.sup_norm_sample),
            "convex_combination": _opt_float(r.residuals.convex_combination),
        },
        "diagnostics": diag,
    }


def report_from_dict(data: dict) -> SolveReport:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"unsupported schema_version {data.get('schema_version')!r}"
        )
    diag = None
    if data["diagnostics"] is not None:
        d = data["diagnostics"]
        diag = InversionDiagnostics(
            d["residual_norm"], d["iterations"], d["starts_used"], d["sign_gauge"]
        )
    scale = data["extremal_scale"]
    res = data["residuals"]
    return SolveReport(
        problem=problem_from_dict(data["problem"]),
        normalized_problem=problem_from_dict(data["normalized_problem"]),
        transform=transform_from_dict(data["transform"]),
        classification=classification_from_dict(data["classification"]),
        geodesic=geodesic_from_dict(data["geodesic"]) if data["geodesic"] else None,
        geodesic_variables=tuple(data["geodesic_variables"])
        if data["geodesic_variables"]
        else None,
        interpolant=interpolant_from_dict(data["interpolant"]),
        phase=decode_complex(data["phase"]),
        composed_blaschke=blaschke_from_dict(data["composed_blaschke"]),
        extremal_scale_info=ExtremalScaleInfo(
            float(scale["scale"]),
            tuple(decode_cvector(scale["extremal_targets"])),
            decode_complex(scale["phase"]),
        ),
        residuals=Residuals(
            interpolation=tuple(res["interpolation"]),
            left_inverse=res["left_inverse"],
            sup_norm_sample=res["sup_norm_sample"],
            convex_combination=res["convex_combination"],
        ),
        diagnostics=diag,
    )
