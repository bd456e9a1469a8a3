"""Command-line workbench: load a metric file, run check suites, write JSON reports.

Metric files are JSON objects::

    {"kind": "walker", "a": "u*x", "b": "0", "c": "y^2",
     "points": [[0, 0, 0, 0]],
     "sample": {"count": 5, "box": [[-1, 1], [-1, 1], [-1, 1], [-1, 1]], "seed": 7},
     "degree": 4, "tolerances": {"rel": 1e-9, "classify": 1e-8}}

``kind`` is one of ``walker`` (fields ``a``, ``b``, ``c``), ``theta`` (field
``theta``), ``omega`` (field ``omega``, with ``u, v`` read as ``r, s``) or
``general`` (field ``g``, a 4x4 array of expressions).  At least one of
``points`` and ``sample`` must be given.

Exit status: 0 when every check passes, 1 when any check fails, 2 for usage
or metric-file errors.
"""

from __future__ import annotations

import argparse
import json
import math
import platform
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from . import spinor as sp
from .classify import classify_weyl_minus, classify_weyl_plus, default_scale, verify_jcf
from .curvature import (
    characteristic_coefficients,
    curvature_summary,
    generic_curvature,
    integrate_geodesic,
    literal_table_audit,
    spectrum_residual,
    weyl_blocks_generic,
    weyl_plus_spectrum,
)
from .expr import ParseError, as_expr
from .heavenly import (
    cross_check_theta,
    double_walker_identities,
    lsr_parallel_residual,
    para_kahler_analysis,
    second_distribution_residual,
    second_heavenly_residual,
)
from .jet import MAX_DEGREE
from .metric import (
    AnyMetric,
    Point4,
    ProductMetric,
    WalkerMetric,
    general_metric,
    product_from_omega,
    walker_from_theta,
    walker_swap,
)

KINDS = ("walker", "theta", "omega", "general")
SUITES = ("curvature", "spinor", "classify", "heavenly")
DEGREE_RANGE = (2, min(6, MAX_DEGREE))
# jet degree each suite needs from the metric data, per kind
_NEEDED_DEGREE = {"heavenly": {"theta": 4, "omega": 4}}

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class SpecError(ValueError):
    """Invalid metric file; the message starts with the offending field path."""


@dataclass(frozen=True)
class MetricSpec:
    kind: str
    metric: AnyMetric
    points: tuple[Point4, ...]
    sample: dict | None
    degree: int = 4
    tol_rel: float = 1e-9
    tol_classify: float = 1e-8

    def sample_points(self, seed: int | None = None) -> list[Point4]:
        pts = list(self.points)
        if self.sample:
            s = self.sample["seed"] if seed is None else seed
            pts += [sample_point(self.sample["box"], s, k) for k in range(self.sample["count"])]
        return pts


def sample_point(box: Sequence[Sequence[float]], seed: int, index: int) -> Point4:
    """Point ``index`` of the seeded stream; independent of every other index."""
    rng = np.random.default_rng([seed, index])
    lo, hi = np.asarray(box, dtype=float).T
    return Point4.of(rng.uniform(lo, hi))


# loading -----------------------------------------------------------------------------


def _require(doc: dict, key: str, path: str = ""):
    if key not in doc:
        raise SpecError(f"{path}{key}: required field missing")
    return doc[key]


def _expr_field(doc: dict, key: str, path: str = ""):
    """Parse the expression at ``doc[key]``; errors carry the field path."""
    val = _require(doc, key, path)
    if isinstance(val, (int, float)) and not isinstance(val, bool):
        val = repr(float(val))
    if not isinstance(val, str):
        raise SpecError(f"{path}{key}: expected an expression string")
    try:
        return as_expr(val)
    except ParseError as exc:
        raise SpecError(f"{path}{key}: {exc}") from exc


def _number(val, path: str) -> float:
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise SpecError(f"{path}: expected a finite number")
    return float(val)


def _build_metric(doc: dict, kind: str) -> AnyMetric:
    if kind == "walker":
        return WalkerMetric(*(_expr_field(doc, k) for k in ("a", "b", "c")))
    if kind == "theta":
        return walker_from_theta(_expr_field(doc, "theta"))
    if kind == "omega":
        return product_from_omega(_expr_field(doc, "omega"))
    rows = _require(doc, "g")
    if not isinstance(rows, list) or len(rows) != 4 or any(not isinstance(r, list) or len(r) != 4 for r in rows):
        raise SpecError("g: expected a 4x4 array of expressions")
    return general_metric([[_expr_field({f"[{j}]": rows[i][j]}, f"[{j}]", f"g[{i}]") for j in range(4)] for i in range(4)])


def _load_points(doc: dict) -> tuple[Point4, ...]:
    pts = doc.get("points", [])
    if not isinstance(pts, list):
        raise SpecError("points: expected a list of 4-vectors")
    out = []
    for k, p in enumerate(pts):
        if not isinstance(p, list) or len(p) != 4:
            raise SpecError(f"points[{k}]: expected four coordinates")
        out.append(Point4.of([_number(t, f"points[{k}][{i}]") for i, t in enumerate(p)]))
    return tuple(out)


def _load_sample(doc: dict) -> dict | None:
    s = doc.get("sample")
    if s is None:
        return None
    if not isinstance(s, dict):
        raise SpecError("sample: expected an object")
    count = _require(s, "count", "sample.")
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise SpecError("sample.count: expected an integer >= 1")
    box = _require(s, "box", "sample.")
    if not isinstance(box, list) or len(box) != 4:
        raise SpecError("sample.box: expected four intervals")
    ivs = []
    for i, iv in enumerate(box):
        if not isinstance(iv, list) or len(iv) != 2:
            raise SpecError(f"sample.box[{i}]: expected [low, high]")
        lo, hi = (_number(t, f"sample.box[{i}]") for t in iv)
        if not lo < hi:
            raise SpecError(f"sample.box[{i}]: interval is empty")
        ivs.append((lo, hi))
    seed = s.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise SpecError("sample.seed: expected a non-negative integer")
    return {"count": count, "box": ivs, "seed": seed}


def parse_spec(doc: Any) -> MetricSpec:
    if not isinstance(doc, dict):
        raise SpecError("<root>: expected an object")
    kind = _require(doc, "kind")
    if kind not in KINDS:
        raise SpecError(f"kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    metric = _build_metric(doc, kind)
    points = _load_points(doc)
    sample = _load_sample(doc)
    if not points and sample is None:
        raise SpecError("points: give explicit points or a sample block")
    degree = doc.get("degree", 4)
    if isinstance(degree, bool) or not isinstance(degree, int) or not DEGREE_RANGE[0] <= degree <= DEGREE_RANGE[1]:
        raise SpecError(f"degree: expected an integer in [{DEGREE_RANGE[0]}, {DEGREE_RANGE[1]}]")
    tols = doc.get("tolerances", {})
    if not isinstance(tols, dict):
        raise SpecError("tolerances: expected an object")
    rel = _number(tols.get("rel", 1e-9), "tolerances.rel")
    cls = _number(tols.get("classify", 1e-8), "tolerances.classify")
    if rel <= 0 or cls <= 0:
        raise SpecError("tolerances: values must be positive")
    return MetricSpec(kind, metric, points, sample, degree, rel, cls)


def load_spec(path: str | Path) -> MetricSpec:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"<root>: not valid JSON ({exc.msg} at offset {exc.pos})") from exc
    return parse_spec(doc)


# checks ------------------------------------------------------------------------------


@dataclass
class PointChecks:
    """Named residuals at one point, each compared with its own threshold."""

    residuals: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    marginal: bool = False

    def add(self, name: str, value: float, tol: float) -> None:
        value = float(value)
        self.residuals[name] = {"value": value, "tol": tol, "pass": bool(value <= tol)}

    def require(self, name: str, ok: bool) -> None:
        self.residuals[name] = {"value": 0.0 if ok else 1.0, "tol": 0.0, "pass": bool(ok)}

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.residuals.values())


def _rel(diff, ref) -> float:
    return float(np.max(np.abs(diff))) / max(1.0, float(np.max(np.abs(ref))))


def _walker_curvature(m: WalkerMetric, p: Point4, spec: MetricSpec, out: PointChecks) -> None:
    s = curvature_summary(m, p)
    gc = generic_curvature(m, p)
    tol = spec.tol_rel
    out.add("christoffel_oracle", _rel(s.christoffels - gc.christoffels.gamma, gc.christoffels.gamma), tol)
    out.add("riemann_oracle", _rel(s.riemann.R_down - gc.riemann.R_down, gc.riemann.R_down), tol)
    out.add("riemann_updown_oracle", _rel(s.riemann.R_updown - gc.riemann.R_updown, gc.riemann.R_updown), tol)
    out.add("ricci_oracle", _rel(s.ricci - gc.ricci, gc.ricci), tol)
    out.add("scalar_oracle", abs(s.S - gc.S) / max(1.0, abs(gc.S)), tol)
    out.add("einstein_oracle", _rel(s.einstein - gc.einstein, gc.einstein), tol)
    out.add("weyl_oracle", _rel(s.weyl - gc.weyl, gc.weyl), tol)
    wb = weyl_blocks_generic(m, p, frame="walker")
    out.add("weyl_plus_oracle", _rel(s.W_plus - wb.W_plus, wb.W_plus), tol)
    out.add("weyl_minus_oracle", _rel(s.W_minus - wb.W_minus, wb.W_minus), tol)
    out.add("z_block_oracle", _rel(s.Z - wb.Z, wb.Z), tol)
    scale = s.scale or 1.0
    ev = weyl_plus_spectrum(wb.W_plus)
    out.add("weyl_plus_spectrum", spectrum_residual(wb.W_plus, s.S) / scale, spec.tol_classify)
    unit = np.array([-s.S / 6, s.S / 12, s.S / 12]) / scale
    out.add(
        "weyl_plus_char_poly",
        float(np.max(np.abs(characteristic_coefficients(wb.W_plus / scale)[1:] - np.poly(unit)[1:]))),
        spec.tol_classify,
    )
    out.add("endomorphism_trace", abs(wb.trace + s.S / 2) / max(1.0, abs(s.S)), tol)
    sw = curvature_summary(walker_swap(m), p.swapped())
    out.add("walker_swap_scalar", abs(sw.S - s.S) / max(1.0, abs(s.S)), tol)
    out.add(
        "walker_swap_spectrum",
        float(np.max(np.abs(weyl_plus_spectrum(sw.W_plus) - weyl_plus_spectrum(s.W_plus)))) / scale,
        spec.tol_classify,
    )
    out.data["scalars"] = {"S": s.S, "A": s.A, "B": s.B, "eigenvalues": ev.tolist()}
    mismatches = [
        {"table": e.table, "index": list(e.index), "literal": e.literal, "oracle": e.oracle}
        for e in literal_table_audit(m, p, rel_tol=tol)
    ]
    if mismatches:
        out.data["literal_vs_oracle"] = mismatches


def _generic_curvature(m: AnyMetric, p: Point4, spec: MetricSpec, out: PointChecks) -> None:
    gc = generic_curvature(m, p)
    R = gc.riemann.R_down
    tol = spec.tol_rel
    out.add("riemann_antisymmetry", _rel(R + R.transpose(1, 0, 2, 3), R) + _rel(R + R.transpose(0, 1, 3, 2), R), tol)
    out.add("riemann_pair_symmetry", _rel(R - R.transpose(2, 3, 0, 1), R), tol)
    out.add("first_bianchi", _rel(R + R.transpose(0, 2, 3, 1) + R.transpose(0, 3, 1, 2), R), tol)
    out.add("ricci_symmetry", _rel(gc.ricci - gc.ricci.T, gc.ricci), tol)
    out.add("weyl_traceless", _rel(np.einsum("ac,abcd->bd", gc.metric.g_inv, gc.weyl), gc.weyl), tol)
    wb = weyl_blocks_generic(m, p, frame="auto")
    out.add("endomorphism_trace", abs(wb.trace + gc.S / 2) / max(1.0, abs(gc.S)), tol)
    scalars = {"S": gc.S, "det_g": gc.metric.det_g}
    if isinstance(m, ProductMetric):
        scalars["eigenvalues"] = weyl_plus_spectrum(wb.W_plus).tolist()
    out.data["scalars"] = scalars


def _spinor(m: WalkerMetric, p: Point4, spec: MetricSpec, out: PointChecks) -> None:
    s = curvature_summary(m, p)
    sc = sp.spinor_curvature_from_summary(s)
    tol = spec.tol_rel
    ref = max(1.0, sc.scale)
    out.add("psi_tilde_0_1", max(abs(sc.psi_t[0]), abs(sc.psi_t[1])) / ref, tol)
    out.add("psi_tilde_2", abs(sc.psi_t[2] - s.S / 12) / ref, tol)
    out.add("phi_first_column", float(np.max(np.abs(sc.phi[:, 0]))) / ref, tol)
    out.add("lambda", abs(sc.lam + s.S / 24) / ref, tol)
    out.add("wps", float(np.max(np.abs(sp.wps_residual(sc)))) / ref, tol)
    orc = sp.spinor_curvature_oracle(m, p, source="generic")
    out.add("conjugation_oracle", orc.components.max_abs_diff(sc) / ref, tol)
    out.add("conjugation_display", _rel(orc.C_plus - orc.C_plus_display, orc.C_plus_display), tol)
    gc = generic_curvature(m, p)
    rec = sp.reconstruct_riemann(sc, s.abc)
    out.add("reconstruction", _rel(rec.R_down - gc.riemann.R_down, gc.riemann.R_down), tol)
    out.data["spinor"] = sc.as_dict()


def _classify(m: WalkerMetric, p: Point4, spec: MetricSpec, out: PointChecks) -> None:
    s = curvature_summary(m, p)
    tol = spec.tol_classify
    wb = weyl_blocks_generic(m, p, frame="walker")
    scale = default_scale(s.W_plus, s.S)
    cls = classify_weyl_plus(s.S, s.A, s.B, scale, tol)
    jcf = verify_jcf(wb.W_plus, cls, tol)
    out.require("jordan_structure", jcf.ok)
    sw = curvature_summary(walker_swap(m), p.swapped())
    cls_sw = classify_weyl_plus(sw.S, sw.A, sw.B, default_scale(sw.W_plus, sw.S), tol)
    if not (cls.marginal or cls_sw.marginal):
        out.require("walker_swap_case", cls_sw.case == cls.case)
    out.marginal |= cls.marginal
    sc = sp.spinor_curvature_from_summary(s)
    asd = classify_weyl_minus(sc.psi, tol)
    sd = classify_weyl_minus(sc.psi_t, tol)
    out.data["classification"] = {
        "case": cls.case.value,
        "jordan_form": cls.jcf_label,
        "marginal": cls.marginal,
        "discriminant": cls.discriminant,
        "measured_eigenvalues": list(jcf.eigenvalues),
        "asd_pattern": asd.label,
        "sd_pattern": sd.label,
    }
    if jcf.details:
        out.data["classification"]["details"] = jcf.details


def _walker_heavenly(m: WalkerMetric, p: Point4, spec: MetricSpec, out: PointChecks) -> None:
    tol = spec.tol_rel
    s = curvature_summary(m, p)
    ref = max(1.0, s.scale, abs(s.A))
    lsr = lsr_parallel_residual(m, p)
    lsr_zero = max(map(abs, lsr.values)) <= tol * max(1.0, *map(abs, s.abc))
    out.add(
        "lsr_derivative_factors",
        max(abs(lsr.factors[0] - lsr.r1 / 2), abs(lsr.factors[1] - lsr.r2 / 2), lsr.transverse),
        tol * max(1.0, abs(lsr.r1), abs(lsr.r2)),
    )
    if lsr_zero:
        out.flags.append("parallel-spinor")
        out.add("lsr_scalar", abs(s.S) / ref, tol)
        out.add("lsr_B", abs(s.B) / ref, tol)
    if m.is_theta:
        cc = cross_check_theta(m.theta, p, tol)
        for k, v in cc.residuals.items():
            out.add(f"theta_{k}", v, tol)
        out.data["second_heavenly_residual"] = second_heavenly_residual(m.theta, p)
    closed = second_distribution_residual(m, p)
    generic = second_distribution_residual(m, p, mode="generic")
    nref = max(1.0, float(np.max(np.abs(generic.nabla3))), float(np.max(np.abs(generic.nabla4))))
    out.add(
        "second_distribution_oracle",
        max(float(np.max(np.abs(closed.nabla3 - generic.nabla3))), float(np.max(np.abs(closed.nabla4 - generic.nabla4)))) / nref,
        tol,
    )
    out.data["lsr_residuals"] = list(lsr.values)
    out.data["second_distribution_residual"] = closed.max_abs
    if lsr_zero and closed.max_abs <= tol * nref:
        out.flags.append("double-walker")
        dw = double_walker_identities(m, p, tol)
        for k, v in dw.residuals.items():
            out.add(f"double_walker_{k}", v, tol)
        sc = sp.spinor_curvature_from_summary(s)
        out.add("right_flat_S", abs(s.S) / ref, tol)
        out.add("right_flat_A", abs(s.A) / ref, tol)
        out.add("right_flat_B", abs(s.B) / ref, tol)
        out.add("right_flat_phi", float(np.max(np.abs(sc.phi))) / ref, tol)


def _omega_heavenly(m: ProductMetric, p: Point4, spec: MetricSpec, out: PointChecks) -> None:
    rep = para_kahler_analysis(m, p, spec.tol_rel)
    for k, ok in rep.checks.items():
        out.require(k, ok)
    out.data["para_kahler"] = {
        "det_D": rep.det_D,
        "first_heavenly_residual": rep.first_heavenly_residual,
        "omega": dict(rep.omega),
        "einstein_mixing": rep.einstein_mixing,
        "plane_residuals": list(rep.plane_residuals),
        "w_plus_type": rep.w_plus_type,
    }


Runner = Callable[[Any, Point4, MetricSpec, PointChecks], None]

_RUNNERS: dict[tuple[str, str], Runner] = {}
for _kind in ("walker", "theta"):
    _RUNNERS[(_kind, "curvature")] = _walker_curvature
    _RUNNERS[(_kind, "spinor")] = _spinor
    _RUNNERS[(_kind, "classify")] = _classify
    _RUNNERS[(_kind, "heavenly")] = _walker_heavenly
_RUNNERS[("omega", "curvature")] = _generic_curvature
_RUNNERS[("omega", "heavenly")] = _omega_heavenly
_RUNNERS[("general", "curvature")] = _generic_curvature


def suites_for(spec: MetricSpec, suite: str) -> list[str]:
    if suite == "all":
        names = [s for s in SUITES if (spec.kind, s) in _RUNNERS]
    elif suite in SUITES:
        if (spec.kind, suite) not in _RUNNERS:
            raise SpecError(f"kind: suite {suite!r} is not available for kind {spec.kind!r}")
        names = [suite]
    else:
        raise SpecError(f"suite: unknown suite {suite!r}")
    for name in names:
        need = _NEEDED_DEGREE.get(name, {}).get(spec.kind, 2)
        if spec.degree < need:
            raise SpecError(f"degree: suite {name!r} needs degree >= {need} for kind {spec.kind!r}")
    return names


_POINT_ERRORS = (ValueError, np.linalg.LinAlgError, ArithmeticError)  # covers expression and metric errors


def check_point(spec: MetricSpec, suites: Sequence[str], index: int, p: Point4) -> dict:
    out = PointChecks()
    rec: dict = {"index": index, "point": list(p)}
    try:
        for name in suites:
            _RUNNERS[(spec.kind, name)](spec.metric, p, spec, out)
    except _POINT_ERRORS as exc:
        rec["status"] = "error"
        rec["error"] = f"{type(exc).__name__}: {exc}"
        return rec
    right_flat = _is_right_flat(out)
    if right_flat:
        out.flags.append("right-flat")
    rec.update(out.data)
    rec["flags"] = out.flags
    rec["residuals"] = out.residuals
    rec["marginal"] = out.marginal
    rec["status"] = "pass" if out.passed else "fail"
    return rec


def _is_right_flat(out: PointChecks) -> bool:
    keys = ("right_flat_S", "right_flat_A", "right_flat_B", "right_flat_phi")
    return all(k in out.residuals and out.residuals[k]["pass"] for k in keys)


def run_checks(spec: MetricSpec, suite: str = "all", seed: int | None = None) -> dict:
    suites = suites_for(spec, suite)
    records = [check_point(spec, suites, k, p) for k, p in enumerate(spec.sample_points(seed))]
    summary = {
        "pass": sum(r["status"] == "pass" for r in records),
        "fail": sum(r["status"] == "fail" for r in records),
        "marginal": sum(bool(r.get("marginal")) for r in records),
        "errors": sum(r["status"] == "error" for r in records),
    }
    meta = {
        "tool": "walkergeom",
        "version": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
        "metric": spec.metric.describe(),
        "suites": suites,
        "seed": seed if seed is not None else (spec.sample or {}).get("seed"),
        "degree": spec.degree,
        "tolerances": {"rel": spec.tol_rel, "classify": spec.tol_classify},
    }
    return {"meta": meta, "records": records, "summary": summary}


def report_exit_code(report: dict) -> int:
    return EXIT_FAIL if report["summary"]["fail"] else EXIT_OK


# serialization -----------------------------------------------------------------------


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _encode(obj, indent: str, step: str) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        return text if any(ch in text for ch in ".en") else text + ".0"
    if isinstance(obj, (int, str)):
        return json.dumps(obj, ensure_ascii=False)
    inner = indent + step
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, inner, step) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _encode(v, inner, step) for v in obj) + "\n" + indent + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f"{inner}{json.dumps(k, ensure_ascii=False)}: {_encode(v, inner, step)}" for k, v in obj.items())
        return "{\n" + ",\n".join(items) + "\n" + indent + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(report: dict) -> str:
    """JSON text with insertion-ordered keys and floats written to 17 significant digits."""
    return _encode(_plain(report), "", "  ") + "\n"


def emit_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(dumps_report(report))


# geodesics ---------------------------------------------------------------------------

TRAJECTORY_COLUMNS = ("s", "u", "v", "x", "y", "du", "dv", "dx", "dy", "norm")


def geodesic_report(spec: MetricSpec, init: Sequence[float], h: float, n: int) -> dict:
    if not isinstance(spec.metric, WalkerMetric):
        raise SpecError("kind: geodesics need a walker or theta metric")
    if len(init) != 8:
        raise SpecError("init: expected eight numbers u,v,x,y,du,dv,dx,dy")
    tr = integrate_geodesic(spec.metric, init[:4], init[4:], h, n)
    rows = np.column_stack([tr.s, tr.positions, tr.velocities, tr.norms])
    return {
        "meta": {"tool": "walkergeom", "version": __version__, "metric": spec.metric.describe(), "h": h, "n": n},
        "columns": list(TRAJECTORY_COLUMNS),
        "rows": rows.tolist(),
        "summary": {"norm_drift": tr.norm_drift, "max_residual": tr.max_residual},
    }


# entry point -------------------------------------------------------------------------


def _floats(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not all(map(math.isfinite, vals)):
        raise argparse.ArgumentTypeError("values must be finite")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="walkergeom", description="Curvature checks for neutral Walker metrics.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="run check suites over sample points")
    chk.add_argument("--spec", required=True, help="metric file (JSON)")
    chk.add_argument("--suite", default="all", choices=(*SUITES, "all"), help="suite to run (default: every suite for the kind)")
    chk.add_argument("--out", required=True, help="report path")
    chk.add_argument("--seed", type=int, help="override the sample seed")
    chk.add_argument("--degree", type=int, help=f"jet degree in [{DEGREE_RANGE[0]}, {DEGREE_RANGE[1]}]")
    chk.add_argument("--tol-rel", type=float, help="relative tolerance for oracle comparisons")
    chk.add_argument("--tol-classify", type=float, help="scale-relative tolerance for spectra and ranks")

    cls = sub.add_parser("classify", help="classify the Weyl curvature at each point")
    cls.add_argument("--spec", required=True)
    cls.add_argument("--out", required=True)

    geo = sub.add_parser("geodesic", help="integrate a geodesic with fixed-step RK4")
    geo.add_argument("--spec", required=True)
    geo.add_argument("--init", required=True, type=_floats, help="u,v,x,y,du,dv,dx,dy")
    geo.add_argument("--h", required=True, type=float, help="step size")
    geo.add_argument("--n", required=True, type=int, help="number of steps")
    geo.add_argument("--out", required=True)
    return ap


def _override(spec: MetricSpec, args: argparse.Namespace) -> MetricSpec:
    changes = {}
    if getattr(args, "degree", None) is not None:
        if not DEGREE_RANGE[0] <= args.degree <= DEGREE_RANGE[1]:
            raise SpecError(f"degree: expected an integer in [{DEGREE_RANGE[0]}, {DEGREE_RANGE[1]}]")
        changes["degree"] = args.degree
    for name in ("tol_rel", "tol_classify"):
        val = getattr(args, name, None)
        if val is not None:
            if not (val > 0 and math.isfinite(val)):
                raise SpecError(f"{name}: must be a positive number")
            changes[name] = val
    if getattr(args, "seed", None) is not None and args.seed < 0:
        raise SpecError("seed: must be non-negative")
    return MetricSpec(**{**spec.__dict__, **changes}) if changes else spec


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = _override(load_spec(args.spec), args)
        if args.command == "check":
            report = run_checks(spec, args.suite, args.seed)
        elif args.command == "classify":
            report = run_checks(spec, "classify")
        else:
            if args.n < 0 or not args.h > 0:
                raise SpecError("h/n: need h > 0 and n >= 0")
            report = geodesic_report(spec, args.init, args.h, args.n)
            emit_report(report, args.out)
            return EXIT_OK
        emit_report(report, args.out)
    except (SpecError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return report_exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
