"""Command-line front end.

Coefficient files are plain text::

    # folded cuspidal edge
    order = 8
    mode = folded
    seed = 7            # optional: draw random coefficients first

    [a]
    2 = 0.5             # coefficient of x^2
    [b0]
    1 = 0.8
    [b3]
    0 1 = -0.25         # coefficient of x^0 y^1

Curve files for ``developable`` use the sections ``[g2]`` and ``[g3]`` for
``u -> (u, g2(u), g3(u))``.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import discriminants as disc
from .errors import CoefficientFileError, CuspidalError
from .folded import (
    closed_form_invariants,
    double_point_curve,
    dpc_closed_forms,
    dpc_derivatives,
    dpc_limits,
    folded_surface,
)
from .heights import (
    STRATA,
    Direction3,
    classify_along_dpc,
    classify_along_edge,
    classify_folded_height,
    classify_height,
    height_function,
    stratum_direction,
)
from .invariants import direct_report
from .jet import Jet1
from .surfaces import (
    DEFAULT_ORDER,
    EdgeCoefficients,
    developable_closed_forms,
    frontal_structure,
    normal_form,
    normal_form_values,
    tangent_developable,
)
from .tolerance import rel_err
from .verify import DEFAULT_SAMPLES, DEFAULT_SEED, run_all

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2
ORDER_ENV = "FRONTAL_JET_ORDER"
EDGE_SECTIONS = ("a", "b0", "b1", "b2", "b3")
CURVE_SECTIONS = ("g2", "g3")
TOP_KEYS = ("order", "mode", "seed")


def default_order() -> int:
    raw = os.environ.get(ORDER_ENV)
    if raw is None:
        return DEFAULT_ORDER
    try:
        order = int(raw)
    except ValueError:
        raise CoefficientFileError(f"{ORDER_ENV}={raw!r} is not an integer") from None
    if order < 4:
        raise CoefficientFileError(f"{ORDER_ENV} must be at least 4 (got {order})")
    return order


@dataclass
class CoefficientFile:
    """Parsed contents of a coefficient or curve file.

    ``terms[section][exponent] = (value, lineno)``; exponents are ints, or
    ``(i, j)`` pairs in two-variable sections.
    """

    order: int
    mode: str = "folded"
    seed: Optional[int] = None
    terms: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)

    def series(self, name: str) -> dict:
        return {k: v for k, (v, _) in self.terms.get(name, {}).items()}

    def line_of(self, section: str, key) -> Optional[int]:
        entry = self.terms.get(section, {}).get(key)
        return entry[1] if entry else None


def parse_coefficient_text(text: str, sections=EDGE_SECTIONS, two_variable=("b3",),
                           order: Optional[int] = None) -> CoefficientFile:
    """Parse the key/value format; errors carry the offending line number."""
    top: dict = {}
    raw: dict = {s: {} for s in sections}
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise CoefficientFileError(f"malformed section header {line!r}", lineno)
            current = line[1:-1].strip()
            if current not in raw:
                raise CoefficientFileError(
                    f"unknown section [{current}]; expected one of {', '.join(sections)}", lineno)
            continue
        if "=" not in line:
            raise CoefficientFileError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if current is None:
            if key not in TOP_KEYS:
                raise CoefficientFileError(f"unknown key {key!r}", lineno)
            if key in top:
                raise CoefficientFileError(f"duplicate key {key!r}", lineno)
            top[key] = (value, lineno)
            continue
        try:
            parts = tuple(int(p) for p in key.split())
        except ValueError:
            raise CoefficientFileError(f"exponent {key!r} is not an integer", lineno) from None
        want = 2 if current in two_variable else 1
        if len(parts) != want or min(parts) < 0:
            shape = "'i j'" if want == 2 else "a single exponent"
            raise CoefficientFileError(f"section [{current}] needs {shape}, got {key!r}", lineno)
        exp = parts if want == 2 else parts[0]
        try:
            val = float(value)
        except ValueError:
            raise CoefficientFileError(f"value {value!r} is not a number", lineno) from None
        if not np.isfinite(val):
            raise CoefficientFileError(f"value {value!r} is not finite", lineno)
        if exp in raw[current]:
            raise CoefficientFileError(f"duplicate exponent {key!r} in [{current}]", lineno)
        raw[current][exp] = (val, lineno)

    def top_int(name, default):
        if name not in top:
            return default
        value, lineno = top[name]
        try:
            return int(value)
        except ValueError:
            raise CoefficientFileError(f"{name} must be an integer, got {value!r}", lineno) from None

    n = top_int("order", order if order is not None else default_order())
    if n < 4:
        raise CoefficientFileError(f"order must be at least 4 (got {n})", top.get("order", (0, None))[1])
    mode = top.get("mode", ("folded", None))[0]
    if mode not in ("folded", "prefold"):
        raise CoefficientFileError(f"mode must be 'folded' or 'prefold', got {mode!r}", top["mode"][1])
    for sec, entries in raw.items():
        limit = n - 4 if sec in two_variable else n
        for exp, (_, lineno) in entries.items():
            degree = sum(exp) if isinstance(exp, tuple) else exp
            if degree > limit:
                raise CoefficientFileError(
                    f"[{sec}] exponent {exp} exceeds the admissible degree {limit} for order {n}",
                    lineno)
    return CoefficientFile(n, mode, top_int("seed", None), raw)


_CONSTRAINT_SLOTS = {
    "a(0)": ("a", 0), "a'(0)": ("a", 1), "b0(0)": ("b0", 0),
    "b0'(0)": ("b0", 1), "b1(0)": ("b1", 0),
}


def edge_coefficients(cf: CoefficientFile) -> EdgeCoefficients:
    """Build and validate :class:`EdgeCoefficients`; seeded draws are overridden by explicit entries."""
    if cf.seed is not None:
        base = EdgeCoefficients.random(np.random.default_rng(cf.seed), cf.order, cf.mode)
        series = {name: dict(enumerate(getattr(base, name).coeffs)) for name in EDGE_SECTIONS[:4]}
        m = base.b3.order
        b3 = {(i, j): base.b3.coeffs[i, j] for i in range(m + 1) for j in range(m + 1 - i)}
    else:
        series = {name: {} for name in EDGE_SECTIONS[:4]}
        b3 = {}
    for name in EDGE_SECTIONS[:4]:
        series[name].update(cf.series(name))
    b3.update(cf.series("b3"))
    c = EdgeCoefficients.from_taylor(cf.order, b3=b3, **series)
    for label, (sec, k) in _CONSTRAINT_SLOTS.items():
        if cf.mode == "folded" and label in ("b0'(0)", "b1(0)"):
            continue
        if abs(getattr(c, sec)[k]) > 1e-12:
            raise CoefficientFileError(
                f"{cf.mode} mode requires {label} = 0", cf.line_of(sec, k))
    return c


def load_edge_file(path) -> tuple:
    text = _read(path)
    cf = parse_coefficient_text(text)
    return cf, edge_coefficients(cf)


def load_curve_file(path):
    cf = parse_coefficient_text(_read(path), sections=CURVE_SECTIONS, two_variable=())
    g2, g3 = (Jet1(_dense(cf.series(s), cf.order), cf.order) for s in CURVE_SECTIONS)
    for s, g in zip(CURVE_SECTIONS, (g2, g3)):
        if g.const != 0.0:
            raise CoefficientFileError(f"[{s}] must vanish at 0", cf.line_of(s, 0))
    return cf, g2, g3


def _dense(terms: dict, order: int) -> np.ndarray:
    out = np.zeros(order + 1)
    for k, v in terms.items():
        out[k] = v
    return out


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CoefficientFileError(f"cannot read {path}: {exc.strerror}") from None


# -- output -----------------------------------------------------------------

def _num(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, str):
        return v
    return f"{float(v): .12g}"


def _table(rows, header) -> str:
    cells = [header] + [[_num(c) if not isinstance(c, str) else c for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(_jsonable(payload), indent=2, sort_keys=True, allow_nan=False))
    else:
        print(text)


# -- commands -----------------------------------------------------------------

def cmd_invariants(args) -> int:
    cf, c = load_edge_file(args.file)
    want_closed = args.closed_form or not args.direct
    want_direct = args.direct or not args.closed_form
    germ = folded_surface(c) if cf.mode == "folded" else normal_form(c, "prefold")
    direct = direct_report(frontal_structure(germ)).scalars() if want_direct else {}
    if not want_closed:
        closed = {}
    elif cf.mode == "folded":
        closed = closed_form_invariants(c).scalars()
    else:
        closed = normal_form_values(c)
    names = list(dict.fromkeys(list(closed) + list(direct)))
    rows, payload = [], {}
    for name in names:
        d, k = direct.get(name), closed.get(name)
        res = rel_err(d, k) if d is not None and k is not None else None
        prov = "+".join(p for p, v in (("direct", d), ("closed-form", k)) if v is not None)
        rows.append([name, d, k, res, prov])
        payload[name] = {"direct": d, "closed_form": k, "residual": res, "provenance": prov}
    text = f"# invariants of {cf.mode} germ, order {cf.order}\n"
    text += _table(rows, ["invariant", "direct", "closed-form", "rel-residual", "provenance"])
    _emit(args, {"mode": cf.mode, "order": cf.order, "invariants": payload}, text)
    return EXIT_OK


def _contact_payload(res) -> dict:
    return {"kind": res.kind, "condition": res.condition, "detector": res.detector,
            "order": res.order, "reason": res.reason}


def cmd_classify(args) -> int:
    cf, c = load_edge_file(args.file)
    if cf.mode != "folded":
        raise CoefficientFileError("classification needs a folded germ (mode = folded)")
    if args.stratum is not None:
        v = stratum_direction(c, args.stratum)
    else:
        try:
            v = Direction3.normalized(*args.direction)
        except ValueError as exc:
            raise CoefficientFileError(str(exc)) from None
    full = classify_folded_height(c, v)
    routes = {"surface": full, "double-point-curve": classify_along_dpc(c, v),
              "cuspidal-edge": classify_along_edge(c, v)}
    payload = {"direction": [v.v1, v.v2, v.v3], "kind": full.kind,
               "routes": {k: _contact_payload(r) for k, r in routes.items()}}
    lines = [f"direction: ({v.v1:.12g}, {v.v2:.12g}, {v.v3:.12g})", f"class: {full.kind}"]
    for name, r in routes.items():
        lines.append(f"  {name}: {r.kind} (condition {r.condition}, detector {r.detector})")
        for key in sorted(r.reason):
            lines.append(f"    {key}: {r.reason[key]}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_dpc(args) -> int:
    cf, c = load_edge_file(args.file)
    dpc = double_point_curve(c)
    closed = dpc_closed_forms(c)
    der = dpc_derivatives(dpc)
    lim = dpc_limits(dpc, c)
    rows = [
        ["d''(0)", dpc.d2, closed["d2"], rel_err(dpc.d2, closed["d2"])],
        ["d''''(0)", dpc.d4, closed["d4"], rel_err(dpc.d4, closed["d4"])],
    ]
    for i, axis in enumerate("xyz"):
        rows.append([f"d_hat''(0).{axis}", der.d_hat_2[i], closed["d_hat_2"][i],
                     rel_err(der.d_hat_2[i], closed["d_hat_2"][i])])
    for i, axis in enumerate("xyz"):
        rows.append([f"d_hat''''(0).{axis}", der.d_hat_4[i], closed["d_hat_4"][i],
                     rel_err(der.d_hat_4[i], closed["d_hat_4"][i])])
    rows += [
        ["lim kappa^2", lim.kappa_sq_numeric, lim.kappa_sq_limit,
         rel_err(lim.kappa_sq_numeric, lim.kappa_sq_limit)],
        ["lim tau", lim.tau_numeric, lim.tau_limit, rel_err(lim.tau_numeric, lim.tau_limit)],
        ["kappa_sing(d_tilde)", der.tilde.kappa_sing, closed["kappa_sing"],
         rel_err(der.tilde.kappa_sing, closed["kappa_sing"])],
        ["tau_sing(d_tilde)", der.tilde.tau_sing, closed["tau_sing"],
         rel_err(der.tilde.tau_sing, closed["tau_sing"])],
    ]
    payload = {r[0]: {"computed": r[1], "closed_form": r[2], "residual": r[3]} for r in rows}
    payload["newton_steps"] = dpc.newton_steps
    text = (f"# double point curve, order {cf.order}, {dpc.newton_steps} Newton steps\n"
            + _table(rows, ["quantity", "jet/extrapolated", "closed-form", "rel-residual"]))
    _emit(args, payload, text)
    return EXIT_OK


def cmd_discriminant(args) -> int:
    params = {"s": args.s, "sigma": args.sigma, "b": args.b, "c": args.c}
    try:
        sh = disc.sheet(args.normal_form, args.label, params, grid=args.grid)
    except (ValueError, CuspidalError) as exc:
        raise CoefficientFileError(str(exc)) from None
    res = disc.back_substitute(sh)
    out = Path(args.output)
    disc.export_point_cloud(sh, out)
    msg = [f"{args.label} of {args.normal_form}: {len(sh.samples)} samples -> {out}"]
    if sh.empty_reason:
        msg.append(f"empty: {sh.empty_reason}")
    else:
        msg.append(f"branches: {', '.join(sh.parametrization_id)}")
        msg.append(f"max back-substitution residual: {float(res.max()):.3e}")
    if args.ply:
        disc.export_ply(sh, args.ply)
        msg.append(f"mesh -> {args.ply}")
    print("\n".join(msg))
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_all(args.samples, args.seed)
    print(f"# seed {args.seed}, {args.samples} samples")
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} of {len(results)} suites failed: "
              + ", ".join(str(r.number) for r in failed))
        return EXIT_VERIFY
    print("all suites passed")
    return EXIT_OK


def cmd_developable(args) -> int:
    cf, g2, g3 = load_curve_file(args.file)
    td = tangent_developable(g2, g3)
    fd = frontal_structure(td.adapted)
    rep = direct_report(fd, bias=False)
    closed = developable_closed_forms(td)
    rows = []
    for name in ("kappa_s", "kappa_nu", "kappa_t", "kappa_c"):
        d = rep.value(name)
        rows.append([name, d, closed[name], rel_err(d, closed[name])])
    rows.append(["kappa (curve)", rep.curve_kappa, closed["kappa"], None])
    rows.append(["tau (curve)", rep.curve_tau, closed["tau"], None])
    kn = rep.kappa_nu.coeffs[: min(5, rep.kappa_nu.order + 1)]
    pencil = {}
    for k in range(args.pencil):
        th = np.pi * k / args.pencil
        v = Direction3(0.0, float(np.cos(th)), float(np.sin(th)))
        kind = classify_height(height_function(td.f, v)).kind
        pencil[kind] = pencil.get(kind, 0) + 1
    payload = {
        "invariants": {r[0]: {"direct": r[1], "closed_form": r[2], "residual": r[3]} for r in rows},
        "kappa_nu_series": kn,
        "first_kind_det": td.first_kind_det,
        "pencil_classes": pencil,
    }
    text = "\n".join([
        f"# tangent developable, order {cf.order}",
        _table(rows, ["invariant", "direct", "closed-form", "rel-residual"]),
        "kappa_nu series: " + " ".join(f"{v:.3g}" for v in kn),
        "tangent-cone pencil: " + ", ".join(f"{k} x{n}" for k, n in sorted(pencil.items())),
    ])
    _emit(args, payload, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cuspidal", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariants", help="invariant report with both computation paths")
    s.add_argument("file")
    s.add_argument("--closed-form", action="store_true", help="closed-form values only")
    s.add_argument("--direct", action="store_true", help="jet-evaluated values only")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("classify", help="contact class of a height function")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--direction", nargs=3, type=float, metavar=("V1", "V2", "V3"))
    g.add_argument("--stratum", choices=STRATA)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("dpc", help="double point curve report")
    s.add_argument("file")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_dpc)

    s = sub.add_parser("discriminant", help="sample a discriminant and write a point cloud")
    s.add_argument("normal_form", choices=disc.NORMAL_FORM_IDS)
    s.add_argument("label", choices=disc.LABELS)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--ply", help="also write an ASCII PLY mesh")
    s.add_argument("--grid", type=int, default=disc.DEFAULT_GRID)
    s.add_argument("--s", type=int, default=1, choices=(1, -1))
    s.add_argument("--sigma", type=int, default=1, choices=(1, -1))
    s.add_argument("--b", type=float, default=0.5)
    s.add_argument("--c", type=float, default=1.0)
    s.set_defaults(func=cmd_discriminant)

    s = sub.add_parser("verify", help="run every verification suite")
    s.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("developable", help="tangent developable of a curve file")
    s.add_argument("file")
    s.add_argument("--pencil", type=int, default=100, help="directions in the tangent-cone pencil")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_developable)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CoefficientFileError as exc:
        where = f"{args.file}: " if getattr(args, "file", None) else ""
        print(f"error: {where}{exc}", file=sys.stderr)
        return EXIT_INPUT
    except CuspidalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
