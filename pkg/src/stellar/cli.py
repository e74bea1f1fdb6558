"""Command-line interface.

All documents are JSON with a "schema": "stellar/1" marker and complex
numbers encoded as [re, im] pairs.  Input kinds: "state" (two_s, coeffs),
"plane" (two_s, k, rows), "plane_pair" (two planes of the same shape).
Exit codes: 0 success, 2 parse error, 3 numeric failure, 4 a result was
produced but a not-applicable flag is present.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .decomp import (
    decompose_plane,
    multiplicities_char,
    multiplicities_from_basis,
    multiplicities_genfun,
)
from .grassmann import (
    KFrame,
    orthogonal_complement,
    plucker,
    plucker_residual,
    frame_inner,
    rotate_frame,
    standard_form,
)
from .majorana import (
    Constellation,
    antipodal_constellation,
    constellation_match_angle,
    constellation_of_state,
    projective_distance,
    rotate_constellation,
)
from .multicon import multiconstellation
from .principal import principal, principal_all, schubert_count
from .spin_rep import RotationSpec, SpinLabel, SpinState

SCHEMA = "stellar/1"
EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_FLAGGED = 4

_PALETTE = (
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3",
    "#ff7f00", "#a65628", "#f781bf", "#777777",
)


class CLIError(Exception):
    def __init__(self, code: int, slug: str, message: str):
        super().__init__(message)
        self.code = code
        self.slug = slug
        self.message = message


# ---------------------------------------------------------------------------
# JSON helpers


def _clean_float(x) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise CLIError(EXIT_NUMERIC, "non-finite", "non-finite number in output")
    return 0.0 if x == 0.0 else x  # normalizes -0.0


def _c2j(z: complex) -> list:
    z = complex(z)
    return [_clean_float(z.real), _clean_float(z.imag)]


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False)


def _emit(doc: dict, out_path: str | None) -> None:
    text = _dump(doc)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _error_doc(code: int, slug: str, message: str) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "error",
        "code": code,
        "error": slug,
        "message": message,
    }


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise CLIError(EXIT_PARSE, "unreadable", f"{path}: {e}")
    except json.JSONDecodeError as e:
        raise CLIError(EXIT_PARSE, "malformed-json", f"{path}: {e}")
    if not isinstance(doc, dict):
        raise CLIError(EXIT_PARSE, "schema-mismatch", f"{path}: not an object")
    if doc.get("schema") != SCHEMA:
        raise CLIError(
            EXIT_PARSE, "schema-mismatch",
            f"{path}: expected schema {SCHEMA!r}, got {doc.get('schema')!r}",
        )
    return doc


def _parse_complex(v, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if (
        isinstance(v, list)
        and len(v) == 2
        and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v)
    ):
        return complex(v[0], v[1])
    raise CLIError(
        EXIT_PARSE, "shape-mismatch",
        f"{where}: expected a number or [re, im] pair, got {v!r}",
    )


def _parse_two_s(doc: dict, path: str) -> int:
    two_s = doc.get("two_s")
    if not isinstance(two_s, int) or isinstance(two_s, bool) or two_s < 0:
        raise CLIError(
            EXIT_PARSE, "shape-mismatch", f"{path}: two_s must be a non-negative integer"
        )
    return two_s


def _rows_to_frame(two_s: int, k, rows, path: str) -> KFrame:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise CLIError(EXIT_PARSE, "shape-mismatch", f"{path}: k must be a positive integer")
    dim = two_s + 1
    if not isinstance(rows, list) or len(rows) != k:
        raise CLIError(EXIT_PARSE, "shape-mismatch", f"{path}: expected {k} rows")
    mat = np.zeros((k, dim), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise CLIError(
                EXIT_PARSE, "shape-mismatch",
                f"{path}: row {i} must have {dim} entries",
            )
        for jcol, v in enumerate(row):
            mat[i, jcol] = _parse_complex(v, f"{path}: row {i} entry {jcol}")
    try:
        return KFrame(SpinLabel(two_s), k, mat)
    except ValueError as e:
        if "rank deficient" in str(e):
            raise CLIError(EXIT_NUMERIC, "rank-deficient", f"{path}: {e}")
        raise CLIError(EXIT_PARSE, "shape-mismatch", f"{path}: {e}")


def _load_plane(path: str) -> KFrame:
    doc = _load_json(path)
    if doc.get("kind") != "plane":
        raise CLIError(
            EXIT_PARSE, "kind-mismatch",
            f"{path}: expected kind 'plane', got {doc.get('kind')!r}",
        )
    two_s = _parse_two_s(doc, path)
    return _rows_to_frame(two_s, doc.get("k"), doc.get("rows"), path)


def _load_state(path: str) -> SpinState:
    doc = _load_json(path)
    if doc.get("kind") != "state":
        raise CLIError(
            EXIT_PARSE, "kind-mismatch",
            f"{path}: expected kind 'state', got {doc.get('kind')!r}",
        )
    two_s = _parse_two_s(doc, path)
    coeffs = doc.get("coeffs")
    if not isinstance(coeffs, list) or len(coeffs) != two_s + 1:
        raise CLIError(
            EXIT_PARSE, "shape-mismatch", f"{path}: expected {two_s + 1} coefficients"
        )
    c = np.array(
        [_parse_complex(v, f"{path}: coeff {i}") for i, v in enumerate(coeffs)]
    )
    if not np.any(c):
        raise CLIError(EXIT_NUMERIC, "zero-state", f"{path}: state is identically zero")
    return SpinState(SpinLabel(two_s), c)


# ---------------------------------------------------------------------------
# document builders


def _constellation_doc(c: Constellation) -> dict:
    stars = []
    for st in c.stars:
        theta, phi = st.angles()
        stars.append(
            {
                "theta": _clean_float(theta),
                "phi": _clean_float(phi),
                "multiplicity": st.multiplicity,
                "direction": [_clean_float(x) for x in st.direction],
            }
        )
    return {"total": c.total, "stars": stars}


def _poly_doc(p) -> dict:
    return {
        "d_nom": p.d_nom,
        "coefficients": [_c2j(z) for z in p.coeffs],
    }


def _multicon_doc(mc) -> dict:
    comps = []
    for r in mc.components:
        entry = {
            "two_j": r.two_j,
            "copy_index": r.copy_index,
            "absent": r.absent,
            "amplitude": None if r.amplitude is None else _c2j(r.amplitude),
            "flags": list(r.flags),
            "constellation": None
            if r.constellation is None
            else _constellation_doc(r.constellation),
        }
        if r.gauge is not None:
            g = r.gauge
            entry["spin_expectation"] = [_clean_float(x) for x in g.sev]
            entry["selected_lm"] = None if g.selected_lm is None else list(g.selected_lm)
            entry["alpha"] = None if g.alpha is None else _clean_float(g.alpha)
            entry["beta"] = None if g.beta is None else _clean_float(g.beta)
        comps.append(entry)
    return {
        "schema": SCHEMA,
        "kind": "multiconstellation",
        "two_s": mc.s.two_s,
        "k": mc.k,
        "components": comps,
        "z_values": None if mc.z_values is None else [_c2j(z) for z in mc.z_values],
        "spectator": None if mc.spectator is None else _constellation_doc(mc.spectator),
        "flags": list(mc.flags),
    }


# ---------------------------------------------------------------------------
# SVG rendering


def _svg_for_groups(groups) -> str:
    R = 190.0
    centers = ((230.0, 230.0), (650.0, 230.0))
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="880" height="500" '
        'viewBox="0 0 880 500" font-family="sans-serif">',
        '<rect width="880" height="500" fill="#ffffff"/>',
    ]
    for (cx, cy), label in zip(centers, ("z &#8805; 0", "z &lt; 0")):
        parts.append(
            f'<circle cx="{cx}" cy="{cy}" r="{R}" fill="#f7f7f7" stroke="#555"/>'
        )
        parts.append(
            f'<text x="{cx}" y="{cy + R + 28}" text-anchor="middle" '
            f'font-size="15" fill="#333">{label}</text>'
        )
    legend_y = 470
    legend_x = 40.0
    for gi, (label, constellation) in enumerate(groups):
        color = _PALETTE[gi % len(_PALETTE)]
        for st in constellation.stars:
            x, y, z = st.direction
            if z >= 0:
                cx, cy = centers[0]
                px, py = cx + R * x, cy - R * y
            else:
                cx, cy = centers[1]
                px, py = cx - R * x, cy - R * y
            r_dot = 4.0 + 2.0 * math.sqrt(st.multiplicity)
            theta, phi = st.angles()
            parts.append(
                f'<circle cx="{px:.2f}" cy="{py:.2f}" r="{r_dot:.2f}" '
                f'fill="{color}" fill-opacity="0.8" stroke="#222">'
                f"<title>{label}: multiplicity {st.multiplicity}, "
                f"theta {theta:.4f}, phi {phi:.4f}</title></circle>"
            )
        parts.append(
            f'<circle cx="{legend_x:.1f}" cy="{legend_y}" r="6" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{legend_x + 12:.1f}" y="{legend_y + 5}" font-size="14" '
            f'fill="#333">{label}</text>'
        )
        legend_x += 14 * len(label) + 44
    parts.append("</svg>")
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_constellation(args) -> int:
    psi = _load_state(args.state_file)
    c = constellation_of_state(psi)
    doc = {
        "schema": SCHEMA,
        "kind": "constellation",
        "two_s": psi.s.two_s,
        **_constellation_doc(c),
    }
    _emit(doc, args.out)
    return EXIT_OK


def _principal_doc_for(path: str, route: str) -> tuple[dict, int]:
    frame = _load_plane(path)
    doc = {
        "schema": SCHEMA,
        "kind": "principal",
        "two_s": frame.s.two_s,
        "k": frame.k,
        "routes": {},
    }
    code = EXIT_OK
    if route == "all":
        results = principal_all(frame)
        dists = []
        names = sorted(results)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                dists.append(
                    projective_distance(
                        results[a].polynomial, results[b].polynomial
                    )
                )
        agreement = max(dists)
        doc["route_agreement"] = _clean_float(agreement)
        if agreement > 1e-6:
            code = EXIT_NUMERIC
    else:
        results = {route: principal(frame, route)}
    for name, res in results.items():
        doc["routes"][name] = {
            "polynomial": _poly_doc(res.polynomial),
            "constellation": _constellation_doc(res.constellation),
        }
    return doc, code


def _run_batch(paths, jobs, one):
    """Run `one(path) -> (doc, code)` over paths, preserving determinism."""

    def safe(path):
        try:
            return one(path)
        except CLIError as e:
            return _error_doc(e.code, e.slug, e.message), e.code
        except ArithmeticError as e:
            return _error_doc(EXIT_NUMERIC, "numeric", str(e)), EXIT_NUMERIC

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(safe, paths))
    else:
        results = [safe(p) for p in paths]
    return results


def _cmd_principal(args) -> int:
    if len(args.plane_files) == 1 and args.jobs == 1:
        doc, code = _principal_doc_for(args.plane_files[0], args.route)
        _emit(doc, args.out)
        return code
    results = _run_batch(
        args.plane_files, args.jobs, lambda p: _principal_doc_for(p, args.route)
    )
    batch = {
        "schema": SCHEMA,
        "kind": "principal_batch",
        "results": {p: doc for p, (doc, _) in zip(args.plane_files, results)},
    }
    _emit(batch, args.out)
    return max((code for _, code in results), default=EXIT_OK)


def _cmd_decompose(args) -> int:
    frame = _load_plane(args.plane_file)
    comps = decompose_plane(frame)
    doc = {
        "schema": SCHEMA,
        "kind": "decomposition",
        "two_s": frame.s.two_s,
        "k": frame.k,
        "components": [
            {
                "two_j": c.two_j,
                "copy_index": c.copy_index,
                "norm": _clean_float(c.state.norm),
                "coeffs": [_c2j(z) for z in c.state.coeffs],
            }
            for c in comps
        ],
    }
    _emit(doc, args.out)
    return EXIT_OK


def _cmd_multicon(args) -> int:
    frame = _load_plane(args.plane_file)
    mc = multiconstellation(frame)
    doc = _multicon_doc(mc)
    _emit(doc, args.out)
    if args.svg:
        groups = []
        for r in mc.components:
            if r.constellation is not None and r.constellation.total > 0:
                groups.append(
                    (f"j={r.two_j / 2:g} copy {r.copy_index}", r.constellation)
                )
        if mc.spectator is not None and mc.spectator.total > 0:
            groups.append(("spectator", mc.spectator))
        with open(args.svg, "w") as fh:
            fh.write(_svg_for_groups(groups) + "\n")
    return EXIT_FLAGGED if mc.z_values is None else EXIT_OK


def _cmd_multiplicities(args) -> int:
    s = SpinLabel(args.two_s)
    methods = {
        "genfun": multiplicities_genfun,
        "char": multiplicities_char,
        "basis": multiplicities_from_basis,
    }
    table = methods[args.method](s, args.k)
    doc = {
        "schema": SCHEMA,
        "kind": "multiplicities",
        "two_s": args.two_s,
        "k": args.k,
        "method": args.method,
        "nonzero": [[tj, m] for tj, m in table.nonzero()],
        "total_dimension": table.total_dimension(),
        "wedge_dimension": math.comb(args.two_s + 1, args.k),
    }
    _emit(doc, args.out)
    return EXIT_OK


def _cmd_schubert(args) -> int:
    print(schubert_count(SpinLabel(args.two_s), args.k))
    return EXIT_OK


def _cmd_verify(args) -> int:
    frame = _load_plane(args.plane_file)
    rng = np.random.default_rng(args.seed)
    checks = []

    def check(name, value, tol):
        checks.append(
            {
                "name": name,
                "value": _clean_float(value),
                "tolerance": tol,
                "passed": bool(value <= tol),
            }
        )

    results = principal_all(frame)
    names = sorted(results)
    worst = 0.0
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            worst = max(
                worst,
                projective_distance(results[a].polynomial, results[b].polynomial),
            )
    check("route-agreement", worst, 1e-7)

    plane = standard_form(frame)
    check("plucker-residual", plucker_residual(plucker(plane.frame)), 1e-10)

    other = KFrame(
        frame.s,
        frame.k,
        rng.standard_normal((frame.k, frame.s.dim))
        + 1j * rng.standard_normal((frame.k, frame.s.dim)),
    )
    lhs = frame_inner(frame, other)
    rhs = complex(np.vdot(plucker(frame).comps, plucker(other).comps))
    scale = max(1.0, abs(lhs))
    check("cauchy-binet", abs(lhs - rhs) / scale, 1e-9)

    axis = rng.standard_normal(3)
    axis /= np.linalg.norm(axis)
    rot = RotationSpec(axis, float(rng.uniform(0, 2 * np.pi)))
    rotated = principal(rotate_frame(frame, rot)).constellation
    expected = rotate_constellation(results["wronskian"].constellation, rot)
    check(
        "rotation-covariance",
        constellation_match_angle(rotated, expected),
        1e-7,
    )

    comp = principal(orthogonal_complement(plane)).constellation
    anti = antipodal_constellation(results["wronskian"].constellation)
    check("complement-antipodality", constellation_match_angle(comp, anti), 1e-7)

    mc = multiconstellation(frame)
    doc = {
        "schema": SCHEMA,
        "kind": "verify_report",
        "two_s": frame.s.two_s,
        "k": frame.k,
        "seed": args.seed,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
        "multiconstellation": _multicon_doc(mc),
    }
    _emit(doc, args.out)
    if not doc["passed"]:
        return EXIT_NUMERIC
    if mc.z_values is None:
        return EXIT_FLAGGED
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stellar",
        description="Stellar representations of spin-s k-planes.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constellation", help="Majorana constellation of a state")
    c.add_argument("state_file")
    c.add_argument("--out", default=None)
    c.set_defaults(func=_cmd_constellation)

    c = sub.add_parser("principal", help="principal polynomial/constellation")
    c.add_argument("plane_files", nargs="+")
    c.add_argument(
        "--route",
        choices=["wronskian", "sampled", "top", "all"],
        default="wronskian",
    )
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out", default=None)
    c.set_defaults(func=_cmd_principal)

    c = sub.add_parser("decompose", help="spin-block components of a plane")
    c.add_argument("plane_file")
    c.add_argument("--out", default=None)
    c.set_defaults(func=_cmd_decompose)

    c = sub.add_parser("multicon", help="multiconstellation of a plane")
    c.add_argument("plane_file")
    c.add_argument("--svg", default=None, help="also render an SVG sky map")
    c.add_argument("--out", default=None)
    c.set_defaults(func=_cmd_multicon)

    c = sub.add_parser("multiplicities", help="spin-block multiplicity table")
    c.add_argument("two_s", type=int)
    c.add_argument("k", type=int)
    c.add_argument(
        "--method", choices=["genfun", "char", "basis"], default="genfun"
    )
    c.add_argument("--out", default=None)
    c.set_defaults(func=_cmd_multiplicities)

    c = sub.add_parser("schubert", help="planes sharing a generic principal constellation")
    c.add_argument("two_s", type=int)
    c.add_argument("k", type=int)
    c.set_defaults(func=_cmd_schubert)

    c = sub.add_parser("verify", help="self-checks on a plane document")
    c.add_argument("plane_file")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default=None)
    c.set_defaults(func=_cmd_verify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as e:
        _emit(_error_doc(e.code, e.slug, e.message), None)
        return e.code
    except ArithmeticError as e:
        _emit(_error_doc(EXIT_NUMERIC, "numeric", str(e)), None)
        return EXIT_NUMERIC
    except ValueError as e:
        _emit(_error_doc(EXIT_PARSE, "invalid-value", str(e)), None)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
