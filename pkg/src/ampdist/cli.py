"""Command-line front end emitting JSON and CSV experiment artifacts.

Subcommands map one-to-one onto the library experiments: spin marginals,
singlet pair tables, CHSH against the exhaustive classical bound, the
three-direction interference demonstration, the two-slit patterns, the
phase-space amplitude diagnostics, and free wavepacket evolution.

Every run echoes its inputs, defaults to JSON (CSV via --format csv), writes
to stdout or --out, and is byte-identical for identical inputs and seed.
Exit codes: 0 success, 2 flag or validation error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from ampdist import backend_name
from ampdist.algebra import Quaternion, UnitVector3
from ampdist.continuous import (
    Grid1D,
    evolve_free,
    gaussian_wavepacket,
    marginal_diagnostics,
    phase_space_amplitude,
)
from ampdist.entangled import (
    chsh,
    classical_bound,
    classical_strategies,
    correlation_record,
    pair_marginal,
    triple_marginal,
)
from ampdist.spin import (
    DirectionSet,
    SpinEnsemble,
    ensemble_marginal_bruteforce,
    ensemble_marginal_closed,
)
from ampdist.twoslit import (
    PhaseShiftModel,
    SlitGeometry,
    decohere_average,
    positivity_check,
    screen_pattern,
    slit_amplitudes,
)

__all__ = ["main"]


def _parse_vector(text: str, planar: bool) -> UnitVector3:
    if planar:
        angle = math.radians(float(text))
        return UnitVector3(math.sin(angle), 0.0, math.cos(angle))
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"direction {text!r} is not of the form x,y,z")
    return UnitVector3.normalized(*(float(p) for p in parts))


def _parse_constraint(text: str) -> tuple[int, int]:
    try:
        idx_text, sign_text = text.split(":")
        idx = int(idx_text)
    except ValueError as exc:
        raise ValueError(f"constraint {text!r} is not of the form INDEX:SIGN") from exc
    sign_map = {"+": 1, "+1": 1, "-": -1, "-1": -1}
    if sign_text not in sign_map:
        raise ValueError(f"constraint sign {sign_text!r} must be + or -")
    return idx, sign_map[sign_text]


def _parse_directions(args) -> DirectionSet:
    if args.directions is not None:
        return DirectionSet.from_file(args.directions)
    if args.dirs is not None:
        entries = [e for e in args.dirs.split(";") if e.strip()]
        return DirectionSet([_parse_vector(e, planar=False) for e in entries])
    raise ValueError("provide a direction set with --directions FILE or --dirs")


def _quat_list(q: Quaternion) -> list[float]:
    return [q.w, q.x, q.y, q.z]


def _vec_list(v: UnitVector3) -> list[float]:
    return [v.nx, v.ny, v.nz]


def _json_document(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _csv_document(
    header: list[str], rows: list[list], comments: list[str] | None = None
) -> str:
    buf = io.StringIO()
    for line in comments or []:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(args, document: str) -> int:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(document)
    else:
        sys.stdout.write(document)
    return 0


# ---------------------------------------------------------------------------
# subcommands


def cmd_spin_marginal(args) -> str:
    dirs = _parse_directions(args)
    constraints = [_parse_constraint(c) for c in args.constrain]
    ens = SpinEnsemble(dirs, constraints)
    brute = ensemble_marginal_bruteforce(ens, args.target)
    closed = (
        ensemble_marginal_closed(ens, args.target)
        if len(ens.constraints) == 1
        else None
    )
    wp, wm = brute[0].norm_sq(), brute[1].norm_sq()
    total = wp + wm
    born = {"plus": wp / total, "minus": wm / total} if total > 0 else None
    inputs = {
        "directions": [_vec_list(d) for d in dirs],
        "constraints": [list(c) for c in ens.constraints],
        "target": args.target,
        "seed": args.seed,
    }
    if args.format == "csv":
        rows = [
            ["+", *_quat_list(brute[0]), born["plus"] if born else ""],
            ["-", *_quat_list(brute[1]), born["minus"] if born else ""],
        ]
        return _csv_document(
            ["sign", "w", "x", "y", "z", "probability"],
            rows,
            comments=[f"n={len(dirs)}", f"constraints={list(ens.constraints)}"],
        )
    return _json_document(
        {
            "inputs": inputs,
            "n": len(dirs),
            "backend": backend_name(),
            "bruteforce": {
                "plus": _quat_list(brute[0]),
                "minus": _quat_list(brute[1]),
            },
            "closed_form": None
            if closed is None
            else {"plus": _quat_list(closed[0]), "minus": _quat_list(closed[1])},
            "closed_matches_bruteforce": None
            if closed is None
            else closed == brute,
            "born": born,
        }
    )


def cmd_singlet(args) -> str:
    a = _parse_vector(args.a, args.planar)
    b = _parse_vector(args.b, args.planar)
    record = correlation_record(a, b)
    inputs = {"a": _vec_list(a), "b": _vec_list(b), "seed": args.seed}
    if args.format == "csv":
        row = [
            *_vec_list(a),
            *_vec_list(b),
            record.ppp,
            record.ppm,
            record.pmp,
            record.pmm,
            record.e,
        ]
        return _csv_document(
            ["ax", "ay", "az", "bx", "by", "bz", "Ppp", "Ppm", "Pmp", "Pmm", "E"],
            [row],
        )
    return _json_document(
        {
            "inputs": inputs,
            "Ppp": record.ppp,
            "Ppm": record.ppm,
            "Pmp": record.pmp,
            "Pmm": record.pmm,
            "E": record.e,
        }
    )


def cmd_chsh(args) -> str:
    a = _parse_vector(args.a, args.planar)
    a2 = _parse_vector(args.a2, args.planar)
    b = _parse_vector(args.b, args.planar)
    b2 = _parse_vector(args.b2, args.planar)
    result = chsh(a, a2, b, b2)
    bound = classical_bound()
    payload = {
        "inputs": {
            "a": _vec_list(a),
            "a2": _vec_list(a2),
            "b": _vec_list(b),
            "b2": _vec_list(b2),
            "seed": args.seed,
        },
        "E_ab": result.e_ab,
        "E_ab2": result.e_ab2,
        "E_a2b": result.e_a2b,
        "E_a2b2": result.e_a2b2,
        "S": result.s,
        "abs_S": result.abs_s,
        "classical_bound": bound,
        "gap": result.abs_s - bound,
        "quantum_exceeds_classical": result.abs_s > bound,
    }
    if args.format == "csv":
        return _csv_document(
            ["E_ab", "E_ab2", "E_a2b", "E_a2b2", "S", "abs_S", "classical_bound"],
            [
                [
                    result.e_ab,
                    result.e_ab2,
                    result.e_a2b,
                    result.e_a2b2,
                    result.s,
                    result.abs_s,
                    bound,
                ]
            ],
        )
    return _json_document(payload)


def cmd_classical_check(args) -> str:
    rows = classical_strategies()
    bound = classical_bound()
    if args.format == "csv":
        return _csv_document(
            ["sa", "sa2", "sb", "sb2", "S"],
            [[r["sa"], r["sa2"], r["sb"], r["sb2"], r["S"]] for r in rows],
            comments=[f"classical_bound={bound}"],
        )
    return _json_document(
        {
            "inputs": {"seed": args.seed},
            "classical_bound": bound,
            "strategy_count": len(rows),
            "strategies": rows,
        }
    )


def cmd_triple(args) -> str:
    a = _parse_vector(args.a, args.planar)
    b = _parse_vector(args.b, args.planar)
    c = _parse_vector(args.c, args.planar)
    dirs = DirectionSet([a, b, c])
    triple_weights: dict[tuple[int, int, int], float] = {}
    for s1 in (1, -1):
        for s2 in (1, -1):
            for s3 in (1, -1):
                amp = triple_marginal(dirs, 0, s1, 1, s2, 2, s3)
                triple_weights[(s1, s2, s3)] = amp.norm_sq()
    pair_weights = {
        (s1, s2): pair_marginal(dirs, 0, s1, 1, s2).norm_sq()
        for s1 in (1, -1)
        for s2 in (1, -1)
    }
    total3 = sum(triple_weights.values())
    total2 = sum(pair_weights.values())
    rows = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            zp = triple_marginal(dirs, 0, s1, 1, s2, 2, 1)
            zm = triple_marginal(dirs, 0, s1, 1, s2, 2, -1)
            cross = (zp + zm).norm_sq() - zp.norm_sq() - zm.norm_sq()
            p_pair = pair_weights[(s1, s2)] / total2
            summed = (
                triple_weights[(s1, s2, 1)] + triple_weights[(s1, s2, -1)]
            ) / total3
            rows.append(
                {
                    "s1": s1,
                    "s2": s2,
                    "pair_probability": p_pair,
                    "summed_triple_probability": summed,
                    "probability_gap": p_pair - summed,
                    "cross_term": cross,
                    "weight_identity_gap": pair_weights[(s1, s2)]
                    - triple_weights[(s1, s2, 1)]
                    - triple_weights[(s1, s2, -1)]
                    - cross,
                }
            )
    if args.format == "csv":
        return _csv_document(
            [
                "s1",
                "s2",
                "pair_probability",
                "summed_triple_probability",
                "probability_gap",
                "cross_term",
            ],
            [
                [
                    r["s1"],
                    r["s2"],
                    r["pair_probability"],
                    r["summed_triple_probability"],
                    r["probability_gap"],
                    r["cross_term"],
                ]
                for r in rows
            ],
            comments=[f"a={_vec_list(a)} b={_vec_list(b)} c={_vec_list(c)}"],
        )
    return _json_document(
        {
            "inputs": {
                "a": _vec_list(a),
                "b": _vec_list(b),
                "c": _vec_list(c),
                "seed": args.seed,
            },
            "a_dot_b": a.dot(b),
            "a_dot_c": a.dot(c),
            "nonadditivity": rows,
        }
    )


def cmd_two_slit(args) -> str:
    geom = SlitGeometry(
        separation=args.separation,
        width=args.width,
        wavelength=args.wavelength,
        distance=args.screen_distance,
        points=args.points,
        span=args.span,
    )
    sa = slit_amplitudes(geom)
    mixture = sa.mixture()
    model = PhaseShiftModel(mode=args.phase, theta=args.theta, samples=args.samples)
    if model.mode == "fixed":
        pattern = screen_pattern(sa, model.theta)
        mode_info = {"phase": "fixed", "theta": model.theta}
    else:
        pattern = decohere_average(
            sa, samples=model.samples, mode=args.average, rng=args.seed
        )
        mode_info = {
            "phase": "random",
            "average": args.average,
            "samples": model.samples,
        }
    contrast = float(np.max(np.abs(pattern - mixture)) / np.max(mixture))
    report = positivity_check(sa, hidden_size=args.hidden_size, rng=args.seed)
    inputs = {
        "separation": args.separation,
        "width": args.width,
        "wavelength": args.wavelength,
        "screen_distance": args.screen_distance,
        "points": args.points,
        "span": geom.span,
        "seed": args.seed,
        **mode_info,
    }
    p_left = np.abs(sa.z_left) ** 2
    p_right = np.abs(sa.z_right) ** 2
    if args.format == "csv":
        rows = [
            [x, pi, mi, pl, pr]
            for x, pi, mi, pl, pr in zip(
                sa.x.tolist(),
                pattern.tolist(),
                mixture.tolist(),
                p_left.tolist(),
                p_right.tolist(),
            )
        ]
        comments = [
            f"separation={args.separation} width={args.width} "
            f"wavelength={args.wavelength} screen_distance={args.screen_distance}",
            f"points={args.points} span={geom.span} mode={mode_info}",
        ]
        return _csv_document(
            ["x", "P_interference", "P_mixture", "P_L_component", "P_R_component"],
            rows,
            comments=comments,
        )
    return _json_document(
        {
            "inputs": inputs,
            "fringe_spacing": geom.fringe_spacing,
            "fringe_contrast": contrast,
            "pattern_min": float(pattern.min()),
            "mixture_min": float(mixture.min()),
            "positivity": {
                "hidden_size": report.hidden_size,
                "pattern_min": report.pattern_min,
                "mixture_min": report.mixture_min,
                "mixture_lower_bound_min": report.mixture_lower_bound_min,
                "mixture_strictly_positive": report.mixture_strictly_positive,
                "pattern_has_zeros": report.pattern_has_zeros,
            },
            "arrays": {
                "x": sa.x.tolist(),
                "pattern": pattern.tolist(),
                "mixture": mixture.tolist(),
                "p_left": p_left.tolist(),
                "p_right": p_right.tolist(),
            },
        }
    )


def cmd_phase_space(args) -> str:
    grid = Grid1D(args.points, args.length, args.hbar)
    psi = gaussian_wavepacket(grid, args.center, args.momentum, args.sigma)
    z = phase_space_amplitude(psi, None, args.x0, args.p0)
    diag_x = marginal_diagnostics(z, "x")
    diag_p = marginal_diagnostics(z, "p")
    inputs = {
        "points": args.points,
        "length": args.length,
        "hbar": args.hbar,
        "mass": args.mass,
        "sigma": args.sigma,
        "center": args.center,
        "momentum": args.momentum,
        "x0": args.x0,
        "p0": args.p0,
        "seed": args.seed,
    }
    if args.format == "csv":
        rows = []
        for j, xv in enumerate(grid.x.tolist()):
            row_vals = z.values[j]
            for k, pv in enumerate(grid.p.tolist()):
                rows.append([xv, pv, float(row_vals[k].real), float(row_vals[k].imag)])
        comments = [
            f"N={args.points} L={args.length} hbar={args.hbar} m={args.mass} "
            f"x0={args.x0} p0={args.p0}"
        ]
        return _csv_document(["x", "p", "re", "im"], rows, comments=comments)
    return _json_document(
        {
            "inputs": inputs,
            "marginal_x": diag_x,
            "marginal_p": diag_p,
        }
    )


def cmd_evolve(args) -> str:
    grid = Grid1D(args.points, args.length, args.hbar)
    psi = gaussian_wavepacket(grid, args.center, args.momentum, args.sigma)
    if args.steps < 1:
        raise ValueError("steps must be at least 1")
    dt = args.time / args.steps
    state = psi
    for _ in range(args.steps):
        state = evolve_free(state, args.mass, dt)
    width = state.std() * math.sqrt(2.0)
    tau = args.hbar * args.time / (args.mass * args.sigma**2)
    width_expected = args.sigma * math.sqrt(1.0 + tau * tau)
    center_expected = args.center + args.momentum * args.time / args.mass
    inputs = {
        "points": args.points,
        "length": args.length,
        "hbar": args.hbar,
        "mass": args.mass,
        "sigma": args.sigma,
        "center": args.center,
        "momentum": args.momentum,
        "time": args.time,
        "steps": args.steps,
        "seed": args.seed,
    }
    if args.format == "csv":
        rows = [
            [x, float(v.real), float(v.imag)]
            for x, v in zip(grid.x.tolist(), state.values)
        ]
        comments = [
            f"N={args.points} L={args.length} hbar={args.hbar} m={args.mass} "
            f"x0={args.center} p0={args.momentum} time={args.time}"
        ]
        return _csv_document(["x", "re", "im"], rows, comments=comments)
    return _json_document(
        {
            "inputs": inputs,
            "width_measured": width,
            "width_expected": width_expected,
            "center_measured": state.mean(),
            "center_expected": center_expected,
            "norm_drift": abs(state.norm_sq() - psi.norm_sq()),
        }
    )


# ---------------------------------------------------------------------------
# parser


def _add_common(sub):
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--out", default=None, help="write the document to a file")
    sub.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ampdist",
        description="Amplitude-distribution experiments on extended phase spaces",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spin-marginal", help="single-particle spin marginals")
    sp.add_argument("--directions", default=None, help="JSON file of unit vectors")
    sp.add_argument("--dirs", default=None, help="inline directions x,y,z;x,y,z;...")
    sp.add_argument(
        "--constrain",
        action="append",
        default=[],
        metavar="INDEX:SIGN",
        help="pin a direction's sign, e.g. 0:+",
    )
    sp.add_argument("--target", type=int, required=True)
    _add_common(sp)
    sp.set_defaults(func=cmd_spin_marginal)

    sg = subs.add_parser("singlet", help="singlet pair probabilities and E(a,b)")
    sg.add_argument("--a", required=True)
    sg.add_argument("--b", required=True)
    sg.add_argument("--planar", action="store_true", help="angles in degrees, x-z plane")
    _add_common(sg)
    sg.set_defaults(func=cmd_singlet)

    ch = subs.add_parser("chsh", help="CHSH quantity and the classical bound")
    ch.add_argument("--a", required=True)
    ch.add_argument("--a2", required=True)
    ch.add_argument("--b", required=True)
    ch.add_argument("--b2", required=True)
    ch.add_argument("--planar", action="store_true", help="angles in degrees, x-z plane")
    _add_common(ch)
    ch.set_defaults(func=cmd_chsh)

    cc = subs.add_parser(
        "classical-check", help="exhaustive deterministic local strategies"
    )
    _add_common(cc)
    cc.set_defaults(func=cmd_classical_check)

    tr = subs.add_parser("triple", help="three-direction interference terms")
    tr.add_argument("--a", required=True)
    tr.add_argument("--b", required=True)
    tr.add_argument("--c", required=True)
    tr.add_argument("--planar", action="store_true", help="angles in degrees, x-z plane")
    _add_common(tr)
    tr.set_defaults(func=cmd_triple)

    ts = subs.add_parser("two-slit", help="two-slit patterns and decoherence")
    ts.add_argument("--separation", type=float, required=True)
    ts.add_argument("--width", type=float, required=True)
    ts.add_argument("--wavelength", type=float, required=True)
    ts.add_argument("--screen-distance", type=float, required=True)
    ts.add_argument("--points", type=int, default=4096)
    ts.add_argument("--span", type=float, default=None)
    ts.add_argument("--phase", choices=("fixed", "random"), default="fixed")
    ts.add_argument("--theta", type=float, default=0.0)
    ts.add_argument(
        "--samples", type=int, default=256, help="theta nodes for the random average"
    )
    ts.add_argument(
        "--average",
        choices=("quadrature", "sampled"),
        default="quadrature",
        help="ensemble average rule in random mode",
    )
    ts.add_argument("--hidden-size", type=int, default=4)
    _add_common(ts)
    ts.set_defaults(func=cmd_two_slit)

    ps = subs.add_parser("phase-space", help="Z(x,p) construction and marginals")
    ps.add_argument("--sigma", type=float, default=1.0)
    ps.add_argument("--center", type=float, default=0.0)
    ps.add_argument("--momentum", type=float, default=0.0)
    ps.add_argument("--x0", type=float, default=0.0)
    ps.add_argument("--p0", type=float, default=0.0)
    ps.add_argument("--points", type=int, default=256)
    ps.add_argument("--length", type=float, default=40.0)
    ps.add_argument("--hbar", type=float, default=1.0)
    ps.add_argument("--mass", type=float, default=1.0)
    _add_common(ps)
    ps.set_defaults(func=cmd_phase_space)

    ev = subs.add_parser("evolve", help="free wavepacket evolution")
    ev.add_argument("--sigma", type=float, default=1.0)
    ev.add_argument("--center", type=float, default=0.0)
    ev.add_argument("--momentum", type=float, default=0.0)
    ev.add_argument("--time", type=float, required=True)
    ev.add_argument("--steps", type=int, default=1)
    ev.add_argument("--mass", type=float, default=1.0)
    ev.add_argument("--hbar", type=float, default=1.0)
    ev.add_argument("--points", type=int, default=2048)
    ev.add_argument("--length", type=float, default=80.0)
    _add_common(ev)
    ev.set_defaults(func=cmd_evolve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        document = args.func(args)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return _emit(args, document)


if __name__ == "__main__":
    sys.exit(main())
