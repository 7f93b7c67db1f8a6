"""Command-line entry point.

    squeezetransfer squeeze-eval --state cat:0.7995:+
    squeezetransfer prop1 --j-max 25 --eta-step 0.05 -o prop1.csv
    squeezetransfer limit --alpha2 0.6392 --j 5,10,20,50,100,200
    squeezetransfer dicke --atoms 60 --alpha0 0.7995 --tau 0:3.1416:200 -o dicke.csv
    squeezetransfer qfunc --atoms 10 --tau 0,1.5708 --plane field -o q.csv

Exit codes: 0 ok, 1 ``--check`` violation, 2 invalid input, 3 truncation too small.
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import analytic, dicke, phasespace
from .errors import SqueezeError, TruncationTooSmall
from .qstates import (
    MIN_CUTOFF,
    CatParity,
    SpinCoherentParam,
    cat_state,
    coherent_state,
    default_cutoff,
    dicke_state,
    fock_state,
    spin_cat_state,
    spin_coherent_state,
)
from .squeezing import squeezing_report

SIG = 12


class CheckFailed(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    return f"{float(x):.{SIG}g}"


def parse_tau(spec: str) -> np.ndarray:
    """'start:stop:steps' (steps+1 points) or a comma-separated list."""
    if ":" in spec:
        start, stop, steps = spec.split(":")
        steps = int(steps)
        if steps < 0:
            raise ValueError("tau steps must be non-negative")
        return np.linspace(float(start), float(stop), steps + 1)
    return np.array([float(t) for t in spec.split(",") if t.strip()])


def parse_floats(spec: str) -> list:
    return [float(x) for x in str(spec).split(",") if x.strip()]


def parse_state(spec: str, n_max=None):
    parts = spec.split(":")
    kind, args = parts[0].lower(), parts[1:]
    try:
        if kind == "fock":
            n = int(args[0])
            return fock_state(n, n_max or max(MIN_CUTOFF, n + 2))
        if kind == "coherent":
            alpha = complex(args[0])
            return coherent_state(alpha, n_max or default_cutoff(abs(alpha)))
        if kind == "cat":
            alpha = complex(args[0])
            return cat_state(alpha, CatParity.parse(args[1]), n_max or default_cutoff(abs(alpha)))
        if kind == "dicke":
            return dicke_state(float(args[0]), int(args[1]))
        if kind == "scs":
            return spin_coherent_state(SpinCoherentParam.from_j(complex(args[1]), float(args[0])))
        if kind == "spincat":
            param = SpinCoherentParam.from_j(complex(args[1]), float(args[0]))
            return spin_cat_state(param, CatParity.parse(args[2]))
    except IndexError:
        raise ValueError(f"state spec {spec!r} is missing fields") from None
    raise ValueError(f"unknown state kind {kind!r}; expected fock, coherent, cat, dicke, scs, spincat")


# ---------------------------------------------------------------------------
# output helpers


def _provenance(cmd: str, args) -> str:
    skip = {"func", "output", "config", "check", "format"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return f"# squeezetransfer {cmd} {json.dumps(cfg, sort_keys=True, default=str)}"


def _write(args, text: str):
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)


def _table(args, cmd, header, rows, extra_header=()):
    if args.format == "json":
        payload = {"command": cmd, "columns": header,
                   "rows": [[r if isinstance(r, str) else float(r) for r in row] for row in rows]}
        for line in extra_header:
            k, _, v = line.lstrip("# ").partition("=")
            payload[k] = v
        return json.dumps(payload, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(_provenance(cmd, args) + "\n")
    for line in extra_header:
        buf.write(line + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(x) for x in row) + "\n")
    return buf.getvalue()


def _require(cond: bool, message: str):
    if not cond:
        raise CheckFailed(message)


# ---------------------------------------------------------------------------
# subcommands


def cmd_squeeze_eval(args):
    state = parse_state(args.state, args.n_max)
    report = squeezing_report(state).to_dict()
    if args.check:
        if report["zeta"] is not None:
            _require(report["zeta"] >= 0, "zeta < 0")
        if report["xi"] is not None:
            _require(report["xi"] >= 0, "xi < 0")
            if report["n_perp_star"] is not None:
                m = np.array(report["mean_spin"])
                _require(abs(np.dot(report["n_perp_star"], m / np.linalg.norm(m))) <= 1e-10,
                         "n_perp not perpendicular to the mean spin")
    report["state"] = args.state
    _write(args, json.dumps(report, indent=1, sort_keys=True) + "\n")


def cmd_prop1(args):
    rows = analytic.prop1_scan(args.j_max, args.eta_step, args.j_min)
    if args.check:
        for r in rows:
            # the sign of xi - 1 is read from xi_tilde, which stays resolvable
            if r.parity is CatParity.EVEN:
                _require(r.xi_tilde < 0, f"even cat not squeezed at j={r.j}, eta={r.eta}")
            else:
                _require(r.xi_tilde > 0, f"odd cat squeezed at j={r.j}, eta={r.eta}")
            _require(abs(r.xi - r.xi_direct) <= 1e-9, f"closed-form xi disagrees at j={r.j}, eta={r.eta}")
            _require(abs(r.F1 - r.F1_direct) <= 1e-10 and abs(r.F2 - r.F2_direct) <= 1e-10,
                     f"factorial moments disagree at j={r.j}, eta={r.eta}")
    header = ["j", "eta", "parity", "xi", "xi_tilde", "F1", "F2"]
    out = [[r.j, r.eta, r.parity.symbol, r.xi, r.xi_tilde, r.F1, r.F2] for r in rows]
    _write(args, _table(args, "prop1", header, out))


def cmd_limit(args):
    js = parse_floats(args.j)
    pts = analytic.contraction_limit_scan(args.alpha2, js, CatParity.parse(args.parity))
    if args.check:
        gaps = [p.gap for p in pts]
        _require(all(b < a for a, b in zip(gaps, gaps[1:])), "gap is not strictly decreasing")
    header = ["j", "eta", "xi", "zeta_target", "gap", "mean_excitation_fraction"]
    out = [[p.j, p.eta_abs, p.xi, p.zeta_target, p.gap, p.mean_excitation_fraction] for p in pts]
    _write(args, _table(args, "limit", header, out))


def _dicke_config(args, taus):
    return dicke.DickeConfig(n_atoms=args.atoms, alpha0=complex(args.alpha0), tau_grid=taus,
                             n_max=args.n_max, use_blocks=not args.no_blocks)


def cmd_dicke(args):
    cfg = _dicke_config(args, parse_tau(args.tau))
    run = dicke.evolve(cfg)
    if args.check:
        e0 = run.rows[0].total_excitation
        for r in run.rows:
            _require(abs(r.norm - 1) <= 1e-9, f"norm drift at tau={r.tau}")
            _require(abs(r.parity - 1) <= 1e-9, f"parity drift at tau={r.tau}")
            _require(abs(r.total_excitation - e0) <= 1e-9, f"excitation drift at tau={r.tau}")
            _require(r.abs_a <= 1e-10 and r.abs_s_minus <= 1e-10, f"odd moment at tau={r.tau}")
    header = ["tau", "zeta_field", "xi_atoms", "xi_prime_atoms", "parity", "total_excitation", "norm"]
    out = [[r.tau, r.zeta_field, r.xi_atoms, r.xi_prime_atoms, r.parity, r.total_excitation, r.norm]
           for r in run.rows]
    _write(args, _table(args, "dicke", header, out))


def cmd_swap(args):
    run = dicke.swap_reference(complex(args.alpha0), args.n_max, parse_tau(args.tau))
    header = ["tau", "zeta_a", "zeta_b", "norm"]
    out = [[r.tau, r.zeta_a, r.zeta_b, r.norm] for r in run.rows]
    _write(args, _table(args, "swap", header, out))


def cmd_qfunc(args):
    taus = parse_tau(args.tau)
    cfg = _dicke_config(args, taus)
    lo, hi, n = args.grid_min, args.grid_max, args.grid_points
    if n < 2 or not hi > lo:
        raise ValueError("grid needs grid-max > grid-min and at least 2 points")
    axis = np.linspace(lo, hi, n)
    evolver = dicke.DickeEvolver(cfg)
    grids = []
    for tau in taus:
        state = evolver.state(tau)
        if args.plane == "field":
            g = phasespace.field_q(state, axis, axis, tau)
        else:
            g = phasespace.atom_husimi(state, axis, axis, tau)
        grids.append(g)
    if args.check:
        for g in grids:
            _require(np.nanmin(g.values) >= -1e-12, f"negative Q at tau={g.time_tau}")
            if np.allclose(axis, -axis[::-1]):
                diff = np.abs(g.values - g.reflected().values)
                _require(np.nanmax(diff) <= 1e-9, f"Q(z) != Q(-z) at tau={g.time_tau}")
            if args.plane == "field":
                _require(abs(g.integral() - 1) <= 0.02, f"field Q integral off at tau={g.time_tau}")
    rows = []
    for g in grids:
        for i, im in enumerate(g.im_axis):
            for k, re in enumerate(g.re_axis):
                rows.append([g.time_tau, re, im, g.values[i, k]])
    plane = "alpha" if args.plane == "field" else "eta"
    _write(args, _table(args, "qfunc", ["tau", "re", "im", "value"], rows,
                        extra_header=(f"# plane={plane}",)))


# ---------------------------------------------------------------------------
# argument handling


def load_config(path: str) -> dict:
    """Flat key/value config: JSON object, or 'key = value' lines (INI without sections)."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("config JSON must be an object")
        return data
    except json.JSONDecodeError:
        parser = configparser.ConfigParser()
        parser.read_string("[root]\n" + text)
        return dict(parser["root"])


def _common(p, formats=("csv", "json")):
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--check", action="store_true", help="run the invariant suite; exit 1 on violation")
    p.add_argument("--config", default=None, help="key/value config file (JSON or key = value)")


def _dicke_args(p, tau_default):
    p.add_argument("--atoms", type=int, default=10, help="number of atoms N (j = N/2)")
    p.add_argument("--alpha0", default="0.7995", help="initial even-cat amplitude")
    p.add_argument("--tau", default=tau_default, help="start:stop:steps or comma list of tau")
    p.add_argument("--n-max", type=int, default=None, help="photon cutoff")
    p.add_argument("--no-blocks", action="store_true", help="diagonalize the full matrix")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="squeezetransfer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("squeeze-eval", help="squeezing report for a named state")
    p.add_argument("--state", required=True,
                   help="fock:n | coherent:a | cat:a:+/- | dicke:j:n | scs:j:eta | spincat:j:eta:+/-")
    p.add_argument("--n-max", type=int, default=None)
    _common(p, formats=("json",))
    p.set_defaults(func=cmd_squeeze_eval)

    p = sub.add_parser("prop1", help="even/odd spin cat scan over (j, eta)")
    p.add_argument("--j-max", type=float, default=25.0)
    p.add_argument("--j-min", type=float, default=1.0)
    p.add_argument("--eta-step", type=float, default=0.05)
    _common(p)
    p.set_defaults(func=cmd_prop1)

    p = sub.add_parser("limit", help="spin squeezing along j -> inf with 2j|eta|^2 fixed")
    p.add_argument("--alpha2", type=float, default=0.6392)
    p.add_argument("--j", default="5,10,20,50,100,200")
    p.add_argument("--parity", default="+")
    _common(p)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("dicke", help="squeezing transfer under the resonant Dicke Hamiltonian")
    _dicke_args(p, "0:3.141592653589793:200")
    _common(p)
    p.set_defaults(func=cmd_dicke)

    p = sub.add_parser("swap", help="two-mode (N -> inf) reference evolution")
    p.add_argument("--alpha0", default="0.7995")
    p.add_argument("--tau", default="0:3.141592653589793:200")
    p.add_argument("--n-max", type=int, default=None)
    _common(p)
    p.set_defaults(func=cmd_swap)

    p = sub.add_parser("qfunc", help="field Q or atomic Husimi Q grids along a Dicke run")
    _dicke_args(p, "0,1.5707963267948966")
    p.add_argument("--plane", choices=("field", "atom"), default="field")
    p.add_argument("--grid-min", type=float, default=-3.0)
    p.add_argument("--grid-max", type=float, default=3.0)
    p.add_argument("--grid-points", type=int, default=121)
    _common(p)
    p.set_defaults(func=cmd_qfunc)
    return parser


def parse_args(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = {k.replace("-", "_"): v for k, v in load_config(args.config).items()}
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in subparser._actions}
        unknown = sorted(set(cfg) - set(known))
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        defaults = {}
        for k, v in cfg.items():
            action = known[k]
            if isinstance(v, str) and action.type is not None:
                v = action.type(v)
            elif isinstance(v, str) and action.const is True:  # store_true flags
                v = v.strip().lower() in ("1", "true", "yes", "on")
            defaults[k] = v
        subparser.set_defaults(**defaults)
        args = parser.parse_args(argv)  # explicit flags still win
    return args


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    try:
        args.func(args)
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except TruncationTooSmall as exc:
        leak = "" if exc.leak is None else f" (norm leak {exc.leak:.3e})"
        print(f"truncation too small: {exc}{leak}", file=sys.stderr)
        return 3
    except (SqueezeError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:  # e.g. piped into head
        sys.stdout = open(os.devnull, "w")
    return 0


if __name__ == "__main__":
    sys.exit(main())
