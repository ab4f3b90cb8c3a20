"""Command-line front end: parameter reports, trajectories, verification.

Commands: params, simulate, phase, verify, density.  Output is line-oriented
key=value plus CSV; CSV bytes are deterministic for a fixed configuration
(fixed significant digits, no timestamps, no locale).

Exit codes: 0 success, 1 verification failure, 2 parameter/domain failure,
64 usage, 70 integration failure, 74 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import density as dens
from . import oracle, solutions as sol
from .errors import (
    DomainError,
    DriveConditionError,
    IntegrationError,
    SingularityError,
)
from .su3 import H0Params

__all__ = ["main"]

EX_OK = 0
EX_VERIFY = 1
EX_PARAM = 2
EX_USAGE = 64
EX_INTEGRATION = 70
EX_IO = 74

CSV_HEADER = (
    "t,re_psi1,im_psi1,re_psi2,im_psi2,re_psi3,im_psi3,"
    "p1,p2,p3,phi,sn,cn,dn"
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


class _CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}g}"


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise _CliError(EX_PARAM, f"bad config line: {line!r}")
                key, _, value = line.partition("=")
                out[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise _CliError(EX_IO, f"cannot read config: {exc}")
    return out


_CONFIG_ALIASES = {"fmt": "format", "lam": "lambda"}


@dataclass
class _Options:
    """Flag values merged with config-file defaults."""

    args: argparse.Namespace
    config: dict[str, str]

    def get(self, key: str, cast, default=None):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag
        name = _CONFIG_ALIASES.get(key, key)
        if name in self.config:
            try:
                return cast(self.config[name])
            except ValueError:
                raise _CliError(EX_PARAM, f"bad config value for {name}")
        return default


def _add_drive_flags(p):
    p.add_argument("--a", type=float, help="cn-channel amplitude")
    p.add_argument("--x", type=float, help="dn-channel amplitude")
    p.add_argument("--k", type=float, help="elliptic modulus in (0, 1]")
    p.add_argument("--omega", type=float, help="drive angular frequency")
    p.add_argument("--hbar", type=float, help="reduced Planck constant")


def _add_common_flags(p):
    p.add_argument("--mu", type=float, help="level splitting of the static Hamiltonian")
    p.add_argument("--lambda", dest="lam", type=float, help="third-level energy")
    p.add_argument("--t-max", dest="t_max", type=float, help="end of the time grid")
    p.add_argument("--samples", type=int, help="number of grid samples")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=["csv", "csv+svg"], help="output format")
    p.add_argument("--precision", type=int, help="significant digits (default 12)")
    p.add_argument("--config", help="key=value defaults file")


def _drive_from(opts: _Options) -> sol.DriveParams:
    k = opts.get("k", float)
    omega = opts.get("omega", float, 1.0)
    hbar = opts.get("hbar", float, 1.0)
    a = opts.get("a", float)
    x = opts.get("x", float)
    if k is None:
        raise _CliError(EX_USAGE, "--k is required")
    try:
        if a is None and x is None:
            raise _CliError(EX_USAGE, "provide --a and/or --x")
        if x is None:
            x = sol.complete_x(a, k, omega, hbar)
        elif a is None:
            a = sol.complete_a(x, k, omega, hbar)
        return sol.DriveParams(a=a, x=x, omega=omega, k=k, hbar=hbar)
    except DomainError as exc:
        raise _CliError(EX_PARAM, str(exc))


def _h0_from(opts: _Options) -> H0Params:
    mu = opts.get("mu", float, 10.0)
    lam = opts.get("lam", float, 5.0)
    hbar = opts.get("hbar", float, 1.0)
    try:
        return H0Params(mu=mu, lam=lam, hbar=hbar)
    except DomainError as exc:
        raise _CliError(EX_PARAM, str(exc))


def _initial_state(spec: str, p, c):
    if spec == "ground":
        return np.array([1.0, 0.0, 0.0], dtype=complex)
    if spec in ("zero", "plus", "minus"):
        v0, vp, vm = sol._basis_columns(p, c, 0.0, 0.0)
        return {"zero": v0, "plus": vp, "minus": vm}[spec]
    parts = spec.split(",")
    if len(parts) != 6:
        raise _CliError(
            EX_PARAM,
            "--initial must be ground|zero|plus|minus or six comma-separated"
            " reals re1,im1,re2,im2,re3,im3",
        )
    try:
        vals = [float(s) for s in parts]
    except ValueError:
        raise _CliError(EX_PARAM, "non-numeric --initial component")
    psi = np.array(
        [complex(vals[0], vals[1]), complex(vals[2], vals[3]), complex(vals[4], vals[5])]
    )
    if abs(np.linalg.norm(psi) - 1.0) > 1e-8:
        raise _CliError(EX_PARAM, "explicit --initial must be normalized to 1e-8")
    return psi


def _open_out(path):
    if path is None:
        return sys.stdout, False
    try:
        return open(path, "w", encoding="utf-8", newline=""), True
    except OSError as exc:
        raise _CliError(EX_IO, f"cannot open output: {exc}")


def _write_svg(path, title, ts, series, labels):
    width, height, pad = 800, 400, 45.0
    tmin, tmax = float(min(ts)), float(max(ts))
    lo = min(float(np.min(s)) for s in series)
    hi = max(float(np.max(s)) for s in series)
    if hi == lo:
        hi = lo + 1.0
    sx = (width - 2 * pad) / (tmax - tmin)
    sy = (height - 2 * pad) / (hi - lo)
    colors = ["#1f77b4", "#d62728", "#2ca02c"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width/2:.0f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<rect x="{pad}" y="{pad}" width="{width-2*pad}" height="{height-2*pad}"'
        ' fill="none" stroke="#888"/>',
        f'<text x="{pad}" y="{height-8:.0f}" font-size="11">t={tmin:g}</text>',
        f'<text x="{width-pad:.0f}" y="{height-8:.0f}" text-anchor="end" font-size="11">t={tmax:g}</text>',
        f'<text x="6" y="{height-pad:.0f}" font-size="11">{lo:.3g}</text>',
        f'<text x="6" y="{pad+4:.0f}" font-size="11">{hi:.3g}</text>',
    ]
    for i, (s, label) in enumerate(zip(series, labels)):
        pts = " ".join(
            f"{pad + (t - tmin) * sx:.2f},{height - pad - (v - lo) * sy:.2f}"
            for t, v in zip(ts, s)
        )
        color = colors[i % len(colors)]
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1"/>')
        parts.append(
            f'<text x="{width-pad-6:.0f}" y="{pad+16+14*i:.0f}" text-anchor="end"'
            f' font-size="12" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(parts) + "\n")
    except OSError as exc:
        raise _CliError(EX_IO, f"cannot write svg: {exc}")


def _svg_path(out):
    return (out[:-4] if out.endswith(".csv") else out) + ".svg"


def cmd_params(opts: _Options) -> int:
    prec = opts.get("precision", int, 12)
    p = _drive_from(opts)
    try:
        c = sol.validate(p)
    except DriveConditionError as exc:
        print(f"condition_residual={_fmt(exc.residual, prec)}")
        print("valid=false")
        print(str(exc), file=sys.stderr)
        return EX_PARAM
    e = p.hbar * p.omega
    residual = abs(4 * p.k**2 * e**2 - p.a**2 - p.k**2 * p.x**2)
    print(f"a={_fmt(p.a, prec)}")
    print(f"x={_fmt(p.x, prec)}")
    print(f"k={_fmt(p.k, prec)}")
    print(f"omega={_fmt(p.omega, prec)}")
    print(f"hbar={_fmt(p.hbar, prec)}")
    print(f"B={_fmt(c.B, prec)}")
    print(f"T={_fmt(c.T, prec)}")
    if p.k < 1.0:
        print(f"period={_fmt(sol.drive_period(p), prec)}")
    else:
        print("period=inf")
    print(f"condition_residual={_fmt(residual, prec)}")
    print("valid=true")
    return EX_OK


def _run_trajectory(opts: _Options):
    p = _drive_from(opts)
    try:
        c = sol.validate(p)
    except DriveConditionError as exc:
        raise _CliError(EX_PARAM, str(exc))
    h0 = _h0_from(opts)
    t_max = opts.get("t_max", float, 60.0)
    samples = opts.get("samples", int, 2401)
    if samples < 2 or t_max <= 0.0:
        raise _CliError(EX_PARAM, "need samples >= 2 and t-max > 0")
    ts = np.linspace(0.0, t_max, samples)
    init = _initial_state(opts.get("initial", str, "ground"), p, c)
    rows = sol.trajectory(p, c, h0, init, ts)
    return p, c, h0, ts, rows


def cmd_simulate(opts: _Options) -> int:
    prec = opts.get("precision", int, 12)
    out = opts.get("out", str)
    fmt = opts.get("fmt", str, "csv")
    if fmt == "csv+svg" and out is None:
        raise _CliError(EX_USAGE, "--format csv+svg needs --out")
    p, c, h0, ts, rows = _run_trajectory(opts)
    fh, close = _open_out(out)
    try:
        fh.write(CSV_HEADER + "\n")
        for s in rows:
            cells = [
                s.t,
                s.psi[0].real, s.psi[0].imag,
                s.psi[1].real, s.psi[1].imag,
                s.psi[2].real, s.psi[2].imag,
                s.occupations[0], s.occupations[1], s.occupations[2],
                s.phi, s.jacobi.sn, s.jacobi.cn, s.jacobi.dn,
            ]
            fh.write(",".join(_fmt(v, prec) for v in cells) + "\n")
    except OSError as exc:
        raise _CliError(EX_IO, f"write failed: {exc}")
    finally:
        if close:
            fh.close()
    if fmt == "csv+svg":
        occ = np.array([s.occupations for s in rows])
        _write_svg(
            _svg_path(out), "occupation probabilities", ts,
            [occ[:, 0], occ[:, 1], occ[:, 2]], ["p1", "p2", "p3"],
        )
    return EX_OK


def cmd_phase(opts: _Options) -> int:
    prec = opts.get("precision", int, 12)
    out = opts.get("out", str)
    fmt = opts.get("fmt", str, "csv")
    if fmt == "csv+svg" and out is None:
        raise _CliError(EX_USAGE, "--format csv+svg needs --out")
    p = _drive_from(opts)
    try:
        c = sol.validate(p)
    except DriveConditionError as exc:
        raise _CliError(EX_PARAM, str(exc))
    t_max = opts.get("t_max", float, 60.0)
    samples = opts.get("samples", int, 2401)
    if samples < 2 or t_max <= 0.0:
        raise _CliError(EX_PARAM, "need samples >= 2 and t-max > 0")
    ts = np.linspace(0.0, t_max, samples)
    phis = sol.phase_on_grid(p, c, ts)
    fh, close = _open_out(out)
    try:
        fh.write("t,phi,sin_phi\n")
        for t, phi in zip(ts, phis):
            fh.write(
                ",".join(_fmt(v, prec) for v in (t, phi, math.sin(phi))) + "\n"
            )
    except OSError as exc:
        raise _CliError(EX_IO, f"write failed: {exc}")
    finally:
        if close:
            fh.close()
    if fmt == "csv+svg":
        _write_svg(_svg_path(out), "sin(phi)", ts, [np.sin(phis)], ["sin_phi"])
    return EX_OK


def cmd_verify(opts: _Options) -> int:
    prec = opts.get("precision", int, 12)
    tol = opts.get("tol", float, 1e-5)
    p = _drive_from(opts)
    h0 = _h0_from(opts)
    t_max = opts.get("t_max", float, 60.0)
    samples = opts.get("samples", int, 600)
    ts = np.linspace(0.0, t_max, samples)
    cfg = oracle.IntegratorConfig(t_grid=tuple(ts), rel_tol=1e-9, abs_tol=1e-12)
    force = bool(getattr(opts.args, "force_zero_phase", False))
    report = oracle.verify_all(
        p, h0, cfg,
        density_mu=h0.mu, density_lam=h0.lam,
        force_zero_phase=force,
    )
    for key, msg in sorted(report.failures.items()):
        print(f"failure_{key}={msg}")
    if "validation" in report.failures:
        print("verdict=parameter-failure")
        return EX_PARAM
    print(f"max_state_deviation={_fmt(report.max_state_deviation, prec)}")
    print(f"max_gram_deviation={_fmt(report.max_gram_deviation, prec)}")
    print(f"max_eigenvalue_drift={_fmt(report.max_eigenvalue_drift, prec)}")
    print(f"conjugation_residual={_fmt(report.conjugation_residual, prec)}")
    print(f"matched_vn_variant={report.matched_vn_variant}")
    res = report.extras.get("variant_resolution", {})
    if "scaled_matches_with_mu_negated" in res:
        print(
            "scaled_matches_with_mu_negated="
            + str(res["scaled_matches_with_mu_negated"]).lower()
        )
    if p.k == 1.0:
        print("note=phase identically zero at k=1")
    print(f"tol={_fmt(tol, prec)}")
    integration_failures = [
        k for k in report.failures if k != "validation" and k != "density"
    ]
    if integration_failures:
        print("verdict=integration-failure")
        return EX_INTEGRATION
    ok = report.passed(tol)
    print(f"verdict={'pass' if ok else 'fail'}")
    return EX_OK if ok else EX_VERIFY


def cmd_density(opts: _Options) -> int:
    prec = opts.get("precision", int, 12)
    out = opts.get("out", str)
    mu = opts.get("mu", float, 10.0)
    lam = opts.get("lam", float, 5.0)
    omega = opts.get("omega", float, 1.0)
    hbar = opts.get("hbar", float, 1.0)
    k = opts.get("k", float)
    if k is None:
        raise _CliError(EX_USAGE, "--k is required")
    try:
        coeffs = dens.solve_coeffs(mu, lam, omega, k, hbar)
        h0 = H0Params(mu=mu, lam=lam, hbar=hbar)
    except DomainError as exc:
        raise _CliError(EX_PARAM, str(exc))
    period = 4.0 * sol.quarter_period(k) / omega if k < 1.0 else None
    t_max = opts.get("t_max", float, 3.0 * period if period else 10.0)
    samples = opts.get("samples", int, 200)
    if samples < 2 or t_max <= 0.0:
        raise _CliError(EX_PARAM, "need samples >= 2 and t-max > 0")
    ts = np.linspace(0.0, t_max, samples)
    resolution = oracle.resolve_variant(coeffs, h0)

    eig0 = dens.eigenvalues(coeffs)
    rho0 = dens.rho(coeffs, h0, 0.0)
    fh, close = _open_out(out)
    try:
        for key, val in (
            ("A", coeffs.A), ("B", coeffs.B), ("C", coeffs.C), ("T", coeffs.T),
        ):
            fh.write(f"# {key}={_fmt(val, prec)}\n")
        fh.write(
            "# eigenvalues=" + ",".join(_fmt(v, prec) for v in eig0) + "\n"
        )
        fh.write(f"# matched_variant={resolution['matched']}\n")
        fh.write(
            "# scaled_matches_with_mu_negated="
            + str(resolution["scaled_matches_with_mu_negated"]).lower() + "\n"
        )
        fh.write(
            "t,rho11,rho22,rho33,re_rho12,im_rho12,re_rho13,im_rho13,"
            "re_rho23,im_rho23,eig1,eig2,eig3,conj_residual\n"
        )
        for t in ts:
            r = dens.rho(coeffs, h0, t)
            v = dens.v_matrix(coeffs, h0, t)
            resid = float(np.linalg.norm(r - v @ rho0 @ v.conj().T))
            ev = np.linalg.eigvalsh(r)
            cells = [
                t, r[0, 0].real, r[1, 1].real, r[2, 2].real,
                r[0, 1].real, r[0, 1].imag,
                r[0, 2].real, r[0, 2].imag,
                r[1, 2].real, r[1, 2].imag,
                ev[0], ev[1], ev[2], resid,
            ]
            fh.write(",".join(_fmt(x, prec) for x in cells) + "\n")
    except OSError as exc:
        raise _CliError(EX_IO, f"write failed: {exc}")
    except SingularityError as exc:
        raise _CliError(EX_PARAM, str(exc))
    finally:
        if close:
            fh.close()
    return EX_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="trisol", description=__doc__)
    subs = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_params = subs.add_parser("params", help="derived-constant report")
    _add_drive_flags(p_params)
    p_params.add_argument("--precision", type=int)
    p_params.add_argument("--config", help="key=value defaults file")

    p_sim = subs.add_parser("simulate", help="trajectory CSV (and SVG)")
    _add_drive_flags(p_sim)
    _add_common_flags(p_sim)
    p_sim.add_argument(
        "--initial",
        help="ground|zero|plus|minus or re1,im1,re2,im2,re3,im3",
    )

    p_phase = subs.add_parser("phase", help="accumulated-phase CSV")
    _add_drive_flags(p_phase)
    _add_common_flags(p_phase)

    p_verify = subs.add_parser("verify", help="integrator-backed residual report")
    _add_drive_flags(p_verify)
    _add_common_flags(p_verify)
    p_verify.add_argument("--tol", type=float, help="pass threshold (default 1e-5)")
    p_verify.add_argument(
        "--force-zero-phase", action="store_true",
        help="diagnostic: drop the accumulated phase from the analytic states",
    )

    p_dens = subs.add_parser("density", help="density-matrix trajectory CSV")
    _add_drive_flags(p_dens)
    _add_common_flags(p_dens)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EX_USAGE
    config = {}
    if getattr(args, "config", None):
        try:
            config = _read_config(args.config)
        except _CliError as exc:
            print(str(exc), file=sys.stderr)
            return exc.code
    opts = _Options(args=args, config=config)
    handler = {
        "params": cmd_params,
        "simulate": cmd_simulate,
        "phase": cmd_phase,
        "verify": cmd_verify,
        "density": cmd_density,
    }[args.command]
    try:
        return handler(opts)
    except _CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except DriveConditionError as exc:
        print(str(exc), file=sys.stderr)
        return EX_PARAM
    except DomainError as exc:
        print(str(exc), file=sys.stderr)
        return EX_PARAM
    except IntegrationError as exc:
        print(str(exc), file=sys.stderr)
        return EX_INTEGRATION
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return EX_IO


if __name__ == "__main__":
    sys.exit(main())
