"""``qreg`` command line: spectra, wavefunctions, verification and comparison reports.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import __version__, analytic, oracle, pipeline, reporting, variational
from .errors import ConvergenceError, DomainError, FitError
from .model import SYSTEM_NAMES, GridSpec, PhysicalParams, QuantumNumbers, SampledField, phase_action

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_NONCONVERGENCE = 3

COMMANDS = ("spectrum", "wavefunction", "verify", "compare")
FORMATS = ("csv", "json")
SOURCES = ("analytic", "oracle")

# Flag name -> config key; config files use the flag names without dashes.
_OPTIONS = {
    "system": "system",
    "m": "m",
    "mu": "mu",
    "ks": "ks",
    "alpha": "alpha",
    "v0": "v0",
    "n": "n",
    "l": "l",
    "grid": "grid",
    "theta-max": "theta_max",
    "levels": "levels",
    "format": "format",
    "out": "out",
    "source": "source",
}
_CONFIG_KEYS = {"command", *_OPTIONS}

_SPECTRUM_COLUMNS = ("system", "n", "l", "energy_paper", "degeneracy_label")
_REPORT_COLUMNS = (
    "system",
    "n",
    "l",
    "energy_paper",
    "energy_oracle",
    "abs_gap",
    "rel_gap",
    "analytic_residual",
    "rayleigh_rel",
    "stability",
    "node_count",
    "verdict",
)


class UsageError(Exception):
    """Invalid command-line or config input (exit code 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class Job:
    command: str
    systems: tuple[str, ...]
    config: pipeline.RunConfig
    fmt: str
    out: Optional[str]
    source: str = "analytic"
    explicit_n: bool = False
    explicit_l: bool = False


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="qreg",
        description="Closed-form and oracle spectra of the information-regularized stationary equation.",
        epilog=(
            "Defaults: m=mu=ks=alpha=1, v0=0, levels=3, theta-max=2*pi. Oracle domains: harmonic (0, 20 l_osc] with 8000 "
            "base points, Coulomb (0, max(60, 40 n_eff) a0] with h = 60 a0/4001, free (0, 1] with 4000 points and "
            "const (0, 1] with 1000 points; each level doubles the resolution. Default states: n=0..2 (1D); "
            "n=0..1, l=0..1 (harmonic2d, coulomb2d); n=0..1, l=0..2 (const2d). Config keys are the flag names."
        ),
    )
    p.add_argument("command", nargs="?", choices=COMMANDS, help="what to run (may come from --config)")
    p.add_argument("--system", help="|".join(SYSTEM_NAMES + ("all",)))
    p.add_argument("--m", type=float, help="mass (default 1)")
    p.add_argument("--mu", type=float, help="information coupling mu (default 1)")
    p.add_argument("--ks", type=float, help="harmonic spring constant (default 1)")
    p.add_argument("--alpha", type=float, help="Coulomb coupling (default 1)")
    p.add_argument("--v0", type=float, help="constant potential depth, V = -v0 (default 0)")
    p.add_argument("--n", help="radial index range A..B or single value")
    p.add_argument("--l", help="angular index range A..B or single value (2D systems)")
    p.add_argument("--grid", help="oracle base grid qmin:qmax:N (Dirichlet ghosts at qmin-h and qmax+h; qmin=0 gives the box (0, qmax])")
    p.add_argument("--theta-max", dest="theta_max", type=float, help="angular interval (0, theta_max] (default 2*pi)")
    p.add_argument("--levels", type=int, help="grid levels for extrapolation, 1..4 (default 3)")
    p.add_argument("--format", choices=FORMATS, help="csv or json (default json; csv for wavefunction)")
    p.add_argument("--source", choices=SOURCES, help="wavefunction from the closed form or the oracle (default analytic)")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--config", help="JSON file with defaults for any of the above")
    p.add_argument("--version", action="version", version=f"qreg {__version__}")
    return p


def _merge_value_tokens(argv: Sequence[str]) -> list[str]:
    # Let values such as "-1..2" follow their flag without being read as options.
    flags = {f"--{name}" for name in _OPTIONS} | {"--config"}
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in flags and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def parse_range(text, name: str) -> tuple[int, int]:
    if isinstance(text, bool):
        raise UsageError(f"{name} must be an integer or range A..B")
    if isinstance(text, int):
        lo = hi = text
    elif isinstance(text, (list, tuple)) and len(text) == 2:
        lo, hi = text
    else:
        parts = str(text).strip().split("..")
        if len(parts) not in (1, 2):
            raise UsageError(f"{name} must be an integer or range A..B, got {text!r}")
        try:
            vals = [int(s) for s in parts]
        except ValueError:
            raise UsageError(f"{name} must be an integer or range A..B, got {text!r}") from None
        lo, hi = vals[0], vals[-1]
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (lo, hi)):
        raise UsageError(f"{name} must be an integer or range A..B")
    if lo < 0 or hi < 0:
        raise UsageError(f"{name} must be non-negative")
    if hi < lo:
        raise UsageError(f"{name} range must be ascending, got {lo}..{hi}")
    return lo, hi


def parse_grid(text) -> GridSpec:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be qmin:qmax:N, got {text!r}")
    try:
        q_min, q_max = float(parts[0]), float(parts[1])
        n_float = float(parts[2])
    except (TypeError, ValueError):
        raise UsageError(f"grid must be qmin:qmax:N, got {text!r}") from None
    if not n_float.is_integer():
        raise UsageError("grid N must be an integer")
    try:
        # qmin = 0 names the Dirichlet box whose left ghost sits at the origin.
        grid = GridSpec.box(q_max, int(n_float)) if q_min == 0 else GridSpec(q_min, q_max, int(n_float))
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if grid.n < oracle.MIN_POINTS:
        raise UsageError(f"grid needs at least {oracle.MIN_POINTS} points")
    return grid


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    normalized = {}
    for key, value in data.items():
        canon = key.replace("_", "-")
        if canon not in _CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r}")
        normalized[canon] = value
    return normalized


def _number(settings: dict, key: str, default: float) -> float:
    value = settings.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise UsageError(f"{key} must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise UsageError(f"{key} must be finite")
    return value


def parse(argv: Optional[Sequence[str]] = None) -> Job:
    """Build a validated Job from flags layered over an optional config file."""
    args = build_parser().parse_args(_merge_value_tokens(list(sys.argv[1:] if argv is None else argv)))
    settings = _load_config(args.config) if args.config else {}
    for flag, attr in _OPTIONS.items():
        value = getattr(args, attr)
        if value is not None:
            settings[flag] = value
    if args.command is not None:
        settings["command"] = args.command

    command = settings.get("command")
    if command not in COMMANDS:
        raise UsageError(f"command must be one of {', '.join(COMMANDS)}" if command else "no command given")

    system = settings.get("system", "all" if command in ("verify", "compare") else None)
    if system is None:
        raise UsageError("--system is required")
    if system == "all":
        systems = SYSTEM_NAMES
    elif system in SYSTEM_NAMES:
        systems = (system,)
    else:
        raise UsageError(f"unknown system {system!r}")
    if command == "wavefunction" and len(systems) != 1:
        raise UsageError("wavefunction needs a single system")

    m = _number(settings, "m", 1.0)
    mu = _number(settings, "mu", 1.0)
    ks = _number(settings, "ks", 1.0)
    alpha = _number(settings, "alpha", 1.0)
    v0 = _number(settings, "v0", 0.0)
    theta_max = _number(settings, "theta-max", 2.0 * math.pi)
    if theta_max <= 0:
        raise UsageError("theta-max must be positive")
    levels = settings.get("levels", 3)
    if isinstance(levels, bool) or not isinstance(levels, int) or not 1 <= levels <= 4:
        raise UsageError("levels must be an integer in 1..4")

    n_range = parse_range(settings["n"], "n") if "n" in settings else None
    l_range = parse_range(settings["l"], "l") if "l" in settings else None
    grid = parse_grid(settings["grid"]) if "grid" in settings else None

    fmt = settings.get("format", "csv" if command == "wavefunction" else "json")
    if fmt not in FORMATS:
        raise UsageError(f"format must be csv or json, got {fmt!r}")
    source = settings.get("source", "analytic")
    if source not in SOURCES:
        raise UsageError(f"source must be analytic or oracle, got {source!r}")
    out = settings.get("out")
    if out is not None and not isinstance(out, str):
        raise UsageError("out must be a path")

    try:
        params = PhysicalParams(m, mu)
        cfg = pipeline.RunConfig(
            params=params, ks=ks, alpha=alpha, v0=v0, n_range=n_range, l_range=l_range, grid=grid, levels=levels, theta_max=theta_max
        )
        for name in systems:
            cfg.system(name)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return Job(command, tuple(systems), cfg, fmt, out, source, n_range is not None, l_range is not None)


def _header(job: Job) -> dict:
    cfg = job.config
    return {
        "program": "qreg",
        "version": __version__,
        "command": job.command,
        "systems": list(job.systems),
        "params": {"m": cfg.params.m, "mu": cfg.params.mu},
        "potential": {"ks": cfg.ks, "alpha": cfg.alpha, "v0": cfg.v0},
        "states": {"n": list(cfg.n_range) if cfg.n_range else None, "l": list(cfg.l_range) if cfg.l_range else None},
        "grid": cfg.grid.summary() if cfg.grid else None,
        "levels": cfg.levels,
        "theta_max": cfg.theta_max,
        "tolerances": cfg.tolerances,
        "defaults": {
            "harmonic_domain": "(0, 20*sqrt(mu/(m*omega))]",
            "coulomb_domain": "(0, max(60, 40*n_eff)*mu^2/(m*alpha)]",
            "box_domain": "(0, 1]",
            "base_points": {k.value: v for k, v in oracle.DEFAULT_POINTS.items()},
            "refinement": "N -> 2N+1 on the same Dirichlet box",
            "extrapolation_exponents": {"1d": list(oracle.extrapolation_exponents(None)), "2d": [2.0, 4.0, 6.0]},
            "residual_points": pipeline.RESIDUAL_POINTS,
            "residual_stencil_order": 6,
            "wavefunction_phase": "S = (mu/2) ln(q/q_min), t = 0",
        },
    }


def _states(job: Job, system) -> list[QuantumNumbers]:
    return pipeline.default_states(system, job.config.n_range, job.config.l_range)


def _run_spectrum(job: Job):
    cfg = job.config
    entries = []
    for name in job.systems:
        system = cfg.system(name)
        states = _states(job, system)
        box = None
        if not system.bound:
            box = cfg.grid.upper if cfg.grid else oracle.default_domain(cfg.params, system)
        for e in analytic.spectrum(cfg.params, system, states, box_length=box):
            entries.append(
                {"system": name, "n": e.qn.n, "l": e.qn.l, "energy_paper": e.energy_paper, "degeneracy_label": e.degeneracy_label}
            )
    return entries, [], EXIT_OK


def _run_wavefunction(job: Job):
    cfg = job.config
    system = cfg.system(job.systems[0])
    qn = _states(job, system)[0]
    grid = cfg.grid or oracle.default_grid(cfg.params, system, qn)
    if job.source == "oracle":
        res = oracle.refine_and_extrapolate(cfg.params, system, qn, qn.n, grid, 1)
        field, energy = res.eigenvector, res.energy_oracle
    else:
        if system.bound:
            field = analytic.sample(cfg.params, system, qn, grid)
            energy = analytic.energy(cfg.params, system, qn)
        else:
            k = analytic.box_wavenumber(system, qn.n + 1, grid.upper, qn)
            field = analytic.sample(cfg.params, system, k, grid, l=qn.l)
            energy = analytic.box_energy(cfg.params, system, qn.n + 1, grid.upper, qn)
    columns = wavefunction_columns(field, cfg.params, energy)
    return {"system": system.name, "n": qn.n, "l": qn.l, "energy": energy, "columns": columns}, [], EXIT_OK


def wavefunction_columns(field: SampledField, params: PhysicalParams, energy: float) -> dict:
    q = field.grid
    qpot = variational.quantum_potential(field, params).values
    s = phase_action(params, q, float(q[0]), energy, 0.0)
    return {"q": q, "X": field.values, "P": field.values**2, "Q": qpot, "S": np.asarray(s)}


def _run_compare(job: Job):
    rows = pipeline.compare(job.config, job.systems)
    return rows, [], EXIT_OK


def _run_verify(job: Job):
    rows = pipeline.compare(job.config, job.systems)
    identities = pipeline.identity_suite(job.config, job.systems)
    ok = pipeline.verification_passed(rows, identities)
    return rows, identities, EXIT_OK if ok else EXIT_VERIFY_FAILED


_RUNNERS = {"spectrum": _run_spectrum, "wavefunction": _run_wavefunction, "compare": _run_compare, "verify": _run_verify}


def render(job: Job, entries, identities) -> str:
    if job.command == "wavefunction":
        if job.fmt == "csv":
            cols = entries["columns"]
            return reporting.write_csv(reporting.WAVEFUNCTION_COLUMNS, reporting.wavefunction_rows(*(cols[c] for c in reporting.WAVEFUNCTION_COLUMNS)))
        entries = [entries]
    elif job.fmt == "csv":
        if job.command == "spectrum":
            return reporting.write_csv(_SPECTRUM_COLUMNS, ([e[c] for c in _SPECTRUM_COLUMNS] for e in entries))
        plain = [reporting.to_plain(r) for r in entries]
        return reporting.write_csv(_REPORT_COLUMNS, ([r[c] for c in _REPORT_COLUMNS] for r in plain))
    return reporting.dumps({"header": _header(job), "entries": entries, "identities": identities})


def execute(job: Job) -> int:
    entries, identities, code = _RUNNERS[job.command](job)
    text = render(job, entries, identities)
    if job.out:
        with open(job.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if job.command == "verify":
        failed = [c.identity_name for c in identities if not c.passed]
        failed += [f"{r.system}(n={r.n},l={r.l}):{r.verdict.value}" for r in entries if r.verdict is pipeline.Verdict.FAILURE]
        status = "passed" if code == EXIT_OK else "FAILED " + " ".join(failed or ["exact-system mismatch"])
        print(f"verify: {len(entries)} states, {len(identities)} identities, {status}", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        job = parse(argv)
    except UsageError as exc:
        print(f"qreg: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        return execute(job)
    except (ConvergenceError, FitError, OverflowError) as exc:
        print(f"qreg: non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except DomainError as exc:
        print(f"qreg: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BrokenPipeError:
        sys.stderr.close()
        return EXIT_OK
    except OSError as exc:
        print(f"qreg: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
