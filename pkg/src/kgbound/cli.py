"""Command-line front end.

Usage::

    kgbound {solve,spectrum,wavefunction,verify} --config job.json [--out DIR]
            [--seed-goldens] [--strict]
    kgbound verify --suite exact-mapping [--out DIR]
    kgbound list-potentials

Exit status: 0 success, 2 invalid configuration, 3 computation failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

import jsonschema

from . import __version__
from ._io import atomic_write_text, csv_text, json_text
from .eigensolver import DEFAULT_TOL, EnergyWindow, solve_energy, spectrum
from .errors import (
    CliError,
    ComputeError,
    ConfigError,
    InvalidParameters,
    KGBoundError,
    UnsupportedCoupling,
    VerificationFailure,
)
from .oracle import APPROXIMATE, GOLDEN_HEADER, EffectiveProblem, golden_rows, shoot
from .potentials import CATALOG, Hulthen, NonCentralRadial, spec_from_dict
from .suites import SUITES, Suite, VerifyCase, get_suite, run_case, run_sweep
from .wavefunctions import RadialGrid, evaluate, normalize

log = logging.getLogger("kgbound")

SCHEMA_VERSION = 1
COMMANDS = ("solve", "spectrum", "wavefunction", "verify", "list-potentials")

_COUNT = {"type": "integer", "minimum": 0}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}

_POTENTIAL = {
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": sorted(CATALOG)}},
}

_CASE = {
    "type": "object",
    "additionalProperties": False,
    "required": ["case", "potential", "states"],
    "properties": {
        "case": {"type": "string", "minLength": 1},
        "potential": _POTENTIAL,
        "mass": _POSITIVE,
        "states": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "prefixItems": [_COUNT, _COUNT], "minItems": 2, "maxItems": 2},
        },
        "tolerance": _POSITIVE,
    },
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": list(COMMANDS)},
        "case": {"type": "string", "minLength": 1},
        "potential": _POTENTIAL,
        "mass": _POSITIVE,
        "n": _COUNT,
        "ell": _COUNT,
        "n_max": _COUNT,
        "ell_max": _COUNT,
        "window": {
            "type": "object",
            "additionalProperties": False,
            "required": ["lo", "hi"],
            "properties": {
                "lo": {"type": "number"},
                "hi": {"type": "number"},
                "sign": {"enum": ["particle", "antiparticle"]},
                "scan_points": {"type": "integer", "minimum": 64},
            },
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"energy": _POSITIVE, "verify": _POSITIVE},
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["r_min", "r_max"],
            "properties": {
                "r_min": _POSITIVE,
                "r_max": _POSITIVE,
                "count": {"type": "integer", "minimum": 128},
                "spacing": {"enum": ["log", "uniform"]},
            },
        },
        "normalize": {"type": "boolean"},
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "csv": {"type": "string", "pattern": r"^[^/\\]+$"},
                "report": {"type": "string", "pattern": r"^[^/\\]+$"},
            },
        },
        "suite": {"enum": sorted(SUITES)},
        "cases": {"type": "array", "minItems": 1, "items": _CASE},
    },
    "allOf": [
        {
            "if": {"properties": {"command": {"enum": ["solve", "wavefunction"]}}, "required": ["command"]},
            "then": {"required": ["potential", "n", "ell"]},
        },
        {
            "if": {"properties": {"command": {"const": "spectrum"}}, "required": ["command"]},
            "then": {"required": ["potential", "n_max", "ell_max"]},
        },
        {
            "if": {"properties": {"command": {"const": "verify"}}, "required": ["command"]},
            "then": {"oneOf": [{"required": ["suite"]}, {"required": ["cases"]}]},
        },
    ],
}


def potential_schema(kind):
    """Per-kind schema: exactly the dataclass fields, numbers only."""
    cls = CATALOG[kind]
    props = {"kind": {"const": kind}, "coupling": {"const": cls.supported_coupling}}
    required = ["kind"]
    for f in dataclasses.fields(cls):
        if f.name == "coupling":
            continue
        optional = f.default is not dataclasses.MISSING
        props[f.name] = {"type": ["number", "null"] if f.default is None else "number"}
        if not optional:
            required.append(f.name)
    return {"type": "object", "additionalProperties": False, "required": required, "properties": props}


def _validate(instance, schema, where):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(instance), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {path}: {err.message}")


def _build_spec(data, where):
    _validate(data, potential_schema(data["kind"]), where)
    try:
        return spec_from_dict(data)
    except (InvalidParameters, UnsupportedCoupling) as exc:
        raise ConfigError(f"{where}: {exc}") from None


@dataclasses.dataclass(frozen=True)
class Job:
    command: str
    config: dict
    out: Path
    seed_goldens: bool = False
    strict: bool = False

    def warn(self, message):
        if self.strict:
            raise ComputeError(f"warning promoted to error: {message}")
        log.warning(message)

    def get(self, key, default=None):
        return self.config.get(key, default)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None


def validate_config(config, command):
    """Check ``config`` against the schema for ``command``; returns a copy with the command set."""
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    if "command" in config and config["command"] != command:
        raise ConfigError(f"config is for {config['command']!r}, not {command!r}")
    config = dict(config, command=command)
    _validate(config, CONFIG_SCHEMA, "config")
    if "potential" in config:
        _build_spec(config["potential"], "config: potential")
    for i, case in enumerate(config.get("cases", ())):
        _build_spec(case["potential"], f"config: cases/{i}/potential")
    return config


# -- commands ----------------------------------------------------------------


def _spec(job):
    return _build_spec(job.get("potential"), "config: potential")


def _window(job):
    w = job.get("window")
    if w is None:
        return None
    try:
        return EnergyWindow(w["lo"], w["hi"], w.get("sign", "particle"), w.get("scan_points", 2048))
    except InvalidParameters as exc:
        raise ConfigError(f"config: window: {exc}") from None


def _tol(job, key, default):
    return job.get("tolerances", {}).get(key, default)


def _case_id(job, spec):
    return job.get("case", spec.kind)


def _check_quantum_numbers(spec, ell):
    if isinstance(spec, NonCentralRadial) and ell != 0:
        raise ConfigError("non-central potential: angular momentum lives in lambda_sep; use ell = 0")
    if isinstance(spec, Hulthen) and spec.q_def != 1 and ell > 0:
        raise ConfigError("Hulthen with ell > 0 requires q_def = 1")


def _warn_state(job, state):
    if state.transform.experimental:
        job.warn(f"{state.spec.kind}: experimental transform ({'; '.join(state.transform.notes)})")
    if state.excised:
        log.info("n=%d l=%d: excised energy sub-intervals %s", state.n, state.ell, state.excised)


def cmd_solve(job):
    spec = _spec(job)
    n, ell = job.get("n"), job.get("ell")
    _check_quantum_numbers(spec, ell)
    state = solve_energy(spec, job.get("mass", 1.0), n, ell, _window(job), _tol(job, "energy", DEFAULT_TOL))
    _warn_state(job, state)
    case = _case_id(job, spec)
    rows = [(case, state.n, state.ell, state.energy, state.residual)]
    artifacts = {_out_name(job, "csv", "solve.csv"): csv_text(("case", "n", "ell", "energy", "residual"), rows)}
    if job.seed_goldens:
        artifacts.update(_goldens(job, case, [state]))
    return artifacts, 0


def cmd_spectrum(job):
    spec = _spec(job)
    _check_quantum_numbers(spec, job.get("ell_max"))
    result = spectrum(
        spec, job.get("mass", 1.0), job.get("n_max"), job.get("ell_max"), _window(job),
        _tol(job, "energy", DEFAULT_TOL),
    )
    for n, ell, message in result.missing:
        job.warn(f"state n={n} l={ell} not found: {message}")
    for state in result:
        _warn_state(job, state)
    case = _case_id(job, spec)
    rows = [(case, s.n, s.ell, s.energy, s.residual) for s in result]
    artifacts = {_out_name(job, "csv", "spectrum.csv"): csv_text(("case", "n", "ell", "energy", "residual"), rows)}
    if job.seed_goldens:
        artifacts.update(_goldens(job, case, list(result)))
    return artifacts, 0


def cmd_wavefunction(job):
    spec = _spec(job)
    n, ell = job.get("n"), job.get("ell")
    _check_quantum_numbers(spec, ell)
    state = solve_energy(spec, job.get("mass", 1.0), n, ell, _window(job), _tol(job, "energy", DEFAULT_TOL))
    _warn_state(job, state)
    g = job.get("grid")
    grid = None
    if g is not None:
        try:
            grid = RadialGrid(g["r_min"], g["r_max"], g.get("count", 4001), g.get("spacing", "log"))
        except InvalidParameters as exc:
            raise ConfigError(f"config: grid: {exc}") from None
    wf = evaluate(state, grid)
    if job.get("normalize", True):
        wf = normalize(wf)
    if wf.node_count != n:
        job.warn(f"node count {wf.node_count} differs from n = {n}")
    rows = list(zip(wf.r.tolist(), wf.values.tolist()))
    return {_out_name(job, "csv", "wavefunction.csv"): csv_text(("r", "R"), rows)}, 0


def _verify_suite(job):
    name = job.get("suite")
    if name is not None:
        return get_suite(name)
    cases = []
    for i, c in enumerate(job.get("cases")):
        spec = _build_spec(c["potential"], f"config: cases/{i}/potential")
        states = tuple((int(n), int(ell)) for n, ell in c["states"])
        for _, ell in states:
            _check_quantum_numbers(spec, ell)
        cases.append(VerifyCase(c["case"], spec, states, c.get("mass", 1.0), c.get("tolerance", 1e-6)))
    return Suite(job.get("case", "custom"), tuple(cases))


def cmd_verify(job):
    suite = _verify_suite(job)
    tol = _tol(job, "energy", DEFAULT_TOL)
    override = _tol(job, "verify", None)
    records, sweeps, golden = [], [], []
    for case in suite.cases:
        if override is not None:
            case = dataclasses.replace(case, tolerance=override)
        result = run_case(case, tol)
        for state in result.states:
            _warn_state(job, state)
        records.extend(result.records)
        golden.extend(golden_rows(case.case, result.numerics, case.tolerance))
    for sweep in suite.sweeps:
        sweeps.append(run_sweep(sweep, tol))

    failed = [r for r in records if not r.passed] + [s for s in sweeps if not s.monotone]
    report = {
        "schema_version": SCHEMA_VERSION,
        "suite": suite.name,
        "passed": not failed,
        "comparisons": [r.to_dict() for r in records],
        "sweeps": [s.to_dict() for s in sweeps],
        "summary": {
            "comparisons": len(records),
            "failed_comparisons": sum(not r.passed for r in records),
            "sweeps": len(sweeps),
            "failed_sweeps": sum(not s.monotone for s in sweeps),
            "max_abs_diff": max((r.abs_diff for r in records), default=0.0),
            "min_overlap": min((r.overlap for r in records), default=1.0),
        },
    }
    header = ("case", "n", "ell", "energy_algebraic", "energy_numeric", "abs_diff", "tolerance",
              "overlap", "passed")
    rows = [(r.case, r.n, r.ell, r.energy_algebraic, r.energy_numeric, r.abs_diff, r.tolerance,
             r.overlap, r.passed) for r in records]
    artifacts = {
        _out_name(job, "report", "verify.json"): json_text(report),
        _out_name(job, "csv", "verify.csv"): csv_text(header, rows),
    }
    if job.seed_goldens:
        artifacts[f"golden_{suite.name.replace('-', '_')}.csv"] = csv_text(
            ("case", "n", "ell", "energy", "tolerance"), golden
        )
    return artifacts, 0 if not failed else VerificationFailure.exit_code


def _goldens(job, case, states):
    tolerance = _tol(job, "verify", 1e-6)
    numerics = [shoot(EffectiveProblem(s.spec, s.mass, s.ell, APPROXIMATE), s.n) for s in states]
    rows = golden_rows(case, numerics, tolerance)
    return {f"golden_{case}.csv": csv_text(GOLDEN_HEADER, rows)}


def _out_name(job, key, default):
    return job.get("output", {}).get(key, default)


def catalog_text():
    lines = []
    for kind, cls in CATALOG.items():
        summary = (cls.__doc__ or "").strip().splitlines()[0]
        approx = "approximated" if cls.approximated_centrifugal else "exact"
        lines.append(f"{kind}: {summary}")
        lines.append(f"  coupling: {cls.supported_coupling}; centrifugal term: {approx}")
        for f in dataclasses.fields(cls):
            if f.name == "coupling":
                continue
            default = "" if f.default is dataclasses.MISSING else f" (default {f.default})"
            lines.append(f"  {f.name}{default}: {cls.parameter_docs.get(f.name, '')}")
    return "\n".join(lines) + "\n"


HANDLERS = {
    "solve": cmd_solve,
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
}


def run(job):
    """Execute ``job``; artifacts are written only after the computation finished.

    Returns the exit status (0 or 4); raises :class:`CliError` otherwise.
    """
    try:
        artifacts, status = HANDLERS[job.command](job)
    except CliError:
        raise
    except (InvalidParameters, UnsupportedCoupling) as exc:
        raise ConfigError(str(exc)) from exc
    except KGBoundError as exc:
        raise ComputeError(f"{type(exc).__name__}: {exc}") from exc
    for name in sorted(artifacts):
        atomic_write_text(job.out / name, artifacts[name])
        print(f"wrote {job.out / name}")
    return status


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kgbound", description="Klein-Gordon bound states: algebraic solver and shooting oracle."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, help="JSON job configuration")
    parser.add_argument("--suite", choices=sorted(SUITES), help="built-in verify suite (instead of --config)")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory (default: .)")
    parser.add_argument("--seed-goldens", action="store_true", help="also run the oracle and write golden CSV files")
    parser.add_argument("--strict", action="store_true", help="promote warnings to errors (exit 3)")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    if args.command == "list-potentials":
        sys.stdout.write(catalog_text())
        return 0
    try:
        if args.suite is not None:
            if args.command != "verify" or args.config is not None:
                raise ConfigError("--suite is only valid for verify, without --config")
            config = {"schema_version": SCHEMA_VERSION, "suite": args.suite}
        elif args.config is None:
            raise ConfigError(f"{args.command} needs --config")
        else:
            config = load_config(args.config)
        config = validate_config(config, args.command)
        job = Job(args.command, config, args.out, args.seed_goldens, args.strict)
        status = run(job)
    except CliError as exc:
        print(f"kgbound: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    if status == VerificationFailure.exit_code:
        print("kgbound: VerificationFailure: at least one comparison failed", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
