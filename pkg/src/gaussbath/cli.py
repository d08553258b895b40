"""
Command-line driver: single runs, parameter sweeps and figure presets.

Every run writes one ``trajectory_NNN.csv`` per parameter point and a
``summary.csv``. Output is byte-identical for identical configurations.

Exit status: 0 success, 1 configuration error, 2 numerical failure,
3 output directory not writable.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import asdict, dataclass, field, fields, replace
import json
import logging
import math
import os
from pathlib import Path
import sys
from typing import Optional

import numpy as np

from .analysis import (
    DEFAULT_EPS,
    asymptote,
    classify_regime,
    entanglement_trajectory,
    esd_time,
    revivals,
)
from .errors import (
    ConfigError,
    GaussBathError,
    InvalidArgument,
    NumericalFailure,
    UnsupportedConfiguration,
)
from .params import PhysicalConstants, SystemParams
from .states import InitialState

log = logging.getLogger(__name__)

OUTPUT_ENV = "GAUSSBATH_OUTPUT_DIR"
DEFAULT_OUTPUT = "gaussbath-output"
TRAJECTORY_HEADER = ["t", "log_negativity", "physical", "min_symplectic_margin"]
SUMMARY_HEADER = [
    "param_value",
    "esd_time",
    "revival_count",
    "asymptote_mean",
    "asymptote_amplitude",
    "regime",
    "physicality_violations",
]
MODES = ("free", "harmonic")
PHYSICAL_FIELDS = ("s", "d", "m", "gamma1", "gamma2", "T1", "T2", "omega0", "hbar", "k")
# sweep axes that set both particles at once
SHARED_AXES = {"gamma": ("gamma1", "gamma2"), "T": ("T1", "T2")}


@dataclass(frozen=True)
class RunConfig:
    mode: str = "free"
    s: float = 1.0
    d: float = 1.0
    m: float = 1.0
    gamma1: float = 1.0
    gamma2: float = 1.0
    T1: float = 1.0
    T2: float = 1.0
    omega0: float = 0.0
    hbar: float = 1.0
    k: float = 1.0
    t_end: float = 60.0
    n_points: int = 2401
    sweep_param: Optional[str] = None
    sweep_values: list = field(default_factory=list)
    output: Optional[str] = None
    allow_unequal_baths: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("<root>", "configuration must be a JSON object")
        known = {f.name: f for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown key")
        kwargs = {}
        for key, value in data.items():
            kwargs[key] = _coerce(key, value)
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("<root>", f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    def points(self):
        """Configurations of the individual sweep points, in order."""
        if not self.sweep_param:
            return [(None, self)]
        targets = SHARED_AXES.get(self.sweep_param, (self.sweep_param,))
        return [(value, replace(self, **{name: value for name in targets})) for value in self.sweep_values]

    def initial_state(self):
        return InitialState(self.s, self.d)

    def system(self):
        return SystemParams(
            m=self.m,
            gamma1=self.gamma1,
            gamma2=self.gamma2,
            T1=self.T1,
            T2=self.T2,
            omega0=self.omega0,
            constants=PhysicalConstants(self.hbar, self.k),
        )

    def times(self):
        return np.linspace(0.0, self.t_end, self.n_points)


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _coerce(key, value):
    if key in PHYSICAL_FIELDS or key == "t_end":
        if not _is_number(value):
            raise ConfigError(key, f"expected a number, got {value!r}")
        return float(value)
    if key == "n_points":
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return value
    if key == "sweep_values":
        if not isinstance(value, list) or not all(_is_number(v) for v in value):
            raise ConfigError(key, "expected a list of numbers")
        return [float(v) for v in value]
    if key == "allow_unequal_baths":
        if not isinstance(value, bool):
            raise ConfigError(key, f"expected true or false, got {value!r}")
        return value
    if value is not None and not isinstance(value, str):
        raise ConfigError(key, f"expected a string, got {value!r}")
    return value


PRESETS = {
    "fig1": RunConfig(mode="free", d=1.0, sweep_param="s", sweep_values=[0.25, 1.0, 2.0]),
    "fig2": RunConfig(mode="harmonic", s=1.0, gamma1=3.0, gamma2=3.0, sweep_param="omega0", sweep_values=[0.0, 1.0]),
    "fig3": RunConfig(mode="harmonic", s=0.25, gamma1=0.2, gamma2=0.2, sweep_param="omega0", sweep_values=[0.0, 1.0]),
    "fig4": RunConfig(
        mode="harmonic",
        s=1.0,
        gamma1=1.0,
        gamma2=1.0,
        t_end=100.0,
        n_points=4001,
        sweep_param="omega0",
        sweep_values=[1.5, 1.8, 2.2],
    ),
}


@dataclass(frozen=True)
class Issue:
    field: str
    message: str
    severity: str = "error"

    def __str__(self):
        return f"{self.severity}: {self.field}: {self.message}"


def _point_issues(cfg, issues):
    for name in ("s", "d", "m", "gamma1", "gamma2", "hbar", "k"):
        value = getattr(cfg, name)
        if not (math.isfinite(value) and value > 0):
            issues.append(Issue(name, f"must be positive, got {value!r}"))
    for name in ("T1", "T2", "omega0"):
        value = getattr(cfg, name)
        if not (math.isfinite(value) and value >= 0):
            issues.append(Issue(name, f"must be non-negative, got {value!r}"))
    if cfg.mode == "free" and cfg.omega0 != 0:
        issues.append(Issue("omega0", "must be 0 in free mode"))
    unequal = cfg.gamma1 != cfg.gamma2 or cfg.T1 != cfg.T2
    if cfg.omega0 > 0 and unequal and not cfg.allow_unequal_baths:
        issues.append(
            Issue("allow_unequal_baths", "omega0 > 0 with unequal baths is unsupported without opt-in", "warning")
        )


def validate(cfg: RunConfig) -> list[Issue]:
    """Violated invariants of ``cfg``; an empty list means the config can run."""
    issues = []
    if cfg.mode not in MODES:
        issues.append(Issue("mode", f"must be one of {MODES}, got {cfg.mode!r}"))
    if not (math.isfinite(cfg.t_end) and cfg.t_end > 0):
        issues.append(Issue("t_end", f"must be positive, got {cfg.t_end!r}"))
    if cfg.n_points < 2:
        issues.append(Issue("n_points", f"must be at least 2, got {cfg.n_points!r}"))
    if cfg.sweep_param:
        if cfg.sweep_param not in PHYSICAL_FIELDS and cfg.sweep_param not in SHARED_AXES:
            issues.append(Issue("sweep_param", f"cannot sweep {cfg.sweep_param!r}"))
            return issues
        if not cfg.sweep_values:
            issues.append(Issue("sweep_values", "empty sweep"))
    elif cfg.sweep_values:
        issues.append(Issue("sweep_param", "sweep_values given without sweep_param"))
    seen = set()
    for _, point in cfg.points():
        point_issues = []
        _point_issues(point, point_issues)
        for issue in point_issues:
            if issue not in seen:
                seen.add(issue)
                issues.append(issue)
    return issues


@dataclass(frozen=True)
class PointResult:
    param_value: Optional[float]
    rows: list
    summary: list


def _fmt(x):
    if x is None:
        return ""
    return format(float(x), ".17g")


def _evaluate_point(value, cfg, eps):
    tr = entanglement_trajectory(
        cfg.initial_state(), cfg.system(), cfg.times(), allow_unequal_baths=cfg.allow_unequal_baths, warn=False
    )
    violations = int(np.count_nonzero(~tr.flags))
    if violations:
        log.warning("param %s: %d unphysical states on the grid", value, violations)
    rows = [
        [_fmt(t), _fmt(v), "1" if ok else "0", _fmt(mg)]
        for t, v, ok, mg in zip(tr.times, tr.values, tr.flags, tr.margins)
    ]
    try:
        asym = asymptote(tr)
    except InvalidArgument:
        asym = (None, None)
    try:
        regime = classify_regime(cfg.system()).value
    except UnsupportedConfiguration:
        regime = "unclassified"
    summary = [
        _fmt(value),
        _fmt(esd_time(tr, eps)),
        str(len(revivals(tr, eps))),
        _fmt(asym[0]),
        _fmt(asym[1]),
        regime,
        str(violations),
    ]
    return PointResult(value, rows, summary)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def resolve_output(cfg: RunConfig, out: Optional[str] = None) -> Path:
    return Path(out or cfg.output or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT)


def run(cfg: RunConfig, out: Optional[str] = None, *, threads: int = 1, eps: float = DEFAULT_EPS):
    """Run every sweep point and write the CSV files.

    Returns the output directory and the summary rows (as written).
    """
    errors = [i for i in validate(cfg) if i.severity == "error"]
    if errors:
        raise ConfigError(errors[0].field, errors[0].message)
    if any(i.field == "allow_unequal_baths" for i in validate(cfg)):
        raise UnsupportedConfiguration("omega0 > 0 with unequal baths; set allow_unequal_baths to opt in")
    if not eps > 0:
        raise ConfigError("eps", f"must be positive, got {eps!r}")

    out_dir = resolve_output(cfg, out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not os.access(out_dir, os.W_OK):
        raise PermissionError(f"output directory {out_dir} is not writable")

    points = cfg.points()

    def work(item):
        index, (value, point) = item
        result = _evaluate_point(value, point, eps)
        _write_csv(out_dir / f"trajectory_{index:03d}.csv", TRAJECTORY_HEADER, result.rows)
        return result

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(work, enumerate(points)))
    summary = [r.summary for r in results]
    _write_csv(out_dir / "summary.csv", SUMMARY_HEADER, summary)
    return out_dir, summary


def _load(args):
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError("config", f"cannot read {args.config}: {exc}") from None
        return RunConfig.from_json(text)
    return PRESETS[args.preset]


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="path to a JSON run configuration")
    source.add_argument("--preset", choices=sorted(PRESETS), help="built-in figure preset")

    parser = argparse.ArgumentParser(prog="gaussbath", description=__doc__.strip().splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", parents=[common], help="run a configuration and write CSV files")
    run_p.add_argument("--out", help=f"output directory (default: config 'output', ${OUTPUT_ENV}, ./{DEFAULT_OUTPUT})")
    run_p.add_argument("--threads", type=int, default=1, help="sweep points evaluated concurrently")
    run_p.add_argument("--eps", type=float, default=DEFAULT_EPS, help="log-negativity death threshold")

    sub.add_parser("validate", parents=[common], help="report violated invariants without running")

    show_p = sub.add_parser("show-preset", help="print a preset as a JSON configuration")
    show_p.add_argument("name", choices=sorted(PRESETS))
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "show-preset":
            sys.stdout.write(PRESETS[args.name].to_json())
            return 0
        cfg = _load(args)
        if args.command == "validate":
            issues = validate(cfg)
            for issue in issues:
                print(issue)
            return 1 if any(i.severity == "error" for i in issues) else 0
        out_dir, summary = run(cfg, args.out, threads=args.threads, eps=args.eps)
        print(f"wrote {len(summary)} trajectories to {out_dir}")
        return 0
    except (ConfigError, UnsupportedConfiguration, InvalidArgument) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    except GaussBathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
