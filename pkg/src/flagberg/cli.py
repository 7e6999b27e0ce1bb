"""Batch driver: ``flagberg run --config jobs.json`` and ``flagberg describe``."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import bergman, kahlergeom, potential
from .catalog import is_projective
from .flagstruct import (
    FlagManifold,
    UnsupportedFlagError,
    WeightCoeffs,
    describe,
    enumerate_Q,
    ke_coeffs,
    make_flag,
    parse_group,
    validate_Q,
)
from .polycore import GaussRat
from .rootsystems import (
    ClassicalAlgebra,
    build_root_system,
    check_root_relations,
    expected_root_count,
)

REPORT_VERSION = "1"
CHECKS = ("roots", "q", "diastasis", "einstein", "dims", "kernel", "kempf-numeric")
DEFAULT_CHECKS = CHECKS[:-1]
PREREQS = {
    "roots": (),
    "q": ("roots",),
    "diastasis": ("q",),
    "einstein": ("diastasis",),
    "dims": ("q",),
    "kernel": ("einstein", "dims"),
    "kempf-numeric": ("einstein",),
}
JOB_KEYS = {"group", "black", "xi", "checks", "samples", "trunc", "seed"}
ENUMERATE_MAX_RM = 12
X_SCHEDULE = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(9, 10))
SERIES_REL_TOL = Fraction(1, 10**8)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class JobConfig:
    group: str
    black: tuple[int, ...]
    xi: str | tuple[Fraction, ...]
    checks: tuple[str, ...]
    samples: int = 10
    trunc: int = 200
    seed: int = 0


@dataclass(frozen=True)
class RunConfig:
    jobs: tuple[JobConfig, ...]


def _int_field(raw: dict, key: str, path: str, default: int, lo: int) -> int:
    v = raw.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {v!r}")
    if v < lo:
        raise ConfigError(f"{path}.{key}: must be >= {lo}, got {v}")
    return v


def _parse_job(raw: Any, path: str) -> JobConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected an object")
    unknown = sorted(set(raw) - JOB_KEYS)
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}: unknown key")
    for key in ("group", "black"):
        if key not in raw:
            raise ConfigError(f"{path}.{key}: required key missing")

    group = raw["group"]
    if not isinstance(group, str):
        raise ConfigError(f"{path}.group: expected a string like 'A2'")
    try:
        family, d = parse_group(group)
        alg = ClassicalAlgebra(family, d)
    except ValueError as exc:
        raise ConfigError(f"{path}.group: {exc}") from None

    black = raw["black"]
    if not isinstance(black, list) or not black:
        raise ConfigError(f"{path}.black: expected a non-empty list of node indices")
    for k, node in enumerate(black):
        if isinstance(node, bool) or not isinstance(node, int):
            raise ConfigError(f"{path}.black[{k}]: expected an integer, got {node!r}")
        if not 1 <= node <= alg.rank:
            raise ConfigError(f"{path}.black[{k}]: node {node} out of range 1..{alg.rank}")
    if len(set(black)) != len(black):
        raise ConfigError(f"{path}.black: repeated node")

    xi = raw.get("xi", "KE")
    if isinstance(xi, list):
        if len(xi) != len(black):
            raise ConfigError(f"{path}.xi: {len(xi)} coefficients for {len(black)} black nodes")
        coeffs = []
        for k, c in enumerate(xi):
            if isinstance(c, bool) or not isinstance(c, (int, str)):
                raise ConfigError(f"{path}.xi[{k}]: expected an integer or a 'p/q' string")
            try:
                coeffs.append(Fraction(c))
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"{path}.xi[{k}]: not a rational number: {c!r}") from None
        xi = tuple(coeffs)
    elif xi != "KE":
        raise ConfigError(f"{path}.xi: expected \"KE\" or a list of rationals")

    checks = raw.get("checks", list(DEFAULT_CHECKS))
    if not isinstance(checks, list) or not checks:
        raise ConfigError(f"{path}.checks: expected a non-empty list")
    for k, c in enumerate(checks):
        if c not in CHECKS:
            raise ConfigError(f"{path}.checks[{k}]: unknown check {c!r}; choose from {list(CHECKS)}")

    return JobConfig(
        group=group,
        black=tuple(black),
        xi=xi,
        checks=tuple(c for c in CHECKS if c in checks),
        samples=_int_field(raw, "samples", path, 10, 1),
        trunc=_int_field(raw, "trunc", path, 200, 1),
        seed=_int_field(raw, "seed", path, 0, 0),
    )


def parse_config(text: str) -> RunConfig:
    """Validate a JSON run configuration; errors name the line or field."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError("top level: expected an object with key 'jobs'")
    unknown = sorted(set(raw) - {"jobs"})
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown key")
    jobs = raw.get("jobs")
    if not isinstance(jobs, list):
        raise ConfigError("jobs: expected a list")
    return RunConfig(tuple(_parse_job(j, f"jobs[{k}]") for k, j in enumerate(jobs)))


# -- execution ---------------------------------------------------------------


@dataclass
class CheckResult:
    status: str
    witness: str | None = None
    constants: dict | None = None
    ms: float | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.constants:
            out["constants"] = self.constants
        out["ms"] = self.ms
        return out


@dataclass
class JobReport:
    id: int
    group: str
    black: list[int]
    xi: str | list[str]
    checks: dict[str, CheckResult] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "group": self.group,
            "black": self.black,
            "xi": self.xi,
            "checks": {k: v.to_json() for k, v in self.checks.items()},
        }


@dataclass
class Report:
    jobs: list[JobReport]

    def to_json(self) -> dict:
        return {"version": REPORT_VERSION, "jobs": [j.to_json() for j in self.jobs]}

    def status_vector(self) -> list[tuple[int, str, str]]:
        return [(j.id, name, c.status) for j in self.jobs for name, c in j.checks.items()]

    @property
    def failed(self) -> bool:
        return any(s == "fail" for _, _, s in self.status_vector())


def _closure(checks: tuple[str, ...]) -> tuple[str, ...]:
    need = set(checks)
    stack = list(checks)
    while stack:
        for p in PREREQS[stack.pop()]:
            if p not in need:
                need.add(p)
                stack.append(p)
    return tuple(c for c in CHECKS if c in need)


def _frac(x) -> str:
    return str(Fraction(x))


class _Fail(Exception):
    def __init__(self, witness: str, constants: dict | None = None):
        super().__init__(witness)
        self.witness = witness
        self.constants = constants


class _Skip(Exception):
    pass


class _JobRunner:
    def __init__(self, job: JobConfig):
        self.job = job
        self.rng = random.Random(job.seed)
        self.flag: FlagManifold | None = None
        self.xi: WeightCoeffs | None = None
        self.pd: potential.PotentialData | None = None
        self.dp: bergman.DimPoly | None = None

    def random_point(self, n: int) -> list[GaussRat]:
        def q():
            return Fraction(self.rng.randint(-6, 6), self.rng.randint(1, 6))

        return [GaussRat(q(), q()) for _ in range(n)]

    def check_roots(self) -> dict:
        family, d = parse_group(self.job.group)
        datum = build_root_system(family, d)
        expected = expected_root_count(family, d)
        if len(datum.roots) != expected:
            raise _Fail(f"{len(datum.roots)} roots, expected {expected}")
        rep = check_root_relations(datum)
        if not rep.ok:
            raise _Fail(rep.violations[0], {"violations": len(rep.violations)})
        return {"algebra": datum.alg.name, "roots": len(datum.roots)}

    def check_q(self) -> dict:
        family, d = parse_group(self.job.group)
        flag = make_flag(family, d, self.job.black)
        self.flag = flag
        if not validate_Q(flag.r_m, flag.q, flag.datum.roots):
            raise _Fail("canonical Q is not maximal closed nonsymmetric")
        self.xi = ke_coeffs(flag) if self.job.xi == "KE" else WeightCoeffs(self.job.xi)
        out = {
            "n": flag.n,
            "R_K": len(flag.r_k),
            "R_M": len(flag.r_m),
            "c_KE": [_frac(c) for c in ke_coeffs(flag).c],
        }
        if len(flag.r_m) <= ENUMERATE_MAX_RM:
            out["complex_structures"] = len(enumerate_Q(flag.r_m, flag.datum.roots))
        return out

    def check_diastasis(self) -> dict:
        try:
            pd = potential.build_potential(potential.build_chart(self.flag), self.xi)
        except UnsupportedFlagError as exc:
            raise _Fail(str(exc)) from None
        self.pd = pd
        out = {
            "minor_sizes": list(pd.minor_sizes),
            "exponents": [_frac(b) for b in pd.exponents],
            "minor_degrees": [p.degree() for p in pd.minors],
        }
        rep = potential.check_diastasis(pd)
        if not rep.ok:
            raise _Fail(rep.witness(), out)
        if not potential.check_exp_structure(pd.chart):
            raise _Fail("exp(Z) has support outside Z or a non-unit diagonal", out)
        bad = [j for j, p in enumerate(pd.minors) if not potential.is_real_poly(p)]
        if bad:
            raise _Fail(f"P{bad[0] + 1} is not real", out)
        return out

    def check_einstein(self) -> dict:
        pd = self.pd
        n = pd.n
        diagonal, ratios = kahlergeom.origin_diagonal_ratios(pd)
        if not diagonal:
            raise _Fail("g(0) is not diagonal in the -Q coordinates")
        out = {"c": [_frac(c) for c in self.xi.c], "g0_ratio": sorted(str(r) for r in ratios)}
        if len(ratios) != 1 or None in ratios:
            raise _Fail("normalized g(0)/x_a is not constant over the roots of Q", out)
        for _ in range(self.job.samples):
            pt = self.random_point(n)
            if not kahlergeom.check_positive_definite(pd, [pt]):
                raise _Fail(f"metric not positive definite at z={pt}", out)
            defect = kahlergeom.einstein_defect(pd, pt)
            for i in range(n):
                for j in range(n):
                    if defect[i][j]:
                        raise _Fail(f"z={pt}: defect[{i + 1}][{j + 1}] = {defect[i][j]}", out)
        return out

    def check_dims(self) -> dict:
        xi = self.xi
        if not xi.is_integral or not xi.is_kahler:
            raise _Fail(f"dimensions need positive integral xi, got {[_frac(c) for c in xi.c]}")
        dp = bergman.dim_poly(self.flag, xi)
        self.dp = dp
        d_n, fact = dp.d_n_vs_factorial
        out = {
            "h0": list(dp.values),
            "d": [_frac(x) for x in dp.d],
            "v_rr": _frac(dp.v_rr),
            "d_n": _frac(d_n),
            "n_factorial": fact,
        }
        if d_n <= 0:
            raise _Fail(f"d_n = {d_n} is not positive", out)
        return out

    def check_kernel(self) -> dict:
        pd, dp = self.pd, self.dp
        if not pd.integral_exponents:
            raise _Fail("kernel needs integral minor exponents")
        n = pd.n
        origin = [0] * n
        out = {
            "W0": _frac(kahlergeom.weight_W(pd, origin)),
            "boundary_coefficient": str(bergman.boundary_coefficient(pd, dp, origin)),
            "v_rr": _frac(dp.v_rr),
            "volume": f"pi^{n} * {_frac(dp.v_rr)}",
        }
        worst = 0.0
        for s in range(self.job.samples):
            z = self.random_point(n)
            x = X_SCHEDULE[s % len(X_SCHEDULE)]
            pt = bergman.point_with_x(pd, z, x)
            closed = bergman.kernel_closed_form(pd, dp, pt)
            series, tail = bergman.kernel_series(pd, dp, pt, self.job.trunc)
            gap = abs(closed.coef - series.coef)
            if gap > tail.coef:
                raise _Fail(f"z={z}, x={x}: |closed - series| = {float(gap):.3e} > tail {float(tail):.3e}", out)
            if x <= Fraction(1, 2) and gap > SERIES_REL_TOL * abs(closed.coef):
                raise _Fail(f"z={z}, x={x}: relative gap {float(gap / closed.coef):.3e}", out)
            worst = max(worst, float(gap / closed.coef))
            if bergman.a_coefficient(pd, dp, z, pt.rho).coef <= 0:
                raise _Fail(f"a <= 0 at z={z}, x={x}", out)
            if bergman.boundary_coefficient(pd, dp, z).coef <= 0:
                raise _Fail(f"boundary coefficient <= 0 at z={z}", out)
        out["max_relative_gap"] = worst
        return out

    def check_kempf_numeric(self) -> dict:
        flag = self.flag
        d = flag.n
        if not is_projective(flag) or d > 2 or self.xi != ke_coeffs(flag):
            raise _Skip("numeric Kempf check covers CP^1 and CP^2 with the KE weight only")
        tol = 1e-6 if d == 1 else 1e-5
        out = {}
        for m in ((1, 2, 3) if d == 1 else (1,)):
            pts = [
                [complex(self.rng.uniform(-2, 2), self.rng.uniform(-2, 2)) for _ in range(d)]
                for _ in range(self.job.samples)
            ]
            res = bergman.kempf_numeric_projective(d, m, pts)
            out[f"m{m}"] = {
                "constancy": res.constancy,
                "deviation": res.deviation,
                "gram_oracle_deviation": res.gram_oracle_deviation,
            }
            worst = max(res.constancy, res.deviation, res.gram_oracle_deviation)
            if worst > tol:
                raise _Fail(f"m={m}: relative deviation {worst:.3e} > {tol:g}", out)
        return out

    def run(self, timing: bool) -> dict[str, CheckResult]:
        checks: dict[str, CheckResult] = {}
        handlers: dict[str, Callable[[], dict]] = {
            "roots": self.check_roots,
            "q": self.check_q,
            "diastasis": self.check_diastasis,
            "einstein": self.check_einstein,
            "dims": self.check_dims,
            "kernel": self.check_kernel,
            "kempf-numeric": self.check_kempf_numeric,
        }
        for name in _closure(self.job.checks):
            blocked = [p for p in PREREQS[name] if checks[p].status != "pass"]
            if blocked:
                checks[name] = CheckResult("skipped", f"prerequisite {blocked[0]} did not pass")
                continue
            t0 = time.perf_counter()
            try:
                res = CheckResult("pass", constants=handlers[name]())
            except _Fail as exc:
                res = CheckResult("fail", exc.witness, exc.constants)
            except _Skip as exc:
                res = CheckResult("skipped", str(exc))
            except (ValueError, ArithmeticError, RuntimeError) as exc:
                res = CheckResult("fail", f"{type(exc).__name__}: {exc}")
            if timing:
                res.ms = round((time.perf_counter() - t0) * 1000, 3)
            checks[name] = res
        return checks


def _thread_count() -> int:
    env = os.environ.get("FLAGBERG_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def run(config: RunConfig, timing: bool = False) -> Report:
    """Execute every job; failures become report entries, never exceptions."""

    def one(item: tuple[int, JobConfig]) -> JobReport:
        k, job = item
        xi = job.xi if isinstance(job.xi, str) else [_frac(c) for c in job.xi]
        rep = JobReport(k, job.group, list(job.black), xi)
        rep.checks = _JobRunner(job).run(timing)
        return rep

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        jobs = list(pool.map(one, enumerate(config.jobs)))
    return Report(jobs)


# -- output ------------------------------------------------------------------


def emit(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), indent=2) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"{'job':>3}  {'group':<6} {'black':<10} {'check':<14} {'status':<8} detail"]
    for j in report.jobs:
        black = ",".join(str(b) for b in j.black)
        for name, c in j.checks.items():
            detail = (c.witness or "")[:60]
            lines.append(f"{j.id:>3}  {j.group:<6} {black:<10} {name:<14} {c.status.upper():<8} {detail}".rstrip())
    lines.append(f"overall: {'FAIL' if report.failed else 'PASS'}")
    return "\n".join(lines) + "\n"


def load_report(text: str) -> Report:
    raw = json.loads(text)
    if raw.get("version") != REPORT_VERSION:
        raise ValueError(f"unsupported report version {raw.get('version')!r}")
    jobs = []
    for j in raw["jobs"]:
        checks = {
            name: CheckResult(c["status"], c.get("witness"), c.get("constants"), c.get("ms"))
            for name, c in j["checks"].items()
        }
        jobs.append(JobReport(j["id"], j["group"], j["black"], j["xi"], checks))
    return Report(jobs)


def _parse_nodes(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated node indices, got {text!r}") from None


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="flagberg", description=__doc__)
    sub = parser.add_subparsers(dest="cmd", required=True)
    p_run = sub.add_parser("run", help="execute the checks of a JSON job file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--format", choices=("json", "table"), default="json")
    p_run.add_argument("--out")
    p_run.add_argument("--timing", action="store_true", help="record per-check wall time (ms)")
    p_desc = sub.add_parser("describe", help="print roots, Q and weights of a painted diagram")
    p_desc.add_argument("group")
    p_desc.add_argument("--black", type=_parse_nodes, required=True)
    args = parser.parse_args(argv)

    if args.cmd == "describe":
        try:
            family, d = parse_group(args.group)
            print(describe(make_flag(family, d, args.black)))
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0

    try:
        with open(args.config, encoding="utf-8") as fh:
            config = parse_config(fh.read())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    report = run(config, timing=args.timing)
    text = emit(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if report.failed else 0
