"""Command-line front end: ``fockalg subconv | verify | eval``.

Exit codes: 0 success, 1 a verification failed, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fock, gaussian, suites, wiener
from .errors import DomainError
from .fock import Context, FockElement
from .space import HVector, Spectrum, in_ball

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_TOLERANCES = {
    "kernel": 1e-10,
    "algebra": 1e-10,
    "ccr": 1e-11,
    "adjoint": 1e-12,
    "triple": 1e-12,
    "sigma_band": 4.0,
}

CHECK_COLUMNS = ("suite", "check", "value", "threshold", "margin", "pass")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    spectrum: Spectrum
    cone: dict
    dims: int
    cap: int
    seeds: list = field(default_factory=lambda: [0])
    mc_samples: int = 10**6
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    points: list = field(default_factory=list)
    out: Path | None = None
    expect_nonessential: bool = False

    def context(self) -> Context:
        return Context(self.spectrum, self.cone_series(), self.cap)

    def cone_series(self) -> wiener.ConeSeries:
        desc = dict(self.cone)
        desc.setdefault("cap", self.cap)
        if "coeffs" in desc and desc["coeffs"] is not None:
            desc.pop("cap")
        lam = wiener.ConeSeries.from_dict(desc)
        if lam.cap < self.cap:
            raise ConfigError(f"cone has {lam.cap + 1} coefficients, cap is {self.cap}")
        return lam.truncate(self.cap) if lam.cap > self.cap else lam


DEFAULT_CONFIG = {
    "spectrum": {"k": [0.8, 0.5, 0.3]},
    "cone": {"family": "tau_p", "params": {"tau": 1.0, "p": 0.5}},
    "cap": 8,
}


def load_config(path: str | None, args) -> RunConfig:
    raw = dict(DEFAULT_CONFIG)
    if path:
        try:
            raw.update(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        S = Spectrum.from_dict(raw["spectrum"])
        dims = int(getattr(args, "dims", None) or raw.get("dims", S.dims))
        if dims < 1 or dims > S.dims:
            raise ConfigError(f"dims={dims} incompatible with {S.dims} spectrum entries")
        S = Spectrum(S.k[:dims])
        cap = int(getattr(args, "cap", None) if getattr(args, "cap", None) is not None
                  else raw.get("cap", 8))
        seeds = raw.get("seeds", [0])
        if getattr(args, "seed", None) is not None:
            seeds = [args.seed]
        M = int(getattr(args, "samples", None) or raw.get("mc_samples", 10**6))
        tol = dict(DEFAULT_TOLERANCES)
        tol.update(raw.get("tolerances", {}))
        if "relative_tol" in tol:
            tol["kernel"] = tol["algebra"] = float(tol.pop("relative_tol"))
        points = [HVector.from_dict(p) for p in raw.get("points", [])]
        out = getattr(args, "out", None) or raw.get("out")
        cfg = RunConfig(S, dict(raw["cone"]), dims, cap, [int(s) for s in seeds], M, tol,
                        points, Path(out) if out else None,
                        bool(raw.get("expect_nonessential", False)))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
    if cap < 0 or M < 1 or any(v <= 0 for v in tol.values()):
        raise ConfigError("need cap >= 0, mc_samples >= 1 and positive tolerances")
    for p in points:
        if p.dims != dims:
            raise ConfigError(f"point has {p.dims} coordinates, expected {dims}")
    return cfg


def _write(out: Path | None, name: str, text: str):
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def _checks_csv(checks) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CHECK_COLUMNS)
    for c in checks:
        w.writerow([c.suite, c.name, repr(float(c.value)), repr(float(c.threshold)),
                    repr(float(c.margin)), "true" if c.passed else "false"])
    return buf.getvalue()


def cmd_subconv(cfg: RunConfig) -> int:
    lam = cfg.cone_series()
    try:
        cert = wiener.subconv_certificate(lam)
    except ZeroDivisionError as exc:
        raise DomainError(str(exc)) from exc
    conv = wiener.convolve(lam, lam).coeffs
    running = np.maximum.accumulate(cert.ratios)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("n", "lambda", "self_convolution", "ratio", "running_max"))
    for n in range(lam.cap + 1):
        w.writerow((n, repr(float(lam.coeffs[n])), repr(float(conv[n])),
                    repr(float(cert.ratios[n])), repr(float(running[n]))))
    _write(cfg.out, "ratios.csv", buf.getvalue())
    if cert.plateau:
        verdict = "plateau"
        code = EXIT_OK
    else:
        verdict = "unbounded ratio"
        code = EXIT_OK if cfg.expect_nonessential else EXIT_FAIL
    report = {"family": lam.family, "params": lam.params, "cap": lam.cap, "C_N": cert.C_N,
              "plateau": cert.plateau, "verdict": verdict}
    _write(cfg.out, "subconv.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(f"C_N = {cert.C_N!r}  plateau = {str(cert.plateau).lower()}  verdict: {verdict}")
    return code


def run_suite(cfg: RunConfig, name: str) -> suites.SuiteResult:
    ctx = cfg.context()
    tol = cfg.tolerances
    seed = cfg.seeds[0]
    if name == "moments":
        return suites.moments(ctx, cfg.seeds, cfg.mc_samples, sigma=tol["sigma_band"])
    if name == "kernel":
        for p in cfg.points:
            if not in_ball(p, ctx.spectrum).closed:
                raise DomainError("configured point lies outside the closed ball")
        return suites.kernel(ctx, seed, cfg.points, rtol=tol["kernel"])
    if name == "algebra":
        return suites.algebra(ctx, seed, rtol=tol["algebra"])
    if name == "ccr":
        return suites.ccr(ctx, seed, rtol=tol["ccr"], adj_tol=tol["adjoint"])
    if name == "triple":
        return suites.triple(ctx, seed, rtol=tol["triple"])
    raise ConfigError(f"unknown suite {name!r}")


def cmd_verify(cfg: RunConfig, suite: str) -> int:
    names = suites.SUITES if suite == "all" else (suite,)
    checks, mc_rows = [], []
    for name in names:
        res = run_suite(cfg, name)
        checks.extend(res.checks)
        mc_rows.extend(res.mc_rows)
    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.suite}: {c.name}  "
              f"value={c.value:.3e} threshold={c.threshold:.3e}")
    _write(cfg.out, "checks.csv", _checks_csv(checks))
    if mc_rows:
        _write(cfg.out, "mc.csv", gaussian.csv_rows(mc_rows))
    passed = all(c.passed for c in checks)
    report = {
        "suite": suite,
        "passed": passed,
        "checks": [{"suite": c.suite, "check": c.name, "value": float(c.value),
                    "threshold": float(c.threshold), "pass": bool(c.passed)} for c in checks],
    }
    _write(cfg.out, "report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_eval(element_path: str, point_path: str, out: Path | None) -> int:
    try:
        f = FockElement.from_json(Path(element_path).read_text())
        xi = HVector.from_json(Path(point_path).read_text())
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"cannot parse input: {exc}") from exc
    ctx = f.ctx
    value = fock.evaluate(f, xi)
    diag = fock.kernel_eval_closed(xi, xi, ctx)
    origin = fock.kernel_eval_closed(HVector.zero(ctx.dims), xi, ctx)
    report = {
        "value": [value.real, value.imag],
        "kernel_diagonal": [diag.real, diag.imag],
        "kernel_from_origin": [origin.real, origin.imag],
    }
    text = json.dumps(report, sort_keys=True)
    print(text)
    _write(out, "eval.json", text + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fockalg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON run configuration")
        sp.add_argument("--out", help="directory for reports")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--dims", type=int)
        sp.add_argument("--cap", type=int)
        sp.add_argument("--samples", type=int)

    common(sub.add_parser("subconv", help="subconvolution certificate of the cone series"))
    v = sub.add_parser("verify", help="run a verification suite")
    common(v)
    v.add_argument("--suite", default="all", choices=suites.SUITES + ("all",))
    e = sub.add_parser("eval", help="evaluate an element and the kernel at a point")
    common(e)
    e.add_argument("element", help="element JSON file")
    e.add_argument("point", help="point JSON file")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "eval":
            return cmd_eval(args.element, args.point, Path(args.out) if args.out else None)
        cfg = load_config(args.config, args)
        if args.command == "subconv":
            return cmd_subconv(cfg)
        return cmd_verify(cfg, args.suite)
    except (ConfigError, DomainError, ValueError) as exc:
        print(f"fockalg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
