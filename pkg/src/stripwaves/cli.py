"""Command-line batch runner.

Every CSV starts with one '#'-prefixed JSON line holding the effective
configuration. Exit codes: 0 success, 2 convergence failure,
3 verification failure, 4 bad configuration.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass

import numpy as np

from .continuation import Branch, branch_validate, critical_mu, trace_branch
from .errors import ParameterError
from .problem import WaveParameters, symbol_compare
from .stability import DEFAULT_SEED, spectrum_along_branch, trivial_full_variation
from .verify import run_verify

EXIT_OK, EXIT_CONVERGENCE, EXIT_VERIFY, EXIT_CONFIG = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = ""
    k: float = 1.0
    h: float = 1.0
    g: float = 1.0
    mode: int = 1
    eps_max: float = 0.02
    steps: int = 10
    n_trunc: int = 128
    tol: float = 1e-12
    out: str | None = None
    seed: int = DEFAULT_SEED
    grid: int = 41
    n_max: int = 10
    branch: str | None = None
    basis_order: int | None = None
    h_range: tuple = (0.05, 2.0)
    mu_range: tuple = (0.05, 2.0)

    def validate(self) -> "RunConfig":
        for name in ("k", "h", "g", "tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if not 0 <= self.eps_max <= 0.1:
            raise ConfigError("eps_max must lie in [0, 0.1]")
        n = self.n_trunc
        if n < 1 or n > 512 or n & (n - 1):
            raise ConfigError("n_trunc must be a power of two no larger than 512")
        if self.mode < 1 or self.mode > n:
            raise ConfigError("mode must be between 1 and n_trunc")
        if self.steps < 1 or self.grid < 2 or self.n_max < 0:
            raise ConfigError("steps >= 1, grid >= 2 and n_max >= 0 required")
        for rng in (self.h_range, self.mu_range):
            if len(rng) != 2 or not 0 < rng[0] < rng[1]:
                raise ConfigError("ranges must be increasing and positive")
        return self

    def params(self) -> WaveParameters:
        return WaveParameters(self.k, self.h, self.g)

    def provenance(self) -> str:
        d = dataclasses.asdict(self)
        d["h_range"], d["mu_range"] = list(self.h_range), list(self.mu_range)
        return "# " + json.dumps(d, sort_keys=True)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer, str)):
        return str(v)
    return f"{float(v):.17g}"


def _write_table(cfg: RunConfig, header, rows, path=None):
    path = path or cfg.out
    fh = open(path, "w", newline="") if path else sys.stdout
    try:
        fh.write(cfg.provenance() + "\n")
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for row in rows:
            wr.writerow([_fmt(v) for v in row])
    finally:
        if path:
            fh.close()


# ============================================================================
# Commands
# ============================================================================


def run_dispersion(cfg: RunConfig) -> int:
    rows = [(n, critical_mu(n, cfg.k, cfg.h)) for n in range(1, cfg.n_max + 1)]
    _write_table(cfg, ["n", "mu_star"], rows)
    return EXIT_OK


def run_branch(cfg: RunConfig) -> int:
    b = trace_branch(cfg.mode, cfg.eps_max, cfg.steps, cfg.params(), cfg.n_trunc, cfg.tol)
    stem = cfg.out or "branch"
    b.save_json(stem + ".json")
    b.write_csv(stem + ".csv", cfg.provenance()[2:])
    max_res = max((p.residual_norm for p in b.points), default=float("nan"))
    print(f"points={len(b.points)} complete={b.complete} max_residual={max_res:.3e}")
    if len(b.points) >= 3:
        v = branch_validate(b)
        print(f"observed_order={v.observed_order:.4f} mu_curvature={v.mu_curvature:.6f} max_bernoulli={v.max_bernoulli:.3e}")
    return EXIT_OK if b.complete else EXIT_CONVERGENCE


def run_spectrum(cfg: RunConfig) -> int:
    if not cfg.branch:
        raise ConfigError("spectrum needs --branch")
    try:
        b = Branch.load_json(cfg.branch)
    except OSError as exc:
        raise ConfigError(f"cannot read branch file: {exc}") from exc
    specs = spectrum_along_branch(b, cfg.basis_order)
    rows = [(s.eps, s.lambda_min, s.prediction, s.rel_err, s.report.n_negative) for s in specs]
    _write_table(cfg, ["eps", "lambda_min", "prediction", "rel_err", "n_negative"], rows)
    unstable = all(s.lambda_min < 0 and s.report.n_negative >= 1 for s in specs if s.eps > 0)
    return EXIT_OK if unstable else EXIT_VERIFY


def run_region(cfg: RunConfig) -> int:
    hs = np.linspace(*cfg.h_range, cfg.grid)
    mus = np.linspace(*cfg.mu_range, cfg.grid)
    rows = []
    for h in hs:
        for mu in mus:
            tv = trivial_full_variation(WaveParameters(cfg.k, float(h), cfg.g, float(mu)))
            rows.append((h, mu, tv.cond_w, tv.cond_h, tv.region))
    _write_table(cfg, ["h", "mu", "cond_w", "cond_h", "class"], rows)
    return EXIT_OK


def run_symbols(cfg: RunConfig) -> int:
    rows = symbol_compare(cfg.k * cfg.h, cfg.n_max)
    _write_table(cfg, ["n", "finite_depth", "infinite_depth"], rows)
    return EXIT_OK


def run_verify_cmd(cfg: RunConfig) -> int:
    rep = run_verify(cfg.n_trunc, cfg.seed)
    text = cfg.provenance() + "\n" + rep.format()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK if rep.passed else EXIT_VERIFY


COMMANDS = {
    "dispersion": run_dispersion,
    "branch": run_branch,
    "spectrum": run_spectrum,
    "region": run_region,
    "symbols": run_symbols,
    "verify": run_verify_cmd,
}


# ============================================================================
# Argument handling
# ============================================================================


def _pair(text):
    a, b = (float(v) for v in text.split(","))
    return (a, b)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=float)
    common.add_argument("--h", type=float)
    common.add_argument("--g", type=float)
    common.add_argument("--mode", type=int)
    common.add_argument("--eps-max", dest="eps_max", type=float)
    common.add_argument("--steps", type=int)
    common.add_argument("--n-trunc", dest="n_trunc", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--out")
    common.add_argument("--seed", type=lambda s: int(s, 0))
    common.add_argument("--grid", type=int)
    common.add_argument("--n-max", dest="n_max", type=int)
    common.add_argument("--branch")
    common.add_argument("--basis-order", dest="basis_order", type=int)
    common.add_argument("--h-range", dest="h_range", type=_pair)
    common.add_argument("--mu-range", dest="mu_range", type=_pair)
    common.add_argument("--config", help="JSON file; its keys override flags")
    parser = argparse.ArgumentParser(prog="stripwaves", description="Finite-depth water-wave solver and stability analyzer.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def make_config(ns) -> RunConfig:
    values = {k: v for k, v in vars(ns).items() if v is not None and k != "config"}
    if ns.config:
        try:
            with open(ns.config) as fh:
                values.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("h_range", "mu_range"):
        if key in values:
            values[key] = tuple(values[key])
    return RunConfig(**values).validate()


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = make_config(ns)
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
