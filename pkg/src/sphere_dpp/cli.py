"""Command-line front end: sphere-dpp <command> [options].

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 sampler stall.
All randomness comes from --seed; trial t of a command uses stream t.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

from . import energy, stats
from .errors import DomainError, NumericalError, SamplerStallError, SphereDPPError
from .formats import points_to_csv, points_to_json, read_points, rows_to_csv, rows_to_json
from .kernels import (HarmonicEnsemble, IsotropicProjectionKernel, Kernel, enumerate_projection_kernels,
                      load_kernel)
from .sampling import RngStream, sample_dpp, sample_uniform

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_STALL = 0, 2, 3, 4
COMMANDS = ("sample", "energy", "expect", "variance", "discrepancy", "separation",
            "compare-kernels", "fig-data")


class UsageError(SphereDPPError):
    pass


@dataclass
class RunConfig:
    command: str
    d: Optional[int] = None
    L: list[int] = field(default_factory=list)
    kernel: Optional[str] = None
    degrees: Optional[list[int]] = None
    uniform: Optional[int] = None
    points: Optional[str] = None
    s: list[float] = field(default_factory=list)
    trials: int = 1
    seed: int = 0
    stream: int = 0
    output: Optional[str] = None
    format: str = "csv"
    threads: Optional[int] = None
    n: list[int] = field(default_factory=list)
    n_max: Optional[int] = None
    max_degree: int = 40
    measure: Optional[float] = None
    radius: Optional[float] = None
    probes: Optional[int] = None
    t: Optional[float] = None
    which: Optional[str] = None
    s_grid: str = "0.05:1.95:39"
    dims: list[int] = field(default_factory=lambda: [4, 6])

    def validate(self):
        need_kernel = {"sample", "variance", "separation"}
        sources = sum(x is not None for x in (self.kernel, self.degrees, self.uniform)) + bool(self.L)
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command in need_kernel | {"discrepancy"} and sources == 0:
            raise UsageError(f"{self.command} needs --L, --degrees, --kernel or --uniform")
        if sources > 1:
            raise UsageError("give exactly one of --L, --degrees, --kernel, --uniform")
        if (self.L or self.degrees is not None) and self.d is None:
            raise UsageError("--L and --degrees need --d")
        if self.uniform is not None and self.command not in ("sample", "discrepancy", "energy", "separation"):
            raise UsageError(f"--uniform is not meaningful for {self.command}")
        if self.command in ("variance", "separation") and self.uniform is not None:
            raise UsageError(f"{self.command} needs a kernel")
        if self.uniform is not None and self.d is None:
            raise UsageError("--uniform needs --d")
        if self.command in ("sample", "variance", "discrepancy", "separation", "energy") and len(self.L) > 1:
            raise UsageError(f"{self.command} takes a single --L")
        if self.command == "energy":
            if not self.s:
                raise UsageError("energy needs --s")
            if self.points is None and sources == 0:
                raise UsageError("energy needs --points or a kernel to sample")
        if self.command == "expect":
            if not self.s:
                raise UsageError("expect needs --s")
            if sources == 0 or self.uniform is not None:
                raise UsageError("expect needs --L, --degrees or --kernel")
        if self.command == "compare-kernels":
            if self.d is None or not (self.n or self.n_max):
                raise UsageError("compare-kernels needs --d and --n or --n-max")
        if self.command == "fig-data" and self.which not in ("constants", "kernels"):
            raise UsageError("fig-data needs 'constants' or 'kernels'")
        if self.command == "variance" and self.measure is not None and self.radius is not None:
            raise UsageError("give --measure or --radius, not both")
        if self.trials < 1:
            raise UsageError("--trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        if self.format not in ("csv", "json"):
            raise UsageError("--format is csv or json")

    def kernels(self) -> list[Kernel]:
        if self.kernel is not None:
            return [load_kernel(self.kernel)]
        if self.degrees is not None:
            return [IsotropicProjectionKernel(self.d, tuple(self.degrees))]
        return [HarmonicEnsemble(self.d, L) for L in self.L]

    def rng(self) -> RngStream:
        return RngStream(self.seed, self.stream)


# --- argument parsing ---------------------------------------------------------

def _int_list(text: str) -> list[int]:
    """'8', '2,5,10' or an inclusive range '1:40'."""
    out = []
    for part in text.split(","):
        if ":" in part:
            lo, hi = part.split(":")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, help="sphere dimension")
    common.add_argument("--L", type=_int_list, default=[], help="harmonic degree, list or a:b range")
    common.add_argument("--kernel", help="JSON kernel file ({'d','L'} or {'d','degrees'})")
    common.add_argument("--degrees", type=_int_list, help="degree set of a projection kernel")
    common.add_argument("--uniform", type=int, metavar="N", help="use N i.i.d. uniform points instead of a DPP")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--stream", type=int, default=0, help="stream id of a single draw")
    common.add_argument("--trials", type=int, default=1)
    common.add_argument("--threads", type=int, help="worker count (falls back to SPHERE_DPP_THREADS)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", help="output file (default stdout)")

    p = argparse.ArgumentParser(prog="sphere-dpp", description="Determinantal point processes on spheres.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("sample", parents=[common], help="draw one configuration")
    sp = sub.add_parser("energy", parents=[common], help="discrete energies of points or draws")
    sp.add_argument("--points", help="point file written by 'sample'")
    sp.add_argument("--s", type=_float_list, default=[], help="exponents, 0 for logarithmic")
    sp = sub.add_parser("expect", parents=[common], help="expected energies (closed form and quadrature)")
    sp.add_argument("--s", type=_float_list, default=[])
    sp = sub.add_parser("variance", parents=[common], help="cap-count and coordinate variances")
    sp.add_argument("--measure", type=float, help="cap measure in (0, 1) (default 0.3)")
    sp.add_argument("--radius", type=float, help="cap radius in (0, pi)")
    sp = sub.add_parser("discrepancy", parents=[common], help="cap discrepancy estimates")
    sp.add_argument("--probes", type=int, help="random cap centers per draw (default n)")
    sp = sub.add_parser("separation", parents=[common], help="separation distance and close pairs")
    sp.add_argument("--t", type=float, help="close-pair distance (default 0.8 x threshold)")
    sp = sub.add_parser("compare-kernels", parents=[common], help="expected 2-energy of all kernels with trace n")
    sp.add_argument("--n", type=_int_list, default=[])
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--max-degree", type=int, default=40)
    sp = sub.add_parser("fig-data", parents=[common], help="curve data for plotting")
    sp.add_argument("which", choices=("constants", "kernels"))
    sp.add_argument("--s-grid", default="0.05:1.95:39", help="start:stop:count")
    sp.add_argument("--dims", type=_int_list, default=[4, 6])
    sp.add_argument("--n-max", type=int, default=600)
    sp.add_argument("--max-degree", type=int, default=12)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    names = {f.name for f in fields(RunConfig)}
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in names and v is not None})


# --- commands -----------------------------------------------------------------

def _draw(cfg: RunConfig, stream: RngStream):
    if cfg.uniform is not None:
        return sample_uniform(cfg.d, cfg.uniform, stream)
    return sample_dpp(cfg.kernels()[0], stream)


def _source_meta(cfg: RunConfig) -> dict:
    if cfg.uniform is not None:
        return {"kernel": {"uniform": cfg.uniform, "d": cfg.d}, "seed": cfg.seed}
    return {"kernel": cfg.kernels()[0].to_dict(), "seed": cfg.seed}


def cmd_sample(cfg: RunConfig) -> str:
    x = _draw(cfg, cfg.rng())
    meta = {**_source_meta(cfg), "stream": cfg.stream}
    return points_to_json(x, meta) if cfg.format == "json" else points_to_csv(x, meta)


ENERGY_COLUMNS = ["trial", "s", "n", "E_s_discrete", "E_s_expected", "E_s_asymptotic"]


def cmd_energy(cfg: RunConfig):
    rows = []
    if cfg.points is not None:
        configs = [("file", read_points(cfg.points), None)]
        meta = {"points": cfg.points}
    else:
        kern = None if cfg.uniform is not None else cfg.kernels()[0]
        configs = [(t, _draw(cfg, cfg.rng().trial(t)), kern) for t in range(cfg.trials)]
        meta = _source_meta(cfg)
    for trial, x, kern in configs:
        for s in cfg.s:
            rep = energy.energy_report(x, s, kern, cfg.threads)
            rows.append({"trial": trial, "s": s, "n": rep.n, "E_s_discrete": rep.discrete_value,
                         "E_s_expected": rep.expected_value, "E_s_asymptotic": rep.asymptotic_value})
    return rows, ENERGY_COLUMNS, meta


EXPECT_COLUMNS = ["d", "L", "n", "s", "energy", "E_s_expected_closed_form", "E_s_expected_quadrature",
                  "E_s_asymptotic", "V_s_n2"]


def _expect_row(k: Kernel, s: float) -> dict:
    d, n = k.d, k.trace
    harmonic = isinstance(k, HarmonicEnsemble)
    row = {"d": d, "L": k.L if harmonic else None, "n": n, "s": s,
           "energy": "log" if s == 0 else "riesz"}
    if s == 0:
        if not harmonic:
            raise DomainError("logarithmic expectation is available for the harmonic ensemble only")
        row["E_s_expected_closed_form"] = energy.expected_log_harmonic(d, k.L)
        row["E_s_expected_quadrature"] = energy.log_energy_from_derivative(d, k.L)
        row["V_s_n2"] = energy.continuous_vlog(d) * n * n
    else:
        if harmonic and s < d:
            row["E_s_expected_closed_form"] = energy.expected_riesz_harmonic(d, k.L, s)
        row["E_s_expected_quadrature"] = energy.expected_riesz_quadrature(k, s)
        if s < d:
            row["V_s_n2"] = energy.continuous_vs(d, s) * n * n
    if harmonic and s <= d:
        row["E_s_asymptotic"] = energy.asymptotic_energy(d, k.L, s)
    return row


def cmd_expect(cfg: RunConfig):
    rows = [_expect_row(k, s) for k in cfg.kernels() for s in cfg.s]
    return rows, EXPECT_COLUMNS, {}


STAT_COLUMNS = ["statistic", "estimate", "stderr", "trials", "reference"]


def cmd_variance(cfg: RunConfig):
    k = cfg.kernels()[0]
    if cfg.radius is not None:
        cap = stats.CapSpec.north(k.d, cfg.radius)
    else:
        cap = stats.CapSpec.with_measure(k.d, 0.3 if cfg.measure is None else cfg.measure)
    mu = float(stats.cap_measure(k.d, cap.radius))
    exact = stats.variance_cap_semianalytic(k, cap)
    rows = [stats.StatReport("var_n_A_semianalytic", exact).to_dict(),
            stats.StatReport("var_coordinate_exact", stats.variance_coordinate_statistic(k)).to_dict()]
    if cfg.trials > 1:
        counts = np.array(stats.sample_statistics(k, stats.CapCounter(cap), cfg.trials, cfg.rng(), cfg.threads),
                          dtype=float)
        var, se = stats.variance_with_jackknife(counts)
        rows.append(stats.StatReport("mean_n_A_mc", float(counts.mean()),
                                     float(counts.std(ddof=1) / math.sqrt(cfg.trials)), cfg.trials,
                                     k.trace * mu).to_dict())
        rows.append(stats.StatReport("var_n_A_mc", var, se, cfg.trials, exact).to_dict())
    meta = {"kernel": k.to_dict(), "seed": cfg.seed, "cap_radius": cap.radius, "cap_measure": mu}
    return rows, STAT_COLUMNS, meta


def cmd_discrepancy(cfg: RunConfig):
    rows = []
    values = []
    for t in range(cfg.trials):
        x = _draw(cfg, cfg.rng().trial(t))
        probes = cfg.probes or x.n
        # probe centers use a stream separate from the draw
        v = stats.discrepancy_estimate(x, probes, RngStream(cfg.seed, 2**32 + t))
        values.append(v)
        rows.append({"trial": t, "n": x.n, "probes": probes, "discrepancy_estimate": v})
    rows.append({"trial": "median", "n": rows[0]["n"], "probes": rows[0]["probes"],
                 "discrepancy_estimate": float(np.median(values))})
    return rows, ["trial", "n", "probes", "discrepancy_estimate"], _source_meta(cfg)


def cmd_separation(cfg: RunConfig):
    k = cfg.kernels()[0]
    t = cfg.t
    bound = None
    if isinstance(k, HarmonicEnsemble) and k.L >= 1:
        if t is None:
            t = 0.8 * stats.close_pair_threshold(k)
        if t <= stats.close_pair_threshold(k):
            bound = stats.expected_close_pairs_bound(k, t)
    if t is None:
        raise UsageError("--t is required for kernels other than the harmonic ensemble")
    rows = []
    for trial in range(cfg.trials):
        x = sample_dpp(k, cfg.rng().trial(trial))
        sep = stats.separation(x)
        rows.append({"trial": trial, "n": x.n, "sep_dist": sep,
                     "sep_dist_scaled": sep * x.n ** 0.75 if k.d == 2 else None,
                     "G_t": stats.close_pair_count(x, t)})
    rows.append({"trial": "mean", "n": k.trace, "G_t": float(np.mean([r["G_t"] for r in rows])),
                 "G_t_bound": bound})
    columns = ["trial", "n", "sep_dist", "sep_dist_scaled", "G_t", "G_t_bound"]
    return rows, columns, {"kernel": k.to_dict(), "seed": cfg.seed, "t": t}


KERNEL_COLUMNS = ["d", "n", "degrees", "harmonic", "F_quadratic_form", "E2_expected", "rank"]


def kernel_table(d: int, n_values, max_degree: int, min_count: int = 1) -> list[dict]:
    """Per n, every kernel with trace n ranked by expected 2-energy (rank 1 = smallest)."""
    rows = []
    for n in n_values:
        ks = enumerate_projection_kernels(d, n, max_degree)
        if len(ks) < min_count:
            continue
        forms = [energy.quadratic_form_exact(k) for k in ks]
        order = sorted(range(len(ks)), key=lambda i: -forms[i])
        rank = {i: r + 1 for r, i in enumerate(order)}
        for i, k in enumerate(ks):
            rows.append({"d": d, "n": n, "degrees": list(k.degrees), "harmonic": k.is_harmonic(),
                         "F_quadratic_form": float(forms[i]), "E2_expected": energy.expected_e2_closed_form(k),
                         "rank": rank[i]})
    return rows


def cmd_compare(cfg: RunConfig):
    if cfg.n:
        rows = kernel_table(cfg.d, cfg.n, cfg.max_degree)
    else:
        rows = kernel_table(cfg.d, range(1, cfg.n_max + 1), cfg.max_degree, min_count=2)
    return rows, KERNEL_COLUMNS, {"d": cfg.d, "max_degree": cfg.max_degree}


def constants_table(d: int, s_values) -> list[dict]:
    rows = []
    for s in s_values:
        row = {"d": d, "s": s, "C_s_d": energy.asymptotic_riesz_constant(d, s), "V_s": energy.continuous_vs(d, s)}
        if d == 2:
            row["C_spherical_ensemble"] = 2 ** (-s) * math.gamma(1 - s / 2)
        rows.append(row)
    return rows


def cmd_fig_data(cfg: RunConfig):
    if cfg.which == "constants":
        start, stop, count = cfg.s_grid.split(":")
        grid = np.linspace(float(start), float(stop), int(count)).tolist()
        d = cfg.d or 2
        return constants_table(d, grid), ["d", "s", "C_s_d", "C_spherical_ensemble", "V_s"], {"d": d}
    n_max = cfg.n_max or 600
    rows = []
    for d in cfg.dims:
        rows.extend(kernel_table(d, range(1, n_max + 1), cfg.max_degree, min_count=2))
    return rows, KERNEL_COLUMNS, {"dims": cfg.dims, "max_degree": cfg.max_degree, "n_max": n_max}


HANDLERS = {"energy": cmd_energy, "expect": cmd_expect, "variance": cmd_variance,
            "discrepancy": cmd_discrepancy, "separation": cmd_separation,
            "compare-kernels": cmd_compare, "fig-data": cmd_fig_data}


def render(cfg: RunConfig) -> str:
    cfg.validate()
    if cfg.command == "sample":
        return cmd_sample(cfg)
    rows, columns, meta = HANDLERS[cfg.command](cfg)
    if cfg.format == "json":
        return rows_to_json(rows, columns, meta)
    return rows_to_csv(rows, columns, meta)


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        text = render(cfg)
    except (UsageError, DomainError) as exc:
        print(f"sphere-dpp: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SamplerStallError as exc:
        print(f"sphere-dpp: sampler stalled: {exc}", file=sys.stderr)
        return EXIT_STALL
    except (NumericalError, SphereDPPError, ArithmeticError) as exc:
        print(f"sphere-dpp: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
