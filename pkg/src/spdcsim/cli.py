"""Command-line front end: ``spdcsim run SCENARIO ANALYSIS`` and ``spdcsim presets``."""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import io
from .entangle import (schmidt_gaussian_spectral_modulus, schmidt_gaussian_state, schmidt_gaussian_temporal,
                       fedorov_ratio, schmidt_number, schmidt_numeric)
from .errors import GridError, NumericalError, SpdcError, UsageError
from .hom import analytic_visibility, hom_dip_analytic, hom_dip_numeric, reduced_density
from .presets import list_presets
from .propagate import PropagationScenario, duration_sweep, migration_sweep, suppression_report
from .spectral import build_jsa_grid, correlation_coefficient, gaussian_params
from .grids import edge_fraction
from .temporal import jta_via_transform
from .wigner import cwf_analytic, cwf_grid, cwf_marginals, cwf_numeric, herald_spectrum, support_fraction

ANALYSES = ("jsa", "jta", "schmidt", "hom", "cwf", "migrate", "suppress", "duration")
ENV_OUT = "SPDCSIM_OUT"
EXIT_OK, EXIT_USER, EXIT_NUMERIC = 0, 1, 2


class StageError(Exception):
    def __init__(self, stage: str, exc: BaseException):
        super().__init__(f"{stage}: {exc}")
        self.stage = stage
        self.exc = exc


@contextlib.contextmanager
def stage(name: str):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:  # noqa: BLE001 - every failure is reported with its stage
        raise StageError(name, exc) from exc


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, (GridError, NumericalError, ArithmeticError, np.linalg.LinAlgError)):
        return EXIT_NUMERIC
    if isinstance(exc, (SpdcError, ValueError, TypeError, KeyError, OSError)):
        return EXIT_USER
    return EXIT_NUMERIC


# -- analyses: each returns (results dict, {filename: (kind, payload)}) --------------------------------

def _jsa(ctx):
    f = ctx.jsa(pmf=ctx.options.get("pmf", "sinc"))
    params = ctx.params
    res = {"K": schmidt_number(f), "K_mS": schmidt_number(f, modulus_only=True),
           "xi_numeric": correlation_coefficient(f), "xi_gaussian": params.xi,
           "edge_fraction": edge_fraction(f.intensity)}
    files = {"jsi.csv": ("matrix", (f.idler_axis.samples, f.signal_axis.samples, f.intensity, "nu_i\\nu_s"))}
    return res, files


def _jta(ctx):
    f = ctx.jsa()
    jta = jta_via_transform(f, recenter=ctx.options.get("recenter", True))
    res = {"K_mT": schmidt_number(jta, modulus_only=True), "K": schmidt_number(jta),
           "fedorov": fedorov_ratio(jta, strict=False), "shift": list(jta.meta["shift"]),
           "K_mT_gaussian": schmidt_gaussian_temporal(ctx.params).K}
    files = {"jti.csv": ("matrix", (jta.idler_axis.samples, jta.signal_axis.samples, jta.intensity, "t_i\\t_s"))}
    return res, files


def _schmidt(ctx):
    f = ctx.jsa()
    s = schmidt_numeric(f, with_modes=False)
    n_modes = ctx.options.get("n_modes", 20)
    lam = s.eigenvalues[:n_modes]
    jta = jta_via_transform(f, recenter=False)
    p = ctx.params
    res = {"K": s.K, "purity": s.purity, "K_mS": schmidt_number(f, modulus_only=True),
           "K_mT": schmidt_number(jta, modulus_only=True), "K_gaussian": schmidt_gaussian_state(p).K,
           "K_mS_gaussian": schmidt_gaussian_spectral_modulus(p).K, "K_mT_gaussian": schmidt_gaussian_temporal(p).K,
           "eigenvalues": lam}
    files = {"schmidt.csv": ("table", {"mode": np.arange(len(lam)), "eigenvalue": lam})}
    return res, files


def _hom(ctx):
    f = ctx.jsa()
    delays = None
    if "delay_max" in ctx.options:
        delays = np.linspace(-ctx.options["delay_max"], ctx.options["delay_max"], ctx.options.get("n_delays", 161))
    elif "n_delays" in ctx.options:
        raise UsageError("n_delays needs delay_max")
    dip = hom_dip_numeric(f, delays=delays)
    ana = hom_dip_analytic(ctx.params, dip.delays)
    K = schmidt_number(f)
    k_g = schmidt_gaussian_state(ctx.params).K
    res = {"V": dip.visibility, "purity": reduced_density(f).purity(), "inv_K": 1.0 / K, "K": K,
           "argmin_delay": dip.argmin_delay, "edge_rate": [float(dip.rates[0]), float(dip.rates[-1])],
           "V_gaussian": analytic_visibility(ctx.params), "K_gaussian": k_g,
           "VK_gaussian": analytic_visibility(ctx.params) * k_g, "width_gaussian": ana.width}
    files = {"hom.csv": ("table", {"delay": dip.delays, "rate": dip.rates, "rate_gaussian": ana.rates})}
    return res, files


def _cwf(ctx):
    cfg = ctx.config
    grid = ctx.grid if ctx.grid_fixed else cwf_grid(cfg, sigma_g=cfg.sigma_g)
    ctx.grid = grid
    f = build_jsa_grid(cfg, grid)
    kw = {k: ctx.options[k] for k in ("zoom", "support_tol") if k in ctx.options}
    w = cwf_numeric(f, cfg.sigma_g, **kw)
    m = cwf_marginals(w)
    ana = cwf_analytic(ctx.params, cfg.sigma_g)
    res = {"analytic": ana.to_dict(), "numeric_widths": m.widths, "imag_residue": w.imag_residue,
           "total": w.total(), "support_fraction": support_fraction(f, cfg.sigma_g), "zoom_step": w.t_axis.step}
    files = {"cwf.csv": ("matrix", (w.nu_axis.samples, w.t_axis.samples, w.values, "nu\\t")),
             "cwf_spectral.csv": ("table", {"nu": m.nu, "marginal": m.spectral,
                                             "herald_spectrum": herald_spectrum(f, cfg.sigma_g)}),
             "cwf_temporal.csv": ("table", {"t": m.t, "marginal": m.temporal})}
    return res, files


def _migrate(ctx):
    opts = ctx.options
    med, med_s = cfgmod.medium_for(opts)
    z = cfgmod.z_values(opts)
    sc = PropagationScenario(ctx.config, med, tuple(z), med_s, ctx.grid if ctx.grid_fixed else None)
    curve = migration_sweep(sc, fedorov=opts.get("fedorov", False))
    ctx.grid = sc.resolve_grid()
    b_i, b_s = sc.B_pair
    res = curve.to_dict() | {"B_idler": b_i, "B_signal": b_s, "medium": med.name,
                             "K_mT_0": float(curve.K_mT[0])}
    if ctx.config.beta_p:
        res["Bz_min_over_minus_beta_p"] = b_s * curve.z_min / -ctx.config.beta_p
    cols = {"z": curve.z, "K_mT": curve.K_mT, "K_mT_gaussian": curve.K_mT_analytic}
    if curve.fedorov is not None:
        cols["fedorov"] = curve.fedorov
    return res, {"migration.csv": ("table", cols)}


def _suppress(ctx):
    return suppression_report(ctx.config), {}


def _duration(ctx):
    opts = ctx.options
    betas = cfgmod.beta_values(opts, ctx.config)
    d = duration_sweep(ctx.config, betas, numeric=opts.get("numeric", False))
    res = d.to_dict() | {"Delta_min": float(np.min(d.Delta))}
    if ctx.config.beta_p:
        res["beta_min_over_minus_beta_p"] = d.beta_min / -ctx.config.beta_p
    cols = {"beta": d.beta, "Delta_t_M": d.Delta_t_M, "Delta": d.Delta}
    if d.numeric is not None:
        cols["Delta_t_M_numeric"] = d.numeric
    return res, {"duration.csv": ("table", cols)}


RUNNERS = {"jsa": _jsa, "jta": _jta, "schmidt": _schmidt, "hom": _hom, "cwf": _cwf, "migrate": _migrate,
           "suppress": _suppress, "duration": _duration}


class Context:
    """Lazily built objects shared by the analyses of one run."""

    def __init__(self, config, scenario, analysis, grid_n, grid_span):
        self.config = config
        self.scenario = scenario
        self.options = scenario.get("analysis", {}).get(analysis, {})
        g = scenario.get("grid", {})
        self.grid_fixed = (grid_n is not None or grid_span is not None
                           or g.get("n", "auto") != "auto" or g.get("span", "auto") != "auto")
        self.grid = cfgmod.grid_for(config, scenario, n=grid_n, span=grid_span)
        self._params = None

    @property
    def params(self):
        if self._params is None:
            self._params = gaussian_params(self.config)
        return self._params

    def jsa(self, pmf: str = "sinc"):
        return build_jsa_grid(self.config, self.grid, pmf=pmf)


def _write(out: Path, files: dict, summary: dict, analysis: str, formats) -> list[str]:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats:
        for name, (kind, payload) in files.items():
            path = out / name
            if kind == "matrix":
                rows, cols, vals, corner = payload
                io.write_matrix(path, rows, cols, vals, corner)
            else:
                io.write_table(path, payload)
            written.append(str(path))
    if "json" in formats:
        path = out / f"{analysis}_summary.json"
        io.write_json(path, summary)
        written.append(str(path))
    return written


def run(scenario_path, analysis: str, *, out=None, formats=None, preset_name=None, grid_n=None, grid_span=None,
        beta_p=None, beta_s=None, beta_i=None, compensate=None, echo=print) -> dict:
    """Run one analysis and write its files; returns the summary."""
    if analysis not in RUNNERS:
        raise StageError("arguments", UsageError(f"unknown analysis {analysis!r}; choose from {', '.join(ANALYSES)}"))
    with stage("config"):
        scenario = cfgmod.load_scenario(scenario_path)
        config = cfgmod.source_config(scenario, preset_name=preset_name, beta_p=beta_p, beta_s=beta_s,
                                      beta_i=beta_i, compensate_crystal_chirp=compensate)
        output = scenario.get("output", {})
        out_dir = Path(out or os.environ.get(ENV_OUT) or output.get("dir") or "spdcsim-out")
        formats = tuple(formats or output.get("formats") or cfgmod.DEFAULT_FORMATS)
    with stage("grid"):
        ctx = Context(config, scenario, analysis, grid_n, grid_span)
    with stage(f"analysis {analysis}"):
        results, files = RUNNERS[analysis](ctx)
    overrides = {k: v for k, v in dict(preset=preset_name, grid_n=grid_n, grid_span=grid_span, beta_p=beta_p,
                                       beta_s=beta_s, beta_i=beta_i, compensate_crystal_chirp=compensate).items()
                 if v is not None}
    summary = {"analysis": analysis, "results": results,
               "provenance": {"scenario_file": Path(scenario_path).name, "scenario": scenario,
                              "overrides": overrides, "config": cfgmod.config_echo(config),
                              "grid": {"n": ctx.grid.n, "span": ctx.grid.span, "center": ctx.grid.center},
                              "versions": io.versions()}}
    with stage("output"):
        for path in _write(out_dir, files, summary, analysis, formats):
            echo(path)
    return summary


def print_presets(echo=print) -> None:
    for name, text in list_presets():
        echo(f"{name}: {text}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spdcsim", description="Two-photon state simulations for type-II SPDC.")
    sub = p.add_subparsers(dest="command")
    sub.add_parser("presets", help="list the built-in source presets")
    r = sub.add_parser("run", help="run one analysis of a scenario file")
    r.add_argument("scenario", help="YAML scenario file")
    r.add_argument("analysis", choices=ANALYSES)
    r.add_argument("--preset", help="source preset, overriding the scenario")
    r.add_argument("--grid-n", type=int, help="grid size (power of two)")
    r.add_argument("--grid-span", type=float, help="grid span in rad/s")
    r.add_argument("--beta-p", type=float, help="pump chirp in s^2")
    r.add_argument("--beta-s", type=float, help="signal dispersion in s^2")
    r.add_argument("--beta-i", type=float, help="idler dispersion in s^2")
    r.add_argument("--compensate-crystal-chirp", action="store_true", default=None,
                   help="set beta_p = -b_p/4")
    r.add_argument("--out", help=f"output directory (default: ${ENV_OUT}, then the scenario, then ./spdcsim-out)")
    r.add_argument("--format", dest="formats", action="append", choices=("csv", "json"),
                   help="output format; repeat for several (default: csv and json)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in (None, "presets"):
        print_presets()
        return EXIT_OK
    path = Path(args.scenario)
    try:
        if path.is_file() and cfgmod.load_scenario(path) == {} and args.preset is None:
            print_presets()
            return EXIT_OK
        run(path, args.analysis, out=args.out, formats=args.formats, preset_name=args.preset,
            grid_n=args.grid_n, grid_span=args.grid_span, beta_p=args.beta_p, beta_s=args.beta_s,
            beta_i=args.beta_i, compensate=args.compensate_crystal_chirp)
    except StageError as err:
        msg = str(err.exc).splitlines()[0] if str(err.exc) else type(err.exc).__name__
        print(f"spdcsim: error in {err.stage}: {msg}", file=sys.stderr)
        return exit_code(err.exc)
    except SpdcError as err:
        print(f"spdcsim: error in config: {err}", file=sys.stderr)
        return exit_code(err)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
