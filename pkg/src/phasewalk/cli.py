"""Command-line front end: evolve runs, spectra, and figure-reproduction presets.

Exit codes: 0 success, 1 runtime or I/O failure, 2 configuration validation
failure.  All outputs land under the --output directory; files are written
atomically and are byte-identical across reruns of the same configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import (
    CoinBias,
    DensityState,
    Harmonic,
    Line,
    PositionDistribution,
    PureState,
    Ring,
    Topology,
    Zero,
    distribution_of,
    make_initial,
    make_symmetric_initial,
)
from .evolution import (
    WalkParams,
    evolve_density,
    evolve_trajectories,
    pure_distributions,
)
from .metrics import (
    TimeSeries,
    detect_quasi_period,
    fit_spreading_exponent,
    normalized_variance,
    recurrence,
    variance,
)
from .spectral import band_analysis, closed_form_comparison, quasi_energies

__all__ = ["RunConfig", "RunSummary", "cmd_evolve", "cmd_spectrum", "cmd_reproduce", "main", "entry"]

# Coin-bias grid for the adiabatic/diabatic sweep preset (fig3): spans the
# diabatic-to-adiabatic transition; the baseline standard walk uses pi/4.
FIG3_THETA_GRID = ["pi/5", "pi/4", "pi/3", "2*pi/5", "9*pi/20"]
FIG3_BASELINE_THETA = "pi/4"
FIG2_THETAS = [("2pi5", "2*pi/5"), ("pi3", "pi/3"), ("2pi7", "2*pi/7")]

_ANGLE_RE = re.compile(r"^\s*(?:(\d+)\s*\*\s*)?pi\s*(?:/\s*(\d+))?\s*$")


def parse_angle(text: str | float) -> float:
    """Angle in radians from a decimal or an exact 'a*pi/b' form."""
    if isinstance(text, (int, float)):
        return float(text)
    match = _ANGLE_RE.match(text)
    if match:
        a = int(match.group(1)) if match.group(1) else 1
        b = int(match.group(2)) if match.group(2) else 1
        if b == 0:
            raise ValueError(f"invalid angle {text!r}: zero denominator")
        return float(Fraction(a, b)) * math.pi
    try:
        return float(text)
    except ValueError:
        raise ValueError(
            f"invalid angle {text!r}: expected a decimal or 'a*pi/b' with integer a, b"
        ) from None


def _parse_amp(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ValueError(f"invalid complex amplitude {text!r} (use e.g. '0.6+0.8j')") from None


@dataclass
class RunConfig:
    """Everything one evolve run needs; validated before any computation."""

    steps: int = 10
    theta: str = "pi/4"
    q: int = 0
    p: int = 1
    topology: str = "line"
    n_sites: int | None = None
    gamma: float = 0.0
    eta: float = 0.0
    backend: str = "pure"
    n_traj: int = 1000
    seed: int = 0
    initial: str = "symmetric"
    amp0: str | None = None
    amp1: str | None = None
    site: int = 0
    output: str = "out"
    format: str = "csv"

    FIELD_NAMES = (
        "steps theta q p topology n_sites gamma eta backend n_traj seed "
        "initial amp0 amp1 site output format"
    ).split()

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        unknown = set(data) - set(cls.FIELD_NAMES)
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.FIELD_NAMES}

    def validate(self) -> tuple[WalkParams, PureState]:
        """Enforce every invariant up front; returns the bound params and state."""
        if self.steps < 0:
            raise ValueError(f"steps must be nonnegative, got {self.steps}")
        coin = CoinBias(parse_angle(self.theta))
        if self.topology == "line":
            # window sized so the walk can never touch the boundary
            start_offset = abs(self.site) if self.initial == "custom" else 0
            topo: Topology = Line(max(self.steps + start_offset, 1))
        elif self.topology == "ring":
            if self.n_sites is None:
                raise ValueError("ring topology requires n_sites")
            topo = Ring(self.n_sites)
        else:
            raise ValueError(f"topology must be 'line' or 'ring', got {self.topology!r}")
        if self.q == 0 and self.p == 1:
            profile = Zero()
        else:
            if math.gcd(abs(self.q), self.p) != 1:
                raise ValueError(
                    f"q={self.q} and p={self.p} violate the co-primality invariant "
                    "gcd(|q|, p) = 1"
                )
            profile = Harmonic(self.q, self.p)
        params = WalkParams(coin, profile, topo)
        if self.gamma != 0.0 and self.eta != 0.0:
            raise ValueError("gamma and eta must not both be nonzero (one noise model per run)")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if self.backend not in ("pure", "density", "trajectories"):
            raise ValueError(f"backend must be pure|density|trajectories, got {self.backend!r}")
        if self.backend == "pure" and (self.gamma != 0.0 or self.eta != 0.0):
            raise ValueError("the pure backend is noise-free; set gamma=0 and eta=0")
        if self.backend == "density" and self.eta != 0.0:
            raise ValueError("eta drives the trajectory backend; use gamma with density")
        if self.backend == "trajectories" and self.gamma != 0.0:
            raise ValueError("gamma drives the density backend; use eta with trajectories")
        if self.n_traj < 1:
            raise ValueError(f"n_traj must be >= 1, got {self.n_traj}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {self.seed}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv|json, got {self.format!r}")
        if self.initial == "symmetric":
            state = make_symmetric_initial(topo)
        elif self.initial == "custom":
            if self.amp0 is None or self.amp1 is None:
                raise ValueError("custom initial state requires amp0 and amp1")
            state = make_initial(topo, _parse_amp(self.amp0), _parse_amp(self.amp1), self.site)
        else:
            raise ValueError(f"initial must be 'symmetric' or 'custom', got {self.initial!r}")
        return params, state


@dataclass
class RunSummary:
    """In-memory record of one run; the JSON artifact omits the wall time."""

    config: dict
    variance: list[float] | None
    recurrence: list[float]
    tau: int | None
    exponent: dict[str, float] | None
    wall_time: float
    files: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "series": {"variance": self.variance, "recurrence": self.recurrence},
            "analysis": {"tau": self.tau, "exponent": self.exponent},
            "files": self.files,
        }


# ---------------------------------------------------------------------------
# Deterministic file output
# ---------------------------------------------------------------------------


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="\n")
    os.replace(tmp, path)


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_json(path: Path, payload: dict) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _distribution_rows(dists: list[PositionDistribution]) -> list[tuple[int, int, float]]:
    rows = []
    for t, dist in enumerate(dists):
        for x, prob in zip(dist.topology.sites(), dist.probs):
            rows.append((t, int(x), float(prob)))
    return rows


def _write_distributions(path: Path, dists: list[PositionDistribution], fmt: str) -> None:
    rows = _distribution_rows(dists)
    if fmt == "csv":
        lines = ["t,x,probability"]
        lines += [f"{t},{x},{_fmt(p)}" for t, x, p in rows]
        _atomic_write(path, "\n".join(lines) + "\n")
    else:
        payload = [{"t": t, "x": x, "probability": p} for t, x, p in rows]
        _write_json(path, {"rows": payload})


def _write_stderr_table(path: Path, dists: list[PositionDistribution], stderr: np.ndarray) -> None:
    lines = ["t,x,stderr"]
    for t, dist in enumerate(dists):
        for x, se in zip(dist.topology.sites(), stderr[t]):
            lines.append(f"{t},{int(x)},{_fmt(float(se))}")
    _atomic_write(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _analyze(dists: list[PositionDistribution], is_line: bool) -> tuple[
    list[float] | None, list[float], int | None, dict[str, float] | None
]:
    rec = [recurrence(d) for d in dists]
    var = [variance(d) for d in dists] if is_line else None
    steps = len(dists) - 1
    tau = None
    if steps >= 4:
        tau = int(detect_quasi_period(TimeSeries(np.array(rec)), steps // 2)["tau"])
    exponent = None
    if var is not None and steps >= 22:
        sigma = np.sqrt(np.array(var))
        if np.all(sigma[20:] > 0.0):
            exponent = fit_spreading_exponent(TimeSeries(sigma), 20, steps)
    return var, rec, tau, exponent


def cmd_evolve(config: RunConfig, figures: bool = True) -> RunSummary:
    """Run one walk and write the distribution table, summary, and figures.

    File lists in the summary are relative to the output directory, so the
    emitted bytes do not depend on where the output lands.
    """
    params, state = config.validate()
    outdir = Path(config.output)
    outdir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    stderr_table = None
    if config.backend == "pure":
        dists = pure_distributions(state, params, config.steps)
    elif config.backend == "density":
        rho = DensityState.from_pure(state)
        dists = [distribution_of(r) for r in evolve_density(rho, params, config.gamma, config.steps)]
    else:
        result = evolve_trajectories(
            state, params, config.eta, config.steps, config.n_traj, config.seed
        )
        dists = result.distributions
        stderr_table = result.stderr
    var, rec, tau, exponent = _analyze(dists, config.topology == "line")

    files: list[str] = []
    ext = "csv" if config.format == "csv" else "json"
    dist_name = f"distributions.{ext}"
    _write_distributions(outdir / dist_name, dists, config.format)
    files.append(dist_name)
    if stderr_table is not None:
        _write_stderr_table(outdir / "stderr.csv", dists, stderr_table)
        files.append("stderr.csv")
    if figures:
        from . import plotting

        plotting.save_distribution_heatmap(
            dists, outdir / "distributions.png", f"theta={config.theta}, q/p={config.q}/{config.p}"
        )
        files.append("distributions.png")
        series = [("recurrence", TimeSeries(np.array(rec), "recurrence"))]
        if var is not None:
            series.insert(0, ("variance", TimeSeries(np.array(var), "variance")))
        plotting.save_series(series, outdir / "series.png", "value", f"theta={config.theta}")
        files.append("series.png")

    summary = RunSummary(
        config.to_dict(), var, rec, tau, exponent, time.perf_counter() - started, files
    )
    _write_json(outdir / "summary.json", summary.to_json_dict())
    summary.files.append("summary.json")
    return summary


def _band_ids(energies: np.ndarray, report) -> list[int]:
    ids = []
    for e in energies:
        assigned = 0
        for k, band in enumerate(report.bands):
            lo, hi = band.min_energy - 1e-12, band.max_energy + 1e-12
            if lo <= e <= hi or lo <= e - 2.0 * math.pi <= hi:
                assigned = k
                break
        ids.append(assigned)
    return ids


def cmd_spectrum(
    theta: str,
    q: int,
    p: int,
    n_sites: int,
    output: str = "out",
    fmt: str = "csv",
    figures: bool = True,
) -> dict:
    """Emit the quasi-energy table, band report, and closed-form residuals."""
    coin = CoinBias(parse_angle(theta))
    if q == 0 and p == 1:
        profile: Zero | Harmonic = Zero()
    else:
        if math.gcd(abs(q), p) != 1:
            raise ValueError(f"q={q} and p={p} violate the co-primality invariant gcd(|q|, p) = 1")
        profile = Harmonic(q, p)
    if n_sites % p != 0:
        raise ValueError(f"phase period p={p} must divide n_sites={n_sites}")
    params = WalkParams(coin, profile, Ring(n_sites))
    outdir = Path(output)
    outdir.mkdir(parents=True, exist_ok=True)

    spectrum = quasi_energies(params)
    expected_bands = 2 if q == 0 else p
    report = band_analysis(spectrum, expected_bands)
    ids = _band_ids(spectrum.energies(), report)

    files: list[str] = []
    table_name = f"spectrum.{'csv' if fmt == 'csv' else 'json'}"
    table_path = outdir / table_name
    if fmt == "csv":
        lines = ["ell,quasi_energy,band"]
        lines += [
            f"{entry.ell},{_fmt(entry.quasi_energy)},{band}"
            for entry, band in zip(spectrum.entries, ids)
        ]
        _atomic_write(table_path, "\n".join(lines) + "\n")
    else:
        _write_json(
            table_path,
            {
                "rows": [
                    {"ell": entry.ell, "quasi_energy": entry.quasi_energy, "band": band}
                    for entry, band in zip(spectrum.entries, ids)
                ]
            },
        )
    files.append(table_name)

    if p % 2 == 0 and not isinstance(profile, Zero):
        closed_form: dict = {"available": True, "residuals": closed_form_comparison(params)}
        best = min(closed_form["residuals"], key=lambda k: closed_form["residuals"][k]["energy_residual"])
        closed_form["best_branch"] = best
    else:
        reason = "p odd" if p % 2 == 1 else "standard walk (q=0)"
        closed_form = {"available": False, "reason": f"unavailable: {reason}"}

    bands_payload = {
        "params": {"theta": theta, "q": q, "p": p, "n_sites": n_sites},
        "band_report": {
            "n_bands": report.n_bands,
            "flagged": report.flagged,
            "max_degeneracy": report.max_degeneracy,
            "bands": [
                {
                    "min_energy": b.min_energy,
                    "max_energy": b.max_energy,
                    "width": b.width,
                    "member_count": b.member_count,
                    "distinct_count": b.distinct_count,
                }
                for b in report.bands
            ],
        },
        "closed_form": closed_form,
    }
    _write_json(outdir / "bands.json", bands_payload)
    files.append("bands.json")

    if figures:
        from . import plotting

        plotting.save_spectrum_scatter(
            spectrum, report, ids, outdir / "spectrum.png", f"theta={theta}, q/p={q}/{p}, N={n_sites}"
        )
        files.append("spectrum.png")

    bands_payload["files"] = files
    return bands_payload


def _reproduce_fig2(outdir: Path, figures: bool) -> dict:
    runs = []
    series_plot = []
    heat_dists = None
    for tag, theta in FIG2_THETAS:
        config = RunConfig(steps=10, theta=theta, q=1, p=4)
        params, state = config.validate()
        dists = pure_distributions(state, params, 10)
        var, rec, tau, _ = _analyze(dists, True)
        dist_name = f"fig2_theta_{tag}_distributions.csv"
        _write_distributions(outdir / dist_name, dists, "csv")
        runs.append(
            {
                "label": f"theta={theta}",
                "config": config.to_dict(),
                "series": {"variance": var, "recurrence": rec},
                "analysis": {"tau": tau},
                "files": [dist_name],
            }
        )
        series_plot.append((f"theta={theta}", var, rec))
        if tag == "pi3":
            heat_dists = dists
    files = [r["files"][0] for r in runs]
    if figures:
        from . import plotting

        plotting.save_series(
            [(lab, TimeSeries(np.array(v), "variance")) for lab, v, _ in series_plot],
            outdir / "fig2_variance.png",
            "position variance",
            "quasi-periodic walk, q/p=1/4",
        )
        plotting.save_series(
            [(lab, TimeSeries(np.array(r), "recurrence")) for lab, _, r in series_plot],
            outdir / "fig2_recurrence.png",
            "recurrence probability",
            "quasi-periodic walk, q/p=1/4",
        )
        plotting.save_distribution_heatmap(
            heat_dists, outdir / "fig2_distributions_pi3.png", "theta=pi/3, q/p=1/4"
        )
        files += ["fig2_variance.png", "fig2_recurrence.png", "fig2_distributions_pi3.png"]
    return {"scenario": "fig2", "runs": runs, "files": files}


def _reproduce_fig3(outdir: Path, figures: bool) -> dict:
    runs = []
    t4_bars = []
    var_plot = []
    for theta in FIG3_THETA_GRID:
        config = RunConfig(steps=10, theta=theta, q=1, p=4)
        params, state = config.validate()
        dists = pure_distributions(state, params, 10)
        var, rec, tau, _ = _analyze(dists, True)
        tag = theta.replace("*", "").replace("/", "")
        dist_name = f"fig3_theta_{tag}_t4_distribution.csv"
        _write_distributions(outdir / dist_name, [dists[4]], "csv")
        runs.append(
            {
                "label": f"theta={theta}",
                "config": config.to_dict(),
                "series": {"variance": var, "recurrence": rec},
                "analysis": {"tau": tau, "p4_origin": rec[4]},
                "files": [dist_name],
            }
        )
        t4_bars.append((f"theta={theta}", dists[4]))
        var_plot.append((f"theta={theta}", var))
    baseline_config = RunConfig(steps=10, theta=FIG3_BASELINE_THETA, q=0, p=1)
    params, state = baseline_config.validate()
    base_dists = pure_distributions(state, params, 10)
    base_var, base_rec, _, _ = _analyze(base_dists, True)
    base_name = "fig3_standard_baseline_distributions.csv"
    _write_distributions(outdir / base_name, base_dists, "csv")
    runs.append(
        {
            "label": f"standard walk, theta={FIG3_BASELINE_THETA}",
            "config": baseline_config.to_dict(),
            "series": {"variance": base_var, "recurrence": base_rec},
            "analysis": {},
            "files": [base_name],
        }
    )
    var_plot.append(("standard walk", base_var))
    files = [r["files"][0] for r in runs]
    if figures:
        from . import plotting

        plotting.save_series(
            [(lab, TimeSeries(np.array(v), "variance")) for lab, v in var_plot],
            outdir / "fig3_variance.png",
            "position variance",
            "coin-bias sweep, q/p=1/4",
        )
        plotting.save_distribution_bars(
            t4_bars,
            outdir / "fig3_t4_distributions.png",
            "distributions at the first quasi-period (t=4)",
        )
        files += ["fig3_variance.png", "fig3_t4_distributions.png"]
    return {"scenario": "fig3", "runs": runs, "files": files}


def _reproduce_fig4(outdir: Path, figures: bool) -> dict:
    coherent = RunConfig(steps=4, theta="pi/4", q=1, p=4)
    params, state = coherent.validate()
    coh_dists = pure_distributions(state, params, 4)
    coh_var, coh_rec, _, _ = _analyze(coh_dists, True)
    decohered = RunConfig(steps=4, theta="pi/4", q=1, p=4, backend="density", gamma=1.0)
    params_d, state_d = decohered.validate()
    dec_dists = [
        distribution_of(r)
        for r in evolve_density(DensityState.from_pure(state_d), params_d, 1.0, 4)
    ]
    dec_var, dec_rec, _, _ = _analyze(dec_dists, True)
    norm_coh = normalized_variance(TimeSeries(np.array(coh_var), "coherent")).values.tolist()
    norm_dec = normalized_variance(TimeSeries(np.array(dec_var), "decohered")).values.tolist()

    coh_name = "fig4_coherent_distributions.csv"
    dec_name = "fig4_decohered_distributions.csv"
    _write_distributions(outdir / coh_name, coh_dists, "csv")
    _write_distributions(outdir / dec_name, dec_dists, "csv")
    runs = [
        {
            "label": "coherent",
            "config": coherent.to_dict(),
            "series": {"variance": coh_var, "recurrence": coh_rec, "normalized_variance": norm_coh},
            "analysis": {},
            "files": [coh_name],
        },
        {
            "label": "decohered (gamma=1)",
            "config": decohered.to_dict(),
            "series": {"variance": dec_var, "recurrence": dec_rec, "normalized_variance": norm_dec},
            "analysis": {},
            "files": [dec_name],
        },
    ]
    files = [coh_name, dec_name]
    if figures:
        from . import plotting

        plotting.save_distribution_bars(
            [("coherent", coh_dists[4]), ("decohered", dec_dists[4])],
            outdir / "fig4_t4_distributions.png",
            "t=4, theta=pi/4, q/p=1/4",
        )
        plotting.save_series(
            [
                ("coherent", TimeSeries(np.array(norm_coh))),
                ("decohered", TimeSeries(np.array(norm_dec))),
            ],
            outdir / "fig4_normalized_variance.png",
            "normalized variance",
            "quasi-periodic vs fully decohered",
        )
        files += ["fig4_t4_distributions.png", "fig4_normalized_variance.png"]
    return {"scenario": "fig4", "runs": runs, "files": files}


def cmd_reproduce(scenario: str, output: str = "out", figures: bool = True) -> dict:
    """Preset runs that regenerate the study's headline data sets."""
    if scenario not in ("fig2", "fig3", "fig4"):
        raise ValueError(f"scenario must be fig2|fig3|fig4, got {scenario!r}")
    outdir = Path(output)
    outdir.mkdir(parents=True, exist_ok=True)
    builder = {"fig2": _reproduce_fig2, "fig3": _reproduce_fig3, "fig4": _reproduce_fig4}[scenario]
    payload = builder(outdir, figures)
    _write_json(outdir / f"{scenario}_summary.json", payload)
    payload["files"].append(f"{scenario}_summary.json")
    return payload


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasewalk",
        description="Coined quantum walks with site-dependent phases: "
        "simulation, spectra, and report presets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evolve", help="run one walk and write distributions + summary")
    ev.add_argument("--config", type=str, help="JSON file with RunConfig fields (flags override)")
    ev.add_argument("--steps", type=int)
    ev.add_argument("--theta", type=str, help="coin bias: decimal radians or 'a*pi/b'")
    ev.add_argument("--q", type=int)
    ev.add_argument("--p", type=int)
    ev.add_argument("--topology", choices=["line", "ring"])
    ev.add_argument("--n-sites", type=int, dest="n_sites")
    ev.add_argument("--gamma", type=float, help="position-dephasing strength (density backend)")
    ev.add_argument("--eta", type=float, help="phase-noise amplitude (trajectory backend)")
    ev.add_argument("--backend", choices=["pure", "density", "trajectories"])
    ev.add_argument("--n-traj", type=int, dest="n_traj")
    ev.add_argument("--seed", type=int)
    ev.add_argument("--initial", choices=["symmetric", "custom"])
    ev.add_argument("--amp0", type=str, help="coin-0 amplitude for custom initial, e.g. '0.6'")
    ev.add_argument("--amp1", type=str, help="coin-1 amplitude for custom initial, e.g. '0.8j'")
    ev.add_argument("--site", type=int, help="start site for custom initial")
    ev.add_argument("--output", type=str)
    ev.add_argument("--format", choices=["csv", "json"])
    ev.add_argument("--no-figures", action="store_true")

    sp = sub.add_parser("spectrum", help="quasi-energy spectrum and band report on a ring")
    sp.add_argument("--theta", type=str, default="pi/3")
    sp.add_argument("--q", type=int, default=1)
    sp.add_argument("--p", type=int, default=4)
    sp.add_argument("--n-sites", type=int, dest="n_sites", default=16)
    sp.add_argument("--output", type=str, default="out")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--no-figures", action="store_true")

    rp = sub.add_parser("reproduce", help="preset scenario runs emitting data files and figures")
    rp.add_argument("scenario", choices=["fig2", "fig3", "fig4"])
    rp.add_argument("--output", type=str, default="out")
    rp.add_argument("--seed", type=int, default=0)
    rp.add_argument("--no-figures", action="store_true")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        path = Path(args.config)
        try:
            loaded = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ValueError(f"config file not found: {path}") from None
        except json.JSONDecodeError as err:
            raise ValueError(f"config file is not valid JSON: {err}") from None
        if not isinstance(loaded, dict):
            raise ValueError("config file must hold a JSON object of RunConfig fields")
        data.update(loaded)
    for name in RunConfig.FIELD_NAMES:
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    return RunConfig.from_dict(data)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "evolve":
            config = _config_from_args(args)
            config.validate()
        elif args.command == "spectrum":
            parse_angle(args.theta)
            if args.p < 1 or args.n_sites % args.p != 0:
                raise ValueError(f"phase period p={args.p} must divide n_sites={args.n_sites}")
            if not (args.q == 0 and args.p == 1) and math.gcd(abs(args.q), args.p) != 1:
                raise ValueError(
                    f"q={args.q} and p={args.p} violate the co-primality invariant gcd(|q|, p) = 1"
                )
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    try:
        started = time.perf_counter()
        if args.command == "evolve":
            summary = cmd_evolve(config, figures=not args.no_figures)
            outdir, names, elapsed = config.output, summary.files, summary.wall_time
        elif args.command == "spectrum":
            payload = cmd_spectrum(
                args.theta,
                args.q,
                args.p,
                args.n_sites,
                output=args.output,
                fmt=args.format,
                figures=not args.no_figures,
            )
            outdir, names, elapsed = args.output, payload["files"], time.perf_counter() - started
        else:
            payload = cmd_reproduce(args.scenario, output=args.output, figures=not args.no_figures)
            outdir, names, elapsed = args.output, payload["files"], time.perf_counter() - started
        print(f"wrote {len(names)} files to {outdir} in {elapsed:.2f}s:")
        for name in names:
            print(f"  {Path(outdir) / name}")
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return 1
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
