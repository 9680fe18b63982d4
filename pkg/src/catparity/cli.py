"""Command-line front end: figure datasets, rate tables, and sweeps.

Each subcommand produces one CSV (or JSON) dataset plus a JSON metadata
sidecar capturing the fully resolved configuration, so a run can be
reproduced bit for bit.  Frequencies are taken in Hz on the command line
and converted to angular units once, here.

Exit codes: 0 on success, 2 for configuration or validation problems, 3 for
numerical failures.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import CatParityError
from .fock import FockSpace, cat_basis, husimi_q, safe_dim
from .measurement import (
    DISPERSIVE_GUARD,
    ReadoutParams,
    dephasing_ratios_two_mode,
    dispersive_rates_joint,
    dispersive_rates_single,
)
from .results import SweepResult
from .rwa import (
    DEFAULT_RESONANCE_FLOOR,
    JunctionParams,
    ModeFrequencies,
    angular,
    h_rwa_single,
    resonance_scan,
)
from .zeno import (
    TwoPhotonSteadySpace,
    c_pm_closed_form,
    four_photon_diagnostics,
    omega_a,
    project,
    projected_spectrum_q,
    psi_r_state,
)

WORKERS_ENV = "CATPARITY_WORKERS"


@dataclass
class RunConfig:
    """Resolved command, typed parameters, and output destination."""

    command: str
    parameters: dict = field(default_factory=dict)
    output: str = "dataset.csv"
    fmt: str = "csv"


def parse_grid(text: str, field_name: str) -> np.ndarray:
    """Parse 'start:stop:step' into an inclusive monotone grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"{field_name}: expected start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"{field_name}: non-numeric grid {text!r}") from exc
    if step <= 0:
        raise ValueError(f"{field_name}: step must be > 0, got {step}")
    if stop < start:
        raise ValueError(f"{field_name}: stop {stop} below start {start}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def validate(config: RunConfig) -> list[str]:
    """All guard violations for this config, reported together."""
    p = config.parameters
    diags = []
    for key in ("alpha", "e_j", "kappa", "phi_a", "phi1"):
        if key in p and p[key] is not None and p[key] <= 0:
            diags.append(f"{key} must be > 0, got {p[key]}")
    if "phi_c" in p and "n_c" in p:
        if p["phi_c"] ** 2 * p["n_c"] > DISPERSIVE_GUARD:
            diags.append(
                f"dispersive guard violated: phi_c^2*n_c = "
                f"{p['phi_c'] ** 2 * p['n_c']:.3g} > {DISPERSIVE_GUARD}"
            )
    if "dim" in p and p["dim"] is not None and "alpha" in p:
        needed = safe_dim(p["alpha"])
        if p["dim"] < needed:
            diags.append(
                f"truncation {p['dim']} below the guard {needed} for alpha = {p['alpha']}"
            )
    for key in ("phi_grid", "alpha_grid", "grid2", "grid3"):
        if key in p and isinstance(p[key], str):
            try:
                p[key] = parse_grid(p[key], key)
            except ValueError as exc:
                diags.append(str(exc))
    if "omega_a_hz" in p and p.get("omega_a_hz") and p.get("omega_b_hz"):
        freqs = ModeFrequencies(angular(p["omega_a_hz"]), angular(p["omega_b_hz"]))
        hits = resonance_scan(freqs, l_max=p.get("l_max", 12), floor=DEFAULT_RESONANCE_FLOOR)
        for l_a, l_b, gap in hits:
            diags.append(
                f"near-resonance at (l_a={l_a}, l_b={l_b}): gap {gap:.4g} rad/s"
            )
    if "epsilons" in p and not p["epsilons"]:
        diags.append("need at least one epsilon_zeno value")
    return diags


def _metadata(config: RunConfig, extra: dict | None = None) -> dict:
    import scipy

    meta = {
        "command": config.command,
        "parameters": {
            k: (v.tolist() if isinstance(v, np.ndarray) else v)
            for k, v in config.parameters.items()
        },
        "output_format": config.fmt,
        "catparity_version": __version__,
        "numpy_version": np.__version__,
        "scipy_version": scipy.__version__,
    }
    if extra:
        meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# command implementations


def _cmd_fig1a(config: RunConfig) -> SweepResult:
    p = config.parameters
    dim = p["dim"] or 40
    space = FockSpace((dim,))
    h = h_rwa_single(JunctionParams(e_j=1.0, phi_a=p["phi_a"]), space)
    rows = [(n, float(h.diag[n].real)) for n in range(dim)]
    return SweepResult(["n", "energy_over_ej"], rows, _metadata(config))


def _cmd_fig1b(config: RunConfig) -> SweepResult:
    p = config.parameters
    alpha = p["alpha"]
    dim = p["dim"] or safe_dim(alpha)
    space = FockSpace((dim,))
    basis = cat_basis(space, alpha, 2)
    rows = []
    for phi in p["phi_grid"]:
        h = h_rwa_single(JunctionParams(e_j=1.0, phi_a=float(phi)), space)
        c = project(h, basis).diagonal()
        rows.append((float(phi), float(c[0]), float(c[1])))
    return SweepResult(
        ["phi_a", "c_plus_over_ej", "c_minus_over_ej"], rows, _metadata(config, {"dim": dim})
    )


def _spectrum_rows(alpha: float, q: int, phi_grid: np.ndarray, dim: int | None):
    space = FockSpace((dim or safe_dim(alpha),))
    rows = []
    for phi in phi_grid:
        c = projected_spectrum_q(1.0, float(phi), alpha, q, method="numeric", space=space)
        rows.append((float(phi), *(float(x) for x in c)))
    return rows, space.dim


def _cmd_fig1c(config: RunConfig) -> SweepResult:
    p = config.parameters
    rows, dim = _spectrum_rows(p["alpha"], 4, p["phi_grid"], p["dim"])
    cols = ["phi_a"] + [f"c{k}{k}_over_ej" for k in range(4)]
    return SweepResult(cols, rows, _metadata(config, {"dim": dim}))


def _cmd_fig1d(config: RunConfig) -> SweepResult:
    p = config.parameters
    rows = []
    for alpha in p["alpha_grid"]:
        alpha = float(alpha)
        phi = 2.0 * alpha if p["phi_rule"] == "2alpha" else float(p["phi_rule"]) * alpha
        d = four_photon_diagnostics(1.0, phi, alpha)
        rows.append(
            (alpha, phi, d.delta_parity, d.small_delta_parity,
             d.small_delta_parity / d.delta_parity)
        )
    cols = ["alpha", "phi_a", "delta_parity", "small_delta_parity", "ratio"]
    return SweepResult(cols, rows, _metadata(config))


def _fig3_point(args) -> tuple:
    from .lindblad import zeno_dephasing_rate

    phi_a, alpha, epsilons, phi_c, n_c, dim = args
    readout = ReadoutParams(phi_c=phi_c, n_c=n_c)
    out = []
    for eps in epsilons:
        gamma_m = dispersive_rates_single(eps, phi_a, alpha, readout).gamma_m
        gamma_z, _fit = zeno_dephasing_rate(alpha, phi_a, eps, kappa=1.0, dim=dim)
        out.append((gamma_m, gamma_z, gamma_m / (gamma_m + gamma_z)))
    return phi_a, out


def _cmd_fig3(config: RunConfig) -> SweepResult:
    p = config.parameters
    alpha, epsilons = p["alpha"], p["epsilons"]
    readout = ReadoutParams(phi_c=p["phi_c"], n_c=p["n_c"])
    readout.check_dispersive()
    tasks = [
        (float(phi), alpha, epsilons, p["phi_c"], p["n_c"], p["dim"])
        for phi in p["phi_grid"]
    ]
    workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_fig3_point, tasks))
    else:
        results = [_fig3_point(t) for t in tasks]
    rows = []
    for phi_a, per_eps in results:
        row = [phi_a, per_eps[0][0] / epsilons[0]]  # gamma_m / (E_J/hbar)
        for gamma_m, gamma_z, eta in per_eps:
            row.extend([gamma_z, eta])
        rows.append(tuple(row))
    cols = ["phi_a", "gamma_m_over_ej"]
    for eps in epsilons:
        cols.extend([f"gamma_z_eps_{eps:g}", f"eta_eps_{eps:g}"])
    meta = _metadata(config, {"workers": workers, "kappa": 1.0})
    return SweepResult(cols, rows, meta)


def _cmd_figs1(config: RunConfig) -> SweepResult:
    from .zeno import gamma_ind

    p = config.parameters
    rows = []
    for alpha in p["alpha_grid"]:
        alpha = float(alpha)
        phi = 2.0 * alpha
        g = gamma_ind(p["epsilon"], phi, alpha, 1.0)
        rows.append((alpha, phi, g))
    cols = ["alpha", "phi_a", "gamma_ind_over_kappa"]
    return SweepResult(cols, rows, _metadata(config, {"epsilon_zeno": p["epsilon"]}))


def _cmd_figs2(config: RunConfig) -> SweepResult:
    p = config.parameters
    rows = []
    for alpha in p["alphas"]:
        alpha = float(alpha)
        space = FockSpace((safe_dim(alpha),))
        psi = psi_r_state(1.0, 2.0 * alpha, alpha, 1.0, space)
        steady = TwoPhotonSteadySpace(space, alpha)
        projected = steady.project_state(psi.to_density().matrix)
        half = 1.5 * alpha
        n = p["grid_n"]
        axis = np.linspace(-half, half, n)
        gam = axis[:, None] + 1j * axis[None, :]
        q_jump = husimi_q(psi, gam)
        from .fock import DensityMatrix

        q_proj = husimi_q(DensityMatrix(space, projected), gam)
        for i in range(n):
            for j in range(n):
                rows.append(
                    (alpha, float(gam[i, j].real), float(gam[i, j].imag),
                     float(q_jump[i, j]), float(q_proj[i, j]))
                )
    cols = ["alpha", "gamma_re", "gamma_im", "q_jump_state", "q_projected_state"]
    return SweepResult(cols, rows, _metadata(config))


def _cmd_figs3(config: RunConfig) -> SweepResult:
    from .design import feasibility_scan

    p = config.parameters
    res = feasibility_scan(p["alpha"], p["phi1"], p["grid2"], p["grid3"])
    res.metadata.update(_metadata(config))
    return res


def _cmd_figs4(config: RunConfig) -> SweepResult:
    p = config.parameters
    q = p["q"]
    rows, dim = _spectrum_rows(p["alpha"], q, p["phi_grid"], p["dim"])
    cols = ["phi_a"] + [f"c{k}{k}_over_ej" for k in range(q)]
    return SweepResult(cols, rows, _metadata(config, {"dim": dim}))


def _cmd_rates(config: RunConfig) -> SweepResult:
    p = config.parameters
    e_j = angular(p["e_j_hz"])
    readout = ReadoutParams(phi_c=p["phi_c"], n_c=p["n_c"])
    single = dispersive_rates_single(e_j, p["phi_a"], p["alpha"], readout)
    cols = [
        "e_j_rad_s", "alpha", "phi_a", "omega_a_rad_s",
        "omega_tilde_rad_s", "chi_rad_s", "gamma_m_rad_s",
    ]
    row = [
        e_j, p["alpha"], p["phi_a"], omega_a(e_j, p["phi_a"], p["alpha"]),
        single.omega_tilde, single.chi, single.gamma_m,
    ]
    extra = {}
    if p.get("beta") and p.get("phi_b"):
        joint = dispersive_rates_joint(
            e_j, p["phi_a"], p["phi_b"], p["alpha"], p["beta"], readout
        )
        cols += ["beta", "phi_b", "gamma_m_joint_rad_s"]
        row += [p["beta"], p["phi_b"], joint.gamma_m]
        if p.get("omega_a_hz") and p.get("omega_b_hz"):
            freqs = ModeFrequencies(angular(p["omega_a_hz"]), angular(p["omega_b_hz"]))
            ratios = dephasing_ratios_two_mode(
                e_j, p["phi_a"], p["phi_b"], p["alpha"], p["beta"], freqs,
                l_max=p.get("l_max", 12),
            )
            cols += ["gamma_phi_plus_over_m", "gamma_phi_minus_over_m"]
            row += [ratios.plus_over_m, ratios.minus_over_m]
            extra["gamma_m_matrix_element_rad_s"] = ratios.gamma_m
            extra["two_omega_ab_rad_s"] = ratios.two_omega_ab
    return SweepResult(cols, [tuple(row)], _metadata(config, extra))


def _cmd_sweep(config: RunConfig) -> SweepResult:
    p = config.parameters
    rows = []
    for alpha in p["alpha_grid"]:
        for phi in p["phi_grid"]:
            alpha_f, phi_f = float(alpha), float(phi)
            cp, cm = c_pm_closed_form(1.0, phi_f, alpha_f)
            rows.append(
                (alpha_f, phi_f, cp, cm, omega_a(1.0, phi_f, alpha_f))
            )
    cols = ["alpha", "phi_a", "c_plus_over_ej", "c_minus_over_ej", "omega_a_over_ej"]
    return SweepResult(cols, rows, _metadata(config))


_COMMANDS = {
    "fig1a": _cmd_fig1a,
    "fig1b": _cmd_fig1b,
    "fig1c": _cmd_fig1c,
    "fig1d": _cmd_fig1d,
    "fig3": _cmd_fig3,
    "figS1": _cmd_figs1,
    "figS2": _cmd_figs2,
    "figS3": _cmd_figs3,
    "figS4": _cmd_figs4,
    "rates": _cmd_rates,
    "sweep": _cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="catparity",
        description=(
            "Datasets for continuous parity-type measurements of dissipatively "
            "stabilized cat qubits.  Energies are entered in Hz and converted to "
            "angular frequencies internally; dimensionless figures use E_J = 1."
        ),
        epilog=(
            f"Set {WORKERS_ENV}=N to spread sweep points over N processes; "
            "results are ordered deterministically either way.  Every run "
            "writes a .meta.json sidecar with the resolved configuration."
        ),
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--output", default=None, help="output path (default <command>.csv)")
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--dim", type=int, default=None, help="Fock truncation override")

    sp = sub.add_parser("fig1a", help="Fock-level energies of the single-mode Hamiltonian")
    sp.add_argument("--phi-a", type=float, default=4.0)
    add_common(sp)

    sp = sub.add_parser("fig1b", help="two-component cat matrix elements vs phi_a")
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--phi-grid", default="0.1:8:0.05")
    add_common(sp)

    sp = sub.add_parser("fig1c", help="four-component cat matrix elements vs phi_a")
    sp.add_argument("--alpha", type=float, default=5.0)
    sp.add_argument("--phi-grid", default="0.5:14:0.05")
    add_common(sp)

    sp = sub.add_parser("fig1d", help="parity splitting and non-degeneracy vs alpha")
    sp.add_argument("--alpha-grid", default="2:6:0.25")
    sp.add_argument("--phi-rule", default="2alpha", help="'2alpha' or a multiplier")
    add_common(sp)

    sp = sub.add_parser("fig3", help="measurement rate and efficiency vs phi_a")
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--phi-grid", default="2.5:5.5:0.25")
    sp.add_argument("--epsilons", default="0.1,0.2,0.5",
                    help="comma-separated epsilon_zeno values")
    sp.add_argument("--phi-c", type=float, default=0.1)
    sp.add_argument("--n-c", type=float, default=1.0)
    add_common(sp)

    sp = sub.add_parser("figS1", help="induced dephasing rate vs alpha")
    sp.add_argument("--alpha-grid", default="2:4:0.5")
    sp.add_argument("--epsilon", type=float, default=1.0)
    add_common(sp)

    sp = sub.add_parser("figS2", help="Husimi functions of the jump and projected states")
    sp.add_argument("--alphas", default="2,3,4")
    sp.add_argument("--grid-n", type=int, default=101)
    add_common(sp)

    sp = sub.add_parser("figS3", help="three-junction feasibility scan")
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--phi1", type=float, default=4.0)
    sp.add_argument("--grid2", default="1:5:0.1")
    sp.add_argument("--grid3", default="1:5:0.1")
    add_common(sp)

    sp = sub.add_parser("figS4", help="q-component spectra vs phi_a")
    sp.add_argument("--alpha", type=float, default=5.0)
    sp.add_argument("--q", type=int, default=4)
    sp.add_argument("--phi-grid", default="0.5:16:0.05")
    add_common(sp)

    sp = sub.add_parser("rates", help="dispersive rates for one parameter point")
    sp.add_argument("--e-j-hz", type=float, default=300e6)
    sp.add_argument("--alpha", type=float, default=2.0)
    sp.add_argument("--phi-a", type=float, default=4.0)
    sp.add_argument("--beta", type=float, default=None)
    sp.add_argument("--phi-b", type=float, default=None)
    sp.add_argument("--phi-c", type=float, default=0.1)
    sp.add_argument("--n-c", type=float, default=1.0)
    sp.add_argument("--omega-a-hz", type=float, default=None)
    sp.add_argument("--omega-b-hz", type=float, default=None)
    sp.add_argument("--l-max", type=int, default=12)
    add_common(sp)

    sp = sub.add_parser("sweep", help="closed-form matrix elements over a 2D grid")
    sp.add_argument("--alpha-grid", default="1:4:0.5")
    sp.add_argument("--phi-grid", default="0.5:8:0.25")
    add_common(sp)

    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in ("command", "output", "format")
    }
    if "epsilons" in params and isinstance(params["epsilons"], str):
        params["epsilons"] = [float(x) for x in params["epsilons"].split(",") if x]
    if "alphas" in params and isinstance(params["alphas"], str):
        params["alphas"] = [float(x) for x in params["alphas"].split(",") if x]
    output = args.output or f"{args.command}.{args.format}"
    return RunConfig(args.command, params, output, args.format)


def run(config: RunConfig) -> int:
    """Validate, execute, and serialize one command; returns the exit code."""
    diags = validate(config)
    if diags:
        for d in diags:
            print(f"error: {d}", file=sys.stderr)
        return 2
    try:
        result = _COMMANDS[config.command](config)
    except KeyError:
        print(f"error: unknown command {config.command!r}", file=sys.stderr)
        return 2
    except CatParityError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except np.linalg.LinAlgError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    if config.fmt == "csv":
        path = result.to_csv(config.output)
    else:
        path = result.to_json(config.output)
    print(f"wrote {path} ({len(result.rows)} rows) and {path}.meta.json")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
