"""Command-line front end: deterministic CSV datasets plus a JSON run report.

Every command reads one configuration file (config.py format), writes its
dataset into --out and drops a machine-readable <command>_report.json next
to it. Numbers are printed in scientific notation with 9 significant digits
so outputs are byte-stable across runs and worker counts. Exit codes:
0 success, 2 configuration error, 3 numeric non-convergence (outputs are
still written from the partial sums), 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from .cavity import (
    GivenEmptyDetuning,
    mean_intensity,
    nonlinear_phase,
    solve_operating_point,
)
from .config import ConfigError, SimulationConfig, load_config
from .overlap import OpticalMode, overlap_analytic
from .resonator import ModeIndex
from .response import (
    EffectiveResponse,
    PlanoConvexCatalog,
    SumInfo,
    TruncationNotConverged,
    effective_mass,
    optical_mass,
)
from .spectra import reference_response, squeeze_scan

__all__ = ["main"]

_VARIANTS = ("full", "kerr", "single_oscillator")


def _fmt(x: float) -> str:
    # +0.0 folds -0.0 onto 0.0 so equal values print identically.
    return f"{x + 0.0:.8e}"


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _write_csv(path: str, header: list[str], rows: list[list[str]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    _write_text(path, "\n".join(lines) + "\n")


def _truncation_block(info: SumInfo | None):
    if info is None:
        return None
    return {
        "modes_summed": info.modes_summed,
        "families": info.families,
        "deepest_p": info.deepest_p,
        "grid_equivalent_modes": info.grid_equivalent_modes,
        "error_bound": _fmt(info.error_bound),
        "converged": info.converged,
    }


def _write_report(
    out_dir: str,
    command: str,
    cfg: SimulationConfig,
    outputs: list[str],
    started: float,
    info: SumInfo | None = None,
    warning: str | None = None,
    extra: dict | None = None,
) -> str:
    report = {
        "command": command,
        "resolved_config": dict(cfg.resolved_items()),
        # Mode shapes and frequencies assume h0 << R; record the ratio so every
        # run carries its own paraxial-validity check.
        "aspect_ratio_h0_over_r_curv": _fmt(cfg.h0 / cfg.r_curv),
        "truncation": _truncation_block(info),
        "wall_clock_s": round(time.perf_counter() - started, 3),
        "outputs": [os.path.basename(p) for p in outputs],
    }
    if warning is not None:
        report["warning"] = warning
    if extra:
        report.update(extra)
    path = os.path.join(out_dir, f"{command}_report.json")
    _write_text(path, json.dumps(report, indent=2) + "\n")
    return path


def _setup(cfg: SimulationConfig):
    catalog = PlanoConvexCatalog(cfg.to_geometry(), cfg.to_material())
    opt = cfg.to_optics()
    return catalog, opt


def _response(cfg: SimulationConfig, catalog, opt) -> EffectiveResponse:
    return EffectiveResponse(
        catalog, opt, loss=cfg.to_loss(catalog.omega_m), policy=cfg.to_policy()
    )


def cmd_modes(cfg: SimulationConfig, args) -> int:
    if args.n_limit < 1 or args.p_limit < 1:
        raise ConfigError("--n-limit and --p-limit must be >= 1")
    catalog, opt = _setup(cfg)
    started = time.perf_counter()
    rows = []
    plot_data = []
    for n in range(1, args.n_limit + 1):
        for p in range(args.p_limit):
            mode = catalog.mode(n, p)
            ov = overlap_analytic(opt, catalog.geometry, ModeIndex(n, p))
            rows.append(
                [
                    str(n),
                    str(p),
                    _fmt(mode.omega),
                    _fmt(mode.omega / (2.0 * math.pi)),
                    _fmt(mode.waist),
                    _fmt(mode.mass),
                    _fmt(ov),
                ]
            )
            plot_data.append((n, p, mode.omega / (2.0 * math.pi), ov))
    csv_path = os.path.join(args.out, "modes.csv")
    _write_csv(
        csv_path,
        ["n", "p", "omega_np_rad_s", "f_np_hz", "w_n_m", "m_n_kg", "overlap"],
        rows,
    )
    outputs = [csv_path]
    if args.plot:
        from . import plots

        png = os.path.join(args.out, "modes.png")
        ns, ps, fs, ovs = zip(*plot_data)
        plots.save_modes_plot(png, ns, ps, fs, ovs)
        outputs.append(png)
    outputs.append(_write_report(args.out, "modes", cfg, outputs, started))
    print(f"wrote {csv_path} ({len(rows)} rows)")
    return 0


def cmd_susceptibility(cfg: SimulationConfig, args) -> int:
    catalog, opt = _setup(cfg)
    started = time.perf_counter()
    resp = _response(cfg, catalog, opt)
    grid = cfg.freq_grid.build(catalog.omega_m)
    warning = None
    info: SumInfo | None
    try:
        chi = resp.chi_grid(grid, workers=args.workers)
        info = resp.grid_info()
    except TruncationNotConverged as exc:
        chi = np.asarray(exc.value)
        info = exc.info
        warning = str(exc)
    chit = chi / resp.chi0
    rows = [
        [
            _fmt(w),
            _fmt(c.real),
            _fmt(c.imag),
            _fmt(t.real),
            _fmt(t.imag),
            _fmt(w / catalog.omega_m),
        ]
        for w, c, t in zip(grid, chi, chit)
    ]
    csv_path = os.path.join(args.out, "susceptibility.csv")
    _write_csv(
        csv_path,
        [
            "omega_rad_s",
            "re_chi_eff_m_n",
            "im_chi_eff_m_n",
            "re_chi_tilde",
            "im_chi_tilde",
            "omega_over_omega_m",
        ],
        rows,
    )
    outputs = [csv_path]
    if args.plot:
        from . import plots

        png = os.path.join(args.out, "susceptibility.png")
        plots.save_susceptibility_plot(png, grid / catalog.omega_m, chi, resp.chi0)
        outputs.append(png)
    outputs.append(
        _write_report(
            args.out,
            "susceptibility",
            cfg,
            outputs,
            started,
            info=info,
            warning=warning,
            extra={"chi_eff0_m_n": _fmt(resp.chi0)},
        )
    )
    print(f"wrote {csv_path} ({len(rows)} rows)")
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
        return 3
    return 0


def cmd_mass_scan(cfg: SimulationConfig, args) -> int:
    if args.ratio_min < 1.0 or args.ratio_max < args.ratio_min:
        raise ConfigError("mass scan needs 1 <= --ratio-min <= --ratio-max")
    if args.ratio_points < 1:
        raise ConfigError("--ratio-points must be >= 1")
    catalog, _ = _setup(cfg)
    started = time.perf_counter()
    policy = cfg.to_policy()
    ratios = np.geomspace(args.ratio_min, args.ratio_max, args.ratio_points)
    warning = None
    info: SumInfo | None = None
    rows = []
    plot_masses = []
    om2 = catalog.omega_m ** 2
    for ratio in ratios:
        waist = catalog.w1 / ratio
        opt_r = OpticalMode(wavelength=cfg.wavelength, waist=waist)
        try:
            report = effective_mass(catalog, opt_r, policy)
            m_eff, m_opt, point_info = report.m_eff, report.m_opt, report.info
        except TruncationNotConverged as exc:
            point_info = exc.info
            m_eff = 1.0 / (om2 * exc.value.real)
            m_opt = optical_mass(catalog.geometry, catalog.material, opt_r)
            if warning is None:
                warning = f"DC sum hit caps at ratio {ratio:g}: {exc}"
        if info is None or point_info.modes_summed > info.modes_summed:
            info = point_info
        rows.append(
            [
                _fmt(ratio),
                _fmt(waist),
                _fmt(m_eff),
                _fmt(m_opt),
                _fmt(m_eff / catalog.m1),
            ]
        )
        plot_masses.append((m_eff, m_opt))
    csv_path = os.path.join(args.out, "mass_scan.csv")
    _write_csv(
        csv_path,
        ["w1_over_w0", "w0_m", "m_eff_kg", "m_opt_kg", "m_eff_over_m1"],
        rows,
    )
    outputs = [csv_path]
    if args.plot:
        from . import plots

        png = os.path.join(args.out, "mass_scan.png")
        m_eff_col, m_opt_col = zip(*plot_masses)
        plots.save_mass_scan_plot(png, ratios, m_eff_col, m_opt_col, catalog.m1)
        outputs.append(png)
    outputs.append(
        _write_report(
            args.out,
            "mass_scan",
            cfg,
            outputs,
            started,
            info=info,
            warning=warning,
        )
    )
    print(f"wrote {csv_path} ({len(rows)} rows)")
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
        return 3
    return 0


def cmd_operating_point(cfg: SimulationConfig, args) -> int:
    catalog, opt = _setup(cfg)
    started = time.perf_counter()
    resp = _response(cfg, catalog, opt)
    cav = cfg.to_cavity(catalog.omega_m)
    points = solve_operating_point(
        cav, cfg.p_in, cfg.wavelength, cfg.anchor(), resp.chi0
    )
    gamma = cav.gamma
    lines = [f"branches = {len(points)}"]
    for idx, pt in enumerate(points):
        prefix = f"branch_{idx}"
        lines.append(f"{prefix}.i_bar = {_fmt(pt.intensity)}")
        lines.append(f"{prefix}.alpha = {_fmt(pt.alpha)}")
        lines.append(f"{prefix}.psi_bar_over_gamma = {_fmt(pt.psi_bar / gamma)}")
        lines.append(f"{prefix}.psi0_over_gamma = {_fmt(pt.psi0 / gamma)}")
        lines.append(f"{prefix}.psi_nl_over_gamma = {_fmt(pt.psi_nl / gamma)}")
        lines.append(f"{prefix}.sigma_norm = {_fmt(pt.sigma_norm)}")
        lines.append(f"{prefix}.stability = {pt.stability.value}")
    text = "\n".join(lines) + "\n"
    txt_path = os.path.join(args.out, "operating_point.txt")
    _write_text(txt_path, text)
    outputs = [txt_path]
    if args.plot:
        from . import plots

        # Resonance curve: sweep the dressed detuning, map back to psi_0.
        psi_bar = np.linspace(-6.0, 6.0, 1200) * gamma
        intensity = np.array(
            [mean_intensity(cav, pb, cfg.p_in, cfg.wavelength) for pb in psi_bar]
        )
        psi0_norm = (
            psi_bar
            - np.array(
                [nonlinear_phase(resp.chi0, ib, opt.wavevector) for ib in intensity]
            )
        ) / gamma
        png = os.path.join(args.out, "operating_point.png")
        plots.save_operating_point_plot(png, psi0_norm, intensity, points, gamma)
        outputs.append(png)
    outputs.append(
        _write_report(
            args.out,
            "operating_point",
            cfg,
            outputs,
            started,
            info=resp.dc_info,
            extra={"chi_eff0_m_n": _fmt(resp.chi0)},
        )
    )
    sys.stdout.write(text)
    return 0


def cmd_squeeze(cfg: SimulationConfig, args) -> int:
    catalog, opt = _setup(cfg)
    started = time.perf_counter()
    resp_full = _response(cfg, catalog, opt)
    loss = cfg.to_loss(catalog.omega_m)
    if args.variant == "full":
        resp = resp_full
    else:
        resp = reference_response(
            args.variant, resp_full.chi0, omega_m=catalog.omega_m, loss=loss
        )
    cav = cfg.to_cavity(catalog.omega_m)
    points = solve_operating_point(
        cav, cfg.p_in, cfg.wavelength, cfg.anchor(), resp_full.chi0
    )
    op = points[0]  # lowest-intensity branch when the anchor admits several
    grid = cfg.freq_grid.build(catalog.omega_m)
    warning = None
    try:
        scan = squeeze_scan(
            op,
            cav,
            resp,
            opt.wavevector,
            grid,
            cfg.temperature,
            thetas=np.array([0.0, 0.5 * math.pi]),
            workers=args.workers,
        )
    except TruncationNotConverged as exc:
        scan = exc.value
        warning = str(exc)
    rows = [
        [
            _fmt(w / catalog.omega_m),
            _fmt(scan.s_opt[i]),
            _fmt(scan.theta_opt[i]),
            _fmt(scan.s_theta[i, 0]),
            _fmt(scan.s_theta[i, 1]),
            _fmt(w),
        ]
        for i, w in enumerate(grid)
    ]
    csv_path = os.path.join(args.out, "squeeze.csv")
    _write_csv(
        csv_path,
        [
            "omega_over_omega_m",
            "s_opt",
            "theta_opt_rad",
            "s_theta0",
            "s_theta90",
            "omega_rad_s",
        ],
        rows,
    )
    outputs = [csv_path]
    if args.plot:
        from . import plots

        # Angle scan at the deepest-squeezing frequency, rebuilt from the
        # second-harmonic form S = a + |b| cos(2 theta + arg b) that the scan
        # columns already determine.
        best = int(np.argmin(scan.s_opt))
        a_term = 0.5 * (scan.s_theta[best, 0] + scan.s_theta[best, 1])
        mag = a_term - scan.s_opt[best]
        phase = math.pi - 2.0 * scan.theta_opt[best]
        thetas = np.linspace(0.0, math.pi, cfg.theta_points, endpoint=False)
        png = os.path.join(args.out, "squeeze.png")
        plots.save_squeeze_plot(
            png,
            grid / catalog.omega_m,
            scan.s_opt,
            scan.s_theta[:, 0],
            scan.s_theta[:, 1],
            thetas=thetas,
            s_angle=a_term + mag * np.cos(2.0 * thetas + phase),
            omega_star=grid[best] / catalog.omega_m,
        )
        outputs.append(png)
    info = (
        resp.grid_info() if isinstance(resp, EffectiveResponse) else resp_full.dc_info
    )
    outputs.append(
        _write_report(
            args.out,
            "squeeze",
            cfg,
            outputs,
            started,
            info=info,
            warning=warning,
            extra={
                "variant": args.variant,
                "chi_eff0_m_n": _fmt(resp_full.chi0),
                "operating_point": {
                    "psi_nl_over_gamma": _fmt(op.psi_nl / cav.gamma),
                    "sigma_norm": _fmt(op.sigma_norm),
                    "stability": op.stability.value,
                },
            },
        )
    )
    print(f"wrote {csv_path} ({len(rows)} rows)")
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
        return 3
    return 0


def cmd_bistability(cfg: SimulationConfig, args) -> int:
    anchor = cfg.anchor()
    if not isinstance(anchor, GivenEmptyDetuning):
        raise ConfigError(
            "bistability needs the empty-cavity anchor: set "
            "cavity.psi0_over_gamma in the configuration"
        )
    power_max = args.power_max if args.power_max is not None else 2.0 * cfg.p_in
    if args.power_min < 0 or power_max < args.power_min:
        raise ConfigError("bistability needs 0 <= --power-min <= --power-max")
    if args.power_points < 1:
        raise ConfigError("--power-points must be >= 1")
    catalog, opt = _setup(cfg)
    started = time.perf_counter()
    resp = _response(cfg, catalog, opt)
    cav = cfg.to_cavity(catalog.omega_m)
    powers = np.linspace(args.power_min, power_max, args.power_points)
    rows = []
    plot_rows = []
    for p_in in powers:
        for idx, pt in enumerate(
            solve_operating_point(cav, float(p_in), cfg.wavelength, anchor, resp.chi0)
        ):
            rows.append(
                [
                    _fmt(p_in),
                    str(idx),
                    _fmt(pt.intensity),
                    _fmt(pt.psi_bar / cav.gamma),
                    _fmt(pt.sigma_norm),
                    pt.stability.value,
                ]
            )
            plot_rows.append((p_in, pt.intensity, pt.stability.value))
    csv_path = os.path.join(args.out, "bistability.csv")
    _write_csv(
        csv_path,
        ["p_in_w", "branch_id", "i_bar", "psi_bar_over_gamma", "sigma_norm", "stability"],
        rows,
    )
    outputs = [csv_path]
    if args.plot:
        from . import plots

        png = os.path.join(args.out, "bistability.png")
        ps, ibars, stabs = zip(*plot_rows)
        plots.save_bistability_plot(png, ps, ibars, stabs)
        outputs.append(png)
    outputs.append(
        _write_report(
            args.out,
            "bistability",
            cfg,
            outputs,
            started,
            info=resp.dc_info,
            extra={"chi_eff0_m_n": _fmt(resp.chi0)},
        )
    )
    print(f"wrote {csv_path} ({len(rows)} rows)")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optomech",
        description="Optomechanics of a plano-convex resonator closing an "
        "optical cavity: mode catalogs, effective response, bistability and "
        "squeezing spectra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, workers: bool = False) -> None:
        p.add_argument("--config", required=True, help="configuration file path")
        p.add_argument("--out", default=".", help="output directory (default: .)")
        p.add_argument(
            "--plot", action="store_true", help="also render a PNG figure"
        )
        if workers:
            p.add_argument(
                "--workers",
                type=int,
                default=1,
                help="worker threads for grid evaluation (output is identical "
                "for any value)",
            )

    p = sub.add_parser("modes", help="acoustic mode catalog table")
    common(p)
    p.add_argument("--n-limit", type=int, default=10, help="families 1..n (default 10)")
    p.add_argument(
        "--p-limit", type=int, default=10, help="orders 0..p-1 per family (default 10)"
    )
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("susceptibility", help="effective susceptibility on the grid")
    common(p, workers=True)
    p.set_defaults(func=cmd_susceptibility)

    p = sub.add_parser("mass-scan", help="effective mass versus w1/w0")
    common(p)
    p.add_argument("--ratio-min", type=float, default=1.0)
    p.add_argument("--ratio-max", type=float, default=40.0)
    p.add_argument("--ratio-points", type=int, default=20)
    p.set_defaults(func=cmd_mass_scan)

    p = sub.add_parser("operating-point", help="stationary cavity state(s)")
    common(p)
    p.set_defaults(func=cmd_operating_point)

    p = sub.add_parser("squeeze", help="quadrature noise spectra of the output")
    common(p, workers=True)
    p.add_argument(
        "--variant",
        choices=_VARIANTS,
        default="full",
        help="response model (default full catalog)",
    )
    p.set_defaults(func=cmd_squeeze)

    p = sub.add_parser("bistability", help="steady-state branches versus power")
    common(p)
    p.add_argument("--power-min", type=float, default=0.0, help="watts")
    p.add_argument("--power-max", type=float, default=None, help="watts (default 2 P_in)")
    p.add_argument("--power-points", type=int, default=60)
    p.set_defaults(func=cmd_bistability)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except FileNotFoundError:
        print(f"error: configuration file not found: {args.config}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: cannot read {args.config}: {exc}", file=sys.stderr)
        return 4
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        os.makedirs(args.out, exist_ok=True)
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
