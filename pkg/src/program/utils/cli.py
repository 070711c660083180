import argparse

COMMANDS = ("scatter", "jost", "waveop", "evolve", "verify")

# flag -> (settings section, field)
GRID_FLAGS = {
    "xmax": ("grid", "x_max"),
    "dx": ("grid", "dx"),
    "kmin": ("grid", "k_min"),
    "kmax": ("grid", "k_max"),
    "dk": ("grid", "dk"),
}
TOLERANCE_FLAGS = {
    "tol_closed_form": ("scattering", "closed_form_tolerance"),
    "tol_unitarity": ("scattering", "unitarity_tolerance"),
    "tol_growth": ("scattering", "growth_tolerance"),
    "tol_richardson": ("jost", "richardson_tolerance"),
    "tol_aliasing": ("jost", "aliasing_tolerance"),
    "tol_refinement": ("jost", "refinement_tolerance"),
    "tol_truncation": ("spectral", "truncation_tolerance"),
    "tol_pc": ("spectral", "pc_discrepancy_tolerance"),
    "tol_identity": ("waveops", "identity_tolerance"),
    "tol_stability": ("waveops", "family_stability_tolerance"),
    "tol_norm": ("dynamics", "norm_tolerance"),
    "tol_mass_drift": ("nls", "mass_drift_tolerance"),
    "tol_beat": ("nls", "beat_period_tolerance"),
    "tol_balance": ("nls", "balance_tolerance"),
}
NLS_FLAGS = {
    "sigma": ("nls", "sigma"),
    "sign": ("nls", "sign"),
    "convention": ("nls", "convention"),
    "coupling": ("nls", "coupling"),
    "dt": ("nls", "dt"),
    "t_final": ("nls", "t_final"),
}


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--potential", required=True, help="Potential file, JSON or TOML.")
    parser.add_argument("--out", default=None, help="Output directory (default: DELTASCATTER_OUTPUT_DIRECTORY or ./output).")
    parser.add_argument("--seed", type=int, default=None, help="Seed for the random test families.")
    parser.add_argument("--xmax", type=float, default=None, help="Half-width of the spatial grid (default 30).")
    parser.add_argument("--dx", type=float, default=None, help="Spatial step (default 0.05).")
    parser.add_argument("--kmin", type=float, default=None, help="Smallest wavenumber of coefficient grids (default 1e-3).")
    parser.add_argument("--kmax", type=float, default=None, help="Wavenumber cutoff of the spectral grid (default 12).")
    parser.add_argument("--dk", type=float, default=None, help="Wavenumber step (default pi / (4 xmax)).")
    for flag, (section, field) in TOLERANCE_FLAGS.items():
        parser.add_argument(f"--{flag.replace('_', '-')}", dest=flag, type=float, default=None, help=f"Override {section}.{field}.")
    parser.add_argument("--log-level", dest="log_level", default="INFO", help="Log level of the console sink.")
    parser.add_argument(
        "--save_settings",
        action="store_true",
        help="Write the effective settings to data/settings.json.",
    )


def _nls(parser: argparse.ArgumentParser):
    parser.add_argument("--sigma", type=float, default=None, help="Nonlinearity power.")
    parser.add_argument("--sign", choices=("focusing", "defocusing"), default=None)
    parser.add_argument("--convention", choices=("standard", "printed"), default=None, help="Sign in front of H.")
    parser.add_argument("--coupling", type=float, default=None, help="Nonlinear strength; 0 gives the linear flow.")
    parser.add_argument("--dt", type=float, default=None, help="Time step of the splitting scheme.")
    parser.add_argument("--t-final", dest="t_final", type=float, default=None, help="Final time.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deltascatter", description="Scattering and wave operators for delta plus regular potentials.")
    commands = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("scatter", "Transmission and reflection coefficients, bound states, coefficient hypotheses."),
        ("jost", "Jost solutions, the B1 kernel, the K_n series and the bound constants."),
        ("waveop", "Wave-operator identities, intertwining, Sobolev ratios, the Young chain."),
        ("evolve", "Linear propagation and decay, the NLS solver, the double-well demo."),
        ("verify", "Every check above with a pass/fail summary."),
    ):
        sub = commands.add_parser(name, help=text)
        _common(sub)
        if name in ("evolve", "verify"):
            _nls(sub)
        if name == "evolve":
            sub.add_argument(
                "--mode",
                dest="modes",
                action="append",
                choices=("linear", "nls", "double-well"),
                help="Repeat to run several; all when omitted.",
            )
            sub.add_argument("--recipe", choices=("bound-pair", "gaussian", "symmetric"), default="bound-pair", help="Double-well initial datum.")
    return parser


def handle_args(argv: list[str] | None = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def settings_overrides(args: argparse.Namespace) -> dict[tuple[str, str], object]:
    """(section, field) -> value for every flag given on the command line."""
    overrides = {}
    for table in (GRID_FLAGS, TOLERANCE_FLAGS, NLS_FLAGS):
        for flag, target in table.items():
            value = getattr(args, flag, None)
            if value is not None:
                overrides[target] = value
    if args.out is not None:
        overrides[("output", "directory")] = args.out
    return overrides
