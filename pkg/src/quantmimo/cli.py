"""Command-line front end: Monte Carlo sweeps, combiner dumps, self-validation."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channel import ArrayGeometry, ChannelParams, generate_channel
from .combiners import (
    DESIGN_TAGS,
    angle_codebook,
    save_matrix_text,
    svd_combiner,
    optimal_two_stage_combiner,
)
from .metrics import (
    MiContext,
    equal_gain_channel,
    general_upper_bound,
    haar_semi_unitary,
    mutual_information,
    optimal_mi_equal_gains,
    singular_profile,
    svd_upper_bound,
    two_stage_rate_closed_form,
)
from .quantization import BETA_TABLE, lloyd_max_distortion, make_adc_model
from .simulation import (
    SweepConfig,
    SweepResult,
    db_to_linear,
    derive_trial_seed,
    run_sweep,
)

CSV_HEADER = "design,n_r,n_rf,snr_db,bits,trials,mi_mean,mi_std,mi_sem"

_CONFIG_KEYS = (
    "n_r",
    "n_u",
    "n_rf",
    "kappa",
    "n_r_list",
    "bits",
    "snr_db",
    "mean_paths",
    "trials",
    "seed",
    "designs",
    "codebook_size",
)


class ConfigError(ValueError):
    """Invalid sweep configuration; the message names the offending line."""


def _parse_pairs(text: str) -> dict[str, tuple[str, object]]:
    pairs: dict[str, tuple[str, object]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        pairs[key] = (value, lineno)
    return pairs


def _where(origin) -> str:
    return f"line {origin}" if isinstance(origin, int) else str(origin)


def _to_int(key: str, value: str, origin) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(
            f"{_where(origin)}: {key} must be an integer, got {value!r}"
        ) from None


def _to_float(key: str, value: str, origin) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(
            f"{_where(origin)}: {key} must be a number, got {value!r}"
        ) from None


def _to_int_list(key: str, value: str, origin) -> tuple[int, ...]:
    return tuple(_to_int(key, item.strip(), origin) for item in value.split(","))


def _to_float_list(key: str, value: str, origin) -> tuple[float, ...]:
    return tuple(_to_float(key, item.strip(), origin) for item in value.split(","))


def _to_designs(value: str, origin) -> tuple[str, ...]:
    tags = tuple(item.strip() for item in value.split(","))
    for tag in tags:
        if tag not in DESIGN_TAGS:
            raise ConfigError(f"{_where(origin)}: unknown design tag {tag!r}")
    return tags


def parse_config(text: str, overrides: tuple[str, ...] = ()) -> SweepConfig:
    """Parse 'key = value' sweep configuration text.

    Blank lines and '#' comments are ignored. Overrides are 'key=value'
    strings applied on top of the file content; they accept the same keys.
    Missing optional keys fall back to trials=500, all designs, and a
    codebook matched to each grid point's antenna count.
    """
    pairs = _parse_pairs(text)
    for item in overrides:
        key, sep, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"override {item!r}: expected key=value")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"override {item!r}: unknown key {key!r}")
        pairs[key] = (value, f"override {item!r}")

    def require(key: str) -> tuple[str, object]:
        if key not in pairs:
            raise ConfigError(f"missing required key {key!r}")
        return pairs[key]

    explicit = "n_r" in pairs and "n_rf" in pairs
    ratio = "kappa" in pairs or "n_r_list" in pairs
    if ratio and ("kappa" not in pairs or "n_r_list" not in pairs):
        raise ConfigError("kappa and n_r_list must be given together")
    if ratio and "n_rf" in pairs:
        origin = pairs["n_rf"][1]
        raise ConfigError(f"{_where(origin)}: n_rf conflicts with kappa mode")
    if not explicit and not ratio:
        raise ConfigError("give either n_r with n_rf, or kappa with n_r_list")

    n_u = _to_int("n_u", *require("n_u"))
    bits_value, bits_origin = require("bits")
    bits = _to_int("bits", bits_value, bits_origin)
    if bits < 1:
        raise ConfigError(f"{_where(bits_origin)}: bits must be >= 1, got {bits}")
    snr_db_list = _to_float_list("snr_db", *require("snr_db"))
    mean_paths = _to_float("mean_paths", *require("mean_paths"))
    seed = _to_int("seed", *require("seed"))

    kwargs: dict = {
        "n_u": n_u,
        "bits": bits,
        "snr_db_list": snr_db_list,
        "mean_paths": mean_paths,
        "master_seed": seed,
    }
    if ratio:
        kappa_value, kappa_origin = pairs["kappa"]
        kappa = _to_float("kappa", kappa_value, kappa_origin)
        if not 0.0 < kappa <= 1.0:
            raise ConfigError(
                f"{_where(kappa_origin)}: kappa must lie in (0, 1], got {kappa}"
            )
        kwargs["kappa"] = kappa
        kwargs["n_r_list"] = _to_int_list("n_r_list", *pairs["n_r_list"])
    else:
        kwargs["n_r"] = _to_int("n_r", *require("n_r"))
        kwargs["n_rf_list"] = _to_int_list("n_rf", *require("n_rf"))

    if "trials" in pairs:
        trials_value, trials_origin = pairs["trials"]
        kwargs["trials"] = _to_int("trials", trials_value, trials_origin)
        if kwargs["trials"] < 1:
            raise ConfigError(
                f"{_where(trials_origin)}: trials must be >= 1, got {kwargs['trials']}"
            )
    if "designs" in pairs:
        kwargs["designs"] = _to_designs(*pairs["designs"])
    if "codebook_size" in pairs:
        kwargs["codebook_size"] = _to_int("codebook_size", *pairs["codebook_size"])

    n_u_origin = pairs["n_u"][1]
    try:
        config = SweepConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{_where(n_u_origin)}: {exc}") from None
    return config


def _fmt(value: float) -> str:
    return format(value, ".6g")


def emit_csv(result: SweepResult, path: Path) -> None:
    """Write sweep aggregates as CSV sorted by (design, n_r, n_rf, snr_db).

    Fixed 6-significant-digit formatting, so equal results produce
    byte-identical files.
    """
    rows = sorted(result.rows, key=lambda r: (r.design, r.n_r, r.n_rf, r.snr_db))
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.design},{r.n_r},{r.n_rf},{_fmt(r.snr_db)},{r.bits},{r.trials},"
            f"{_fmt(r.mi_mean)},{_fmt(r.mi_std)},{_fmt(r.mi_sem)}"
        )
    path.write_text("\n".join(lines) + "\n")


@dataclass(frozen=True)
class ValidationCheck:
    """Outcome of one self-validation oracle."""

    name: str
    passed: bool
    detail: str


def check_quantizer_table(beta_table=None) -> ValidationCheck:
    """Lloyd-Max distortion oracle against the tabulated constants (1..5 bits)."""
    table = BETA_TABLE if beta_table is None else beta_table
    worst = 0.0
    for bits in sorted(table):
        measured = lloyd_max_distortion(
            bits, 1_000_000, np.random.default_rng(7000 + bits)
        )
        worst = max(worst, abs(measured - table[bits]) / table[bits])
    return ValidationCheck(
        name="quantizer-distortion-table",
        passed=worst < 0.01,
        detail=f"max relative deviation {worst:.2e} (tolerance 1e-2)",
    )


def check_bound_values() -> ValidationCheck:
    """Closed-form rate caps against their frozen reference values."""
    svd_cap = svd_upper_bound(8, make_adc_model(2))
    general_cap = general_upper_bound(8, 64, make_adc_model(2))
    svd_err = abs(svd_cap - 24.714138704776698)
    general_err = abs(general_cap - 47.46199010823636)
    return ValidationCheck(
        name="bound-values",
        passed=svd_err < 0.01 and general_err < 0.01,
        detail=(
            f"saturation cap {svd_cap:.6f} bits, general cap {general_cap:.6f} "
            f"bits (tolerance 0.01 each)"
        ),
    )


def check_rate_consistency(n_channels: int = 100, seed: int = 11) -> ValidationCheck:
    """Direct rate evaluation against the closed form on random channels."""
    rng = np.random.default_rng(seed)
    params = ChannelParams(n_users=2, mean_paths=3.0, geometry=ArrayGeometry(16))
    worst = 0.0
    for _ in range(n_channels):
        channel = generate_channel(params, rng)
        combiner = optimal_two_stage_combiner(channel, 8, 2)
        profile = singular_profile(channel, 8)
        for bits in (1, 2, 3):
            adc = make_adc_model(bits)
            for snr in (0.1, 1.0, 10.0):
                ctx = MiContext(snr=snr, adc=adc)
                gap = abs(
                    mutual_information(channel, combiner, ctx)
                    - two_stage_rate_closed_form(profile, ctx)
                )
                worst = max(worst, gap)
    return ValidationCheck(
        name="closed-form-consistency",
        passed=worst < 1e-8,
        detail=f"max |direct - closed form| = {worst:.2e} bits (tolerance 1e-8)",
    )


def check_bound_dominance(n_draws: int = 200, seed: int = 12) -> ValidationCheck:
    """No tested combiner beats the rate caps."""
    rng = np.random.default_rng(seed)
    n_r, n_rf, n_u = 32, 8, 3
    adc = make_adc_model(2)
    ctx = MiContext(snr=1.0, adc=adc)
    cap = general_upper_bound(n_u, n_rf, adc)
    svd_cap = svd_upper_bound(n_u, adc)
    params = ChannelParams(n_users=n_u, mean_paths=3.0, geometry=ArrayGeometry(n_r))
    worst_excess = -np.inf
    svd_ok = True
    for _ in range(n_draws):
        channel = generate_channel(params, rng)
        w = haar_semi_unitary(n_r, n_rf, rng)
        worst_excess = max(worst_excess, mutual_information(channel, w, ctx) - cap)
        svd_rate = mutual_information(channel, svd_combiner(channel, n_rf), ctx)
        svd_ok = svd_ok and svd_rate < svd_cap
    passed = worst_excess <= 1e-9 and svd_ok
    return ValidationCheck(
        name="bound-dominance",
        passed=passed,
        detail=(
            f"max rate excess over cap {worst_excess:.2e} bits; "
            f"saturation bound respected: {svd_ok}"
        ),
    )


def check_equal_gain_optimality(
    n_draws: int = 200, seed: int = 13
) -> ValidationCheck:
    """Two-stage construction attains the optimum for equal channel gains."""
    rng = np.random.default_rng(seed)
    n_r, n_u = 16, 2
    adc = make_adc_model(2)
    ctx = MiContext(snr=1.0, adc=adc)
    worst_gap = 0.0
    worst_excess = -np.inf
    for gain in (1.0, 4.0):
        for n_rf in (4, 8):
            channel = equal_gain_channel(n_r, n_u, gain, rng)
            combiner = optimal_two_stage_combiner(channel, n_rf, n_u)
            best = mutual_information(channel, combiner, ctx)
            closed = optimal_mi_equal_gains(n_u, n_rf, gain, ctx)
            worst_gap = max(worst_gap, abs(best - closed))
            for _ in range(n_draws):
                w = haar_semi_unitary(n_r, n_rf, rng)
                worst_excess = max(
                    worst_excess, mutual_information(channel, w, ctx) - best
                )
    passed = worst_gap < 1e-8 and worst_excess <= 1e-9
    return ValidationCheck(
        name="equal-gain-optimality",
        passed=passed,
        detail=(
            f"max |attained - closed form| = {worst_gap:.2e} bits; "
            f"max random-combiner excess {worst_excess:.2e} bits"
        ),
    )


def run_validation_checks() -> list[ValidationCheck]:
    """All built-in oracle checks, in a fixed order."""
    return [
        check_bound_values(),
        check_quantizer_table(),
        check_rate_consistency(),
        check_bound_dominance(),
        check_equal_gain_optimality(),
    ]


def _cmd_sweep(args) -> int:
    text = args.config.read_text()
    config = parse_config(text, tuple(args.set))
    result = run_sweep(config)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    emit_csv(result, args.out)
    print(f"wrote {len(result.rows)} rows to {args.out}")
    return 0


def _cmd_design(args) -> int:
    text = args.config.read_text()
    config = parse_config(text, tuple(args.set))
    n_r, n_rf = config.antenna_grid()[0]
    snr_db = config.snr_db_list[0]
    adc = make_adc_model(config.bits)
    geometry = ArrayGeometry(n_r)
    rng = np.random.default_rng(
        derive_trial_seed(derive_trial_seed(config.master_seed, 0), n_r)
    )
    params = ChannelParams(
        n_users=config.n_u, mean_paths=config.mean_paths, geometry=geometry
    )
    channel = generate_channel(params, rng)
    codebook = angle_codebook(
        geometry, config.codebook_size if config.codebook_size is not None else n_r
    )

    args.out.mkdir(parents=True, exist_ok=True)
    save_matrix_text(args.out / "channel.txt", channel.h)
    summary = [
        f"n_r = {n_r}",
        f"n_rf = {n_rf}",
        f"n_u = {config.n_u}",
        f"bits = {config.bits}",
        f"snr_db = {_fmt(snr_db)}",
        f"mean_paths = {_fmt(config.mean_paths)}",
        f"seed = {config.master_seed}",
        f"codebook_size = {codebook.size}",
        "aoa_distribution = uniform on [-pi/2, pi/2]",
        f"spacing_ratio = {geometry.spacing_ratio}",
        "",
    ]
    from .simulation import _build_static_combiner
    from .combiners import greedy_mi_combiner

    for design in config.designs:
        if design == "GREEDY_MI":
            combiner = greedy_mi_combiner(
                channel, n_rf, codebook, db_to_linear(snr_db), adc
            )
        else:
            combiner = _build_static_combiner(design, channel, n_rf, codebook)
        save_matrix_text(args.out / f"{design}_w1.txt", combiner.w1)
        save_matrix_text(args.out / f"{design}_w2.txt", combiner.w2)
        save_matrix_text(args.out / f"{design}_effective.txt", combiner.effective)
        if combiner.selected_angles is not None:
            picks = ", ".join(_fmt(a) for a in combiner.selected_angles)
            summary.append(f"{design} selected spatial angles: {picks}")
    (args.out / "summary.txt").write_text("\n".join(summary) + "\n")
    print(f"wrote combiner dumps for {len(config.designs)} designs to {args.out}")
    return 0


def _cmd_validate(args) -> int:
    checks = run_validation_checks()
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.name}: {check.detail}")
    return 0 if all(check.passed for check in checks) else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantmimo",
        description=(
            "Mutual-information simulation of two-stage analog combining "
            "with low-resolution ADCs"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a Monte Carlo sweep, write CSV")
    sweep.add_argument("--config", required=True, type=Path, help="sweep config file")
    sweep.add_argument("--out", required=True, type=Path, help="output CSV path")
    sweep.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config key (repeatable)",
    )

    design = sub.add_parser(
        "design", help="dump combiner matrices for one seeded channel"
    )
    design.add_argument("--config", required=True, type=Path, help="sweep config file")
    design.add_argument("--out", required=True, type=Path, help="output directory")
    design.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config key (repeatable)",
    )

    sub.add_parser("validate", help="run the built-in oracle checks")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"sweep": _cmd_sweep, "design": _cmd_design, "validate": _cmd_validate}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fatal: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    sys.exit(main())
