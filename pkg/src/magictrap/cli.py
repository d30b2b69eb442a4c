"""Deterministic command-line front end.

Every subcommand writes its primary result as a flat key-value document to
stdout; ``--out`` adds a CSV table and ``--plot`` a static SVG where the
command produces a curve. Exit codes: 0 success, 1 domain or I/O error,
2 usage error.
"""
import argparse
import sys

import numpy as np

from . import __version__, acceptance, datafiles, svg
from .constants import CONSTANTS, hz_from_kelvin, kelvin_from_hz
from .dls import dls, dls_minimum, effective_field, magic_depth, zero_crossing_field
from .errors import InvalidArgumentError, MagicTrapError
from .fitting import fit_damped_sinusoid, fit_dls_global, magic_depth_sigma
from .ramsey import (
    TrapFieldConfig,
    coherence_vs_depth,
    ramsey_trace,
    t2_star,
    visibility_curve,
)
from .transfer import coherence_budget, validate_timeline


def _config_from_args(args, coeffs):
    return TrapFieldConfig(
        coeffs=coeffs,
        b_field_gauss=args.b_field,
        mean_depth_hz=datafiles.depth_hz_from_mk(args.depth_mk),
        temperature_k=args.temp_uk * 1e-6,
        detuning_hz=getattr(args, "detuning_hz", 0.0),
    )


def _emit(args, pairs):
    datafiles.write_keyvalue(sys.stdout, pairs, args.precision)


def _cmd_magic(args):
    coeffs = datafiles.read_coefficients(args.coeffs)
    u_magic = magic_depth(coeffs, args.b_field)
    pairs = [
        ("b_field_gauss", args.b_field),
        ("u_m_hz", u_magic),
        ("depth_mk", datafiles.mk_from_depth_hz(u_magic)),
        ("dls_min_hz", dls_minimum(coeffs, args.b_field)),
    ]
    if coeffs.beta2 != 0:
        pairs.append(("zero_crossing_gauss", zero_crossing_field(coeffs)))
    _emit(args, pairs)
    return 0


def _cmd_dls_curve(args):
    if args.points < 1:
        raise InvalidArgumentError("--points must be >= 1")
    coeffs = datafiles.read_coefficients(args.coeffs)
    depths_mk = np.linspace(args.depth_mk_min, args.depth_mk_max, args.points)
    shifts = [dls(coeffs, args.b_field, datafiles.depth_hz_from_mk(d))
              for d in depths_mk]
    _emit(args, [
        ("b_field_gauss", args.b_field),
        ("points", args.points),
        ("depth_mk_min", args.depth_mk_min),
        ("depth_mk_max", args.depth_mk_max),
        ("dls_min_hz", dls_minimum(coeffs, args.b_field)),
        ("magic_depth_mk",
         datafiles.mk_from_depth_hz(magic_depth(coeffs, args.b_field))),
    ])
    rows = list(zip([float(d) for d in depths_mk], [float(s) for s in shifts]))
    if args.out:
        datafiles.write_table(args.out, ("depth_mk", "dls_hz"), rows)
    if args.plot:
        svg.line_plot(args.plot,
                      [(f"B = {args.b_field:g} G", depths_mk, shifts)],
                      "trap depth (mK)", "differential light shift (Hz)")
    return 0


def _cmd_beff(args):
    depth = datafiles.depth_hz_from_mk(args.depth_mk)
    _emit(args, [
        ("vector_to_scalar_ratio", args.ratio),
        ("depth_mk", args.depth_mk),
        ("b_eff_gauss", effective_field(args.ratio, depth)),
    ])
    return 0


def _cmd_fit_dls(args):
    datasets = datafiles.read_dls_csv(args.input)
    result = fit_dls_global(datasets, beta1_fixed=args.beta1,
                            free_beta1=args.free_beta1)
    pairs = [("n_datasets", len(datasets)),
             ("n_points", sum(len(ds.points) for ds in datasets)),
             ("beta1_fixed", args.beta1 if not args.free_beta1 else "free")]
    for name in result.names:
        pairs.append((name, result.parameters[name]))
        pairs.append((f"{name}_stderr", result.stderr(name)))
    pairs += [("chi_square", result.chi_square), ("dof", result.dof)]
    for i, row_name in enumerate(result.names):
        for j, col_name in enumerate(result.names):
            pairs.append((f"cov_{row_name}_{col_name}",
                          float(result.covariance[i, j])))
    beta1 = (result.parameters.get("beta1", args.beta1))
    for ds in datasets:
        u_magic = -(beta1 + result.parameters["beta2"] * ds.b_field_gauss) / (
            2.0 * result.parameters["beta4"])
        pairs.append((f"u_m_hz_at_{ds.b_field_gauss:g}G", u_magic))
        pairs.append((f"u_m_sigma_hz_at_{ds.b_field_gauss:g}G",
                      magic_depth_sigma(result, beta1, ds.b_field_gauss)))
    _emit(args, pairs)
    return 0


def _trace_command(args, kind):
    if args.points < 1:
        raise InvalidArgumentError("--points must be >= 1")
    coeffs = datafiles.read_coefficients(args.coeffs)
    config = _config_from_args(args, coeffs)
    times = np.linspace(0.0, args.t_max, args.points)
    renormalize = not args.no_renormalize
    if kind == "population":
        trace = ramsey_trace(config, times, renormalize)
        values = trace.population
        header = ("t_s", "population")
        label = "population"
    else:
        curve = visibility_curve(config, times, renormalize)
        values = curve.visibility
        header = ("t_s", "visibility")
        label = "visibility"
    _emit(args, [
        ("b_field_gauss", args.b_field),
        ("depth_mk", args.depth_mk),
        ("temp_uk", args.temp_uk),
        ("detuning_hz", getattr(args, "detuning_hz", 0.0)),
        ("renormalized", renormalize),
        ("t_max_s", args.t_max),
        ("points", args.points),
        (f"{label}_final", values[-1]),
    ])
    if args.out:
        datafiles.write_table(args.out, header,
                              list(zip((float(t) for t in times), values)))
    if args.plot:
        svg.line_plot(args.plot, [(label, list(times), list(values))],
                      "time (s)", label)
    return 0


def _cmd_t2star(args):
    coeffs = datafiles.read_coefficients(args.coeffs)
    config = _config_from_args(args, coeffs)
    value = t2_star(config, horizon_s=args.horizon)
    _emit(args, [
        ("b_field_gauss", args.b_field),
        ("depth_mk", args.depth_mk),
        ("temp_uk", args.temp_uk),
        ("t2_star_s", value),
    ])
    return 0


def _cmd_coherence_curve(args):
    if args.ratio_step <= 0 or args.ratio_max < args.ratio_min:
        raise InvalidArgumentError("ratio grid must have positive step and "
                                   "ratio-max >= ratio-min")
    coeffs = datafiles.read_coefficients(args.coeffs)
    u_magic = magic_depth(coeffs, args.b_field)
    base = TrapFieldConfig(coeffs=coeffs, b_field_gauss=args.b_field,
                           mean_depth_hz=u_magic,
                           temperature_k=args.temp_uk * 1e-6)
    n_steps = int(round((args.ratio_max - args.ratio_min) / args.ratio_step))
    ratios = [args.ratio_min + k * args.ratio_step for k in range(n_steps + 1)]
    curve = coherence_vs_depth(base, ratios, args.t1, args.t2prime)
    peak_ratio, peak_tau = max(curve, key=lambda item: item[1])
    _emit(args, [
        ("b_field_gauss", args.b_field),
        ("temp_uk", args.temp_uk),
        ("t1_s", args.t1),
        ("t2prime_s", args.t2prime),
        ("magic_depth_mk", datafiles.mk_from_depth_hz(u_magic)),
        ("peak_ratio", peak_ratio),
        ("peak_tau_s", peak_tau),
    ])
    if args.out:
        datafiles.write_table(args.out, ("ratio", "tau_s"), curve)
    if args.plot:
        svg.line_plot(args.plot,
                      [("tau", [r for r, _ in curve], [t for _, t in curve])],
                      "depth ratio U_a/U_M", "coherence time (s)")
    return 0


def _cmd_fit_ramsey(args):
    samples = datafiles.read_ramsey_csv(args.input)
    result = fit_damped_sinusoid(samples)
    pairs = []
    for name in result.names:
        pairs.append((name, result.parameters[name]))
        pairs.append((f"{name}_stderr", result.stderr(name)))
    pairs += [("chi_square", result.chi_square), ("dof", result.dof)]
    for i, row_name in enumerate(result.names):
        for j, col_name in enumerate(result.names):
            pairs.append((f"cov_{row_name}_{col_name}",
                          float(result.covariance[i, j])))
    _emit(args, pairs)
    if args.plot:
        t_data = [row[0] for row in samples]
        p_data = [row[1] for row in samples]
        grid = np.linspace(min(t_data), max(t_data), 400)
        p = result.parameters
        model = (p["offset"] + 0.5 * p["v0"] * np.exp(-grid / p["tau"])
                 * np.cos(2 * np.pi * p["delta"] * grid + p["phi"]))
        svg.line_plot(args.plot,
                      [("data", t_data, p_data), ("fit", list(grid), list(model))],
                      "time (s)", "population")
    return 0


def _cmd_transfer(args):
    coeffs = datafiles.read_coefficients(args.coeffs)
    timeline = datafiles.read_timeline(args.timeline, coeffs)
    verdict = validate_timeline(timeline)
    if args.validate_only:
        pairs = [("valid", verdict.ok)]
        if not verdict.ok:
            pairs += [("violation", verdict.code), ("detail", verdict.message)]
        _emit(args, pairs)
        return 0 if verdict.ok else 1
    report = coherence_budget(
        timeline, post_transfer_temperature_k=args.post_temp_uk * 1e-6,
        t2star_static_s=args.t2star_static, t2star_mobile_s=args.t2star_mobile)
    pairs = [
        ("valid", True),
        ("segments", len(report.per_segment)),
        ("retained_coherence", report.retained_coherence),
        ("t2star_static_s", report.t2star_static_s),
        ("t2star_mobile_s", report.t2star_mobile_s),
        ("tau_static_s", report.tau_static_s),
        ("tau_mobile_s", report.tau_mobile_s),
        ("fractional_tau_loss", report.fractional_tau_loss),
    ]
    for i, note in enumerate(report.notes):
        pairs.append((f"note_{i}", note))
    _emit(args, pairs)
    if args.out:
        rows = [(entry.phase.value, entry.duration_s, entry.t2_used_s,
                 entry.t2_model_s, entry.amplitude_factor,
                 int(entry.used_override)) for entry in report.per_segment]
        datafiles.write_table(
            args.out,
            ("phase", "duration_s", "t2_used_s", "t2_model_s",
             "amplitude_factor", "used_override"),
            rows)
    return 0


def _cmd_convert(args):
    pairs = []
    if args.kelvin is not None:
        pairs += [("kelvin", args.kelvin), ("hz", hz_from_kelvin(args.kelvin))]
    if args.hz is not None:
        pairs += [("hz", args.hz), ("kelvin", kelvin_from_hz(args.hz))]
    if args.mk is not None:
        pairs += [("depth_mk", args.mk),
                  ("depth_hz_signed", datafiles.depth_hz_from_mk(args.mk))]
    if not pairs:
        raise InvalidArgumentError("convert needs one of --kelvin, --hz, --mk")
    _emit(args, pairs)
    return 0


def _cmd_selftest(args):
    results = acceptance.run_all(sys.stdout)
    failed = [r for r in results if not r.passed]
    sys.stdout.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    return 1 if failed else 0


def _print_constants(stream):
    datafiles.write_keyvalue(stream, [
        ("planck_h_j_s", CONSTANTS.planck_h),
        ("boltzmann_kb_j_per_k", CONSTANTS.boltzmann_kb),
        ("bohr_magneton_over_h_hz_per_gauss", CONSTANTS.bohr_magneton_over_h),
        ("rb87_hyperfine_nu0_hz", CONSTANTS.rb87_hyperfine_nu0),
    ], precision=12)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="magictrap",
        description="Magic-intensity trap model: shifts, dephasing, fits, "
                    "and transfer budgets for trapped clock qubits.")
    parser.add_argument("--version", action="store_true",
                        help="print the package version and exit")
    parser.add_argument("--constants", action="store_true",
                        help="print the pinned physical constants and exit")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=9,
                        help="significant digits in stdout values (default 9)")
    coeffs_arg = argparse.ArgumentParser(add_help=False)
    coeffs_arg.add_argument("--coeffs", required=True, metavar="FILE",
                            help="flat key-value coefficients file")
    field_args = argparse.ArgumentParser(add_help=False)
    field_args.add_argument("--b-field", type=float, required=True,
                            help="bias field (gauss)")
    field_args.add_argument("--depth-mk", type=float, required=True,
                            help="trap depth, positive mK")
    field_args.add_argument("--temp-uk", type=float, required=True,
                            help="atom temperature (uK)")
    out_arg = argparse.ArgumentParser(add_help=False)
    out_arg.add_argument("--out", metavar="FILE.csv", help="write a CSV table")
    plot_arg = argparse.ArgumentParser(add_help=False)
    plot_arg.add_argument("--plot", metavar="FILE.svg", help="write an SVG plot")

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("magic", parents=[common, coeffs_arg],
                       help="magic depth and shift minimum at a bias field")
    p.add_argument("--b-field", type=float, required=True)
    p.set_defaults(handler=_cmd_magic)

    p = sub.add_parser("dls-curve", parents=[common, coeffs_arg, out_arg, plot_arg],
                       help="shift versus depth at one bias field")
    p.add_argument("--b-field", type=float, required=True)
    p.add_argument("--depth-mk-min", type=float, default=0.0)
    p.add_argument("--depth-mk-max", type=float, default=0.6)
    p.add_argument("--points", type=int, default=121)
    p.set_defaults(handler=_cmd_dls_curve)

    p = sub.add_parser("beff", parents=[common],
                       help="vector-shift effective field at a depth")
    p.add_argument("--ratio", type=float, default=0.2518,
                   help="vector-to-scalar polarizability ratio")
    p.add_argument("--depth-mk", type=float, required=True)
    p.set_defaults(handler=_cmd_beff)

    p = sub.add_parser("fit-dls", parents=[common],
                       help="global shift fit across bias fields")
    p.add_argument("--input", required=True, metavar="FILE.csv")
    p.add_argument("--beta1", type=float, required=True,
                   help="fixed linear coefficient")
    p.add_argument("--free-beta1", action="store_true",
                   help="fit beta1 as well (sensitivity mode)")
    p.set_defaults(handler=_cmd_fit_dls)

    p = sub.add_parser("ramsey", parents=[common, coeffs_arg, field_args,
                                          out_arg, plot_arg],
                       help="thermally averaged Ramsey trace")
    p.add_argument("--detuning-hz", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=0.4)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--no-renormalize", action="store_true",
                   help="use the raw truncated density (literal average)")
    p.set_defaults(handler=lambda a: _trace_command(a, "population"))

    p = sub.add_parser("visibility", parents=[common, coeffs_arg, field_args,
                                              out_arg, plot_arg],
                       help="Ramsey fringe envelope")
    p.add_argument("--t-max", type=float, default=2.0)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--no-renormalize", action="store_true")
    p.set_defaults(handler=lambda a: _trace_command(a, "visibility"))

    p = sub.add_parser("t2star", parents=[common, coeffs_arg, field_args],
                       help="1/e decay time of the envelope")
    p.add_argument("--horizon", type=float, default=1e4,
                   help="give up and report inf beyond this time (s)")
    p.set_defaults(handler=_cmd_t2star)

    p = sub.add_parser("coherence-curve", parents=[common, coeffs_arg,
                                                   out_arg, plot_arg],
                       help="coherence time versus depth ratio")
    p.add_argument("--b-field", type=float, required=True)
    p.add_argument("--temp-uk", type=float, required=True)
    p.add_argument("--t1", type=float, required=True, help="T1 (s)")
    p.add_argument("--t2prime", type=float, required=True,
                   help="homogeneous dephasing time (s)")
    p.add_argument("--ratio-min", type=float, default=0.5)
    p.add_argument("--ratio-max", type=float, default=1.5)
    p.add_argument("--ratio-step", type=float, default=0.05)
    p.set_defaults(handler=_cmd_coherence_curve)

    p = sub.add_parser("fit-ramsey", parents=[common, plot_arg],
                       help="damped-sinusoid fit of a Ramsey trace")
    p.add_argument("--input", required=True, metavar="FILE.csv")
    p.set_defaults(handler=_cmd_fit_ramsey)

    p = sub.add_parser("transfer", parents=[common, coeffs_arg, out_arg],
                       help="validate a transfer timeline and budget it")
    p.add_argument("--timeline", required=True, metavar="FILE.json")
    p.add_argument("--post-temp-uk", type=float, required=True,
                   help="register temperature after the transfer (uK)")
    p.add_argument("--t2star-static", type=float, default=None,
                   help="measured pre-transfer T2* (s), supersedes the model")
    p.add_argument("--t2star-mobile", type=float, default=None,
                   help="measured post-transfer T2* (s), supersedes the model")
    p.add_argument("--validate-only", action="store_true")
    p.set_defaults(handler=_cmd_transfer)

    p = sub.add_parser("convert", parents=[common],
                       help="kelvin/hertz and depth conversions")
    p.add_argument("--kelvin", type=float)
    p.add_argument("--hz", type=float)
    p.add_argument("--mk", type=float)
    p.set_defaults(handler=_cmd_convert)

    p = sub.add_parser("selftest", parents=[common],
                       help="run the acceptance checks")
    p.set_defaults(handler=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.version:
        sys.stdout.write(f"magictrap {__version__}\n")
    if args.constants:
        _print_constants(sys.stdout)
    if args.version or args.constants:
        return 0
    if args.command is None:
        parser.error("a subcommand is required (see --help)")
    try:
        return args.handler(args)
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: file-not-found: {exc.filename}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: io-error: {exc}\n")
        return 1
    except MagicTrapError as exc:
        sys.stderr.write(f"error: {exc.code}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
