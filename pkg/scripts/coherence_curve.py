#!/usr/bin/env python3
"""Coherence time of a trapped qubit versus the depth-to-magic-depth ratio,
combining the thermal dephasing model with fixed T1 and T2'. Reproduces the
peaked curve around the magic intensity."""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from magictrap import TrapCoefficients, TrapFieldConfig, coherence_vs_depth, magic_depth
from magictrap.datafiles import write_table
from magictrap.svg import line_plot

MEASURED = TrapCoefficients(beta1=3.47e-4, beta2=-0.99e-4, beta4=4.6e-12)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="out", type=Path)
    parser.add_argument("--temp-uk", type=float, default=17.0)
    parser.add_argument("--b-field", type=float, default=3.115)
    parser.add_argument("--t1", type=float, default=4.0)
    parser.add_argument("--t2prime", type=float, default=0.3)
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    base = TrapFieldConfig(
        coeffs=MEASURED, b_field_gauss=args.b_field,
        mean_depth_hz=magic_depth(MEASURED, args.b_field),
        temperature_k=args.temp_uk * 1e-6)
    ratios = [k / 100.0 for k in range(50, 151, 5)]
    curve = coherence_vs_depth(base, ratios, args.t1, args.t2prime)

    peak_ratio, peak_tau = max(curve, key=lambda item: item[1])
    tau_at_magic = dict(curve)[1.0]
    print(f"tau at the magic ratio: {tau_at_magic*1e3:.1f} ms")
    print(f"curve peak: {peak_tau*1e3:.1f} ms at ratio {peak_ratio:.2f}")
    if peak_ratio != 1.0:
        print("(the thermal-energy skew puts the model optimum slightly "
              "below the magic ratio at this temperature)")

    csv_path = args.outdir / "coherence_curve.csv"
    svg_path = args.outdir / "coherence_curve.svg"
    write_table(csv_path, ("ratio", "tau_s"), curve)
    line_plot(svg_path,
              [("tau", [r for r, _ in curve], [t for _, t in curve])],
              "depth ratio U_a/U_M", "coherence time (s)",
              title=f"tau vs depth ratio at {args.temp_uk:g} uK")
    print(f"wrote {csv_path} and {svg_path}")


if __name__ == "__main__":
    main()
