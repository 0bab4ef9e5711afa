"""Command-line front end.

Subcommands:
    smith      decompose a plant and certify the produced pair
    stability  certify internal stability of a plant/controller loop
    perf       singular-value performance checks (original or diagonal domain)
    example    reproduce the full two-mass benchmark artifact set

Exit codes: 0 pass, 1 property failure (unstable loop, failed bound),
2 input error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .design import (
    design1_controllers,
    known_transformation_pair,
    make_design2,
    two_mass_plant,
)
from .freq import (
    FrequencyGrid,
    bode_export,
    essential_bound_check,
    hinf_norm_estimate,
    performance_check_original,
)
from .loops import gang_of_six, transform_to_original
from .polymat import (
    RankDeficiencyError,
    determinant,
    is_unimodular,
    smith_mcmillan,
    unimodular_inverse,
)
from .polyrat import ConvergenceError, RatFunc
from .sim import step_response
from .stability import check_internal_stability
from .tfm import TransferMatrix, controller_backmap, properness_min_reldeg

EXIT_PASS = 0
EXIT_PROPERTY_FAIL = 1
EXIT_INPUT_ERROR = 2
EXIT_NO_CONVERGENCE = 3


def _f17(x: float) -> str:
    return f"{x:.17g}"


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_f17(v) if isinstance(v, float) else str(v)
                              for v in row))
    path.write_text("\n".join(lines) + "\n")


def _read_transfer_matrix(path: str) -> TransferMatrix:
    with open(path) as fh:
        return TransferMatrix.from_json(json.load(fh))


def _read_weight(path: str) -> RatFunc:
    with open(path) as fh:
        return RatFunc.from_json(json.load(fh))


def _grid_from_args(args) -> FrequencyGrid:
    return FrequencyGrid.log_hz(args.freq_min_hz, args.freq_max_hz,
                                args.points_per_decade)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_smith(args) -> int:
    plant = _read_transfer_matrix(args.plant)
    dec = smith_mcmillan(plant)
    out = _outdir(args)
    _write_json(out / "U.json", dec.u.to_json())
    _write_json(out / "V.json", dec.v.to_json())
    _write_json(out / "psm.json", dec.diagonal_matrix().to_json())
    certificate = {
        "unimodular": {"U": is_unimodular(dec.u), "V": is_unimodular(dec.v)},
        "det_u": determinant(dec.u).to_strings(),
        "det_v": determinant(dec.v).to_strings(),
        "relation_exact": dec.certifies(plant),
        "diag": [f.to_json() for f in dec.diag],
    }
    _write_json(out / "certificate.json", certificate)
    print(f"wrote decomposition to {out} "
          f"(relation_exact={certificate['relation_exact']})")
    return EXIT_PASS


def cmd_stability(args) -> int:
    plant = _read_transfer_matrix(args.plant)
    controller = _read_transfer_matrix(args.controller)
    report = check_internal_stability(plant, controller, args.pole_tol)
    out = _outdir(args)
    _write_json(out / "stability.json", report.to_json())
    print(f"verdict: {report.verdict}")
    return EXIT_PASS if report.is_internally_stable else EXIT_PROPERTY_FAIL


def cmd_perf(args) -> int:
    plant = _read_transfer_matrix(args.plant)
    controller = _read_transfer_matrix(args.controller)
    weight = _read_weight(args.weight)
    grid = _grid_from_args(args)
    out = _outdir(args)
    gang = gang_of_six(plant, controller)
    if args.bound == "original":
        target = gang.S if args.sensitivity == "S" else gang.T
        report = performance_check_original(target, weight, grid,
                                            args.sigma_tol)
        _write_csv(out / "perf_curve.csv",
                   ["freq_hz", "weighted_sigma"],
                   [[f, v] for f, v in zip(report.curve.grid.hz,
                                           report.curve.values)])
        _write_json(out / "perf_report.json", report.to_json())
        print(f"performance ({args.sensitivity}, original domain): "
              f"{'pass' if report.passed else 'fail'} "
              f"worst={report.worst_value:.6g} at {report.worst_hz:.6g} Hz")
        return EXIT_PASS if report.passed else EXIT_PROPERTY_FAIL
    # diagonal-domain sufficient condition
    dec = smith_mcmillan(plant)
    tu = TransferMatrix.from_polymatrix(dec.u)
    tv = TransferMatrix.from_polymatrix(dec.v)
    tui = TransferMatrix.from_polymatrix(unimodular_inverse(dec.u))
    tvi = TransferMatrix.from_polymatrix(unimodular_inverse(dec.v))
    csm = tvi * controller * tui
    ess = gang_of_six(tu * plant * tv, csm)
    target = ess.S if args.sensitivity == "S" else ess.T
    report = essential_bound_check(target, weight, dec.u, grid,
                                   args.sigma_tol)
    _write_csv(out / "bound_curve.csv",
               ["freq_hz", "sigma_diag_domain", "bound"],
               [[f, l, r] for f, l, r in zip(report.lhs.grid.hz,
                                             report.lhs.values,
                                             report.rhs.values)])
    _write_json(out / "bound_report.json", report.to_json())
    verdict = "pass" if report.passed else "fail (inconclusive: sufficient only)"
    print(f"performance ({args.sensitivity}, diagonal-domain bound): {verdict}")
    return EXIT_PASS if report.passed else EXIT_PROPERTY_FAIL


def _bode_csv(out: Path, name: str, matrix, grid) -> None:
    header, rows = bode_export(matrix, grid)
    _write_csv(out / name, header, rows)


def cmd_example(args) -> int:
    from .plots import save_bound_figure, save_magnitude_figure, save_step_figure

    out = _outdir(args)
    grid = _grid_from_args(args)
    plant = two_mass_plant()
    _write_json(out / "plant.json", plant.to_json())

    dec = smith_mcmillan(plant)
    _write_json(out / "psm.json", dec.diagonal_matrix().to_json())
    _write_json(out / "U_computed.json", dec.u.to_json())
    _write_json(out / "V_computed.json", dec.v.to_json())
    u, v = known_transformation_pair()
    _write_json(out / "U.json", u.to_json())
    _write_json(out / "V.json", v.to_json())
    certificate = {
        "computed_pair": {
            "unimodular": {"U": is_unimodular(dec.u), "V": is_unimodular(dec.v)},
            "relation_exact": dec.certifies(plant),
        },
        "reference_pair": {
            "det_u": determinant(u).to_strings(),
            "det_v": determinant(v).to_strings(),
            "unimodular": {"U": is_unimodular(u), "V": is_unimodular(v)},
            "relation_exact": (TransferMatrix.from_polymatrix(u) * plant
                               * TransferMatrix.from_polymatrix(v)
                               == dec.diagonal_matrix()),
        },
        "min_relative_degrees": properness_min_reldeg(u, v),
    }
    _write_json(out / "certificate.json", certificate)

    c1, c2_d1 = design1_controllers(dec.diag)
    c2_d2 = make_design2(c1, dec.diag[0])
    designs = {
        "design1": TransferMatrix.diagonal([c1, c2_d1]),
        "design2": TransferMatrix.diagonal([c1, c2_d2]),
    }
    summary = {"bound_csv": "bound.csv", "grid_points": len(grid)}
    psm = dec.diagonal_matrix()
    step_times = np.linspace(0.0, 2.0, 600)
    loops_by_design = {}
    for name, csm in designs.items():
        _write_json(out / f"csm_{name}.json", csm.to_json())
        mapped = controller_backmap(csm, u, v)
        _write_json(out / f"c_{name}.json", mapped.to_json())
        ess = gang_of_six(psm, csm)
        loops_orig = transform_to_original(ess, u, v, plant)
        loops_by_design[name] = loops_orig
        _bode_csv(out, f"bode_lsm_{name}.csv", ess.L, grid)
        _bode_csv(out, f"bode_t_{name}.csv", loops_orig.T, grid)
        essential_report = check_internal_stability(psm, csm, args.pole_tol)
        original_report = check_internal_stability(plant, mapped, args.pole_tol)
        _write_json(out / f"stability_{name}.json", {
            "essential": essential_report.to_json(),
            "original": original_report.to_json(),
        })
        peaks = {}
        for i in range(2):
            for j in range(2):
                entry = TransferMatrix([[loops_orig.T[i, j]]])
                est = hinf_norm_estimate(entry, grid, args.pole_tol)
                peaks[f"T{i + 1}{j + 1}"] = est.to_json()
        resp = step_response(loops_orig.T, 1, step_times, args.pole_tol)
        _write_csv(out / f"step_{name}_r2.csv",
                   ["time_s", "x1", "x2"],
                   [[float(t), float(x1), float(x2)]
                    for t, x1, x2 in zip(resp.times, resp.output(0),
                                         resp.output(1))])
        save_step_figure(out / f"step_{name}_r2.png", resp.times,
                         {"x1": resp.output(0), "x2": resp.output(1)},
                         f"{name}: response to a unit step on r2")
        summary[name] = {
            "essential_verdict": essential_report.verdict,
            "original_verdict": original_report.verdict,
            "t_peaks": peaks,
            "t12_identically_zero": loops_orig.T[0, 1].is_zero,
            "t21_identically_zero": loops_orig.T[1, 0].is_zero,
        }

    # sufficient-condition curve for the complementary sensitivity, with the
    # industry-standard 1/1.25 magnitude weight
    weight = RatFunc.from_coeffs((4,), (5,))
    csm1 = designs["design1"]
    ess1 = gang_of_six(psm, csm1)
    bound = essential_bound_check(ess1.T, weight, u, grid, args.sigma_tol)
    _write_csv(out / "bound.csv",
               ["freq_hz", "sigma_tsm_design1", "bound"],
               [[f, l, r] for f, l, r in zip(bound.lhs.grid.hz,
                                             bound.lhs.values,
                                             bound.rhs.values)])
    summary["bound_at_lowest_hz"] = bound.rhs.values[0]
    summary["bound_passed"] = bound.passed
    _write_json(out / "summary.json", summary)

    # figures behind the published curves: diagonal-domain open loops,
    # closed-loop magnitudes for both designs, and the bound curve
    header, rows = bode_export(ess1.L, grid)
    hz = [r[0] for r in rows]
    save_magnitude_figure(out / "lsm_design1.png", hz,
                          {"L1 (diag domain)": [r[1] for r in rows],
                           "L2 (diag domain)": [r[5] for r in rows]},
                          "design1 diagonal-domain open loops")
    t_curves = {}
    for name in ("design1", "design2"):
        _, trows = bode_export(loops_by_design[name].T, grid)
        t_curves[f"{name} T11"] = [r[1] for r in trows]
        t_curves[f"{name} T12"] = [r[3] for r in trows]
    save_magnitude_figure(out / "t_magnitude.png", hz, t_curves,
                          "closed-loop magnitude, original domain")
    save_bound_figure(out / "bound.png", hz, bound.lhs.values,
                      bound.rhs.values,
                      "diagonal-domain sufficient bound for T")
    print(f"wrote benchmark artifact set to {out}")
    return EXIT_PASS


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError("must be strictly positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smdecouple",
        description="Exact Smith-McMillan decoupling toolkit")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--freq-min-hz", type=_positive_float, default=1e-2)
    parser.add_argument("--freq-max-hz", type=_positive_float, default=1e2)
    parser.add_argument("--points-per-decade", type=int, default=100)
    parser.add_argument("--pole-tol", type=_positive_float, default=1e-9,
                        help="marginal band for pole real parts")
    parser.add_argument("--sigma-tol", type=_positive_float, default=1e-12,
                        help="singular value convergence tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    p_smith = sub.add_parser("smith", help="Smith-McMillan decomposition")
    p_smith.add_argument("plant", help="plant TransferMatrix JSON")
    p_smith.set_defaults(func=cmd_smith)

    p_stab = sub.add_parser("stability", help="internal stability certificate")
    p_stab.add_argument("plant")
    p_stab.add_argument("controller")
    p_stab.set_defaults(func=cmd_stability)

    p_perf = sub.add_parser("perf", help="singular-value performance check")
    p_perf.add_argument("plant")
    p_perf.add_argument("controller")
    p_perf.add_argument("weight", help="scalar weight RatFunc JSON")
    p_perf.add_argument("--sensitivity", choices=("S", "T"), default="S")
    p_perf.add_argument("--bound", choices=("original", "essential"),
                        default="original")
    p_perf.set_defaults(func=cmd_perf)

    p_ex = sub.add_parser("example", help="reproduce the two-mass benchmark")
    p_ex.set_defaults(func=cmd_example)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, KeyError, TypeError,
            ValueError) as exc:
        # RankDeficiencyError and malformed inputs both land here
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ConvergenceError as exc:
        print(json.dumps({"error": "ConvergenceError", "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
