"""Command-line surface: compatibility checks, distances, and boundary CSV emission.

Angles are taken in degrees on the command line and converted once at parse
time.  CSV output uses '.' decimals, LF line endings, and 9 decimal places,
so repeated runs with the same flags and seed are byte identical.

Exit codes: 0 success, 2 invalid parameters, 3 solver failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

from .algebra import (
    BlochVector,
    ProblemInstance,
    effect_from_parameters,
    sharp_spin,
)
from .boundary import (
    METRICS,
    TradeoffPoint,
    boundary_curve,
    min_partner_distance,
    region_membership,
    saturation_distance,
    symmetric_optimum,
)
from .distances import (
    average_deviation,
    rms_distance,
    rms_decomposition,
    rms_noise,
    statistical_distance,
    worst_case_deviation,
)
from .errors import JmspinError, SolverDidNotConverge
from .measurability import (
    INDETERMINATE_BAND,
    busch_margin,
    joint_feasibility,
)

EXIT_OK = 0
EXIT_BAD_PARAMS = 2
EXIT_SOLVER = 3
EXIT_IO = 4

_FIGURE_THETAS = (30.0, 60.0, 90.0)


@dataclass
class RunConfig:
    """Validated run parameters shared by the curve-emitting commands."""

    command: str
    theta_deg: float = 90.0
    metric: str = "statistical"
    n_points: int = 200
    tol: float = 1e-9
    seed: int = 42
    output_path: str = ""

    def __post_init__(self):
        if not (0.0 < self.theta_deg <= 90.0):
            raise ValueError(f"theta must lie in (0, 90] degrees, got {self.theta_deg}")
        if self.n_points < 2:
            raise ValueError("points must be at least 2")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")


def _default_seed() -> int:
    try:
        return int(os.environ.get("JMSPIN_SEED", "42"))
    except ValueError:
        return 42


def _parse_vector(text: str) -> BlochVector:
    parts = text.replace(" ", "").split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated numbers, got {text!r}")
    return BlochVector(float(parts[0]), float(parts[1]), float(parts[2]))


def _print_effects(povm) -> None:
    for label, g in zip(("G_pp", "G_pm", "G_mp", "G_mm"), povm.effects()):
        v = g.vec
        print(
            f"{label} scalar={g.scalar:.12f} vec=({v.x:.12f},{v.y:.12f},{v.z:.12f})"
        )


def cmd_check(args) -> int:
    A = effect_from_parameters(args.alpha, _parse_vector(args.a))
    B = effect_from_parameters(args.beta, _parse_vector(args.b))
    margin = busch_margin(A.vec, B.vec)
    result = joint_feasibility(A, B, args.tol, seed=args.seed)

    unbiased = abs(A.alpha - 1.0) <= 1e-9 and abs(B.alpha - 1.0) <= 1e-9
    if unbiased:
        # the closed-form criterion is exact here; the oracle is advisory
        verdict = "jointly-measurable" if margin >= 0.0 else "not-jointly-measurable"
    elif abs(result.slack) < INDETERMINATE_BAND:
        verdict = "boundary-indeterminate"
    elif result.feasible:
        verdict = "jointly-measurable"
    else:
        verdict = "not-jointly-measurable"

    print(verdict)
    print(f"busch_margin {margin:.12f}")
    print(f"feasibility_slack {result.slack:.12f}")
    if args.witness and result.witness is not None:
        _print_effects(result.witness)
    return EXIT_OK


def cmd_distance(args) -> int:
    sharp = sharp_spin(_parse_vector(args.p))
    A = effect_from_parameters(args.alpha, _parse_vector(args.a))
    print(f"worst_case {worst_case_deviation(sharp, A):.9f}")
    print(f"average {average_deviation(sharp, A):.9f}")
    if abs(A.alpha - 1.0) <= 1e-9:
        print(f"statistical {statistical_distance(sharp, A):.9f}")
        accuracy, unsharpness = rms_decomposition(sharp, A)
        print(f"rms_accuracy_part {accuracy:.9f}")
        print(f"rms_unsharpness_part {unsharpness:.9f}")
    print(f"rms_distance {rms_distance(sharp, A):.9f}")
    if args.state is not None:
        state = _parse_vector(args.state)
        print(f"rms_noise {rms_noise(sharp, A, state):.9f}")
    return EXIT_OK


def _curve_rows(config: RunConfig) -> list[TradeoffPoint]:
    instance = ProblemInstance.from_angle(math.radians(config.theta_deg))
    return boundary_curve(instance, config.metric, config.n_points)


def _write_lines(path: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write("\n".join(lines) + "\n")


def _format_theta(theta_deg: float) -> str:
    return f"{theta_deg:g}"


def cmd_boundary(args) -> int:
    config = RunConfig(
        command="boundary",
        theta_deg=args.theta,
        metric=args.metric,
        n_points=args.points,
        tol=args.tol,
        seed=args.seed,
        output_path=args.out,
    )
    rows = _curve_rows(config)
    lines = ["theta_deg,metric,d1,d2"]
    theta_text = _format_theta(config.theta_deg)
    for pt in rows:
        lines.append(f"{theta_text},{config.metric},{pt.d1:.9f},{pt.d2:.9f}")
    _write_lines(config.output_path, lines)
    print(f"wrote {config.output_path} ({len(rows)} rows)", file=sys.stderr)
    return EXIT_OK


def cmd_region(args) -> int:
    config = RunConfig(
        command="region",
        theta_deg=args.theta,
        metric=args.metric,
        tol=args.tol,
        seed=args.seed,
    )
    instance = ProblemInstance.from_angle(math.radians(config.theta_deg))
    if args.d1 < 0.0 or args.d2 < 0.0:
        raise ValueError("d1 and d2 must be nonnegative")
    inside = region_membership(instance, args.d1, args.d2, config.metric)
    sat = saturation_distance(instance, config.metric)
    if args.d1 < sat:
        boundary_d2 = min_partner_distance(instance, args.d1, config.metric).d2
    else:
        boundary_d2 = 0.0
    print("inside" if inside else "outside")
    print(f"boundary_d2 {boundary_d2:.9f}", file=sys.stderr)
    return EXIT_OK


def _marker_point(instance: ProblemInstance, metric: str) -> tuple[float, float]:
    if metric == "statistical":
        opt = symmetric_optimum(instance)
        return opt.d_sym, opt.d_sym
    d = 2.0 * math.sin(0.25 * instance.theta)  # common direction at half tilt
    return d, d


def cmd_figure_data(args) -> int:
    which = args.which
    metric = "statistical" if which == "fig2" else "rms"
    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    for theta_deg in _FIGURE_THETAS:
        config = RunConfig(
            command="figure-data",
            theta_deg=theta_deg,
            metric=metric,
            n_points=args.points,
            seed=args.seed,
            output_path=out_dir,
        )
        rows = _curve_rows(config)
        instance = ProblemInstance.from_angle(math.radians(theta_deg))
        lines = ["theta_deg,metric,d1,d2,kind"]
        theta_text = _format_theta(theta_deg)
        for pt in rows:
            lines.append(f"{theta_text},{metric},{pt.d1:.9f},{pt.d2:.9f},curve")
        m1, m2 = _marker_point(instance, metric)
        lines.append(f"{theta_text},{metric},{m1:.9f},{m2:.9f},marker")
        path = os.path.join(out_dir, f"{which}_theta{int(theta_deg)}.csv")
        _write_lines(path, lines)
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jmspin",
        description=(
            "Joint measurability of two-outcome qubit observables: "
            "compatibility checks, approximation distances, and trade-off curves."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    seed_default = _default_seed()

    check = sub.add_parser("check", help="decide joint measurability of a pair")
    check.add_argument("--alpha", type=float, required=True)
    check.add_argument("--a", type=str, required=True, help="vector as x,y,z")
    check.add_argument("--beta", type=float, required=True)
    check.add_argument("--b", type=str, required=True, help="vector as x,y,z")
    check.add_argument("--tol", type=float, default=1e-9)
    check.add_argument("--seed", type=int, default=seed_default)
    check.add_argument("--witness", action="store_true", help="dump the four joint effects")
    check.set_defaults(func=cmd_check)

    distance = sub.add_parser("distance", help="distances from a sharp observable")
    distance.add_argument("--p", type=str, required=True, help="sharp direction as x,y,z")
    distance.add_argument("--alpha", type=float, required=True)
    distance.add_argument("--a", type=str, required=True, help="vector as x,y,z")
    distance.add_argument("--state", type=str, default=None, help="state r as x,y,z")
    distance.set_defaults(func=cmd_distance)

    bound = sub.add_parser("boundary", help="trade-off boundary curve as CSV")
    bound.add_argument("--theta", type=float, required=True, help="angle in degrees")
    bound.add_argument("--metric", choices=METRICS, default="statistical")
    bound.add_argument("--points", type=int, default=200)
    bound.add_argument("--tol", type=float, default=1e-9)
    bound.add_argument("--seed", type=int, default=seed_default)
    bound.add_argument("--out", type=str, required=True)
    bound.set_defaults(func=cmd_boundary)

    region = sub.add_parser("region", help="membership test for a distance pair")
    region.add_argument("--theta", type=float, required=True, help="angle in degrees")
    region.add_argument("--metric", choices=METRICS, default="statistical")
    region.add_argument("--d1", type=float, required=True)
    region.add_argument("--d2", type=float, required=True)
    region.add_argument("--tol", type=float, default=1e-9)
    region.add_argument("--seed", type=int, default=seed_default)
    region.set_defaults(func=cmd_region)

    figure = sub.add_parser("figure-data", help="boundary curves for theta 30/60/90")
    figure.add_argument("which", choices=("fig2", "fig4"))
    figure.add_argument("--points", type=int, default=200)
    figure.add_argument("--seed", type=int, default=seed_default)
    figure.add_argument("--out", type=str, default=".")
    figure.set_defaults(func=cmd_figure_data)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverDidNotConverge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (JmspinError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
