"""``limitwalk`` command-line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, TextIO

from . import oracle
from .boundary import REFINE_CONDITION
from .config import PatternConfig, load_config
from .cycle import CaseLabel, classify, summarize
from .errors import ConfigError, LimitWalkError, NumericalError, ValidationError
from .limitdist import LimitDistribution, build
from .roots import find_unit_roots

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2


def fmt(v: float) -> str:
    return f"{v:.12g}"


def r12(v: float) -> float:
    """Round to the 12 significant digits shown in the tables."""
    return float(fmt(v))


class Run:
    """Collects the report while a command prints its table."""

    def __init__(self, command: str, cfg: PatternConfig | None, out: TextIO, err: TextIO):
        self.out = out
        self.err = err
        self.report: dict[str, Any] = {"command": command}
        self.cfg = cfg

    def row(self, *cells) -> None:
        self.out.write("\t".join(fmt(c) if isinstance(c, float) else str(c) for c in cells) + "\n")

    def warn(self, msg: str) -> None:
        self.report.setdefault("warnings", []).append(msg)
        self.err.write(f"warning: {msg}\n")


# ------------------------------------------------------------------ helpers
def _summary_block(run: Run, summary) -> None:
    run.report["summary"] = {
        "N": summary.N,
        "D": summary.D,
        "M": summary.M,
        "mean_SN": r12(summary.mean_SN),
        "f_N_min": r12(summary.f(-summary.D)),
        "minima": list(summary.minima),
        "prefix_minima": list(summary.prefix_minima),
        "tail_error_total": r12(summary.tail_error_total),
        "overshoot": bool(summary.has_overshoot),
    }
    if summary.tail_error_total > 0:
        run.warn(f"truncated law tails drop {summary.tail_error_total:.3e} of probability mass")


def _prepare(run: Run) -> tuple:
    pattern = run.cfg.pattern()
    summary = summarize(pattern, run.cfg.tail_tol)
    _summary_block(run, summary)
    case = classify(summary)
    run.report["case"] = case.value
    if not run.cfg.overshoot and summary.has_overshoot and case.computable:
        run.warn("overshoot correction disabled: values constrain period ends only")
    return pattern, summary, case


def _root_rows(rs) -> list[dict]:
    return [
        {"re": r12(r.value.real), "im": r12(r.value.imag), "multiplicity": r.multiplicity, "residual": r12(res)}
        for r, res in zip(rs.roots, rs.residuals)
    ]


def _record_roots(run: Run, ld: LimitDistribution) -> None:
    if ld.roots is not None:
        run.report["roots"] = _root_rows(ld.roots)


def _record_boundary(run: Run, ld: LimitDistribution) -> None:
    bv = ld.boundary
    if bv is None:
        return
    run.report["boundary"] = {
        "base": bv.base,
        "values": [r12(v) for v in bv.values],
        "balance_residual": r12(bv.balance_residual),
        "system_condition": r12(bv.system_condition),
        "method": bv.method.value,
        "precision": bv.dps,
    }
    if bv.system_condition > REFINE_CONDITION and bv.dps is None:
        run.warn(f"boundary system condition number {bv.system_condition:.3e}; solved in extended precision")


def _trivial_note(case: CaseLabel, M: int) -> str:
    if case is CaseLabel.ZERO_FUNCTION:
        return "F∞ ≡ 0"
    return f"F∞(x) = 1 for x >= {M}, 0 otherwise"


# ----------------------------------------------------------------- commands
def cmd_summary(run: Run, args) -> None:
    _prepare(run)
    run.row("field", "value")
    for key, val in run.report["summary"].items():
        run.row(key, ",".join(map(str, val)) if isinstance(val, list) else val)
    run.row("case", run.report["case"])


def cmd_roots(run: Run, args) -> None:
    _, summary, case = _prepare(run)
    if not case.computable:
        run.report["note"] = _trivial_note(case, summary.M)
        run.row("case", case.value)
        run.row("note", run.report["note"])
        return
    rs = find_unit_roots(summary, run.cfg.build_config().roots)
    run.report["roots"] = _root_rows(rs)
    run.row("re", "im", "multiplicity", "residual")
    for d in run.report["roots"]:
        run.row(d["re"], d["im"], d["multiplicity"], d["residual"])


def cmd_init(run: Run, args) -> None:
    pattern, summary, case = _prepare(run)
    if not case.computable:
        run.report["note"] = _trivial_note(case, summary.M)
        run.row("case", case.value)
        run.row("note", run.report["note"])
        return
    ld = build(pattern, run.cfg.build_config())
    _record_roots(run, ld)
    _record_boundary(run, ld)
    run.row("x", "F_inf")
    for j, v in enumerate(ld.boundary.values):
        run.row(ld.base + j, r12(v))


def _range(args) -> range:
    if args.to < args.frm:
        raise ValidationError(f"--to {args.to} is below --from {args.frm}")
    return range(args.frm, args.to + 1)


def _built(run: Run) -> LimitDistribution:
    pattern, summary, case = _prepare(run)
    ld = build(pattern, run.cfg.build_config())
    _record_roots(run, ld)
    _record_boundary(run, ld)
    if not case.computable:
        run.report["note"] = _trivial_note(case, summary.M)
    return ld


def cmd_cdf(run: Run, args) -> None:
    ld = _built(run)
    rows = [(x, r12(ld.cdf(x))) for x in _range(args)]
    run.report["table"] = {"columns": ["x", "F_inf"], "rows": [list(r) for r in rows]}
    run.row("x", "F_inf")
    for x, v in rows:
        run.row(x, v)
    _record_error_estimate(run, ld)


def cmd_pmf(run: Run, args) -> None:
    ld = _built(run)
    rows = [(k, r12(ld.pmf_xi(k))) for k in _range(args)]
    run.report["table"] = {"columns": ["k", "f_inf"], "rows": [list(r) for r in rows]}
    run.row("k", "f_inf")
    for k, v in rows:
        run.row(k, v)
    _record_error_estimate(run, ld)


def _record_error_estimate(run: Run, ld: LimitDistribution) -> None:
    if ld.case.computable:
        run.report["recurrence_error_estimate"] = r12(ld.max_error_estimate)


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ValidationError(f"--s expects RE or RE,IM, got {text!r}")


def cmd_gf(run: Run, args) -> None:
    ld = _built(run)
    s = _parse_complex(args.s)
    val = ld.xi_series(s)
    name = "Xi" if ld.M <= 0 else "Xi_shifted"
    run.report["gf"] = {
        "name": name,
        "s": [r12(s.real), r12(s.imag)],
        "value": [r12(val.real), r12(val.imag)],
    }
    run.row("function", "s_re", "s_im", "value_re", "value_im")
    run.row(name, r12(s.real), r12(s.imag), r12(val.real), r12(val.imag))


def _parse_points(text: str) -> list[int]:
    try:
        pts = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ValidationError(f"--points expects comma-separated integers, got {text!r}") from None
    if not pts:
        raise ValidationError("--points is empty")
    return pts


def cmd_verify(run: Run, args) -> None:
    ld = _built(run)
    pts = _parse_points(args.points)
    vcfg = oracle.VerifyConfig(
        trials=args.trials, horizon=args.horizon, seed=args.seed, dp_convergence_tol=run.cfg.dp_convergence_tol
    )
    rows = oracle.verify(ld, pts, vcfg)
    run.report["verification"] = {
        "trials": vcfg.trials,
        "horizon": vcfg.horizon,
        "seed": vcfg.seed,
        "dp_convergence_tol": vcfg.dp_convergence_tol,
        "mc_sigmas": vcfg.mc_sigmas,
        "rows": [
            {
                "x": r.x,
                "analytic": r12(r.analytic),
                "dp": r12(r.dp.estimate),
                "mc": r12(r.mc.estimate),
                "mc_stderr": r12(r.mc.stderr),
                "verdict": r.verdict,
            }
            for r in rows
        ],
    }
    run.row("x", "analytic", "dp", "mc", "mc_stderr", "verdict")
    for d in run.report["verification"]["rows"]:
        run.row(d["x"], d["analytic"], d["dp"], d["mc"], d["mc_stderr"], d["verdict"])
    failed = [r.x for r in rows if not r.passed]
    if failed:
        run.warn(f"oracle disagreement at x = {', '.join(map(str, failed))}")


HANDLERS = {
    "summary": cmd_summary,
    "roots": cmd_roots,
    "init": cmd_init,
    "cdf": cmd_cdf,
    "pmf": cmd_pmf,
    "gf": cmd_gf,
    "verify": cmd_verify,
}


# ------------------------------------------------------------------ parsing
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH", help="JSON pattern configuration")
    common.add_argument("--json", metavar="PATH", help="write the full run report here")
    common.add_argument("--precision", type=int, metavar="DIGITS",
                        help="mpmath working precision (overrides the config)")
    common.add_argument("--no-overshoot", action="store_true",
                        help="constrain period ends only (plain one-period recursion)")

    p = _Parser(prog="limitwalk", description="Limit law of the running maximum of a periodic lattice walk.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("summary", parents=[common], help="one-period summary")
    sub.add_parser("roots", parents=[common], help="roots of G_N(s) = 1 in the unit disk")
    sub.add_parser("init", parents=[common], help="initial values of the limit law")
    for name, what in (("cdf", "F_inf(x)"), ("pmf", "f_inf(k)")):
        sp = sub.add_parser(name, parents=[common], help=f"table of {what}")
        sp.add_argument("--from", dest="frm", type=int, required=True)
        sp.add_argument("--to", type=int, required=True)
    sp = sub.add_parser("gf", parents=[common], help="generating function of F_inf at s")
    sp.add_argument("--s", required=True, metavar="RE,IM")
    sp = sub.add_parser("verify", parents=[common], help="compare with the DP and Monte Carlo oracles")
    sp.add_argument("--points", required=True, metavar="LIST")
    sp.add_argument("--trials", type=int, default=10**6)
    sp.add_argument("--horizon", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=1)
    return p


def _apply_flags(cfg: PatternConfig, args) -> PatternConfig:
    from dataclasses import replace

    if args.precision is not None:
        if args.precision < 16:
            raise ConfigError("--precision: use at least 16 digits")
        cfg = replace(cfg, precision=args.precision)
    if args.no_overshoot:
        cfg = replace(cfg, overshoot=False)
    return cfg


def run(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    command = "?"
    rep_path = None
    run_ = Run(command, None, out, err)
    try:
        args = make_parser().parse_args(argv)
        command, rep_path = args.command, args.json
        run_.report["command"] = command
        run_.cfg = _apply_flags(load_config(args.config), args)
        run_.report["config"] = args.config
        HANDLERS[command](run_, args)
        code = EXIT_OK
    except LimitWalkError as exc:
        code = EXIT_NUMERICAL if isinstance(exc, NumericalError) else EXIT_VALIDATION
        run_.report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        err.write(f"limitwalk: {type(exc).__name__}: {exc}\n")
    run_.report["exit_code"] = code
    if rep_path:
        with open(rep_path, "w", encoding="utf-8") as fh:
            json.dump(run_.report, fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    return code


def main(argv: list[str] | None = None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    try:
        return run(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
