"""Command-line front end.

    qmdiqkd table   [--l-km L --eta E --dark D] [--mc --samples N --seed S] --out FILE
    qmdiqkd keyrate [--table FILE | --l-km L --eta E --dark D] [--out FILE]
    qmdiqkd sweep   [--eta E --dark D] --l-min A --l-max B --steps K --out FILE.csv
    qmdiqkd attack  {four-dim,single-bell} [--out FILE]
    qmdiqkd verify  [--samples N --seed S] [--out FILE]

Distances are sender-to-relay; the Alice-to-Bob distance is twice that.
Key rates are per sifted key bit of basis 0.

Exit codes: 0 success, 2 zero key rate, 3 infeasible statistics, 64 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import attacks, bound, channel, tables
from .channel import DetectorParams

EXIT_OK = 0
EXIT_ZERO_RATE = 2
EXIT_INFEASIBLE = 3
EXIT_USAGE = 64

SWEEP_HEADER = ["l_km", "rate_qmdi", "rate_baseline", "e_b", "e_p", "epsilon"]


class UsageError(Exception):
    pass


@dataclass
class SweepRange:
    l_min_km: float = 0.0
    l_max_km: float = 100.0
    steps: int = 21

    def __post_init__(self):
        if self.steps < 2:
            raise UsageError("--steps must be >= 2")
        if not self.l_min_km < self.l_max_km:
            raise UsageError("--l-min must be below --l-max")
        if self.l_min_km < 0:
            raise UsageError("--l-min must be >= 0")

    def distances(self) -> np.ndarray:
        return np.linspace(self.l_min_km, self.l_max_km, self.steps)


@dataclass
class RunConfig:
    command: str
    detector: DetectorParams
    bound: bound.BoundConfig
    table_path: str | None = None
    sweep: SweepRange | None = None
    seed: int = 0
    samples: int | None = None
    mc: bool = False
    out_path: str | None = None
    scenario: str | None = None
    extra: dict = field(default_factory=dict)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_detector(p):
    p.add_argument("--l-km", type=float, default=0.0, help="sender-to-relay distance in km")
    p.add_argument("--eta", type=float, default=0.1, help="detector efficiency")
    p.add_argument("--dark", type=float, default=1e-5, help="dark-count probability per gate")


def _add_bound(p):
    d = bound.BoundConfig()
    p.add_argument("--grid-u", type=int, default=d.grid_u)
    p.add_argument("--grid-r", type=int, default=d.grid_r)
    p.add_argument("--refine", type=int, default=d.refine_rounds, help="refinement rounds")
    p.add_argument("--pad", type=float, default=d.grid_pad, help="relative pad on epsilon")


def _add_common(p, samples_default=None):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=samples_default)
    p.add_argument("--out", default=None, help="output file (stdout if omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qmdiqkd", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("table", help="write an outcome table as JSON")
    _add_detector(p)
    _add_common(p, samples_default=10**6)
    p.add_argument("--mc", action="store_true", help="sample events instead of the closed form")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")

    p = sub.add_parser("keyrate", help="bound the key rate of a table")
    _add_detector(p)
    _add_bound(p)
    _add_common(p, samples_default=10**6)
    p.add_argument("--table", default=None, help="table JSON; overrides detector parameters")
    p.add_argument("--mc", action="store_true")

    p = sub.add_parser("sweep", help="key rate versus distance as CSV")
    _add_detector(p)
    _add_bound(p)
    _add_common(p)
    p.add_argument("--l-min", type=float, default=0.0)
    p.add_argument("--l-max", type=float, default=100.0)
    p.add_argument("--steps", type=int, default=21)

    p = sub.add_parser("attack", help="run an insecurity scenario")
    p.add_argument("scenario", choices=sorted(attacks.SCENARIOS))
    _add_common(p)

    p = sub.add_parser("verify", help="run the oracle cross-checks")
    _add_detector(p)
    _add_bound(p)
    _add_common(p, samples_default=10**4)
    return parser


def config_from_args(args) -> RunConfig:
    try:
        detector = DetectorParams(
            getattr(args, "l_km", 0.0), getattr(args, "eta", 0.1), getattr(args, "dark", 1e-5)
        )
        if hasattr(args, "grid_u"):
            cfg = bound.BoundConfig(
                grid_u=args.grid_u, grid_r=args.grid_r, refine_rounds=args.refine, grid_pad=args.pad
            )
        else:
            cfg = bound.BoundConfig()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not math.isfinite(cfg.grid_pad):
        raise UsageError("--pad must be finite")
    if args.samples is not None and args.samples < 1:
        raise UsageError("--samples must be >= 1")
    sweep = None
    if args.command == "sweep":
        sweep = SweepRange(args.l_min, args.l_max, args.steps)
    return RunConfig(
        command=args.command,
        detector=detector,
        bound=cfg,
        table_path=getattr(args, "table", None),
        sweep=sweep,
        seed=args.seed,
        samples=args.samples,
        mc=getattr(args, "mc", False),
        out_path=args.out,
        scenario=getattr(args, "scenario", None),
        extra={"csv": getattr(args, "csv", False)},
    )


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        tables.atomic_write_text(path, text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _make_table(cfg: RunConfig) -> tables.OutcomeTable:
    if cfg.table_path is not None:
        return tables.load(cfg.table_path)
    if cfg.mc:
        return channel.monte_carlo_table(cfg.detector, cfg.samples or 10**6, cfg.seed)
    return channel.closed_form_table(cfg.detector)


# -- commands --------------------------------------------------------------------


def cmd_table(cfg: RunConfig) -> int:
    t = _make_table(cfg)
    _emit(tables.to_csv(t) if cfg.extra.get("csv") else tables.dumps(t), cfg.out_path)
    return EXIT_OK


def _result_dict(res: bound.BoundResult) -> dict:
    out = res.to_dict()
    if res.argmax is not None:
        out["argmax"] = {k: float(v) for k, v in out["argmax"].items()}
    return out


def cmd_keyrate(cfg: RunConfig) -> int:
    t = _make_table(cfg)
    res = bound.key_rate(t, cfg.bound)
    out = _result_dict(res)
    out["rate_baseline"] = bound.baseline_key_rate(t)
    _emit(_json(out), cfg.out_path)
    return EXIT_OK if res.rate > 0 else EXIT_ZERO_RATE


def sweep_rows(detector: DetectorParams, rng: SweepRange, cfg: bound.BoundConfig) -> list[dict]:
    rows = []
    for l_km in rng.distances():
        params = DetectorParams(float(l_km), detector.eta, detector.d)
        t = channel.closed_form_table(params)
        res = bound.key_rate(t, cfg)
        rows.append(
            {
                "l_km": float(l_km),
                "rate_qmdi": res.rate,
                "rate_baseline": bound.baseline_key_rate(t),
                "e_b": res.e_b,
                "e_p": res.e_p,
                "epsilon": res.epsilon,
            }
        )
    return rows


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([format(float(row[k]), ".10g") for k in SWEEP_HEADER])
    return buf.getvalue()


def cmd_sweep(cfg: RunConfig) -> int:
    rows = sweep_rows(cfg.detector, cfg.sweep, cfg.bound)
    _emit(sweep_csv(rows), cfg.out_path)
    return EXIT_OK


def cmd_attack(cfg: RunConfig) -> int:
    report = attacks.run_scenario(cfg.scenario)
    _emit(_json(report), cfg.out_path)
    return EXIT_OK if report["passed"] else 1


def noisy_tables(weights=(0.05, 0.1)) -> dict:
    """Lossless ideal statistics mixed with uniform noise; the bound is nearly tight here."""
    ideal = tables.ideal_bb84_table()
    uniform = tables.OutcomeTable(np.full((len(tables.PAIRS), 3), 1 / 3))
    return {f"uniform-noise {w:g}": tables.mix([ideal, uniform], [1 - w, w]) for w in weights}


def verify_checks(cfg: RunConfig) -> list[dict]:
    checks = []
    n_mc = 10**5
    reference = channel.closed_form_table(cfg.detector)
    estimate = channel.monte_carlo_table(cfg.detector, n_mc, cfg.seed)
    mask = channel.within_sigma(estimate, reference, n_mc)
    checks.append(
        {
            "check": "monte-carlo vs closed form",
            "passed": bool(mask.all()),
            "entries_outside_4sigma": int((~mask).sum()),
        }
    )

    soundness = {"closed form": reference, **noisy_tables()}
    for i, (name, t) in enumerate(soundness.items()):
        res = bound.key_rate(t, cfg.bound)
        worst = bound.adversary_sampling(t, cfg.samples or 10**4, cfg.seed + i, cfg.bound)
        checks.append(
            {
                "check": f"adversary sampling <= epsilon_safe ({name})",
                "passed": bool(worst <= res.epsilon_safe),
                "sampled_max": worst,
                "epsilon": res.epsilon,
                "epsilon_safe": res.epsilon_safe,
            }
        )

    coarse = bound.BoundConfig(
        grid_u=max(2, cfg.bound.grid_u // 4), grid_r=max(1, cfg.bound.grid_r // 4), refine_rounds=0
    )
    eps_coarse = bound.epsilon_search(reference, coarse)[0]
    eps_fine = bound.epsilon_search(reference, cfg.bound)[0]
    checks.append(
        {
            "check": "refinement does not decrease epsilon",
            "passed": bool(eps_fine >= eps_coarse - cfg.bound.feas_tol),
            "epsilon_coarse": eps_coarse,
            "epsilon_refined": eps_fine,
        }
    )
    return checks


def cmd_verify(cfg: RunConfig) -> int:
    checks = verify_checks(cfg)
    ok = all(c["passed"] for c in checks)
    _emit(_json({"passed": ok, "checks": checks}), cfg.out_path)
    return EXIT_OK if ok else 1


COMMANDS = {
    "table": cmd_table,
    "keyrate": cmd_keyrate,
    "sweep": cmd_sweep,
    "attack": cmd_attack,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"qmdiqkd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except bound.InfeasibleStatisticsError as exc:
        print(f"qmdiqkd: infeasible statistics: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except bound.ZeroGainError as exc:
        print(f"qmdiqkd: {exc}", file=sys.stderr)
        return EXIT_ZERO_RATE
    except tables.TableError as exc:
        print(f"qmdiqkd: bad table: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qmdiqkd: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
