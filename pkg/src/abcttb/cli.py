"""Command-line entry point: ``abcttb {recover,compare,tradeoff,fit,predict,gen}``.

Every run writes ``run.json`` holding the fully resolved configuration; passing
it back with ``--from-run`` reproduces the run's outputs byte for byte.

Exit codes: 0 success, 2 usage error, 3 data error, 4 acceptance stall.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import experiments, report
from .data import load_city_fixture, load_objects_csv, load_pairs, write_pairs_csv
from .errors import AcceptanceStall, ContractViolation, DataError
from .learn import DEFAULT_MAX_PROPOSALS, LearnerConfig, LearnerState, fit
from .predict import DEFAULT_OMEGA, predict_many
from .proposal import derive_seed, make_rng
from .synth import SynthConfig, generate

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_STALL = 0, 2, 3, 4
COMMANDS = ("recover", "compare", "tradeoff", "fit", "predict", "gen")

# Per-command defaults for flags shared across commands.
DEFAULTS = {
    "recover": dict(epsilon=0.1, phi=0.1, eta=100, replicates=100, n=1000),
    "compare": dict(epsilon=0.5, phi=0.1, eta=100, replicates=20,
                    fractions=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]),
    "tradeoff": dict(epsilon=0.1, phi=0.1, eta=100, replicates=20, n=1000,
                     grid_eps=[0.1, 0.5, 0.9], grid_phi=[0.1, 0.5, 0.9],
                     max_proposals=200_000),
    "fit": dict(epsilon=0.1, phi=0.1, eta=100, n=1000),
    "predict": dict(epsilon=0.1, phi=0.1, eta=100, n=1000),
    "gen": dict(n=1000),
}


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abcttb", description="Learn Take-The-Best trees by approximate Bayesian computation.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=Path, default=Path("results"))
        p.add_argument("--svg", action="store_true", help="also write SVG charts")
        p.add_argument("--from-run", type=Path, metavar="RUN_JSON",
                       help="take every setting from a previous run.json")
        p.add_argument("--n", type=int)
        if name == "gen":
            continue
        p.add_argument("--epsilon", type=float)
        p.add_argument("--phi", type=float)
        p.add_argument("--eta", type=int)
        p.add_argument("--max-proposals", type=int)
        p.add_argument("--count-all-decisions", action="store_true", default=None)
        p.add_argument("--normalize-increment", action="store_true", default=None,
                       help="add count / subsample size per accepted tree instead of the raw count")
        p.add_argument("--no-importance-failures", dest="importance_failures",
                       action="store_false", default=None)
        p.add_argument("--omega", type=int)
        if name in ("recover", "compare", "tradeoff"):
            p.add_argument("--replicates", type=int)
        if name in ("compare", "fit", "predict"):
            p.add_argument("--data", type=Path)
        if name == "compare":
            p.add_argument("--fractions", type=_float_list)
            p.add_argument("--cart-max-depth", type=int)
            p.add_argument("--cart-min-leaf", type=int)
        if name == "tradeoff":
            p.add_argument("--grid-eps", type=_float_list)
            p.add_argument("--grid-phi", type=_float_list)
        if name == "predict":
            p.add_argument("--state", type=Path, help="state.json written by 'fit'")
    return parser


LEARNER_KEYS = ("epsilon", "phi", "eta", "max_proposals", "count_all_decisions",
                "normalize_increment", "importance_failures")


def resolve(args: argparse.Namespace) -> dict:
    """Fill unset flags from the command defaults; return a JSON-ready config."""
    cmd = args.command
    base = dict(DEFAULTS[cmd])
    base.setdefault("max_proposals", DEFAULT_MAX_PROPOSALS)
    cfg = {"command": cmd, "seed": args.seed, "svg": bool(args.svg)}
    keys = set(vars(args)) - {"command", "seed", "out", "svg", "from_run"}
    for key in sorted(keys):
        value = getattr(args, key)
        if value is None:
            value = base.get(key)
        if isinstance(value, Path):
            value = str(value)
        cfg[key] = value
    if cmd != "gen":
        defaults = LearnerConfig()
        for key in ("count_all_decisions", "normalize_increment", "importance_failures"):
            if cfg.get(key) is None:
                cfg[key] = getattr(defaults, key)
        if cfg.get("omega") is None:
            cfg["omega"] = DEFAULT_OMEGA
    if cmd == "compare":
        cfg["cart_max_depth"] = cfg.get("cart_max_depth") or experiments.CartParams().max_depth
        cfg["cart_min_leaf"] = cfg.get("cart_min_leaf") or experiments.CartParams().min_leaf
    validate(cfg)
    return cfg


def validate(cfg: dict) -> None:
    def bad(flag, why):
        raise UsageError(f"{flag}: {why}")

    if cfg.get("n") is not None and cfg["n"] < 1:
        bad("--n", "must be a positive integer")
    if "epsilon" in cfg and not 0.0 <= cfg["epsilon"] < 1.0:
        bad("--epsilon", f"must satisfy 0 <= epsilon < 1, got {cfg['epsilon']}")
    if "phi" in cfg and not 0.0 < cfg["phi"] <= 1.0:
        bad("--phi", f"must satisfy 0 < phi <= 1, got {cfg['phi']}")
    if "eta" in cfg and cfg["eta"] < 1:
        bad("--eta", f"must be at least 1, got {cfg['eta']}")
    if "max_proposals" in cfg and cfg["max_proposals"] < cfg.get("eta", 1):
        bad("--max-proposals", f"must be at least eta ({cfg.get('eta')}), got {cfg['max_proposals']}")
    if "omega" in cfg and cfg["omega"] < 1:
        bad("--omega", f"must be at least 1, got {cfg['omega']}")
    if "replicates" in cfg and cfg["replicates"] < 1:
        bad("--replicates", f"must be at least 1, got {cfg['replicates']}")
    for f in cfg.get("fractions") or []:
        if not 0.0 < f < 1.0:
            bad("--fractions", f"each fraction must lie in (0, 1), got {f}")
    for e in cfg.get("grid_eps") or []:
        if not 0.0 <= e < 1.0:
            bad("--grid-eps", f"each epsilon must satisfy 0 <= epsilon < 1, got {e}")
    for p in cfg.get("grid_phi") or []:
        if not 0.0 < p <= 1.0:
            bad("--grid-phi", f"each phi must satisfy 0 < phi <= 1, got {p}")
    if cfg.get("cart_max_depth") is not None and cfg["cart_max_depth"] < 0:
        bad("--cart-max-depth", "must be non-negative")
    if cfg.get("cart_min_leaf") is not None and cfg["cart_min_leaf"] < 1:
        bad("--cart-min-leaf", "must be at least 1")


def parse_cli(argv=None):
    """Parse and validate ``argv``; returns ``(config dict, out dir)``.

    Raises :class:`UsageError` for invalid values; argparse itself exits
    with status 2 on malformed syntax.
    """
    args = build_parser().parse_args(argv)
    if args.from_run is not None:
        record = report.read_run_json(args.from_run)
        cfg = dict(record["config"])
        if cfg.get("command") != args.command:
            raise UsageError(f"--from-run: file records command {cfg.get('command')!r}, "
                             f"not {args.command!r}")
        validate(cfg)
        return cfg, args.out
    return resolve(args), args.out


def learner_config(cfg: dict) -> LearnerConfig:
    return LearnerConfig(**{k: cfg[k] for k in LEARNER_KEYS}, seed=cfg["seed"])


def _cmd_recover(cfg, out):
    result = experiments.run_recovery(cfg["n"], learner_config(cfg), cfg["replicates"], cfg["seed"])
    report.write_csv({"recovery": result}, out)
    final = result.final_shares()
    summary = {
        "mean_final_shares": final.mean(axis=0).tolist(),
        "mean_final_direction_means": np.mean(result.final_direction_means, axis=0).tolist(),
        "median_proposals": float(np.median(result.n_proposals)),
    }
    if cfg["svg"]:
        report.write_svg_chart(report.recovery_series(result), "accepted proposals",
                               "probability chosen first", out / "recovery.svg",
                               title="Importance share traces")
    return summary


def _table(cfg):
    return load_objects_csv(cfg["data"]) if cfg.get("data") else load_city_fixture()


def _cmd_compare(cfg, out):
    result = experiments.run_comparison(
        _table(cfg), cfg["fractions"], cfg["replicates"], learner_config(cfg), cfg["omega"],
        experiments.CartParams(cfg["cart_max_depth"], cfg["cart_min_leaf"]), cfg["seed"])
    report.write_csv({"comparison": result}, out)
    if result.warnings:
        report.write_table(out / "comparison_warnings.csv", ("fraction", "replicate", "reason"),
                           result.warnings)
    summary = {m: {repr(k): v for k, v in result.mean_by(m).items()} for m in experiments.MODELS}
    summary["skipped"] = len(result.warnings)
    if cfg["svg"] and result.rows:
        report.write_svg_chart(report.comparison_series(result), "training fraction",
                               "test accuracy", out / "comparison.svg", title="Model comparison")
    return summary


def _cmd_tradeoff(cfg, out):
    result = experiments.run_tradeoff(cfg["grid_eps"], cfg["grid_phi"], learner_config(cfg),
                                      cfg["replicates"], cfg["seed"], cfg["n"], cfg["omega"])
    report.write_csv({"tradeoff": result}, out)
    censored = [[r[0], r[1], r[2]] for r in result.rows if r[6]]
    summary = {"censored": censored}
    if cfg["svg"]:
        report.write_svg_chart(report.tradeoff_series(result, 3), "epsilon", "proposals",
                               out / "tradeoff_effort.svg", log_y=True, title="Effort")
        report.write_svg_chart(report.tradeoff_series(result, 4), "epsilon", "MCP",
                               out / "tradeoff_mcp.svg", title="Performance")
        report.write_svg_chart(report.tradeoff_series(result, 5), "epsilon", "MCP per proposal",
                               out / "tradeoff_ratio.svg", title="Trade-off")
    return summary


def _training_pairs(cfg):
    if cfg.get("data"):
        return load_pairs(cfg["data"])
    rng = make_rng(derive_seed(cfg["seed"], 0))
    pairs = generate(SynthConfig(n=cfg["n"]), rng)
    return pairs, tuple(f"c{i + 1}" for i in range(pairs.k))


def _state_summary(state: LearnerState, cue_names):
    return {
        "cues": list(cue_names),
        "importance_means": (state.imp_alpha / (state.imp_alpha + state.imp_beta)).tolist(),
        "importance_shares": state.importance_shares().tolist(),
        "direction_means": state.direction_means().tolist(),
        "accepted": state.accepted,
        "proposed": state.proposed,
    }


def _cmd_fit(cfg, out):
    import json

    pairs, cue_names = _training_pairs(cfg)
    state = fit(learner_config(cfg), pairs, make_rng(derive_seed(cfg["seed"], 1)))
    (out / "state.json").write_text(json.dumps(state.to_dict(), indent=2) + "\n", encoding="utf-8")
    if cfg["svg"]:
        trace = np.array(state.share_trace)
        series = {cue_names[c]: [(a + 1, float(trace[a, c])) for a in range(len(trace))]
                  for c in np.argsort(-trace[-1], kind="stable")}
        report.write_svg_chart(series, "accepted proposals", "probability chosen first",
                               out / "fit_trace.svg", title="Importance share trace")
    return _state_summary(state, cue_names)


def _cmd_predict(cfg, out):
    import json

    pairs, cue_names = _training_pairs(cfg)
    rng = make_rng(derive_seed(cfg["seed"], 2))
    if cfg.get("state"):
        state = LearnerState.from_dict(json.loads(Path(cfg["state"]).read_text(encoding="utf-8")))
    else:
        state = fit(learner_config(cfg), pairs, make_rng(derive_seed(cfg["seed"], 1)))
    if state.k != pairs.k:
        raise DataError(f"state has {state.k} cues but data has {pairs.k}")
    choose_a, share = predict_many(state, pairs, cfg["omega"], rng)
    rows = [(i, "A" if a else "B", float(s), int(y))
            for i, (a, s, y) in enumerate(zip(choose_a, share, pairs.outcome))]
    report.write_table(out / "predictions.csv", ("pair", "choice", "vote_share", "outcome"), rows)
    mcp = float(np.mean(choose_a == (pairs.outcome == 1)))
    summary = _state_summary(state, cue_names)
    summary["mcp"] = mcp
    return summary


def _cmd_gen(cfg, out):
    rng = make_rng(derive_seed(cfg["seed"], 0))
    pairs = generate(SynthConfig(n=cfg["n"]), rng)
    write_pairs_csv(pairs, out / "pairs.csv")
    return {"n_pairs": len(pairs)}


HANDLERS = {"recover": _cmd_recover, "compare": _cmd_compare, "tradeoff": _cmd_tradeoff,
            "fit": _cmd_fit, "predict": _cmd_predict, "gen": _cmd_gen}


def run(cfg: dict, out) -> dict:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    summary = HANDLERS[cfg["command"]](cfg, out)
    report.write_run_json(cfg, out, summary)
    return summary


def main(argv=None) -> int:
    try:
        cfg, out = parse_cli(argv)
    except UsageError as exc:
        print(f"abcttb: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, ValueError, KeyError) as exc:
        print(f"abcttb: cannot read run file: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        run(cfg, out)
    except AcceptanceStall as exc:
        print(f"abcttb: acceptance stall: {exc}", file=sys.stderr)
        return EXIT_STALL
    except (DataError, ContractViolation, OSError) as exc:
        print(f"abcttb: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
