"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 integrity
(unitarity) violation or failed oracle check, 3 I/O error.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from . import kernels
from .config import RunConfig, config_from_mapping, load_config, read_mapping
from .engine import evolve
from .errors import IntegrityError, UsageError, WalkError
from .experiments import compare_configs, random_phase_ensemble
from .observables import chirality_probs, gaussian_reference, moments, pmf
from .output import (
    ensure_dir,
    write_json,
    write_pmf_csv,
    write_table_csv,
    write_wavefunction_csv,
    write_wavefunction_json,
)
from .schedules import RandomPhaseSchedule
from .validation import oracle_check

EXIT_OK, EXIT_USAGE, EXIT_INTEGRITY, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common(p: argparse.ArgumentParser, config_required: bool = True) -> None:
    p.add_argument("--config", required=config_required, metavar="PATH", help="run configuration file")
    p.add_argument("--out", metavar="DIR", help="output directory (overrides the config)")
    p.add_argument("--seed", type=int, help="random-phase seed (overrides the config)")
    p.add_argument("--checkpoints", type=_int_list, metavar="LIST", help="snapshot steps, e.g. 10,20")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--parity-filter", choices=("on", "off"))
    p.add_argument("--threads", type=int, default=1, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tdqwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="evolve one configuration and write wave functions")
    _common(p)

    p = sub.add_parser("compare", help="compare two configurations at their final step")
    _common(p)
    p.add_argument("--reference", required=True, metavar="PATH", help="configuration to compare against")
    p.add_argument("--mode", choices=("auto", "none", "linear_beta", "alternating_alpha"), default="auto",
                   help="gauge twist to apply (auto: from the first config's schedule)")

    p = sub.add_parser("sweep", help="run a cartesian grid of configurations")
    _common(p)
    p.add_argument("--grid", action="append", default=[], metavar="KEY=V1,V2,...",
                   help="config key and values to sweep; repeat for more axes")

    p = sub.add_parser("oracle-check", help="cross-validate the engine against reference routines")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=500)

    p = sub.add_parser("decohere", help="random-phase ensemble with a variance-vs-t table")
    _common(p)
    p.add_argument("--ensemble", type=int, metavar="M", help="number of seeds (overrides the config)")
    p.add_argument("--times", type=_int_list, metavar="LIST",
                   help="steps to tabulate (default: checkpoints plus the final step)")
    return parser


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    changes = {}
    if args.out:
        changes["out"] = args.out
    if args.format:
        changes["format"] = args.format
    if args.parity_filter:
        changes["parity_filter"] = args.parity_filter == "on"
    if args.checkpoints is not None:
        bad = [c for c in args.checkpoints if not 0 <= c <= cfg.steps]
        if bad:
            raise UsageError(f"checkpoints {bad} fall outside [0, {cfg.steps}]")
        changes["checkpoints"] = tuple(sorted(set(args.checkpoints)))
    return replace(cfg, **changes)


def execute(cfg: RunConfig, out_dir: str, threads: int = 1) -> dict:
    """Evolve ``cfg`` and write its artifacts into ``out_dir``; returns the summary."""
    ensure_dir(out_dir)
    start = time.perf_counter()
    traj = evolve(cfg.init, cfg.schedule, cfg.steps, cfg.checkpoints)
    is_random = isinstance(cfg.schedule, RandomPhaseSchedule)
    ens = None
    if is_random and cfg.ensemble > 1:
        ens = random_phase_ensemble(
            cfg.init, cfg.schedule, [t for t in traj.times if t > 0], cfg.ensemble, threads=threads
        )
    checkpoints = []
    for t, state in traj.states.items():
        name = f"psi_t{t:06d}"
        if cfg.format == "csv":
            write_wavefunction_csv(os.path.join(out_dir, name + ".csv"), state, cfg.parity_filter)
        else:
            write_wavefunction_json(os.path.join(out_dir, name + ".json"), state, cfg.parity_filter)
        mean, var = moments(state)
        p_plus, p_minus = chirality_probs(state)
        entry = {"t": t, "mean": mean, "variance": var, "p_plus": p_plus, "p_minus": p_minus}
        if is_random and t > 0:
            dist = ens.pmfs[t] if ens is not None else pmf(state)
            dmean, dvar = (ens.means[ens.times.index(t)], ens.variances[ens.times.index(t)]) if ens else (mean, var)
            if dvar > 0:
                write_pmf_csv(os.path.join(out_dir, f"pmf_t{t:06d}.csv"), dist,
                              gaussian_reference(dmean, dvar, t))
            if ens is not None:
                entry["ensemble_variance"] = dvar
        checkpoints.append(entry)
    summary = {
        "config": cfg.echo(),
        "seed": cfg.seed,
        "backend": kernels.BACKEND,
        "checkpoints": checkpoints,
        "wall_time_s": time.perf_counter() - start,
    }
    write_json(os.path.join(out_dir, "summary.json"), summary)
    return summary


def cmd_run(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    summary = execute(cfg, cfg.out, args.threads)
    final = summary["checkpoints"][-1]
    print(f"t={final['t']} mean={final['mean']:.6g} variance={final['variance']:.6g} "
          f"P+={final['p_plus']:.6g} P-={final['p_minus']:.6g} -> {cfg.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    a = _apply_overrides(load_config(args.config), args)
    b = _apply_overrides(load_config(args.reference), args)
    mode = None if args.mode == "none" else args.mode
    report = compare_configs(a, b, mode).to_dict()
    report.update(config=args.config, reference=args.reference)
    if args.out:
        write_json(os.path.join(ensure_dir(args.out), "compare.json"), report)
    for key, value in report.items():
        print(f"{key}: {value}")
    return EXIT_OK


def _parse_grid(items: list[str]) -> list[tuple[str, list[str]]]:
    axes = []
    for item in items:
        key, sep, values = item.partition("=")
        if not sep or not values.strip():
            raise UsageError(f"--grid expects KEY=V1,V2,..., got {item!r}")
        axes.append((key.strip(), [v.strip() for v in values.split(",") if v.strip()]))
    return axes


def cmd_sweep(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        base, lines = read_mapping(fh.read())
    axes = _parse_grid(args.grid)
    combos = list(itertools.product(*(vals for _, vals in axes))) if axes else [()]
    configs = []
    for combo in combos:
        values = dict(base)
        values.update({key: v for (key, _), v in zip(axes, combo)})
        configs.append(_apply_overrides(config_from_mapping(values, lines), args))
    out_root = ensure_dir(args.out or configs[0].out)

    def one(k: int) -> dict:
        return execute(configs[k], os.path.join(out_root, f"run_{k:04d}"))

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            summaries = list(pool.map(one, range(len(configs))))
    else:
        summaries = [one(k) for k in range(len(configs))]

    keys = [key for key, _ in axes]
    rows = []
    for k, (combo, summary) in enumerate(zip(combos, summaries)):
        for cp in summary["checkpoints"]:
            rows.append([k, *combo, cp["t"], cp["mean"], cp["variance"], cp["p_plus"], cp["p_minus"]])
    write_table_csv(os.path.join(out_root, "sweep.csv"),
                    ["run", *keys, "t", "mean", "variance", "p_plus", "p_minus"], rows)
    print(f"{len(configs)} runs -> {out_root}")
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    if args.draws < 0:
        raise UsageError("--draws must be >= 0")
    if args.draws == 0:
        print("warning: draws=0, nothing checked", file=sys.stderr)
    results = oracle_check(args.seed, args.draws)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("oracle-check: " + ("PASS" if ok else "FAIL"))
    return EXIT_OK if ok else EXIT_INTEGRITY


def cmd_decohere(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    if not isinstance(cfg.schedule, RandomPhaseSchedule):
        raise UsageError("decohere needs a random_phase schedule")
    members = args.ensemble if args.ensemble is not None else cfg.ensemble
    times = args.times or sorted(set(cfg.checkpoints) | {cfg.steps})
    times = [t for t in times if t > 0]
    if not times:
        raise UsageError("decohere needs at least one positive step")
    start = time.perf_counter()
    ens = random_phase_ensemble(cfg.init, cfg.schedule, times, members, threads=args.threads)
    out_dir = ensure_dir(cfg.out)
    rows = []
    for k, t in enumerate(ens.times):
        rows.append([t, ens.means[k], ens.variances[k], float(ens.member_variances[:, k].mean()),
                     ens.tv_gaussian[k], ens.ks_gaussian[k], float(ens.member_tv[:, k].mean())])
        write_pmf_csv(os.path.join(out_dir, f"pmf_t{t:06d}.csv"), ens.pmfs[t], ens.gaussian(t))
    write_table_csv(
        os.path.join(out_dir, "decohere.csv"),
        ["t", "mean", "variance", "member_variance_mean", "tv_gaussian", "ks_gaussian", "member_tv_mean"],
        rows,
    )
    slope = ens.slope if len(ens.times) > 1 else None
    write_json(os.path.join(out_dir, "decohere.json"), {
        "config": cfg.echo(),
        "seeds": ens.seeds,
        "times": ens.times,
        "variances": ens.variances,
        "tv_gaussian": ens.tv_gaussian,
        "variance_slope": slope,
        "backend": kernels.BACKEND,
        "wall_time_s": time.perf_counter() - start,
    })
    for row in rows:
        print(f"t={row[0]} variance={row[2]:.6g} tv_gaussian={row[4]:.4f}")
    if slope is not None:
        print(f"variance slope (log-log): {slope:.4f}")
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "oracle-check": cmd_oracle_check,
    "decohere": cmd_decohere,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"tdqwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except IntegrityError as exc:
        print(f"tdqwalk: integrity violation: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except WalkError as exc:
        print(f"tdqwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"tdqwalk: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
