"""Command-line front end: generate fleets, run solvers, compare, verify."""

from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from .baselines import solve_fixed_interval, solve_spontaneous
from .discretize import prepare_fleet
from .dp import solve_dp_ls, solve_dp_nls
from .model import (
    MONEY_TOL,
    ContractViolation,
    HorizonExceededError,
    InfeasibleTruckError,
    NoFeasibleScheduleError,
)
from .oracle import oracle_consecutive
from .scenario import (
    GenerationError,
    InstanceFormatError,
    ScenarioConfig,
    generate,
    load_instance,
    save_instance,
    save_solution,
)
from .verification import (
    check_dp_vs_consecutive,
    check_ft_only_exact,
    check_mixed_upper_bound,
)

THREADS_ENV = "PLATOON_COORD_THREADS"

METHODS = ("dp-ls", "dp-nls", "spontaneous", "fixed-interval")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help="fleet size")
    parser.add_argument("--et-share", type=float, help="electric fraction of the fleet")
    parser.add_argument("--arrival-lo", type=int, help="earliest arrival minute")
    parser.add_argument("--arrival-hi", type=int, help="latest arrival minute")
    parser.add_argument("--horizon", type=float, help="planning horizon in minutes")
    parser.add_argument("--distance", type=float, help="hub-to-hub distance in km")
    parser.add_argument("--nbar", type=int, help="maximum platoon size")
    parser.add_argument("--soc-lo", type=float, help="lowest initial SoC drawn for ETs")
    parser.add_argument("--soc-hi", type=float, help="highest initial SoC drawn for ETs")


def _config_from_args(args, seed: int) -> ScenarioConfig:
    overrides = {
        "n_trucks": args.n,
        "et_share": args.et_share,
        "arrival_lo": args.arrival_lo,
        "arrival_hi": args.arrival_hi,
        "horizon": args.horizon,
        "distance": args.distance,
        "max_platoon_size": args.nbar,
        "soc_lo": args.soc_lo,
        "soc_hi": args.soc_hi,
        "interval": getattr(args, "interval", None),
    }
    cfg = ScenarioConfig(seed=seed)
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})


def _run_method(method: str, instance, seed: int, interval: float):
    prepared = prepare_fleet(instance)
    route, econ = instance.route, instance.econ
    if method == "dp-ls":
        return solve_dp_ls(prepared, route, econ)
    if method == "dp-nls":
        return solve_dp_nls(prepared, route, econ, seed)
    if method == "spontaneous":
        return solve_spontaneous(prepared, route, econ, seed)
    if method == "fixed-interval":
        return solve_fixed_interval(prepared, route, econ, interval, seed)
    raise ContractViolation(f"unknown method {method!r}")


def _print_summary(solution, stream=None) -> None:
    stream = stream if stream is not None else sys.stdout
    d = solution.diagnostics
    sizes = " ".join(f"{k}x{v}" for k, v in sorted(d.platoon_sizes.items()))
    print(f"method          {solution.method}", file=stream)
    print(f"profit   (R)    {solution.profit:.4f}", file=stream)
    print(f"loss     (L)    {solution.loss:.4f}", file=stream)
    print(f"utility  (J)    {solution.utility:.4f}", file=stream)
    print(f"platoons        {len(solution.platoons)}  [{sizes}]", file=stream)
    print(f"leaders         ET-led {d.et_led}, FT-led {d.ft_led}", file=stream)
    if d.dp_updates is not None:
        print(f"value updates   {d.dp_updates}", file=stream)
    if d.horizon_violation:
        print("warning         some departures fall past the horizon", file=stream)
    if d.solve_ms is not None:
        backend = f" ({d.backend})" if d.backend else ""
        print(f"solve time      {d.solve_ms:.1f} ms{backend}", file=stream)


def _cmd_generate(args) -> int:
    cfg = _config_from_args(args, args.seed)
    instance = generate(cfg)
    save_instance(instance, args.out, config=cfg)
    n_et = sum(1 for t in instance.trucks if t.is_electric)
    print(f"seed {cfg.seed}: wrote {len(instance.trucks)} trucks "
          f"({len(instance.trucks) - n_et} FT, {n_et} ET) to {args.out}")
    return 0


def _solution_rows_csv(solution):
    yield ["platoon", "depart", "leader_id", "leader_type", "id", "role",
           "charge", "wait", "soc_dep", "soc_arr"]
    for k, p in enumerate(solution.platoons):
        for row in p.ledger:
            yield [k, repr(p.departure_time), p.leader_id, p.leader_type.value,
                   row.truck_id, row.role.value, repr(row.charge_time),
                   repr(row.wait_time),
                   "" if row.departure_soc is None else repr(row.departure_soc),
                   "" if row.arrival_soc is None else repr(row.arrival_soc)]


def _cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    seed = instance.seed if args.seed is None else args.seed
    solution = _run_method(args.method, instance, seed, args.interval)
    _print_summary(solution)
    if args.oracle_check:
        if args.method != "dp-ls":
            print("--oracle-check only applies to --method dp-ls", file=sys.stderr)
            return 2
        prepared = prepare_fleet(instance)
        exact = oracle_consecutive(prepared, instance.route, instance.econ)
        diff = abs(solution.utility - exact.utility)
        print(f"oracle check    exhaustive J {exact.utility:.6f}, diff {diff:.3e}")
        if diff > MONEY_TOL:
            print("oracle check FAILED", file=sys.stderr)
            return 1
    if args.out:
        if args.format == "json":
            save_solution(solution, args.out, include_timing=args.timing)
        else:
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                csv.writer(fh).writerows(_solution_rows_csv(solution))
        print(f"wrote {args.out}")
    return 0


def _parse_seeds(text: str):
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            lo, hi = part.split(":", 1)
            seeds.extend(range(int(lo), int(hi)))
        elif part:
            seeds.append(int(part))
    if not seeds:
        raise ContractViolation(f"no seeds in {text!r}")
    return seeds


def _compare_one(seed: int, args, fixed_instance):
    if fixed_instance is not None:
        instance = fixed_instance
    else:
        instance = generate(_config_from_args(args, seed))
    row = {}
    for method in METHODS:
        row[method] = _run_method(method, instance, seed, args.interval)
    return row


def _cmd_compare(args) -> int:
    seeds = _parse_seeds(args.seeds)
    fixed_instance = load_instance(args.instance) if args.instance else None
    threads = int(os.environ.get(THREADS_ENV, "1") or "1")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda s: _compare_one(s, args, fixed_instance), seeds))
    else:
        results = [_compare_one(s, args, fixed_instance) for s in seeds]

    prefix = args.out
    summary_path = f"{prefix}_summary.csv"
    leaders_path = f"{prefix}_leaders.csv"
    sizes_path = f"{prefix}_sizes.csv"

    with open(summary_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "seed", "R", "L", "J", "platoons",
                    "pct_size_6_8", "et_led", "ft_led", "solve_ms"])
        for seed, row in zip(seeds, results):
            for method in METHODS:
                sol = row[method]
                d = sol.diagnostics
                n_platoons = len(sol.platoons)
                big = sum(v for k, v in d.platoon_sizes.items() if 6 <= k <= 8)
                pct = 100.0 * big / n_platoons if n_platoons else 0.0
                w.writerow([
                    method, seed, repr(sol.profit), repr(sol.loss),
                    repr(sol.utility), n_platoons, repr(pct), d.et_led, d.ft_led,
                    repr(d.solve_ms) if args.timing and d.solve_ms is not None else "",
                ])

    with open(leaders_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["seed", "dp_ls_et_led", "dp_ls_ft_led",
                    "dp_nls_et_led", "dp_nls_ft_led"])
        for seed, row in zip(seeds, results):
            w.writerow([seed,
                        row["dp-ls"].diagnostics.et_led,
                        row["dp-ls"].diagnostics.ft_led,
                        row["dp-nls"].diagnostics.et_led,
                        row["dp-nls"].diagnostics.ft_led])

    with open(sizes_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["seed", "size", "count"])
        for seed, row in zip(seeds, results):
            for size, count in sorted(row["dp-ls"].diagnostics.platoon_sizes.items()):
                w.writerow([seed, size, count])

    for seed, row in zip(seeds, results):
        cells = "  ".join(f"{m}={row[m].utility:.1f}" for m in METHODS)
        print(f"seed {seed}: {cells}")
    print(f"wrote {summary_path}, {leaders_path}, {sizes_path}")
    return 0


def _cmd_verify(args) -> int:
    checks = [
        check_dp_vs_consecutive(trials=args.trials, seed=args.seed),
        check_ft_only_exact(trials=args.full_trials, seed=args.seed),
        check_mixed_upper_bound(trials=args.full_trials, seed=args.seed),
    ]
    failed = False
    for result in checks:
        tag = "PASS" if result.passed else "FAIL"
        print(f"{tag} {result.name}: {result.detail}")
        failed = failed or not result.passed
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platoon-coord",
        description="Coordinate hub departures of a mixed fuel/electric truck fleet.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a random fleet instance file")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default="instance.json")
    _add_config_flags(p_gen)
    p_gen.set_defaults(func=_cmd_generate)

    p_solve = sub.add_parser("solve", help="run one method on an instance file")
    p_solve.add_argument("instance")
    p_solve.add_argument("--method", choices=METHODS, required=True)
    p_solve.add_argument("--seed", type=int, default=None,
                         help="seed for randomized methods (default: instance seed)")
    p_solve.add_argument("--interval", type=float, default=30.0,
                         help="slot length for fixed-interval, minutes")
    p_solve.add_argument("--out", default=None, help="solution file to write")
    p_solve.add_argument("--format", choices=("json", "csv"), default="json")
    p_solve.add_argument("--timing", action="store_true",
                         help="include wall-clock timing in the output file")
    p_solve.add_argument("--oracle-check", action="store_true",
                         help="assert equality with the exhaustive search (small fleets)")
    p_solve.set_defaults(func=_cmd_solve)

    p_cmp = sub.add_parser("compare", help="run all methods over a seed sweep")
    p_cmp.add_argument("instance", nargs="?", default=None,
                       help="optional fixed instance; defaults to one generated per seed")
    p_cmp.add_argument("--seeds", default="0:10",
                       help="comma list and lo:hi ranges, e.g. 0:10 or 1,2,5")
    p_cmp.add_argument("--interval", type=float, default=30.0)
    p_cmp.add_argument("--out", default="compare", help="output file prefix")
    p_cmp.add_argument("--timing", action="store_true")
    _add_config_flags(p_cmp)
    p_cmp.set_defaults(func=_cmd_compare)

    p_ver = sub.add_parser("verify", help="cross-check the solver against exhaustive search")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--trials", type=int, default=50,
                       help="fleets for the consecutive-search check")
    p_ver.add_argument("--full-trials", type=int, default=20,
                       help="fleets for the full-search checks")
    p_ver.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ContractViolation, GenerationError, InstanceFormatError,
            HorizonExceededError, InfeasibleTruckError, NoFeasibleScheduleError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
