"""Command-line surface: generate, mine, update, window runs, benchmarks.

Reported timings cover the mining traversal only; reading input, item
preprocessing and writing artifacts are kept out of the clock (I/O time is
reported separately).  Exit codes: 0 success, 1 internal invariant
violation, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv as _csv
import io
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import arm, bitdata, oracle, preftree, synth, window
from .bitdata import TransactionDatabase
from .errors import ConsistencyError, ContractError, FormatError, ResourceLimitError
from .fim import fim_traversal
from .preftree import PrefTree

__all__ = ["main", "RunReport"]


@dataclass
class RunReport:
    command: str
    params: dict = field(default_factory=dict)
    mining_seconds: float = 0.0
    io_seconds: float = 0.0
    frequent_count: int = 0  # tree nodes, the empty itemset included
    rule_count: int = 0
    avg_size: float | None = None

    def to_text(self) -> str:
        lines = [f"command: {self.command}"]
        for key, value in self.params.items():
            lines.append(f"{key}: {value}")
        lines.append(f"frequent_count: {self.frequent_count}")
        if self.rule_count:
            lines.append(f"rule_count: {self.rule_count}")
        if self.avg_size is not None:
            lines.append(f"avg_size: {self.avg_size:.6f}")
        lines.append(f"mining_seconds: {self.mining_seconds:.6f}")
        lines.append(f"io_seconds: {self.io_seconds:.6f}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = _csv.writer(out, lineterminator="\n")
        header = ["command", "frequent_count", "rule_count", "avg_size", "mining_seconds", "io_seconds"]
        row = [
            self.command,
            self.frequent_count,
            self.rule_count,
            "" if self.avg_size is None else f"{self.avg_size:.6f}",
            f"{self.mining_seconds:.6f}",
            f"{self.io_seconds:.6f}",
        ]
        for key, value in self.params.items():
            header.append(key)
            row.append(value)
        writer.writerow(header)
        writer.writerow(row)
        return out.getvalue()


def average_itemset_size(tree: PrefTree, include_empty: bool = False) -> float | None:
    """Mean itemset size over the tree; the empty root is excluded unless
    asked for (including it drags the mean down by design)."""
    total = 0
    count = 0
    for items, _ in tree.enumerate():
        if not items and not include_empty:
            continue
        total += len(items)
        count += 1
    return total / count if count else None


def _load_db(path: str, fmt: str) -> TransactionDatabase:
    with open(path, "r", encoding="ascii") as fh:
        if fmt == "csv":
            return bitdata.load_csv_matrix(fh)
        return bitdata.load_horizontal(fh)


def _timed_mine(db, sigma, do_preprocess: bool, tau=None):
    """Mine with preprocessing held outside the clock.

    Returns (tree, order, rules or None, seconds).
    """
    if do_preprocess:
        workdb, order = bitdata.preprocess(db, sigma)
    else:
        workdb, order = db, bitdata.identity_order(db)
    t0 = time.perf_counter()
    if tau is None:
        tree = PrefTree(workdb.n_transactions)
        for item in range(workdb.n_items):
            fim_traversal(workdb, tree, item, sigma)
        rules = None
    else:
        tree = PrefTree(workdb.n_transactions)
        rules = []
        seen = set()
        for item in range(workdb.n_items):
            _, found = arm.arm_traversal(workdb, tree, item, sigma, tau)
            for _c, rt in found:
                for r in arm.emit_rules(rt, order.labels):
                    if r not in seen:
                        seen.add(r)
                        rules.append(r)
    seconds = time.perf_counter() - t0
    return tree, order, rules, seconds


def _profile_from_args(args) -> synth.GenProfile:
    if args.config:
        return synth.parse_profile_config(Path(args.config).read_text())
    if args.profile == "sparse":
        return synth.sparse_profile(args.n, args.N, args.seed)
    if args.profile == "dense":
        return synth.dense_profile(args.n, args.N, args.seed)
    return synth.GenProfile("ar3", args.n, args.N, args.seed, s=args.s)


def _generate(profile: synth.GenProfile) -> TransactionDatabase:
    if profile.kind == "ar3":
        return synth.gen_ar3(profile.n, profile.n_transactions, profile.s, profile.seed, profile.burn_in)
    return synth.gen_bernoulli(profile)


def cmd_gen(args) -> int:
    profile = _profile_from_args(args)
    db = _generate(profile)
    out = Path(args.out)
    with open(out, "w", encoding="ascii") as fh:
        if args.format == "csv":
            bitdata.dump_csv_matrix(db, fh)
        else:
            bitdata.dump_horizontal(db, fh)
    summary = synth.stats(db)
    print(f"wrote {out} ({summary})")
    return 0


def cmd_mine(args) -> int:
    t_io = time.perf_counter()
    db = _load_db(args.input, args.format)
    io_seconds = time.perf_counter() - t_io
    tree, order, rules, seconds = _timed_mine(
        db, args.minsup, not args.no_preprocess, args.minconf
    )
    report = RunReport(
        command="mine",
        params={
            "input": args.input,
            "minsup": args.minsup,
            "minconf": "" if args.minconf is None else args.minconf,
        },
        mining_seconds=seconds,
        frequent_count=tree.size,
        rule_count=0 if rules is None else len(rules),
        avg_size=average_itemset_size(tree, args.avg_include_empty),
    )

    t_io = time.perf_counter()
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "tree.txt", "w", encoding="ascii") as fh:
        preftree.dump_tree(tree, order.labels, fh)
    if rules is not None:
        if args.format == "csv":
            with open(outdir / "rules.csv", "w", encoding="ascii") as fh:
                arm.rules_to_csv(rules, fh)
        else:
            with open(outdir / "rules.txt", "w", encoding="ascii") as fh:
                for r in rules:
                    fh.write(arm.format_rule_line(r) + "\n")
    report.io_seconds = io_seconds + (time.perf_counter() - t_io)
    (outdir / "report.txt").write_text(report.to_text())
    (outdir / "report.csv").write_text(report.to_csv())
    print(report.to_text(), end="")
    return 0


def cmd_add(args) -> int:
    t_io = time.perf_counter()
    db = _load_db(args.input, args.format)
    with open(args.tree, "r", encoding="ascii") as fh:
        tree, base_labels = preftree.load_tree(fh)
    io_seconds = time.perf_counter() - t_io

    new_labels = [int(x) for x in args.labels.split(",") if x.strip()]
    for lab in new_labels:
        if lab in base_labels:
            raise ContractError(f"label {lab} is already part of the mined tree")
    # working database: base items in their mined order, then the new ones
    indices = [db.index_of(lab) for lab in base_labels + new_labels]
    workdb = db.restrict(indices)

    rules = []
    t0 = time.perf_counter()
    for lab in new_labels:
        if args.minconf is None:
            window.add_item(workdb, tree, lab, args.minsup)
        else:
            _, found = window.add_item(workdb, tree, lab, args.minsup, args.minconf)
            rules.extend(found)
    seconds = time.perf_counter() - t0

    report = RunReport(
        command="add",
        params={"tree": args.tree, "labels": args.labels, "minsup": args.minsup},
        mining_seconds=seconds,
        io_seconds=io_seconds,
        frequent_count=tree.size,
        rule_count=len(rules),
        avg_size=average_itemset_size(tree, args.avg_include_empty),
    )
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "tree.txt", "w", encoding="ascii") as fh:
        preftree.dump_tree(tree, workdb.labels, fh)
    if rules:
        with open(outdir / "rules.txt", "w", encoding="ascii") as fh:
            for r in rules:
                fh.write(arm.format_rule_line(r) + "\n")
    (outdir / "report.txt").write_text(report.to_text())
    print(report.to_text(), end="")
    return 0


def cmd_window(args) -> int:
    db = _load_db(args.input, args.format)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.minconf is None:
        run = window.mfim(db, args.q, args.Q, args.minsup)
    else:
        run = window.marm(db, args.q, args.Q, args.minsup, args.minconf)
    states = []
    trees_dir = outdir / "trees"
    if args.dump_trees:
        trees_dir.mkdir(exist_ok=True)
    for state in run:
        states.append(state)
        if args.dump_trees:
            with open(trees_dir / f"step_{state.step:04d}.txt", "w", encoding="ascii") as fh:
                preftree.dump_tree(state.tree, db.labels, fh)
    with open(outdir / "window.csv", "w", encoding="ascii") as fh:
        window.window_report_csv(states, fh)
    steady = sum(1 for s in states if s.phase == "steady")
    print(f"wrote {outdir / 'window.csv'}: {len(states)} steps ({steady} steady)")
    return 0


def cmd_bench(args) -> int:
    profile = _profile_from_args(args)
    db = _generate(profile)
    grid = [float(x) for x in args.grid.split(",") if x.strip()]
    rows = []
    for sigma in grid:
        seconds = []
        tree = None
        for _ in range(args.reps):
            tree, _order, _rules, sec = _timed_mine(db, sigma, True)
            seconds.append(sec)
        avg_seconds = sum(seconds) / len(seconds)
        rows.append(
            (
                sigma,
                tree.size,
                average_itemset_size(tree, args.avg_include_empty),
                avg_seconds,
            )
        )
        print(f"minsup={sigma}: count={tree.size} seconds={avg_seconds:.3f}")
    out = io.StringIO()
    writer = _csv.writer(out, lineterminator="\n")
    writer.writerow(["sigma", "count", "avg_size", "seconds"])
    for sigma, count, avg, sec in rows:
        writer.writerow([sigma, count, f"{avg:.6f}" if avg is not None else "", f"{sec:.6f}"])
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "bench.csv").write_text(out.getvalue())
    print(f"wrote {outdir / 'bench.csv'}")
    return 0


def cmd_oracle(args) -> int:
    db = _load_db(args.input, args.format)
    frequent = oracle.brute_fim(db, args.minsup)
    for items in sorted(frequent):
        label = ",".join(str(x) for x in items) if items else "-"
        print(f"{label}\t{frequent[items]}")
    if args.minconf is not None:
        for r in oracle.brute_rules(db, args.minsup, args.minconf):
            print(arm.format_rule_line(r))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prefixmine",
        description="Frequent itemset and association rule mining with incremental updates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common_io(p):
        p.add_argument("--input", required=True, help="transaction database file")
        p.add_argument("--format", choices=["fimi", "csv"], default="fimi")

    def add_minsup(p):
        p.add_argument("--minsup", type=float, required=True, help="relative support threshold")
        p.add_argument("--minconf", type=float, default=None, help="confidence threshold (enables rules)")

    def add_avg_flag(p):
        p.add_argument(
            "--avg-include-empty",
            action="store_true",
            help="include the empty itemset when averaging itemset sizes",
        )

    p = sub.add_parser("gen", help="generate a synthetic database")
    p.add_argument("--profile", choices=["sparse", "dense", "ar3"], default="sparse")
    p.add_argument("--n", type=int, default=100, help="number of items")
    p.add_argument("--N", type=int, default=1000, help="number of transactions")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s", type=float, default=synth.AR_SPARSE_THRESHOLD, help="ar3 threshold")
    p.add_argument("--config", default=None, help="profile config file (key=value lines)")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["fimi", "csv"], default="fimi")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("mine", help="mine a database")
    add_common_io(p)
    add_minsup(p)
    add_avg_flag(p)
    p.add_argument("--no-preprocess", action="store_true", help="keep the database's item order")
    p.add_argument("--out-dir", default="out")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("add", help="fold new items into a mined tree")
    add_common_io(p)
    add_minsup(p)
    add_avg_flag(p)
    p.add_argument("--tree", required=True, help="tree dump produced by mine/add")
    p.add_argument("--labels", required=True, help="comma-separated labels to add, in order")
    p.add_argument("--out-dir", default="out")
    p.set_defaults(func=cmd_add)

    p = sub.add_parser("window", help="moving-window mining over the item sequence")
    add_common_io(p)
    add_minsup(p)
    p.add_argument("--q", type=int, required=True, help="window capacity (frequent items)")
    p.add_argument("--Q", type=int, required=True, help="number of replacements")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--dump-trees", action="store_true", help="write the tree after every step")
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("bench", help="time mining over a threshold grid")
    p.add_argument("--profile", choices=["sparse", "dense", "ar3"], default="sparse")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--N", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s", type=float, default=synth.AR_SPARSE_THRESHOLD)
    p.add_argument("--config", default=None)
    p.add_argument("--grid", required=True, help="comma-separated minsup values")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--out-dir", default="out")
    add_avg_flag(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="brute-force reference (small inputs only)")
    add_common_io(p)
    add_minsup(p)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, ContractError, ResourceLimitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
