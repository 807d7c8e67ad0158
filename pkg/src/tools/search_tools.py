"""`search`: fit the (code × G × q) grid and rank models by BIC."""
from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any

from core.command_safety import command_safe
from core.errors import InvalidInputError
from skills.selection.report import group_factor_report
from skills.selection.search import START_STRATEGIES, SearchResult, grid_search
from tools.common import (
    adapter,
    add_data_options,
    add_fit_options,
    add_output_option,
    code_list,
    default_path,
    fit_config,
    int_set,
    load_dataset,
    require_saved,
    restarts,
    usable_G_set,
)
from utils.env_helpers import env_int


def write_search_outputs(result: SearchResult, out_dir: Path) -> None:
    """search.json, leaderboard.csv, report.txt, report.csv and best_model.json under `out_dir`."""
    store = adapter()
    report = group_factor_report(result)
    require_saved(store.save_json(out_dir / "search.json", result.to_dict()))
    require_saved(store.save_text(out_dir / "leaderboard.csv", result.leaderboard_frame().to_csv(index=False, lineterminator="\n")))
    require_saved(store.save_text(out_dir / "report.txt", report.to_text()))
    require_saved(store.save_text(out_dir / "report.csv", report.to_frame().to_csv(index=False, lineterminator="\n")))
    require_saved(store.save_json(out_dir / "best_model.json", result.best_result.to_dict(include_responsibilities=False)))


def describe_best(result: SearchResult) -> str:
    best = result.best_entry
    status = "" if best.converged else " (not converged)"
    return f"best: {best.code} G={best.G} q={best.q} BIC={best.bic:.3f}{status}"


@command_safe
def cmd_search(args: argparse.Namespace) -> int:
    data = load_dataset(args)
    G_set = int_set(args.G, "G")
    q_set = int_set(args.q, "q")
    codes = code_list(args.codes)
    if max(q_set) > data.p:
        raise InvalidInputError(f"--q: every q must be <= p={data.p}")
    G_set = usable_G_set(data, G_set)
    jobs = env_int("CWFA_JOBS", 1) if args.jobs is None else args.jobs
    result = grid_search(
        data,
        G_set,
        q_set,
        codes=codes,
        config=fit_config(args),
        restarts=restarts(args),
        jobs=jobs,
        start=args.start,
    )
    out_dir = Path(args.output) if args.output else default_path("search")
    write_search_outputs(result, out_dir)
    print(describe_best(result))
    print(f"models: {len(result.entries)}; outputs in {out_dir}")
    return 0


def register_commands(subparsers: Any) -> None:
    parser = subparsers.add_parser("search", help="grid search over constraint codes, G and q")
    add_data_options(parser)
    parser.add_argument("--G", default="1-3", help="component counts, e.g. 2,3 or 1-4 (default: 1-3)")
    parser.add_argument("--q", default="1-2", help="factor counts, e.g. 1,2 (default: 1-2)")
    parser.add_argument("--codes", default="all", help="constraint codes, e.g. UUCU,CCCC, or all")
    parser.add_argument("--jobs", type=int, default=None, help="parallel grid cells (env CWFA_JOBS, default 1)")
    parser.add_argument("--start", choices=START_STRATEGIES, default="kmeans", help="starting partition")
    add_fit_options(parser)
    add_output_option(parser, "output directory (default: <CWFA_OUTPUT_DIR>/search)")
    parser.set_defaults(handler=cmd_search)


__all__ = ["cmd_search", "register_commands", "write_search_outputs", "describe_best"]
