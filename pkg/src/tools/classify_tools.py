"""`classify`: semi-supervised fit using the rows whose membership is known."""
from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from core.command_safety import command_safe
from core.errors import InvalidInputError
from skills.aecm.fitter import fit
from skills.selection.criteria import ari
from skills.selection.search import grid_search
from tools.common import (
    adapter,
    add_data_options,
    add_fit_options,
    add_output_option,
    code_list,
    default_path,
    fit_config,
    int_set,
    labels_frame_columns,
    load_dataset_and_species,
    require_saved,
    restarts,
    usable_G_set,
)
from tools.fit_tools import starting_partition, truth_labels
from tools.search_tools import describe_best, write_search_outputs
from utils.env_helpers import env_int


@command_safe
def cmd_classify(args: argparse.Namespace) -> int:
    data, species = load_dataset_and_species(args)
    if not data.has_labels:
        if species is not None:
            raise InvalidInputError("--format voles: pass --label-fraction to keep some species known")
        raise InvalidInputError(f"column {args.label_col!r} holds no known labels")
    G_set = int_set(args.G, "G")
    q_set = int_set(args.q, "q")
    codes = code_list(args.codes)
    if max(q_set) > data.p:
        raise InvalidInputError(f"--q: every q must be <= p={data.p}")
    G_set = usable_G_set(data, G_set)
    config = fit_config(args)
    out_dir = Path(args.output) if args.output else default_path("classify")

    if len(G_set) == 1 and len(q_set) == 1 and len(codes) == 1:
        G, q, code = G_set[0], q_set[0], codes[0]
        partition = starting_partition(data, G, config, restarts(args))
        result = fit(data, code, G, q, init_z=partition, config=config)
        print(f"{code} G={G} q={q}: BIC={result.bic:.3f}")
    else:
        jobs = env_int("CWFA_JOBS", 1) if args.jobs is None else args.jobs
        search = grid_search(data, G_set, q_set, codes=codes, config=config, restarts=restarts(args), jobs=jobs)
        write_search_outputs(search, out_dir / "search")
        result = search.best_result
        print(describe_best(search))

    given = np.asarray(data.labels, dtype=np.int64)
    predicted = np.where(data.labeled_mask, given, result.map_labels)
    frame = pd.DataFrame(labels_frame_columns(given, predicted))
    frame["given"] = frame["given"].map(lambda v: "" if v == 0 else str(v))
    store = adapter()
    labels_saved = require_saved(store.save_text(out_dir / "labels.csv", frame.to_csv(index=False, lineterminator="\n")))
    require_saved(store.save_json(out_dir / "model.json", result.to_dict(include_responsibilities=False)))
    unlabeled = int((~data.labeled_mask).sum())
    print(f"classified {unlabeled} unlabeled of {data.n} rows; labels: {labels_saved.location}")
    if args.truth:
        print(f"ARI vs truth: {ari(predicted, truth_labels(args.truth)):.4f}")
    elif species is not None:
        print(f"ARI vs species: {ari(predicted, species):.4f}")
    return 0


def register_commands(subparsers: Any) -> None:
    parser = subparsers.add_parser("classify", help="semi-supervised classification of unlabeled rows")
    add_data_options(parser, label_default="label")
    parser.add_argument("--G", required=True, help="component counts, e.g. 2 or 2-3")
    parser.add_argument("--q", default="1", help="factor counts, e.g. 1-3 (default: 1)")
    parser.add_argument("--codes", default="all", help="constraint codes or all")
    parser.add_argument("--jobs", type=int, default=None, help="parallel grid cells (env CWFA_JOBS, default 1)")
    parser.add_argument("--truth", default=None, help="truth JSON from `simulate`; prints the ARI")
    add_fit_options(parser)
    add_output_option(parser, "output directory (default: <CWFA_OUTPUT_DIR>/classify)")
    parser.set_defaults(handler=cmd_classify)


__all__ = ["cmd_classify", "register_commands"]
