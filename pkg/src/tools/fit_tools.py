"""`fit`: one model by AECM, serialized with its log-likelihood trace."""
from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any, Optional

import numpy as np

from core.command_safety import command_safe
from core.errors import InvalidInputError
from core.model import ConstraintCode, Dataset
from skills.aecm.config import FitConfig
from skills.aecm.fitter import FitResult, fit
from skills.initialization.partitions import kmeans_partition, random_partition
from skills.selection.criteria import ari
from tools.common import (
    adapter,
    add_data_options,
    add_fit_options,
    add_output_option,
    default_path,
    fit_config,
    load_dataset_and_species,
    require_saved,
    restarts,
)


def starting_partition(
    data: Dataset,
    G: int,
    config: FitConfig,
    n_restarts: int,
    strategy: str = "kmeans",
    init_from: Optional[str] = None,
) -> np.ndarray:
    if init_from:
        previous = FitResult.from_dict(adapter().load_json(init_from, kind="cwfa-fit"))
        partition = np.array(previous.map_labels, dtype=np.int64)
        if partition.shape[0] != data.n or previous.G != G:
            raise InvalidInputError(f"{init_from} was fitted with n={partition.shape[0]}, G={previous.G}")
    elif strategy == "random":
        partition = random_partition(data.n, G, seed=config.seed)
    else:
        return kmeans_partition(data, G, restarts=n_restarts, seed=config.seed)
    if data.has_labels:
        data.check_labels(G)
        partition[data.labeled_mask] = data.labels[data.labeled_mask]
    return partition


def truth_labels(path: str) -> np.ndarray:
    document = adapter().load_json(path, kind="cwfa-truth")
    return np.asarray(document["labels"], dtype=np.int64)


@command_safe
def cmd_fit(args: argparse.Namespace) -> int:
    data, species = load_dataset_and_species(args)
    code = ConstraintCode.parse(args.code)
    if args.q > data.p:
        raise InvalidInputError(f"--q {args.q} exceeds p={data.p}")
    data.check_labels(args.G)
    config = fit_config(args)
    partition = starting_partition(data, args.G, config, restarts(args), args.start, args.init_from)
    result = fit(data, code, args.G, args.q, init_z=partition, config=config)
    out = Path(args.output) if args.output else default_path(f"fit_{code}_G{args.G}_q{args.q}.json")
    saved = require_saved(adapter().save_json(out, result.to_dict(include_responsibilities=not args.no_responsibilities)))
    status = "converged" if result.converged else "max iterations reached"
    print(
        f"{code} G={args.G} q={args.q}: loglik={result.final_loglik:.3f} BIC={result.bic:.3f} "
        f"iterations={result.iterations} ({status})"
    )
    if args.truth:
        print(f"ARI vs truth: {ari(result.map_labels, truth_labels(args.truth)):.4f}")
    elif species is not None:
        print(f"ARI vs species: {ari(result.map_labels, species):.4f}")
    print(f"model: {saved.location}")
    return 0


def register_commands(subparsers: Any) -> None:
    parser = subparsers.add_parser("fit", help="fit a single model")
    add_data_options(parser)
    parser.add_argument("--code", required=True, help="constraint code, e.g. UUCU")
    parser.add_argument("--G", type=int, required=True, help="number of components")
    parser.add_argument("--q", type=int, required=True, help="number of latent factors")
    parser.add_argument("--start", choices=("kmeans", "random"), default="kmeans", help="starting partition")
    parser.add_argument("--init-from", default=None, help="start from the MAP partition of a fit JSON")
    parser.add_argument("--truth", default=None, help="truth JSON from `simulate`; prints the ARI")
    parser.add_argument("--no-responsibilities", action="store_true", help="omit the n x G posterior matrix")
    add_fit_options(parser)
    add_output_option(parser, "model JSON path (default: <CWFA_OUTPUT_DIR>/fit_<code>_G<G>_q<q>.json)")
    parser.set_defaults(handler=cmd_fit)


__all__ = ["cmd_fit", "register_commands", "starting_partition", "truth_labels"]
