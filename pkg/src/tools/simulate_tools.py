"""`simulate`: draw a dataset from a built-in or user-supplied specification."""
from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any

from core.command_safety import command_safe
from core.errors import InvalidInputError
from skills.initialization.partitions import mask_labels
from skills.simulate.examples import builtin_specs
from skills.simulate.sampler import SimSpec, sample_dataset, simspec_from_dict
from tools.common import adapter, add_output_option, default_path, require_saved
from utils.env_helpers import env_int


def resolve_spec(name_or_path: str, seed: int) -> SimSpec:
    builtins = builtin_specs()
    if name_or_path in builtins:
        return builtins[name_or_path](seed)
    path = Path(name_or_path)
    if path.suffix.lower() != ".json":
        raise InvalidInputError(
            f"unknown spec {name_or_path!r}; expected one of {sorted(builtins)} or a JSON file"
        )
    document = adapter().load_json(path)
    if document.get("kind", "cwfa-simspec") != "cwfa-simspec":
        raise InvalidInputError(f"{path} holds {document.get('kind')!r}, expected 'cwfa-simspec'")
    return simspec_from_dict(document).with_seed(seed)


def truth_document(spec: SimSpec, labels: Any) -> dict:
    return {
        "kind": "cwfa-truth",
        "format_version": 1,
        "n": spec.n,
        "group_sizes": list(spec.group_sizes),
        "labels": [int(v) for v in labels],
        "spec": spec.to_dict(),
    }


@command_safe
def cmd_simulate(args: argparse.Namespace) -> int:
    seed = env_int("CWFA_SEED", 0) if args.seed is None else args.seed
    spec = resolve_spec(args.spec, seed)
    data, truth = sample_dataset(spec)
    csv_path = Path(args.output) if args.output else default_path(f"{spec.name}_seed{seed}.csv")
    truth_path = Path(args.truth) if args.truth else csv_path.with_suffix(".truth.json")
    labels = None
    if args.label_fraction is not None:
        labels = mask_labels(truth, args.label_fraction, seed=seed)
    store = adapter()
    written = require_saved(store.write_dataset_csv(csv_path, data, labels=labels, label_col=args.label_col))
    saved = require_saved(store.save_json(truth_path, truth_document(spec, truth)))
    print(f"dataset: {written.location} (n={data.n}, p={data.p}, G={spec.G})")
    print(f"truth: {saved.location}")
    return 0


def register_commands(subparsers: Any) -> None:
    parser = subparsers.add_parser("simulate", help="sample a dataset from a generative specification")
    parser.add_argument(
        "--spec",
        required=True,
        help="example1, example2, voles-surrogate, or a JSON simulation spec",
    )
    parser.add_argument("--seed", type=int, default=None, help="sampling seed (env CWFA_SEED, default 0)")
    add_output_option(parser, "dataset CSV path (default: <CWFA_OUTPUT_DIR>/<spec>_seed<seed>.csv)")
    parser.add_argument("--truth", default=None, help="truth JSON path (default: next to the CSV)")
    parser.add_argument(
        "--label-fraction",
        type=float,
        default=None,
        help="add a label column keeping this fraction of true labels (others blank)",
    )
    parser.add_argument("--label-col", default="label", help="name of the label column (default: label)")
    parser.set_defaults(handler=cmd_simulate)


__all__ = ["cmd_simulate", "register_commands", "resolve_spec", "truth_document"]
