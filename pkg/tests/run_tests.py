"""
Suite runner: one pytest process per suite, with `src/` on PYTHONPATH.

    python tests/run_tests.py unit
    python tests/run_tests.py acceptance          # slow reproductions
    python tests/run_tests.py --file test_cli.py
"""
import argparse
import os
import subprocess
import sys
from typing import List, Sequence

TESTS_DIR = os.path.dirname(os.path.abspath(__file__))
REPO_ROOT = os.path.dirname(TESTS_DIR)
SRC_DIR = os.path.join(REPO_ROOT, "src")

UNIT = (
    "test_smart_logger.py",
    "test_env_helpers.py",
    "test_validators.py",
    "test_model_core.py",
    "test_parameters.py",
    "test_density.py",
    "test_aecm.py",
    "test_simulate.py",
    "test_storage.py",
)
INTEGRATION = (
    "test_fit.py",
    "test_initialization.py",
    "test_selection.py",
    "test_cli.py",
    "test_reproduction.py",
)
TEST_SUITES = {
    "unit": UNIT,
    "integration": INTEGRATION,
    # only the tests marked slow
    "acceptance": ("test_fit.py", "test_reproduction.py"),
    "all": UNIT + INTEGRATION,
}


def _environment(slow: bool) -> dict:
    env = dict(os.environ)
    env.setdefault("PYTHONIOENCODING", "utf-8")
    env.setdefault("CWFA_LOG_TO_FILE", "0")
    if slow:
        env["CWFA_RUN_SLOW"] = "1"
    paths = [REPO_ROOT, SRC_DIR] + [p for p in [env.get("PYTHONPATH", "")] if p]
    env["PYTHONPATH"] = os.pathsep.join(paths)
    return env


def run_pytest(files: Sequence[str], slow: bool = False) -> int:
    missing = [f for f in files if not os.path.exists(os.path.join(TESTS_DIR, f))]
    if missing:
        print(f"[WARN] missing test files: {', '.join(missing)}")
        return 1
    command: List[str] = [sys.executable, "-m", "pytest", "-q"]
    command += [os.path.join(TESTS_DIR, f) for f in files]
    if slow:
        command += ["-m", "slow"]
    print(f"[RUN] {' '.join(files)}")
    return subprocess.run(command, cwd=REPO_ROOT, env=_environment(slow)).returncode


def main(argv: Sequence[str] = None) -> int:
    parser = argparse.ArgumentParser(description="CWFA test runner")
    parser.add_argument("suite", nargs="?", default="all", choices=list(TEST_SUITES))
    parser.add_argument("--list", action="store_true", help="list suites and their files")
    parser.add_argument("--file", help="run a single test file")
    args = parser.parse_args(argv)
    if args.list:
        for name, files in TEST_SUITES.items():
            print(f"{name}:")
            print("".join(f"  - {f}\n" for f in files), end="")
        return 0
    if args.file:
        return run_pytest([args.file])
    code = run_pytest(TEST_SUITES[args.suite], slow=args.suite == "acceptance")
    print(f"[SUMMARY] suite={args.suite} {'passed' if code == 0 else 'failed'} (pytest exit {code})")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
