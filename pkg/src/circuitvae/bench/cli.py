"""Command-line entry point: ``circuitvae <command> [flags]``."""
from __future__ import annotations

import argparse
import configparser
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from ..circuit import load_circuit
from ..models import load_checkpoint
from ..models.config import VARIANTS
from ..search import Target, block_optimize, perturb_search, search_report, select_best
from .config import build_config
from .pipeline import (
    BASELINE_VARIANT,
    cmd_baseline,
    cmd_eval,
    cmd_generate,
    cmd_train,
    derive_seed,
    find_checkpoint,
    read_csv,
    results_dir,
)
from .report import write_report

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2

log = logging.getLogger("circuitvae")


def _common() -> argparse.ArgumentParser:
    # SUPPRESS keeps unset flags out of the namespace so config values survive
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--config", help="INI/TOML-style key = value file")
    p.add_argument("--workdir", help="root for data/, checkpoints/, results/, report/")
    p.add_argument("--seed", type=int)
    p.add_argument("--variant", choices=VARIANTS, help="restrict to one model variant")
    p.add_argument("--map", dest="coupling_map", help="coupling map name or JSON file")
    p.add_argument("--opt", type=int, choices=(0, 1))
    p.add_argument("--mse-tol", dest="mse_tol", type=float)
    p.add_argument("--noise", dest="noise_scale", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="circuitvae", parents=[common], description="Graph-VAE circuit optimisation experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="write random circuits and train/test splits")
    sub.add_parser("train", parents=[common], help="train every variant/size/run")
    sub.add_parser("eval", parents=[common], help="nine reconstructions per test circuit")
    sub.add_parser("baseline", parents=[common], help="rule-based transpile baseline")
    sub.add_parser("report", parents=[common], help="summary tables and box plots")
    opt = sub.add_parser("optimize", parents=[common], help="search for a smaller equivalent circuit")
    opt.add_argument("circuit_file")
    opt.add_argument("--checkpoint", help="model directory (default: workdir checkpoints)")
    opt.add_argument("--output", help="write the optimised circuit here instead of stdout")
    opt.add_argument("--report", help="write the search report JSON here")
    opt.add_argument("--block-qubits", type=int, default=5, help="block width for wide circuits")
    return parser


def _config(args):
    ns = vars(args)
    overrides = {k: ns.get(k) for k in ("workdir", "seed", "coupling_map", "opt", "mse_tol", "noise_scale", "samples")}
    cfg = build_config(ns.get("config"), **overrides)
    if ns.get("variant"):
        cfg = replace(cfg, variants=(ns["variant"],))
    return cfg


def _report(cfg) -> list[Path]:
    rows = []
    for name in ("results.csv", "baseline.csv"):
        path = results_dir(cfg) / name
        if path.exists():
            rows.extend(read_csv(path))
    if not rows:
        raise FileNotFoundError(f"no results under {results_dir(cfg)}; run eval or baseline first")
    keep = set(cfg.variants) | {BASELINE_VARIANT}
    rows = [r for r in rows if r.variant in keep]
    return write_report(rows, Path(cfg.workdir) / "report", cfg.mse_tol)


def _optimize(cfg, args) -> None:
    circuit = load_circuit(args.circuit_file)
    variant = cfg.variants[0]
    target = Target(cfg.coupling_map, cfg.opt)
    rng = np.random.default_rng(derive_seed(cfg.seed, circuit.num_qubits, len(circuit.gates), 13))
    src_gates, src_depth = target.metrics(circuit)
    payload = None
    if args.checkpoint or circuit.num_qubits <= args.block_qubits:
        ckpt = args.checkpoint or find_checkpoint(cfg, variant, circuit.num_qubits, len(circuit.gates))
        model = load_checkpoint(ckpt)
        cands = perturb_search(circuit, model, cfg.samples, cfg.noise_scale, rng, target)
        best = select_best(cands, cfg.mse_tol, max_gates=src_gates)
        result = circuit if best is None else best.circuit
        payload = search_report(circuit, cands, cfg.mse_tol, target)
    else:
        models = {}
        for n in range(1, args.block_qubits + 1):
            try:
                models[n] = load_checkpoint(find_checkpoint(cfg, variant, n))
            except FileNotFoundError:
                continue
        result = block_optimize(circuit, models, cfg.mse_tol, cfg.samples, cfg.noise_scale, rng, target, args.block_qubits)
    new_gates, new_depth = target.metrics(result)
    if payload is None:
        payload = {
            "source": {"circuit": circuit.to_json(), "transpiled_gates": src_gates, "transpiled_depth": src_depth},
            "mse_tol": cfg.mse_tol,
            "candidates": [],
            "selected": {"circuit": result.to_json(), "transpiled_gates": new_gates, "transpiled_depth": new_depth},
        }
    if args.report:
        Path(args.report).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    text = result.to_text()
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"transpiled gates {src_gates} -> {new_gates}, depth {src_depth} -> {new_depth}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING, format="%(message)s")
    try:
        cfg = _config(args)
        if args.command == "generate":
            cmd_generate(cfg)
        elif args.command == "train":
            cmd_train(cfg)
        elif args.command == "eval":
            cmd_eval(cfg)
        elif args.command == "baseline":
            cmd_baseline(cfg)
        elif args.command == "report":
            _report(cfg)
        elif args.command == "optimize":
            _optimize(cfg, args)
    except (ValueError, FileNotFoundError, KeyError, configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
