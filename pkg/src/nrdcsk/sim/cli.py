"""Command-line entry point ``sim``.

::

    sim run --config sweep.ini [--seed N] [--out DIR] [--jobs J]
    sim spectrogram --config sweep.ini --stage tx|rx|cleaned --out FILE
    sim validate --config sweep.ini
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import ConfigError, config_to_text, load_config
from .harness import run_sweep
from .io import write_csv, write_matrix
from .spectrogram import STAGES, spectrogram, stage_signal

log = logging.getLogger("nrdcsk.sim")


def _cmd_run(args) -> int:
    overrides = {} if args.seed is None else {"seed": args.seed}
    cfg = load_config(args.config, **overrides)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def progress(done, total):
        if done == total or done % max(1, total // 20) == 0:
            log.info("trial %d/%d", done, total)

    meta = []
    points = run_sweep(cfg, metadata=meta, progress=progress, n_jobs=args.jobs)
    write_csv(points, out / "ber.csv")
    (out / "config.ini").write_text(config_to_text(cfg), encoding="ascii")
    flagged = [m for m in meta if m.get("vmd_converged") is False or
               m.get("ica_converged") is False]
    with open(out / "flags.jsonl", "w", encoding="ascii") as fh:
        for m in flagged:
            fh.write(json.dumps(m, sort_keys=True) + "\n")
    log.info("wrote %d BER points to %s (%d non-converged trial cells)",
             len(points), out / "ber.csv", len(flagged))
    return 0


def _cmd_spectrogram(args) -> int:
    cfg = load_config(args.config)
    spec = spectrogram(stage_signal(cfg, args.stage), cfg.window, cfg.hop)
    write_matrix(spec, args.out)
    log.info("wrote %dx%d spectrogram to %s", *spec.shape, args.out)
    return 0


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    print(f"{args.config}: OK ({len(cfg.jsr_db) * len(cfg.ebn0_db) * len(cfg.receivers)} "
          f"cells, {cfg.n_trials} trials each)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sim", description="NR-DCSK anti-jamming simulator")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="Monte-Carlo BER sweep -> ber.csv")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", default=".", help="output directory (default: .)")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes; results do not depend on it (default: 1)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("spectrogram", help="spectrogram of one block")
    p.add_argument("--config", required=True)
    p.add_argument("--stage", required=True, choices=STAGES)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_spectrogram)

    p = sub.add_parser("validate", help="check a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
