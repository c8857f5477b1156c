#!/usr/bin/env python3
"""Materialize the four evaluation conditions plus the composite-task test set.

Writes one JSONL + manifest per preset into --out-dir. The full suite is
7200 examples per condition; pass --count for a small smoke build.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from symbench.harness import generate_dataset_file, load_bank
from symbench.presets import dataset_preset

EVAL_PRESETS = ["interp", "sem-extrap", "sys-extrap", "semsys-extrap", "hardobj-5k"]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="eval_suite", help="target directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--count", type=int, help="override examples per preset (smoke runs)")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--lexicon", help="lexicon TSV (default: bundled demo lexicon)")
    args = parser.parse_args()

    ctx = load_bank(args.lexicon)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in EVAL_PRESETS:
        cfg = dataset_preset(name, count=args.count, seed=args.seed)
        out = out_dir / f"{name}.jsonl"
        manifest = generate_dataset_file(cfg, ctx, out, name=name, threads=args.threads)
        print(f"{name:16s} {manifest.count:6d} examples  {manifest.digest}")
    print(f"suite -> {out_dir}/")


if __name__ == "__main__":
    main()
