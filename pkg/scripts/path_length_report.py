#!/usr/bin/env python3
"""Compare navigation path-length distributions under the two sampling modes.

Incidental mode samples a map first and accepts whatever distance a random
room pair has, which concentrates mass on one- and two-step plans; uniform
mode draws the length first and rejection-samples a matching map.
"""

import argparse
import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from symbench.generate import GenConfig, gen_dataset
from symbench.harness import load_bank


def histogram(counter, n, width=40):
    lines = []
    for length in sorted(counter):
        share = counter[length] / n
        bar = "#" * round(share * width)
        lines.append(f"  {length:2d}  {share:6.1%}  {bar}")
    return "\n".join(lines)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--task", default="nav_route", choices=("nav_route", "nav_result"))
    parser.add_argument("--count", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--rooms", type=int, nargs=2, default=(3, 8), metavar=("MIN", "MAX"))
    parser.add_argument("--path-len", type=int, nargs=2, default=(1, 5), metavar=("MIN", "MAX"))
    args = parser.parse_args()

    bank = load_bank().sets
    for mode in ("incidental", "uniform_length"):
        cfg = GenConfig(
            task=args.task,
            n_rooms_range=tuple(args.rooms),
            path_len_mode=mode,
            path_len_range=tuple(args.path_len),
            seed=args.seed,
            count=args.count,
        )
        lengths = Counter(s.meta["path_len"] for s in gen_dataset(cfg, bank))
        print(f"{mode} ({args.task}, n={args.count}):")
        print(histogram(lengths, args.count))
        print()


if __name__ == "__main__":
    main()
