#!/usr/bin/env python3
"""Collision probability of the joint spatiotemporal distribution versus
temporal steps, against the exact step formula and the Haar value at the
matching effective size."""

import argparse

from hrcslab import theory
from hrcslab.runner import ExperimentSpec, run_experiment, write_records


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-system", type=int, default=2)
    ap.add_argument("--n-bath", type=int, default=1)
    ap.add_argument("--max-steps", type=int, default=6)
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="cp_sweep.jsonl")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    spec = ExperimentSpec(
        kind="cp_sweep",
        n_system=args.n_system,
        n_bath=args.n_bath,
        steps=tuple(range(1, args.max_steps + 1)),
        instances=args.instances,
        master_seed=args.seed,
    )
    records = run_experiment(spec, workers=args.workers)
    write_records(records, args.out, "jsonl")

    print(f"{'t':>3} {'measured':>12} {'std err':>10} {'step formula':>13} {'haar(N_eff)':>12}")
    for rec in records:
        n_eff = args.n_system + rec.steps * args.n_bath
        haar = theory.haar_power_sum(n_eff, 2)
        m = rec.measured
        print(f"{rec.steps:>3} {m.mean:>12.6f} {m.std_error:>10.6f} "
              f"{rec.theory_value:>13.6f} {haar:>12.6f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
