#!/usr/bin/env python3
"""Full scaling experiment: every classifier x {none,pca,svd} x workers.

Produces one report per algorithm (same metrics across worker counts,
times shrinking with workers) plus a combined CSV. On a laptop this runs
in a few minutes with the default epoch count; shrink --epochs for a
quick look.
"""

import argparse
import sys
from pathlib import Path

from sleepbench.bench import (
    PipelineConfig,
    ReductionSpec,
    SyntheticSource,
    emit_report,
    sweep,
)
from sleepbench.classify import ALGORITHMS, ModelSpec


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--epochs", type=int, default=1200,
                        help="synthetic epochs (multiple of 6 keeps classes balanced)")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--k", type=int, default=30, help="reduced dimension")
    parser.add_argument("--workers", default="1,2,4",
                        help="comma-separated worker counts")
    parser.add_argument("--out-dir", default="benchmark-results")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    worker_counts = tuple(int(w) for w in args.workers.split(","))

    combined = []
    for algo in ALGORITHMS:
        config = PipelineConfig(
            source=SyntheticSource(n_epochs=args.epochs, seed=args.seed),
            model=ModelSpec(algo, seed=args.seed),
            reductions=(
                ReductionSpec("none"),
                ReductionSpec("pca", args.k),
                ReductionSpec("svd", args.k),
            ),
            train_fraction=0.8,
            split_seed=args.seed,
            worker_counts=worker_counts,
        )
        report = sweep(config)
        path = out_dir / f"{algo}.csv"
        path.write_bytes(emit_report(report, "csv"))
        print(f"\n=== {algo} ({report.environment}) -> {path}")
        print(f"{'reduce':>6} {'workers':>7} {'A':>6} {'P':>6} {'R':>6} "
              f"{'featurize_s':>11} {'train_s':>8}")
        for row in report.rows:
            print(f"{row.reduction:>6} {row.workers:>7} {row.accuracy:>6.3f} "
                  f"{row.precision:>6.3f} {row.recall:>6.3f} "
                  f"{row.stage_times.featurize_s:>11.2f} "
                  f"{row.stage_times.train_s:>8.2f}")
        combined.extend(
            emit_report(report, "csv").decode().splitlines()[1:]
        )

    header = "algo,reduce,workers,A,P,R,featurize_s,reduce_s,train_s,eval_s,total_s"
    (out_dir / "combined.csv").write_text(
        header + "\n" + "\n".join(combined) + "\n"
    )
    print(f"\ncombined report -> {out_dir / 'combined.csv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
