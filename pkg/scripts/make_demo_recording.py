#!/usr/bin/env python3
"""Write a synthetic EDF recording plus a CSV hypnogram sidecar.

The pair exercises the same file formats as real sleep recordings and
can be fed straight back through the CLI:

    python scripts/make_demo_recording.py --epochs 60 --out-dir demo
    sleepbench ingest --edf demo/demo.edf --hypnogram demo/demo_hypnogram.csv \
        --out demo/dataset.csv
"""

import argparse
import sys
from pathlib import Path

from sleepbench.ingest import (
    balanced_stage_sequence,
    format_csv_hypnogram,
    synthesize_recording,
    write_edf,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--epochs", type=int, default=60)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--rate", type=float, default=100.0)
    parser.add_argument("--out-dir", default="demo")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    recording, hypnogram = synthesize_recording(
        balanced_stage_sequence(args.epochs),
        sample_rate_hz=args.rate,
        seed=args.seed,
    )
    edf_path = out_dir / "demo.edf"
    hyp_path = out_dir / "demo_hypnogram.csv"
    edf_path.write_bytes(write_edf([recording]))
    hyp_path.write_text(format_csv_hypnogram(hypnogram))

    minutes = recording.duration_seconds / 60
    print(f"wrote {edf_path} ({minutes:.1f} min at {args.rate:g} Hz)")
    print(f"wrote {hyp_path} ({len(hypnogram.entries)} epochs)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
