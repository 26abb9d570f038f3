#!/usr/bin/env python3
"""Regenerate data/optdigits.tra and data/optdigits.tes.

The KEEL repository ships the UCI optdigits preprocessed records as one file:
the 3823 training records followed by the 1797 test records.

    pip download keel-ds==0.2.5 --no-deps -d /tmp/keel
    python3 tools/extract_optdigits.py /tmp/keel/keel_ds-0.2.5-py3-none-any.whl data
"""

import argparse
import pathlib
import zipfile

MEMBER = "keel_ds/data/balanced/raw/optdigits.dat"
TRAIN_RECORDS = 3823
TEST_RECORDS = 1797


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("wheel", help="keel_ds wheel file")
    ap.add_argument("out_dir", type=pathlib.Path)
    args = ap.parse_args()

    with zipfile.ZipFile(args.wheel) as z:
        text = z.read(MEMBER).decode("ascii")
    records = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("@")]
    if len(records) != TRAIN_RECORDS + TEST_RECORDS:
        raise SystemExit(f"expected {TRAIN_RECORDS + TEST_RECORDS} records, found {len(records)}")
    for rec in records:
        if len(rec.split(",")) != 65:
            raise SystemExit(f"unexpected record: {rec[:40]}")

    args.out_dir.mkdir(parents=True, exist_ok=True)
    (args.out_dir / "optdigits.tra").write_text("\n".join(records[:TRAIN_RECORDS]) + "\n")
    (args.out_dir / "optdigits.tes").write_text("\n".join(records[TRAIN_RECORDS:]) + "\n")


if __name__ == "__main__":
    main()
