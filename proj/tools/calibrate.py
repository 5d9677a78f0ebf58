"""Sweep calibration variants through mf2c_sim and score them.

Each variant starts from configs/calibration.json and overrides one or more
fields, e.g.

    python tools/calibrate.py --cli build/mf2c_sim \
        --set fog_service_rate=300,400,500 --set access_service_rate=20,40

For every combination the four presets are run and the improvement ratios,
the CloudOnly spread and the Fog1 crossover are printed next to the windows
checked by the acceptance suite.
"""

import argparse
import itertools
import json
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
WINDOWS = {"Mf2c1Fog_vs_CloudOnly": (0.10, 0.30), "Mf2c2Fog_vs_CloudOnly": (0.25, 0.45)}


def parse_set(text):
    key, _, values = text.partition("=")
    if not values:
        raise argparse.ArgumentTypeError(f"expected key=v1,v2,... got {text!r}")
    return key, [json.loads(v) for v in values.split(",")]


def score(summary, calibration):
    configs = summary["configs"]
    fog, cloud = configs["Fog1"], configs["CloudOnly"]
    sla = calibration["sla_ms"]
    crossover = any(
        f["mean_response_ms"] < c["mean_response_ms"]
        and any(
            f2["p95_response_ms"] > sla and c2["p95_response_ms"] <= sla
            for f2, c2 in zip(fog[i + 1 :], cloud[i + 1 :])
        )
        for i, (f, c) in enumerate(zip(fog, cloud))
    )
    means = [c["mean_response_ms"] for c in cloud]
    spread = (max(means) - min(means)) / min(means)
    one, two = configs["Mf2c1Fog"], configs["Mf2c2Fog"]
    ordered = all(b["mean_response_ms"] < a["mean_response_ms"] for a, b in zip(one, two))
    ratios = summary["improvement"]
    inside = all(lo <= ratios[k] <= hi for k, (lo, hi) in WINDOWS.items())
    return {
        "mf2c1": ratios["Mf2c1Fog_vs_CloudOnly"],
        "mf2c2": ratios["Mf2c2Fog_vs_CloudOnly"],
        "cloud_spread": spread,
        "crossover": crossover,
        "ordered": ordered,
        "ok": inside and crossover and ordered and spread < 0.15 and min(means) >= 2 * calibration["cloud_one_way_ms"],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--cli", default=str(ROOT / "build" / "mf2c_sim"))
    ap.add_argument("--base", default=str(ROOT / "configs" / "calibration.json"))
    ap.add_argument("--set", dest="sets", action="append", type=parse_set, default=[])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--duration", type=float)
    args = ap.parse_args()

    base = json.loads(Path(args.base).read_text())
    keys = [k for k, _ in args.sets]
    grid = list(itertools.product(*[v for _, v in args.sets])) or [()]
    print(" ".join(f"{k:>20}" for k in keys), f"{'mf2c1':>7} {'mf2c2':>7} {'spread':>7} cross order ok")
    with tempfile.TemporaryDirectory() as tmp:
        for values in grid:
            cal = dict(base, **dict(zip(keys, values)))
            cal["cloud_one_way_ms"] = cal["edge_access_ms"] + cal["access_fog_ms"] + cal["fog_cloud_ms"]
            cal_path = Path(tmp) / "calibration.json"
            cal_path.write_text(json.dumps(cal))
            cmd = [args.cli, "--calibration", str(cal_path), "--seed", str(args.seed), "--out", tmp]
            if args.duration:
                cmd += ["--duration", str(args.duration)]
            run = subprocess.run(cmd, capture_output=True, text=True)
            if run.returncode != 0:
                print(" ".join(f"{v!s:>20}" for v in values), "error:", run.stderr.strip())
                continue
            s = score(json.loads((Path(tmp) / "summary.json").read_text()), cal)
            print(
                " ".join(f"{v!s:>20}" for v in values),
                f"{s['mf2c1']:7.3f} {s['mf2c2']:7.3f} {s['cloud_spread']:7.3f}"
                f" {'yes' if s['crossover'] else 'no':>5} {'yes' if s['ordered'] else 'no':>5}"
                f" {'yes' if s['ok'] else 'no':>2}",
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
