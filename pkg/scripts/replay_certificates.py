"""Regenerate the reference certificates and re-check them.

Writes one file per run into ``--out-dir`` and reports, for each, the exit
code, the verdict and the number of problems found by the standalone checker.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from locperf import certificate as cert
from locperf.cli import run

REFERENCE_RUNS = {
    "classgroup_-21": ["classgroup", "--d", "-21"],
    "thick_-21_auto": ["verify-thick", "--d", "-21", "--auto"],
    "thick_-21_no_removal": ["verify-thick", "--d", "-21", "--p", "2", "--q", "3"],
    "glued_p1": ["verify-glued", "--pic", "z", "--p", "1"],
    "glued_p1_zero": ["verify-glued", "--pic", "z", "--p", "0"],
    "glued_curve_5_1_1": ["verify-glued", "--pic", "curve:5,1,1", "--p", "0,1"],
    "nodal_5_1_1": ["verify-nodal", "--curve", "5,1,1", "--point", "0,1"],
    "nodal_5_1_0_order2": ["verify-nodal", "--curve", "5,1,0", "--point", "0,0"],
}


@dataclass
class ReplayConfig:
    out_dir: Path = Path("certificates")
    runs: dict = field(default_factory=lambda: dict(REFERENCE_RUNS))


def replay(cfg: ReplayConfig) -> int:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    problems = 0
    for name, argv in cfg.runs.items():
        doc, code, diag = run(argv)
        if doc is None:
            print(f"{name:24} exit={code}  {diag}")
            continue
        text = cert.dump(doc)
        path = cfg.out_dir / f"{name}.txt"
        path.write_text(text)
        errs = cert.check_document(cert.parse(path.read_text()))
        again = cert.dump(run(argv)[0]) == text
        problems += len(errs) + (not again)
        print(f"{name:24} exit={code}  verdict={doc['verdict']:24} checker_errors={len(errs)} "
              f"deterministic={again}")
        for e in errs:
            print(f"    {e}")
    return problems


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=ReplayConfig.out_dir)
    args = parser.parse_args()
    raise SystemExit(1 if replay(ReplayConfig(out_dir=args.out_dir)) else 0)


if __name__ == "__main__":
    main()
