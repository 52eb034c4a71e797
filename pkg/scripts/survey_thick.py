"""Survey discriminants for dual-number counterexamples.

For every admissible d in a range, look for primes p, q, r (first prime per
nontrivial class below a bound) such that removing r makes [p] = [q] outside
2Cl, and report the verdict.

    python scripts/survey_thick.py --d-min -200 --d-max -1
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass, fields

from locperf import quadforms as qf
from locperf.thickening import auto_triple, quadratic_model, verify_thick


@dataclass
class SurveyConfig:
    d_min: int = -150
    d_max: int = -1
    prime_bound: int = 100
    only_hits: bool = False


def admissible(cfg: SurveyConfig):
    for d in range(cfg.d_max, cfg.d_min - 1, -1):
        if d < 0 and qf.is_squarefree(d) and d % 4 in (2, 3):
            yield d


def survey(cfg: SurveyConfig):
    rows = []
    for d in admissible(cfg):
        cg = qf.class_group(qf.QuadOrder(d))
        triple = auto_triple(d, cfg.prime_bound)
        if triple is None:
            rows.append((d, cg.group.torsion, None, "too_few_classes"))
            continue
        p, q, r = triple
        verdict = verify_thick(quadratic_model(d, [p, q], [r]), p.name(), q.name()).verdict
        rows.append((d, cg.group.torsion, (p, q, r), verdict))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(SurveyConfig):
        flag = "--" + f.name.replace("_", "-")
        if f.type == "bool":
            parser.add_argument(flag, action="store_true")
        else:
            parser.add_argument(flag, type=int, default=f.default)
    cfg = SurveyConfig(**vars(parser.parse_args()))

    rows = survey(cfg)
    hits = 0
    for d, torsion, triple, verdict in rows:
        hits += verdict == "counterexample_verified"
        if cfg.only_hits and verdict != "counterexample_verified":
            continue
        primes = "  ".join(f.name() for f in triple) if triple else "-"
        print(f"{d:6d}  Cl={list(torsion)!s:12}  {verdict:24}  {primes}")
    print(f"# {hits}/{len(rows)} discriminants give a verified counterexample")


if __name__ == "__main__":
    main()
