"""Audit the nodal construction over every curve of small prime fields.

For each point p, record whether the global obstruction holds (O(-p) and
O(p) restrictions differ) and whether the fiber restrictions on the two opens
are all trivial.  The tally shows how often the two statements agree.
"""
from __future__ import annotations

import argparse
import itertools
from collections import Counter
from dataclasses import dataclass

from locperf.elliptic import Curve, group_structure
from locperf.surfaces import elliptic_model, verify_nodal


@dataclass
class AuditConfig:
    primes: tuple[int, ...] = (5, 7, 11, 13)
    verbose: bool = False


def audit(cfg: AuditConfig) -> Counter:
    tally: Counter = Counter()
    for p in cfg.primes:
        for a, b in itertools.product(range(p), repeat=2):
            if (4 * a ** 3 + 27 * b ** 2) % p == 0:
                continue
            model = elliptic_model(group_structure(Curve(p, a, b)))
            for P in model.curve_group.points:
                c = verify_nodal(model, P)
                key = (c.verdict, c.claim1_verified, c.paper_claim_match)
                tally[key] += 1
                if cfg.verbose and c.claim1_verified:
                    classes = [list(f.klass.coords) for f in c.claim2]
                    print(f"{p},{a},{b}  p={P}  order={c.order}  fiber classes={classes}")
    return tally


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--primes", type=int, nargs="+", default=list(AuditConfig.primes))
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args()
    tally = audit(AuditConfig(tuple(args.primes), args.verbose))
    print(f"{'verdict':26} {'claim1':7} {'fibers trivial':15} count")
    for (verdict, c1, match), n in sorted(tally.items()):
        print(f"{verdict:26} {str(c1):7} {str(match):15} {n}")


if __name__ == "__main__":
    main()
