"""Certificates for K-theory classes that are locally perfect but not perfect.

Each counterexample is reduced to exact computations in finitely generated
abelian groups (:mod:`locperf.abelian`), class groups of ``Z[sqrt(d)]``
(:mod:`locperf.quadforms`) and elliptic-curve point groups
(:mod:`locperf.elliptic`).  The verifiers live in :mod:`locperf.thickening`
and :mod:`locperf.surfaces`; :mod:`locperf.certificate` writes and re-checks
the resulting documents.
"""

__version__ = "0.1.0"
