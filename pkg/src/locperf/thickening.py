"""K-theory of the dual numbers B = A[eps] over a Dedekind domain A.

``K_0'(B)`` is modelled through restriction of scalars as ``Z + Cl(A)``
(rank, determinant).  Base change ``K_0'(A) -> K_0'(B)`` is doubling, so the
perfect classes are exactly ``2 (Z + Cl(A))``.  Opens are complements of
finitely many labelled primes, with class group ``Cl(A) / <removed classes>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import quadforms as qf
from .abelian import (
    FgAbelianGroup,
    GroupElement,
    GroupHom,
    MembershipResult,
    Subgroup,
    membership,
    quotient_with_lift,
    scale_subgroup,
)


@dataclass(frozen=True)
class DedekindModel:
    cl: FgAbelianGroup
    labeled_primes: Mapping[str, GroupElement]
    removed: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "labeled_primes", dict(self.labeled_primes))
        object.__setattr__(self, "removed", frozenset(self.removed))
        for name, x in self.labeled_primes.items():
            if x.group != self.cl:
                raise ValueError(f"class of prime {name!r} is not in the class group")
        unknown = self.removed - set(self.labeled_primes)
        if unknown:
            raise ValueError(f"removed primes are not labelled: {sorted(unknown)}")

    def __hash__(self):
        return hash((self.cl, tuple(sorted(self.labeled_primes)), self.removed))

    def removing(self, names: Iterable[str]) -> DedekindModel:
        return DedekindModel(self.cl, self.labeled_primes, self.removed | set(names))

    def effective(self):
        """``(group, proj, lift)`` for ``Cl(A) / <removed classes>``."""
        s = Subgroup(self.cl, tuple(self.labeled_primes[n] for n in sorted(self.removed)))
        return quotient_with_lift(self.cl, s)

    def prime_class(self, name: str) -> GroupElement:
        """Class of a labelled, non-removed prime in the effective class group."""
        if name not in self.labeled_primes:
            raise KeyError(f"unknown prime {name!r}")
        if name in self.removed:
            raise ValueError(f"prime {name!r} has been removed from this open")
        _, proj, _ = self.effective()
        return proj(self.labeled_primes[name])


@dataclass(frozen=True)
class KClass:
    rank_part: int
    det_part: GroupElement

    def to_element(self, k: FgAbelianGroup) -> GroupElement:
        return k.element((self.rank_part,) + self.det_part.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in (self.rank_part,) + self.det_part.coords) + ")"


def _kclass(model: DedekindModel, x: GroupElement) -> KClass:
    eff, _, _ = model.effective()
    return KClass(x.coords[0], eff.element(x.coords[1:]))


def k_group(model: DedekindModel) -> FgAbelianGroup:
    eff, _, _ = model.effective()
    # Z first, then the class group; already canonical
    return FgAbelianGroup(eff.free_rank + 1, eff.torsion)


def perfect_subgroup(model: DedekindModel) -> Subgroup:
    return scale_subgroup(k_group(model), 2)


def doubling_hom(model: DedekindModel) -> GroupHom:
    k = k_group(model)
    return GroupHom.from_images(k, k, [2 * e for e in k.generators()])


def base_change(model: DedekindModel, alpha: KClass) -> KClass:
    k = k_group(model)
    return _kclass(model, 2 * alpha.to_element(k))


def thickened_prime_class(model: DedekindModel, prime_name: str) -> KClass:
    """``[p'] = [eps B] + [p'/(eps)]``, restricting to ``[A] + [p]``."""
    return KClass(2, model.prime_class(prime_name))


def restrict_to_open(model: DedekindModel, alpha: KClass, extra_removed: Iterable[str]) -> KClass:
    target = model.removing(extra_removed)
    _, _, lift = model.effective()
    _, proj, _ = target.effective()
    return KClass(alpha.rank_part, proj(lift(alpha.det_part)))


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    membership: MembershipResult | None = None


@dataclass(frozen=True)
class LocalCheck:
    open_name: str
    removed: tuple[str, ...]
    klass: KClass
    ambient: FgAbelianGroup
    membership: MembershipResult


@dataclass(frozen=True)
class ThickCertificate:
    model: DedekindModel
    p_name: str
    q_name: str
    hypotheses: tuple[HypothesisCheck, ...]
    k_group: FgAbelianGroup
    global_class: KClass
    global_membership: MembershipResult
    locals: tuple[LocalCheck, ...]
    verdict: str


def verify_thick(model: DedekindModel, p_name: str, q_name: str) -> ThickCertificate:
    for n in (p_name, q_name):
        if n not in model.labeled_primes:
            raise KeyError(f"unknown prime {n!r}")
    eff, _, _ = model.effective()
    cp, cq = model.prime_class(p_name), model.prime_class(q_name)
    twice = scale_subgroup(eff, 2)
    mp, mq = membership(twice, cp), membership(twice, cq)
    hyps = (
        HypothesisCheck("distinct_primes", p_name != q_name, {"p": p_name, "q": q_name}),
        HypothesisCheck("equal_classes", cp == cq,
                        {"class_p": list(cp.coords), "class_q": list(cq.coords)}),
        HypothesisCheck("p_not_in_2cl", not mp.is_member, membership=mp),
        HypothesisCheck("q_not_in_2cl", not mq.is_member, membership=mq),
    )

    k = k_group(model)
    g = thickened_prime_class(model, p_name)
    gm = membership(perfect_subgroup(model), g.to_element(k))

    locals_ = []
    for label, drop in (("U1", p_name), ("U2", q_name)):
        opened = model.removing([drop])
        klass = restrict_to_open(model, g, [drop])
        kk = k_group(opened)
        locals_.append(LocalCheck(label, tuple(sorted(opened.removed)), klass, kk,
                                  membership(perfect_subgroup(opened), klass.to_element(kk))))

    ok = (all(h.passed for h in hyps) and not gm.is_member
          and all(loc.membership.is_member for loc in locals_))
    return ThickCertificate(model, p_name, q_name, hyps, k, g, gm, tuple(locals_),
                            "counterexample_verified" if ok else "hypotheses_failed")


# Models built from Z[sqrt(d)]

def quadratic_model(d: int, primes: Iterable[qf.PrimeIdealFactor],
                    removed: Iterable[qf.PrimeIdealFactor] = ()) -> DedekindModel:
    """Model for an open of ``Spec Z[sqrt(d)]`` with the given labelled primes."""
    cg = qf.class_group(qf.QuadOrder(d))
    primes = list(primes) + list(removed)
    labels = {f.name(): qf.class_of_prime(cg, f) for f in primes}
    return DedekindModel(cg.group, labels, frozenset(f.name() for f in removed))


def candidate_primes(d: int, bound: int = 100) -> list[qf.PrimeIdealFactor]:
    """Non-inert primes below ``bound`` with nontrivial class, one per class.

    Iterates rational primes in increasing order and keeps the first prime
    ideal found for each nontrivial class.
    """
    order = qf.QuadOrder(d)
    cg = qf.class_group(order)
    seen: dict[GroupElement, qf.PrimeIdealFactor] = {}
    for p in qf.primes_below(bound):
        f = qf.factor_prime(order, p)
        if f.kind == "inert":
            continue
        x = qf.class_of_prime(cg, f)
        if not x.is_zero() and x not in seen:
            seen[x] = f
    return list(seen.values())


def auto_triple(d: int, bound: int = 100):
    """First ``(p, q, r)`` among :func:`candidate_primes` passing :func:`verify_thick`.

    Triples are tried in lexicographic order of candidate index.  Returns the
    first triple tried when none passes, or ``None`` with fewer than three
    candidates.
    """
    cands = candidate_primes(d, bound)
    if len(cands) < 3:
        return None
    first = None
    for i, p in enumerate(cands):
        for j, q in enumerate(cands):
            for k, r in enumerate(cands):
                if len({i, j, k}) < 3:
                    continue
                if first is None:
                    first = (p, q, r)
                model = quadratic_model(d, [p, q], [r])
                if verify_thick(model, p.name(), q.name()).verdict == "counterexample_verified":
                    return p, q, r
    return first
