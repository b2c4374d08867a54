"""Arithmetic checkers for tame local conditions.

A `LocalExtensionDatum` summarizes one completed extension of local fields:
ramification index e, residue-field cardinality q, a tameness flag, and a
kernel exponent n.  The checks are pure integer arithmetic: the tame
compatibility condition e | (q − 1), the solvability criterion n′·e | (q − 1)
with n′ the largest divisor of n supported on the primes of e, and the
stability of both under residue-degree base change.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

__all__ = [
    "CriterionNotApplicable",
    "LocalExtensionDatum",
    "property_p",
    "tame_solvability_criterion",
    "property_p_base_change",
]


class CriterionNotApplicable(ValueError):
    """The requested criterion does not decide the given datum."""


def _prime_factors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime_power(q: int) -> bool:
    return q > 1 and len(_prime_factors(q)) == 1


@dataclass(frozen=True)
class LocalExtensionDatum:
    """(e, q, tame, n): ramification index, residue cardinality, tameness flag,
    and kernel exponent."""

    e: int
    q: int
    tame: bool
    n: int = 1

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("ramification index must be positive")
        if not _is_prime_power(self.q):
            raise ValueError(f"residue cardinality {self.q} is not a prime power")
        if self.n < 1:
            raise ValueError("kernel exponent must be positive")
        if self.e == 1 and not self.tame:
            raise ValueError("an unramified datum is tame by definition")


def property_p(d: LocalExtensionDatum) -> bool:
    """True iff the extension is unramified, or tame with e | (q − 1)."""
    if d.e == 1:
        return True
    return d.tame and (d.q - 1) % d.e == 0


def tame_solvability_criterion(d: LocalExtensionDatum) -> bool:
    """Decide n′·e | (q − 1), where n′ keeps of n only the primes dividing e.

    Unramified data pass unconditionally.  Wild data are out of scope and
    raise CriterionNotApplicable rather than returning false.
    """
    if d.e == 1:
        return True
    if not d.tame:
        raise CriterionNotApplicable(
            "the criterion decides tame or unramified data only"
        )
    n_prime = 1
    for ell in _prime_factors(d.e):
        n = d.n
        while n % ell == 0:
            n_prime *= ell
            n //= ell
    return (d.q - 1) % (n_prime * d.e) == 0


def property_p_base_change(
    d: LocalExtensionDatum, residue_degree_growth: int
) -> LocalExtensionDatum:
    """Replace q by q^growth (growth 1 or a prime); the result still passes.

    The input must itself pass `property_p`; since (q − 1) | (q^g − 1), the
    divisibility e | (q − 1) transports to the grown datum.
    """
    if not property_p(d):
        raise ValueError("input datum does not satisfy the tame condition")
    g = int(residue_degree_growth)
    if g != 1 and len(_prime_factors(g)) != 1:
        raise ValueError("residue degree growth must be 1 or a prime")
    if g != 1 and g != _prime_factors(g)[0]:
        raise ValueError("residue degree growth must be 1 or a prime")
    out = replace(d, q=d.q**g)
    if not property_p(out):
        raise AssertionError("base change broke the tame condition")
    return out
