"""Exact finite-algebra toolkit.

Subpackages cover four layers of machinery plus shared plumbing:

* :mod:`towerforge.groups` — finite groups as multiplication tables, with
  central filtrations of p-groups under an operator action.
* :mod:`towerforge.modrep` — modular representations of small groups:
  isotypic projectors, socles, projective covers, injective hulls and
  three-way splittings of free modules.
* :mod:`towerforge.combinat` — rank-2 subgroup families of elementary
  abelian groups, congruence planning for generator pairs, and the wedge
  (pairwise-intersection) spanning criterion.
* :mod:`towerforge.localring` — finite commutative local rings, ideal
  arithmetic with membership certificates, congruence subgroups 1 + M₂(I),
  the square-zero/Frattini dichotomy, homomorphism lift search, and
  splitting of ring surjections.
* :mod:`towerforge.localcond` — pure-arithmetic solvability criteria for
  tame local extension data.
* :mod:`towerforge.families`, :mod:`towerforge.zmod`,
  :mod:`towerforge.linalg`, :mod:`towerforge.errors` — fixture catalogues
  and exact linear algebra over Z/p^e and F_p.

Every numeric path is exact integer arithmetic; no floating point enters
any verdict.
"""

from .errors import GuardExceeded

__version__ = "0.1.0"

__all__ = ["GuardExceeded", "__version__"]
