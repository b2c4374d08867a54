"""Built-in example data: two field towers given by integer polynomials.

Each example consists of an octic and a quartic polynomial over the
integers together with a prime `p`.  The tower of interest is built from
their Galois closures composed with the `p`-th cyclotomic field; the
expected closure degrees (24 and 12: the closures realize the binary
tetrahedral group and its rotation quotient) are carried on each example
record so the verdict can check what the engine reports against them.
"""

from dataclasses import dataclass
from typing import Dict, Tuple


@dataclass(frozen=True)
class ExampleSpec:
    """One verification target.

    Polynomial coefficients are listed from the leading term down to the
    constant term.  Only the two shipped primes are accepted; searching for
    towers at other primes is out of scope.
    """

    p: int
    defining_octic: Tuple[int, ...]
    defining_quartic: Tuple[int, ...]
    cyclotomic_conductor: int
    expected_octic_closure_degree: int = 24
    expected_quartic_closure_degree: int = 12

    def __post_init__(self):
        if self.p not in (5, 7):
            raise ValueError(f"unsupported prime {self.p}; shipped towers use 5 and 7")
        if self.cyclotomic_conductor != self.p:
            raise ValueError("cyclotomic conductor must equal the tower prime")
        for label, coeffs, degree in (
            ("octic", self.defining_octic, 8),
            ("quartic", self.defining_quartic, 4),
        ):
            if len(coeffs) != degree + 1:
                raise ValueError(f"{label} polynomial must have degree {degree}")
            if coeffs[0] != 1:
                raise ValueError(f"{label} polynomial must be monic")
            if not all(isinstance(c, int) for c in coeffs):
                raise ValueError(f"{label} polynomial needs integer coefficients")

    @property
    def cyclotomic_degree(self) -> int:
        return self.p - 1

    def expected_compositum_degree(self, field_label: str) -> int:
        closure = {
            "quartic": self.expected_quartic_closure_degree,
            "octic": self.expected_octic_closure_degree,
        }[field_label]
        return closure * self.cyclotomic_degree


def polynomial_to_gp(coeffs: Tuple[int, ...], var: str = "x") -> str:
    """Render descending coefficients as a GP expression, e.g. x^4 - 21*x^2 + 3."""
    degree = len(coeffs) - 1
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        power = degree - k
        mag = abs(c)
        if power == 0:
            body = str(mag)
        else:
            x = var if power == 1 else f"{var}^{power}"
            body = x if mag == 1 else f"{mag}*{x}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {body}")
    return " ".join(parts) if parts else "0"


BUILTIN_EXAMPLES: Dict[int, ExampleSpec] = {
    5: ExampleSpec(
        p=5,
        defining_octic=(1, 0, -5, -3, 28, -12, -80, 0, 256),
        defining_quartic=(1, 0, -21, -3, 100),
        cyclotomic_conductor=5,
    ),
    7: ExampleSpec(
        p=7,
        defining_octic=(1, -1, -11, 13, 32, -41, -23, 32, -1),
        defining_quartic=(1, -1, -11, 4, 12),
        cyclotomic_conductor=7,
    ),
}
