"""Built-in example data and polynomial rendering."""

import pytest
import sympy

from nfexamples.examples import BUILTIN_EXAMPLES, ExampleSpec, polynomial_to_gp


class TestBuiltins:
    def test_shipped_primes(self):
        assert sorted(BUILTIN_EXAMPLES) == [5, 7]

    def test_p5_polynomials_are_frozen(self):
        spec = BUILTIN_EXAMPLES[5]
        assert spec.defining_octic == (1, 0, -5, -3, 28, -12, -80, 0, 256)
        assert spec.defining_quartic == (1, 0, -21, -3, 100)
        assert spec.cyclotomic_conductor == 5

    def test_p7_polynomials_are_frozen(self):
        spec = BUILTIN_EXAMPLES[7]
        assert spec.defining_octic == (1, -1, -11, 13, 32, -41, -23, 32, -1)
        assert spec.defining_quartic == (1, -1, -11, 4, 12)
        assert spec.cyclotomic_conductor == 7

    @pytest.mark.parametrize("p", [5, 7])
    @pytest.mark.parametrize("label", ["defining_octic", "defining_quartic"])
    def test_polynomials_are_irreducible(self, p, label):
        # independent oracle: sympy factorization over the rationals
        coeffs = getattr(BUILTIN_EXAMPLES[p], label)
        x = sympy.Symbol("x")
        poly = sympy.Poly(coeffs, x)
        assert poly.is_irreducible

    @pytest.mark.parametrize(
        "p, label, expected",
        [(5, "quartic", 48), (5, "octic", 96), (7, "quartic", 72), (7, "octic", 144)],
    )
    def test_expected_compositum_degrees(self, p, label, expected):
        assert BUILTIN_EXAMPLES[p].expected_compositum_degree(label) == expected

    def test_cyclotomic_degree(self):
        assert BUILTIN_EXAMPLES[5].cyclotomic_degree == 4
        assert BUILTIN_EXAMPLES[7].cyclotomic_degree == 6


class TestValidation:
    def octic(self):
        return BUILTIN_EXAMPLES[5].defining_octic

    def quartic(self):
        return BUILTIN_EXAMPLES[5].defining_quartic

    def test_rejects_unshipped_prime(self):
        with pytest.raises(ValueError, match="unsupported prime"):
            ExampleSpec(11, self.octic(), self.quartic(), 11)

    def test_rejects_mismatched_conductor(self):
        with pytest.raises(ValueError, match="conductor"):
            ExampleSpec(5, self.octic(), self.quartic(), 7)

    def test_rejects_wrong_degree(self):
        with pytest.raises(ValueError, match="degree 8"):
            ExampleSpec(5, self.quartic(), self.quartic(), 5)

    def test_rejects_non_monic(self):
        bad = (2,) + self.octic()[1:]
        with pytest.raises(ValueError, match="monic"):
            ExampleSpec(5, bad, self.quartic(), 5)

    def test_rejects_non_integer_coefficients(self):
        bad = self.octic()[:-1] + (2.5,)
        with pytest.raises(ValueError, match="integer"):
            ExampleSpec(5, bad, self.quartic(), 5)


class TestRendering:
    def test_p5_octic_renders_verbatim(self):
        assert (
            polynomial_to_gp(BUILTIN_EXAMPLES[5].defining_octic)
            == "x^8 - 5*x^6 - 3*x^5 + 28*x^4 - 12*x^3 - 80*x^2 + 256"
        )

    def test_p7_quartic_renders_verbatim(self):
        assert (
            polynomial_to_gp(BUILTIN_EXAMPLES[7].defining_quartic)
            == "x^4 - x^3 - 11*x^2 + 4*x + 12"
        )

    @pytest.mark.parametrize(
        "coeffs, rendered",
        [
            ((1, 0, -1), "x^2 - 1"),
            ((2, -1), "2*x - 1"),
            ((-1, 0), "-x"),
            ((1,), "1"),
            ((0,), "0"),
            ((1, 1), "x + 1"),
        ],
    )
    def test_edge_cases(self, coeffs, rendered):
        assert polynomial_to_gp(coeffs) == rendered

    def test_sympy_reads_back_the_rendering(self):
        # round-trip oracle: parse the GP string and compare coefficients
        for spec in BUILTIN_EXAMPLES.values():
            for coeffs in (spec.defining_octic, spec.defining_quartic):
                text = polynomial_to_gp(coeffs)
                poly = sympy.Poly(sympy.sympify(text), sympy.Symbol("x"))
                assert tuple(poly.all_coeffs()) == coeffs
