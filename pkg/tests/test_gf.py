"""Tests for finite field construction and the digit bijection."""

import numpy as np
import pytest

from ffnets.gf import (
    add,
    elem_index,
    field_of_order,
    index_elem,
    inv,
    make_field,
    parse_field_header,
    smallest_irreducible,
)
from ffnets.types import FieldError


class TestMakeField:
    """Tests for make_field and field_of_order."""

    def test_prime_field(self):
        """Test a prime field has no modulus."""
        field = make_field(5)
        assert field.q == 5
        assert field.modulus is None

    def test_non_prime_characteristic(self):
        """Test a composite characteristic is rejected."""
        with pytest.raises(FieldError):
            make_field(4)

    def test_bad_extension_degree(self):
        """Test e < 1 is rejected."""
        with pytest.raises(FieldError):
            make_field(2, 0)

    def test_default_modulus(self):
        """Test the smallest irreducible is chosen in low-to-high lexicographic order."""
        assert make_field(2, 2).modulus == (1, 1, 1)
        assert make_field(2, 3).modulus == (1, 0, 1, 1)
        assert make_field(3, 2).modulus == (1, 0, 1)

    def test_smallest_irreducible_f3_cubic(self):
        """Test the cubic modulus over F_3 is irreducible and monic."""
        coeffs = smallest_irreducible(3, 3)
        assert len(coeffs) == 4
        assert coeffs[-1] == 1

    def test_reducible_modulus(self):
        """Test a reducible modulus is rejected."""
        with pytest.raises(FieldError):
            make_field(2, 2, [1, 0, 1])

    def test_non_monic_modulus(self):
        """Test a non-monic modulus is rejected."""
        with pytest.raises(FieldError):
            make_field(3, 2, [1, 0, 2])

    def test_field_of_order(self):
        """Test prime powers are factored."""
        field = field_of_order(9)
        assert (field.p, field.e) == (3, 2)
        assert field_of_order(7).e == 1
        assert (field_of_order(8).p, field_of_order(8).e) == (2, 3)

    def test_field_of_order_not_prime_power(self):
        """Test 6 is not a field order."""
        with pytest.raises(FieldError):
            field_of_order(6)


class TestElements:
    """Tests for element access and arithmetic."""

    def test_generator_relation(self, f4):
        """Test the generator of F_4 satisfies a^2 = a + 1."""
        a = f4.generator()
        assert a**2 == a + f4.one()
        assert elem_index(a**2) == 3

    def test_prime_field_has_no_generator(self, f2):
        """Test generator() fails on a prime field."""
        with pytest.raises(FieldError):
            f2.generator()

    def test_coefficient_vectors(self, f4):
        """Test index and coefficient vector correspond."""
        assert f4.coeffs(f4(2)) == (0, 1)
        assert elem_index(f4.element((1, 1))) == 3

    def test_element_rejects_bad_coefficients(self, f4):
        """Test out-of-range coefficients are rejected."""
        with pytest.raises(FieldError):
            f4.element((2, 0))

    def test_digit_bijection(self):
        """Test index_elem and elem_index are inverse with 0 -> 0."""
        field = make_field(3, 2)
        assert [elem_index(index_elem(field, n)) for n in range(9)] == list(range(9))
        assert int(index_elem(field, 0)) == 0

    def test_index_out_of_range(self, f3):
        """Test indices outside [0, q) are rejected."""
        with pytest.raises(FieldError):
            index_elem(f3, 3)

    def test_integer_reduced_mod_p(self, f3):
        """Test integers map into the prime field."""
        assert elem_index(f3.integer(5)) == 2
        assert elem_index(f3.integer(-1)) == 2

    def test_inverse_of_zero(self, f3):
        """Test inverting zero raises."""
        with pytest.raises(ZeroDivisionError):
            inv(f3.zero())

    def test_inverses(self):
        """Test every nonzero element of F_8 times its inverse is one."""
        field = make_field(2, 3)
        for a in field.elements()[1:]:
            assert a * inv(a) == field.one()

    def test_mixed_fields(self, f2, f3):
        """Test operands from different fields are rejected."""
        with pytest.raises(FieldError):
            add(f2.one(), f3.one())

    def test_distributivity_f9(self):
        """Test a(b + c) = ab + ac on all of F_9."""
        field = make_field(3, 2)
        x = field.GF(np.arange(9))
        A, B, C = x[:, None, None], x[None, :, None], x[None, None, :]
        assert np.all(A * (B + C) == A * B + A * C)

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
    def test_frobenius(self, q):
        """Test a^q = a for every element of F_q."""
        field = field_of_order(q)
        x = field.GF(np.arange(q))
        assert np.all(x**q == x)


class TestHeader:
    """Tests for the serialized field header."""

    def test_prime_header(self, f2):
        """Test the prime field header."""
        assert f2.header() == "q=2^1"

    def test_extension_header_round_trip(self):
        """Test header() and parse_field_header() agree."""
        field = make_field(3, 2)
        assert field.header() == "q=3^2 modulus=1,0,1"
        assert parse_field_header(field.header()) == field

    def test_missing_modulus(self):
        """Test an extension header without modulus is rejected."""
        with pytest.raises(FieldError):
            parse_field_header("q=2^2")

    def test_malformed_header(self):
        """Test garbage is rejected."""
        with pytest.raises(FieldError):
            parse_field_header("F_4")
