"""Tests for element selection and parameter kits."""

import pytest

from ffnets.construct import (
    ConstructionParams,
    build_system,
    choose_beta_gpos,
    default_pinf,
    elliptic_kit,
    genus0_kit,
    vandermonde_generators,
)
from ffnets.divisor import Divisor
from ffnets.types import ConstructionError, Variant


class TestGenus0Kit:
    """Tests for the default genus-0 parameter sets."""

    def test_places(self, f2):
        """Test P_1 = inf, P_2 = x and P_inf = x + 1."""
        kit = genus0_kit(f2, 2)
        assert [str(P) for P in kit.places] == ["inf", "poly:0,1"]
        assert str(kit.pinf) == "poly:1,1"
        assert kit.mu == 1
        assert kit.genus == 0

    def test_too_many_places(self, f2):
        """Test F_2(x) has only three rational places."""
        with pytest.raises(ConstructionError):
            genus0_kit(f2, 4)

    def test_no_rational_pinf_left(self, f2):
        """Test s = q + 1 leaves no rational P_inf."""
        with pytest.raises(ConstructionError):
            genus0_kit(f2, 3)

    def test_quadratic_pinf(self, f2):
        """Test mu = 2 picks x^2 + x + 1."""
        kit = genus0_kit(f2, 3, mu=2)
        assert str(kit.pinf) == "poly:1,1,1"
        assert kit.mu == 2

    def test_default_pinf_skips_used(self, rational_f3):
        """Test default_pinf skips places already in use."""
        places = (rational_f3.infinite_place(), rational_f3.place((0, 1)))
        assert str(default_pinf(rational_f3, places, 1)) == "poly:1,1"

    def test_s_too_small(self, f2):
        """Test s = 1 is rejected."""
        with pytest.raises(ConstructionError):
            genus0_kit(f2, 1)


class TestGenus0Betas:
    """Tests for the genus-0 element choice."""

    def test_first_coordinate(self, g0_system_f2, rational_f2):
        """Test beta_j^(1) = x^(j-1)."""
        x = rational_f2.x()
        for j in range(1, 5):
            assert g0_system_f2.beta(1, j) == x ** (j - 1)

    def test_second_coordinate(self, g0_system_f2, rational_f2):
        """Test beta_j^(2) = x^-j."""
        x = rational_f2.x()
        for j in range(1, 5):
            assert g0_system_f2.beta(2, j) == x ** (-j)

    def test_cached(self, g0_system_f2):
        """Test repeated lookups return the same object."""
        assert g0_system_f2.beta(1, 3) is g0_system_f2.beta(1, 3)

    def test_betas_mapping(self, g0_system_f2):
        """Test betas() covers every coordinate and row."""
        assert sorted(g0_system_f2.betas(3)) == [(i, j) for i in (1, 2) for j in (1, 2, 3)]

    def test_index_errors(self, g0_system_f2):
        """Test coordinates and rows out of range raise."""
        with pytest.raises(ConstructionError):
            g0_system_f2.beta(3, 1)
        with pytest.raises(ConstructionError):
            g0_system_f2.beta(1, 0)

    def test_vandermonde(self, f3, rational_f3):
        """Test Vandermonde rows are powers of the generators."""
        system = build_system(genus0_kit(f3, 3, vandermonde=True))
        alphas = vandermonde_generators(system)
        assert len(alphas) == 3
        assert alphas[0] == rational_f3.x()
        for j in range(1, 4):
            assert system.beta(1, j) == alphas[0] ** (j - 1)
            assert system.beta(3, j) == alphas[2] ** j

    def test_vandermonde_matches_default_up_to_scalars(self, f3):
        """Test both genus-0 modes pick the same lines L(j(P_i - P_1))."""
        default = build_system(genus0_kit(f3, 3))
        powers = build_system(genus0_kit(f3, 3, vandermonde=True))
        for i in range(1, 4):
            for j in range(1, 5):
                ratio = powers.beta(i, j) / default.beta(i, j)
                assert not ratio.is_zero()
                assert ratio.num.degree == 0 and ratio.den.degree == 0

    def test_no_gaps(self, g0_system_f2):
        """Test only xing systems carry a gap basis."""
        assert g0_system_f2.gaps == []


class TestEllipticKit:
    """Tests for the default positive-genus parameter sets."""

    def test_defaults(self, curves):
        """Test places, P_inf and D on the F_3 curve."""
        kit = elliptic_kit(curves["F3"], 3)
        assert [str(P) for P in kit.places] == ["(0,0)", "(1,0)", "(2,0)"]
        assert str(kit.pinf) == "O"
        assert kit.D == Divisor.of(kit.places[0], 2)
        assert kit.variant == Variant.GPOS

    def test_not_enough_points(self, curves):
        """Test the F_2 curve has only two affine points."""
        with pytest.raises(ConstructionError):
            elliptic_kit(curves["F2"], 3)

    def test_genus0_variant_rejected(self, curves):
        """Test a curve cannot host the genus-0 construction."""
        with pytest.raises(ConstructionError):
            elliptic_kit(curves["F2"], 2, Variant.GENUS0)


class TestPositiveGenusBetas:
    """Tests for the gpos and xing element choice."""

    def test_first_coordinate_pole(self, gpos_system_f2):
        """Test beta_j^(1) has pole order j - 1 + D(P_1) at P_1."""
        ff = gpos_system_f2.params.ff
        P1 = gpos_system_f2.params.places[0]
        for j in range(1, 4):
            assert ff.valuation(gpos_system_f2.beta(1, j), P1) == -(j - 1) - 2

    def test_other_coordinate_pole(self, gpos_system_f2):
        """Test beta_j^(2) has a pole of order exactly j at P_2."""
        ff = gpos_system_f2.params.ff
        P2 = gpos_system_f2.params.places[1]
        for j in range(1, 4):
            assert ff.valuation(gpos_system_f2.beta(2, j), P2) == -j

    def test_gap_numbers(self, xing_system_f2):
        """Test the F_2 kit has the single gap number 0 with w_1 = 1."""
        assert xing_system_f2.gap_numbers == [0]
        assert xing_system_f2.gaps[0][1] == xing_system_f2.params.ff.one()

    def test_gpos_has_no_gaps(self, gpos_system_f2):
        """Test gaps are only computed for xing."""
        assert gpos_system_f2.gaps == []

    def test_no_vandermonde_generators(self, gpos_system_f2):
        """Test generators exist only in genus 0."""
        with pytest.raises(ConstructionError):
            vandermonde_generators(gpos_system_f2)

    def test_sum_of_hyperplane_complements(self, curves, monkeypatch):
        """Test beta is u + v when u has a low pole order at P_i and v vanishes at P_1."""
        params = elliptic_kit(curves["F3"], 3)
        ff = params.ff
        P1, P2 = params.places[:2]
        A = Divisor.of(P2, 2)
        h = next(f for f in ff.rr_basis(A) if ff.valuation(f, P2) == -2)
        h0 = h - ff.constant(ff.expansion_digits(h, P1, 1)[0])
        assert ff.valuation(h0, P1) >= 1
        real_rr_basis = ff.rr_basis
        monkeypatch.setattr(ff, "rr_basis", lambda D: [ff.one(), h0] if D == A else real_rr_basis(D))

        beta = choose_beta_gpos(params, 2, 2)
        assert beta == ff.one() + h0
        assert ff.valuation(beta, P1) == 0
        assert ff.valuation(beta, P2) == -2


class TestBuildSystem:
    """Tests for build_system."""

    def test_rejects_duplicate_places(self, rational_f2):
        """Test invalid parameters raise ConstructionError."""
        inf = rational_f2.infinite_place()
        params = ConstructionParams(Variant.GENUS0, rational_f2, (inf, inf), rational_f2.place((1, 1)))
        with pytest.raises(ConstructionError, match="not distinct"):
            build_system(params)

    def test_deterministic(self, f3):
        """Test two builds choose identical elements."""
        a = build_system(genus0_kit(f3, 3))
        b = build_system(genus0_kit(f3, 3))
        assert a.betas(4) == b.betas(4)
