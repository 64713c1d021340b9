"""Tests for generating matrices and matrix files."""

import numpy as np
import pytest

from ffnets.construct import build_system, elliptic_kit, genus0_kit
from ffnets.genmat import (
    FORMAT_VERSION,
    GenMatrix,
    MatrixSet,
    build_matrices,
    build_rows_block,
    build_rows_xing,
    deserialize,
    load_matrix_set,
    save_matrix_set,
    serialize,
    z_coefficients,
    z_matrix,
    z_system,
)
from ffnets.linalg import as_ints
from ffnets.params import params_digest
from ffnets.selftest import pascal_matrix
from ffnets.types import ConstructionError, DepthError, MatrixFormatError, Variant


class TestGenus0Matrices:
    """Tests for the block layout on the F_2 kit."""

    def test_pascal(self, g0_matrices_f2):
        """Test C^(1) is the Pascal matrix mod 2."""
        assert np.array_equal(as_ints(g0_matrices_f2.matrix(1).entries), pascal_matrix(8, 8, 2))

    def test_second_matrix_rows(self, g0_matrices_f2):
        """Test the first rows of C^(2) are the expansions of x^-j at x + 1."""
        C = as_ints(g0_matrices_f2.matrix(2).entries)
        assert C[0].tolist() == [1] * 8
        assert C[1].tolist() == [1, 0, 1, 0, 1, 0, 1, 0]
        assert C[2].tolist() == [1, 1, 0, 0, 1, 1, 0, 0]

    def test_shape(self, g0_matrices_f2):
        """Test metadata of the matrix set."""
        assert (g0_matrices_f2.s, g0_matrices_f2.rows, g0_matrices_f2.cols) == (2, 8, 8)
        assert g0_matrices_f2.variant == Variant.GENUS0
        assert (g0_matrices_f2.mu, g0_matrices_f2.genus, g0_matrices_f2.q) == (1, 0, 2)

    def test_depth_errors(self, g0_matrices_f2):
        """Test rows and prefixes beyond the generated depth raise."""
        C = g0_matrices_f2.matrix(1)
        with pytest.raises(DepthError):
            C.row(9)
        with pytest.raises(DepthError):
            C.prefix(9, 1)
        assert as_ints(C.row(2)).tolist() == [1, 1, 0, 0, 0, 0, 0, 0]

    def test_quadratic_pinf(self, f2):
        """Test mu = 2 fills two columns per coefficient."""
        ms = build_matrices(build_system(genus0_kit(f2, 3, mu=2)), 4, 6)
        assert ms.mu == 2
        assert (ms.rows, ms.cols) == (4, 6)
        # beta_1^(1) = 1
        assert as_ints(ms.matrix(1).row(1)).tolist() == [1, 0, 0, 0, 0, 0]

    def test_deterministic(self, f2, g0_matrices_f2):
        """Test a rebuild serializes identically."""
        again = build_matrices(build_system(genus0_kit(f2, 2)), 8, 8)
        assert serialize(again) == serialize(g0_matrices_f2)


class TestXingMatrices:
    """Tests for the xing layout."""

    def test_gap_column_deleted(self, gpos_system_f2, xing_system_f2):
        """Test with the gap at 0 and w_1 = 1, xing columns are gpos columns shifted by one."""
        gpos = build_matrices(gpos_system_f2, 5, 7)
        xing = build_matrices(xing_system_f2, 5, 6)
        assert xing.variant == Variant.XING
        assert (xing.rows, xing.cols) == (5, 6)
        for i in (1, 2):
            assert np.array_equal(as_ints(xing.matrix(i).entries), as_ints(gpos.matrix(i).entries)[:, 1:])

    def test_z_system(self, xing_system_f2):
        """Test z_k has valuation k at P_inf."""
        params = xing_system_f2.params
        zs = z_system(params.ff, params.pinf, xing_system_f2.gaps, 4)
        assert [params.ff.valuation(z, params.pinf) for z in zs] == [0, 1, 2, 3, 4]

    def test_wrong_variant(self, g0_system_f2, xing_system_f2):
        """Test the layouts refuse the other kind of system."""
        with pytest.raises(ConstructionError):
            build_rows_xing(g0_system_f2, 2, 2)
        with pytest.raises(ConstructionError):
            build_rows_block(xing_system_f2, 2, 2)


class TestSerialization:
    """Tests for the matrix file format."""

    def test_round_trip(self, g0_matrices_f2):
        """Test deserialize inverts serialize."""
        text = serialize(g0_matrices_f2)
        assert text.startswith(FORMAT_VERSION + "\nq=2^1\ns=2 variant=genus0 mu=1 g=0 digest=")
        assert " checksum=" in text.splitlines()[2]
        loaded = deserialize(text)
        assert loaded == g0_matrices_f2
        assert loaded.digest == g0_matrices_f2.digest
        assert loaded.checksum == g0_matrices_f2.checksum
        assert len(loaded.digest) == len(loaded.checksum) == 16

    def test_tampered_entry(self, g0_matrices_f2):
        """Test a changed entry breaks the checksum."""
        lines = serialize(g0_matrices_f2).splitlines()
        lines[4] = "0" + lines[4][1:]
        with pytest.raises(MatrixFormatError, match="Checksum mismatch"):
            deserialize("\n".join(lines) + "\n")

    def test_unknown_version(self, g0_matrices_f2):
        """Test other format versions are rejected."""
        with pytest.raises(MatrixFormatError):
            deserialize(serialize(g0_matrices_f2).replace(FORMAT_VERSION, "FFNETS v2"))

    def test_trailing_content(self, g0_matrices_f2):
        """Test extra lines after the last matrix are rejected."""
        with pytest.raises(MatrixFormatError, match="Trailing"):
            deserialize(serialize(g0_matrices_f2) + "1 0\n")

    def test_entry_out_of_range(self, g0_matrices_f2):
        """Test entries must be field indices."""
        lines = serialize(g0_matrices_f2).splitlines()
        lines[4] = "2" + lines[4][1:]
        with pytest.raises(MatrixFormatError, match="out of range"):
            deserialize("\n".join(lines) + "\n")

    def test_empty(self):
        """Test an empty file is rejected."""
        with pytest.raises(MatrixFormatError):
            deserialize("")

    def test_save_and_load(self, g0_matrices_f2, tmp_path):
        """Test files written by save_matrix_set load back."""
        path = tmp_path / "c.txt"
        digest = save_matrix_set(g0_matrices_f2, path)
        loaded = load_matrix_set(path)
        assert loaded == g0_matrices_f2
        assert loaded.digest == digest

    def test_extension_field_header(self, f4):
        """Test the modulus is kept for F_4."""
        ms = build_matrices(build_system(genus0_kit(f4, 3)), 3, 3)
        text = serialize(ms)
        assert text.splitlines()[1] == "q=2^2 modulus=1,1,1"
        assert deserialize(text) == ms

    def test_genmatrix_equality(self, g0_matrices_f2):
        """Test GenMatrix compares entries."""
        C = g0_matrices_f2.matrix(1)
        assert C == GenMatrix(1, C.entries.copy())
        assert C != GenMatrix(2, C.entries.copy())


class TestParamsDigest:
    """Tests for the digest= and checksum= tokens."""

    def test_independent_of_depth(self, f2):
        """Test the same parameters give the same digest at every depth."""
        params = genus0_kit(f2, 2)
        shallow = build_matrices(build_system(params), 4, 4)
        deep = build_matrices(build_system(params), 8, 8)
        assert shallow.digest == deep.digest == params_digest(params)
        assert serialize(shallow) != serialize(deep)
        assert shallow.checksum != deep.checksum

    def test_distinct_params(self, f2):
        """Test different parameters give different digests."""
        assert params_digest(genus0_kit(f2, 2)) != params_digest(genus0_kit(f2, 3, mu=2))

    def test_curve_digest(self, curves):
        """Test gpos and xing kits on one curve differ in digest."""
        gpos = params_digest(elliptic_kit(curves["F2"], 2, Variant.GPOS))
        xing = params_digest(elliptic_kit(curves["F2"], 2, Variant.XING))
        assert gpos != xing
        assert len(gpos) == 16

    def test_tampered_digest(self, g0_matrices_f2):
        """Test an edited digest token breaks the checksum."""
        text = serialize(g0_matrices_f2)
        forged = "f" * 16 if g0_matrices_f2.digest != "f" * 16 else "0" * 16
        with pytest.raises(MatrixFormatError, match="Checksum mismatch"):
            deserialize(text.replace(f"digest={g0_matrices_f2.digest}", f"digest={forged}"))

    def test_missing_checksum(self, g0_matrices_f2):
        """Test files without a checksum are rejected."""
        text = serialize(g0_matrices_f2)
        with pytest.raises(MatrixFormatError, match="Missing checksum"):
            deserialize(text.replace(f" checksum={g0_matrices_f2.checksum}", ""))

    def test_hand_built_set(self, g0_matrices_f2):
        """Test a set without parameters serializes without a digest and loads back."""
        C = g0_matrices_f2.matrix(1)
        ms = MatrixSet(g0_matrices_f2.field, Variant.GENUS0, 1, 0, [GenMatrix(1, C.entries)])
        text = serialize(ms)
        assert "digest=" not in text
        loaded = deserialize(text)
        assert loaded == ms
        assert loaded.digest == ""


class TestRowCache:
    """Tests for cached, idempotent row generation."""

    def test_repeat_and_shallower_requests_reuse_expansions(self, f2, monkeypatch):
        """Test no new expansion is computed for depths already generated."""
        system = build_system(genus0_kit(f2, 2))
        first = build_matrices(system, 6, 6)
        ff = system.params.ff
        original = ff.expansion_digits
        calls = []

        def counting(*args):
            calls.append(args)
            return original(*args)

        monkeypatch.setattr(ff, "expansion_digits", counting)
        again = build_matrices(system, 6, 6)
        shallower = build_matrices(system, 3, 4)
        assert calls == []
        assert again == first
        for i in (1, 2):
            assert np.array_equal(as_ints(shallower.matrix(i).entries), as_ints(first.matrix(i).prefix(3, 4)))

    def test_deeper_request_extends(self, f2):
        """Test a deeper request extends the cached expansions."""
        system = build_system(genus0_kit(f2, 2))
        build_matrices(system, 4, 4)
        assert system.cached_terms(1, 1) == 5
        deep = build_matrices(system, 4, 10)
        assert system.cached_terms(1, 1) == 11
        assert np.array_equal(as_ints(deep.matrix(1).entries), pascal_matrix(4, 10, 2))


class TestPrefixConsistency:
    """Tests that deeper generation only appends rows and columns."""

    def test_genus0_quadratic_pinf(self, f2):
        """Test separate builds to two depths agree on the smaller prefix."""
        small = build_matrices(build_system(genus0_kit(f2, 3, mu=2)), 3, 4)
        large = build_matrices(build_system(genus0_kit(f2, 3, mu=2)), 5, 10)
        for i in range(1, 4):
            assert np.array_equal(as_ints(small.matrix(i).entries), as_ints(large.matrix(i).prefix(3, 4)))

    def test_positive_genus(self, curves, gpos_system_f3):
        """Test the F_3 curve kit agrees between depths 3x5 and 4x8."""
        small = build_matrices(build_system(elliptic_kit(curves["F3"], 3, Variant.GPOS)), 3, 5)
        large = build_matrices(gpos_system_f3, 4, 8)
        for i in range(1, 4):
            assert np.array_equal(as_ints(small.matrix(i).entries), as_ints(large.matrix(i).prefix(3, 5)))


class TestXingDeletion:
    """Tests that the deleted gap coefficients account for the w_f components."""

    def test_gap_element_is_unit_vector(self, xing_system_f3):
        """Test w_f expands to the unit vector at n_f in the z-system."""
        system = xing_system_f3
        ff, pinf = system.params.ff, system.params.pinf
        Z = z_matrix(system, 4)
        for n, w in system.gaps:
            a = as_ints(z_coefficients(Z, ff.expansion_digits(w, pinf, 4)))
            assert a.tolist() == [1 if k == n else 0 for k in range(4)]

    def test_reinserted_coefficients_reproduce_beta(self, xing_system_f3):
        """Test beta minus its retained and deleted components vanishes to the raw depth at P_inf."""
        system = xing_system_f3
        ff, pinf = system.params.ff, system.params.pinf
        g = len(system.gaps)
        depth = 7
        ms = build_matrices(system, 3, depth - g)
        Z = z_matrix(system, depth)
        t = ff.local_parameter(pinf)
        gap_set = set(system.gap_numbers)
        kept = [k for k in range(depth) if k not in gap_set]
        for i in range(1, ms.s + 1):
            for j in range(1, 4):
                beta = system.beta(i, j)
                a = z_coefficients(Z, ff.expansion_digits(beta, pinf, depth))
                assert np.array_equal(as_ints(a[kept]), as_ints(ms.matrix(i).row(j)))
                residual = beta
                for n, w in system.gaps:
                    residual = residual - w.scale(a[n])
                for k in kept:
                    residual = residual - (t**k).scale(a[k])
                assert residual.is_zero() or ff.valuation(residual, pinf) >= depth
