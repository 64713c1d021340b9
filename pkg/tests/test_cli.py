"""Tests for the command-line frontend."""

import pytest

from ffnets import cli, selftest
from ffnets.genmat import GenMatrix, MatrixSet, save_matrix_set, serialize
from ffnets.selftest import SelftestCheck, check_pascal_golden
from ffnets.types import Variant


@pytest.fixture
def matrix_file(tmp_path):
    """Matrix file of the F_2 genus-0 kit, 8 x 8."""
    path = tmp_path / "c.txt"
    assert cli.main(["construct", "--q", "2", "--s", "2", "--rows", "8", "--out", str(path)]) == 0
    return path


def _lines(capsys):
    return capsys.readouterr().out.splitlines()


class TestConstruct:
    """Tests for the construct command."""

    def test_prints_digest(self, tmp_path, capsys, g0_matrices_f2):
        """Test the printed digest matches the library build."""
        path = tmp_path / "c.txt"
        assert cli.main(["construct", "--q", "2", "--s", "2", "--rows", "8", "--out", str(path)]) == 0
        assert _lines(capsys) == [g0_matrices_f2.digest]
        assert path.read_text() == serialize(g0_matrices_f2)

    def test_digest_independent_of_depth(self, tmp_path, capsys):
        """Test builds of one parameter set at different depths print the same digest."""
        for rows in ("4", "8"):
            path = tmp_path / f"c{rows}.txt"
            assert cli.main(["construct", "--q", "2", "--s", "2", "--rows", rows, "--out", str(path)]) == 0
        first, second = _lines(capsys)
        assert first == second
        assert f"digest={first}" in (tmp_path / "c4.txt").read_text()

    def test_byte_identical_reruns(self, tmp_path):
        """Test two runs write the same bytes."""
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        args = ["construct", "--params", "variant=xing backend=elliptic:F2", "--rows", "4"]
        assert cli.main(args + ["--out", str(a)]) == 0
        assert cli.main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_extension_degree_flag(self, tmp_path):
        """Test --q 2 --e 2 builds over F_4."""
        path = tmp_path / "c.txt"
        assert cli.main(["construct", "--q", "2", "--e", "2", "--s", "3", "--rows", "3", "--out", str(path)]) == 0
        assert path.read_text().splitlines()[1] == "q=2^2 modulus=1,1,1"

    def test_curve_flag(self, tmp_path):
        """Test --curve selects the positive-genus construction."""
        path = tmp_path / "c.txt"
        assert cli.main(["construct", "--curve", "F3", "--s", "3", "--rows", "4", "--out", str(path)]) == 0
        assert "variant=gpos mu=1 g=1" in path.read_text().splitlines()[2]

    @pytest.mark.parametrize(
        "extra",
        [["--q", "2", "--s", "4"], ["--e", "2"], ["--q", "2", "--rows", "0"], ["--params", "colour=red"]],
    )
    def test_invalid(self, tmp_path, capsys, extra):
        """Test invalid parameters exit with status 2."""
        assert cli.main(["construct", "--out", str(tmp_path / "c.txt")] + extra) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_missing_required(self):
        """Test argparse rejects a missing --out."""
        with pytest.raises(SystemExit):
            cli.main(["construct"])


class TestPoints:
    """Tests for the points command."""

    def test_exact(self, matrix_file, capsys):
        """Test exact output of the first three points."""
        capsys.readouterr()
        args = ["points", "--in", str(matrix_file), "--count", "3", "--m", "3", "--exact"]
        assert cli.main(args) == 0
        assert _lines(capsys) == ["0 0/8 0/8", "1 7/8 7/8", "2 2/8 5/8"]

    def test_binary64(self, matrix_file, capsys):
        """Test decimal output."""
        capsys.readouterr()
        assert cli.main(["points", "--in", str(matrix_file), "--n0", "1", "--count", "1", "--m", "3"]) == 0
        assert _lines(capsys) == ["1 0.875 0.875"]

    def test_precision_alias(self, matrix_file, capsys):
        """Test --precision is accepted for --m."""
        capsys.readouterr()
        assert cli.main(["points", "--in", str(matrix_file), "--count", "1", "--precision", "2", "--exact"]) == 0
        assert _lines(capsys) == ["0 0/4 0/4"]

    def test_too_deep(self, matrix_file):
        """Test m beyond the generated rows exits with 2."""
        assert cli.main(["points", "--in", str(matrix_file), "--count", "1", "--m", "9"]) == 2


class TestVerification:
    """Tests for tvalue and netcheck."""

    def test_tvalue(self, matrix_file, capsys):
        """Test the T* table of the F_2 kit."""
        capsys.readouterr()
        assert cli.main(["tvalue", "--in", str(matrix_file), "--mmax", "4"]) == 0
        assert _lines(capsys) == ["1 0 0 0", "2 0 0 0", "3 0 0 0", "4 0 0 0"]

    def test_tvalue_violation(self, tmp_path, capsys, g0_matrices_f2):
        """Test a violated bound exits with 1."""
        C = g0_matrices_f2.matrix(1)
        ms = MatrixSet(g0_matrices_f2.field, Variant.GENUS0, 1, 0, [GenMatrix(1, C.entries), GenMatrix(2, C.entries)])
        path = tmp_path / "bad.txt"
        save_matrix_set(ms, path)
        assert cli.main(["tvalue", "--in", str(path), "--mmax", "3"]) == 1
        assert "violation" in capsys.readouterr().err

    def test_tvalue_limit(self, matrix_file):
        """Test --mmax above the exhaustive limit exits with 2."""
        assert cli.main(["tvalue", "--in", str(matrix_file), "--mmax", "11"]) == 2

    def test_netcheck(self, matrix_file, capsys):
        """Test every shape passes at m = 3, t = 0."""
        capsys.readouterr()
        assert cli.main(["netcheck", "--in", str(matrix_file), "--m", "3", "--t", "0", "--offset", "1"]) == 0
        assert _lines(capsys) == ["0,3 pass", "1,2 pass", "2,1 pass", "3,0 pass"]

    def test_tampered_file(self, matrix_file, capsys):
        """Test a modified matrix file is rejected."""
        lines = matrix_file.read_text().splitlines()
        lines[4] = "0" + lines[4][1:]
        matrix_file.write_text("\n".join(lines) + "\n")
        assert cli.main(["netcheck", "--in", str(matrix_file), "--m", "3", "--t", "0"]) == 2
        assert "Digest mismatch" in capsys.readouterr().err


class TestExpand:
    """Tests for the expand command."""

    def test_geometric_series(self, capsys):
        """Test 1/(1-x) at x over F_3."""
        assert cli.main(["expand", "--q", "3", "--element", "1/(1-x)", "--place", "x", "--depth", "4"]) == 0
        assert _lines(capsys) == ["0 1", "1 1", "2 1", "3 1"]

    def test_shifted_place(self, capsys):
        """Test x^2 at x + 1 over F_2."""
        assert cli.main(["expand", "--q", "2", "--element", "x^2", "--place", "x+1", "--depth", "3"]) == 0
        assert _lines(capsys) == ["0 1", "1 0", "2 1"]

    def test_pole(self, capsys):
        """Test a pole starts the listing at a negative index."""
        assert cli.main(["expand", "--q", "2", "--element", "1/x", "--place", "x", "--depth", "3"]) == 0
        assert _lines(capsys) == ["-1 1", "0 0", "1 0"]

    def test_degree_two_place(self, capsys):
        """Test coefficients at a degree-2 place print two digits."""
        assert cli.main(["expand", "--q", "2", "--element", "x", "--place", "x^2+x+1", "--depth", "2"]) == 0
        assert _lines(capsys) == ["0 0,1", "1 0,0"]

    def test_curve(self, capsys):
        """Test x at (0,0) on the F_2 curve."""
        assert cli.main(["expand", "--curve", "F2", "--element", "x", "--place", "(0,0)", "--depth", "3"]) == 0
        assert _lines(capsys) == ["0 0", "1 1", "2 0"]

    def test_constant(self, capsys):
        """Test a constant expands to itself followed by zeros."""
        assert cli.main(["expand", "--q", "3", "--element", "2", "--place", "x+1", "--depth", "3"]) == 0
        assert _lines(capsys) == ["0 2", "1 0", "2 0"]

    def test_bad_element(self, capsys):
        """Test parse errors exit with 2."""
        assert cli.main(["expand", "--q", "2", "--element", "x/2", "--place", "x"]) == 2


class TestSelftest:
    """Tests for the selftest command."""

    @pytest.fixture(autouse=True)
    def golden_only(self, monkeypatch):
        monkeypatch.setattr(selftest, "CHECKS", [SelftestCheck("pascal_golden", check_pascal_golden, quick=True)])

    def test_pass(self, capsys):
        """Test the bundled golden file passes."""
        assert cli.main(["selftest", "--quick"]) == 0
        lines = _lines(capsys)
        assert lines[0].startswith("PASS pascal_golden")
        assert lines[-1] == "completed: 1/1 checks passed"

    def test_corrupt_golden(self, tmp_path, capsys):
        """Test a corrupt golden file fails."""
        golden = tmp_path / "golden.txt"
        golden.write_text("\n".join(" ".join(["0"] * 8) for _ in range(8)) + "\n")
        assert cli.main(["selftest", "--golden", str(golden)]) == 1
        lines = _lines(capsys)
        assert lines[0].startswith("FAIL pascal_golden")
        assert lines[-1] == "failed: 0/1 checks passed"
