import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import code
from zzzy.pauli import PauliOperator, commutes, compose, pauli_class, symplectic_syndromes, syndrome


def P(text, n=13):
    return PauliOperator.from_string(n, text)


def paulis(n=13):
    return st.builds(lambda z, x: PauliOperator(n, z, x), st.integers(0, 2**n - 1), st.integers(0, 2**n - 1))


class TestParsing:
    def test_round_trip(self):
        assert str(P("Z1 Z4 Y7")) == "Z1 Z4 Y7"

    def test_identity_renders_as_I(self):
        assert str(PauliOperator.identity(13)) == "I"
        assert P("I").is_identity

    def test_factors_are_sorted(self):
        assert str(P("Y7 Z1 X4")) == "Z1 X4 Y7"

    def test_letters(self):
        e = P("X1 Y2 Z3")
        assert [e.letter(q) for q in range(4)] == ["X", "Y", "Z", "I"]

    @pytest.mark.parametrize("bad", ["Q1", "Z0", "Z14", "Z", "1Z"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValueError):
            P(bad)

    def test_repeated_qubit_multiplies(self):
        assert P("Z1 X1") == P("Y1")
        assert P("Z2 Z2").is_identity

    def test_symplectic_layout(self):
        v = P("X1 Z2 Y3", n=3).to_symplectic()
        # z part first, then x part
        assert v.tolist() == [0, 1, 1, 1, 0, 1]
        assert PauliOperator.from_symplectic(v) == P("X1 Z2 Y3", n=3)


class TestCommutes:
    def test_z1_anticommutes_with_g3(self, zzzy3):
        g3 = zzzy3.generators[zzzy3.row_of_label(3)]
        assert str(g3) == "Y1 Z4 Z6"
        assert not commutes(P("Z1"), g3)

    def test_identity_commutes_with_everything(self, zzzy3):
        for g in zzzy3.generators:
            assert commutes(PauliOperator.identity(13), g)

    def test_z6z8_and_y7_share_syndrome(self, zzzy3):
        a = [commutes(P("Z6 Z8"), g) for g in zzzy3.generators]
        b = [commutes(P("Y7"), g) for g in zzzy3.generators]
        assert a == b

    def test_single_qubit_table(self):
        for a in "XYZ":
            for b in "XYZ":
                assert commutes(P(f"{a}1", 1), P(f"{b}1", 1)) == (a == b)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            commutes(P("Z1", 2), P("Z1", 3))

    @given(paulis(), paulis())
    def test_symmetric(self, a, b):
        assert commutes(a, b) == commutes(b, a)


class TestCompose:
    def test_xz_is_y(self):
        assert compose(P("X1"), P("Z1")) == P("Y1")

    def test_cancellation(self):
        assert compose(P("Z6 Z8"), P("Z6 Z8")).is_identity

    def test_residual_example(self):
        assert compose(P("Z6 Z8"), P("Y7")) == P("Z6 Y7 Z8")

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            compose(P("Z1", 2), P("Z1", 3))

    @given(paulis(), paulis(), paulis())
    def test_group_laws(self, a, b, c):
        assert compose(compose(a, b), c) == compose(a, compose(b, c))
        assert compose(a, b) == compose(b, a)
        assert compose(a, a).is_identity

    @given(paulis(), paulis(), paulis())
    def test_commutation_is_bilinear(self, a, b, c):
        ab = compose(a, b)
        assert commutes(ab, c) == (commutes(a, c) == commutes(b, c))


class TestClass:
    @pytest.mark.parametrize(
        "text, expected",
        [("Z1 X2 Y3", (1, 1, 1)), ("Z6 Z8", (2, 0, 0)), ("Y7", (0, 0, 1)), ("I", (0, 0, 0))],
    )
    def test_examples(self, text, expected):
        assert pauli_class(P(text)) == expected

    @given(paulis())
    def test_sums_to_weight(self, e):
        assert sum(pauli_class(e)) == e.weight


class TestSyndrome:
    def test_z1_fires_g1_and_g3(self, zzzy3):
        s = syndrome(zzzy3, P("Z1"))
        fired = sorted(zzzy3.labels[r] for r in np.flatnonzero(s))
        assert fired == [1, 3]

    def test_identity(self):
        for family in ("surface", "zzzy", "zzzy-dual", "xzzx"):
            c = code(family, 5)
            assert not syndrome(c, PauliOperator.identity(c.n)).any()

    def test_length_mismatch(self, zzzy3):
        with pytest.raises(ValueError):
            syndrome(zzzy3, P("Z1", 12))

    @given(st.lists(paulis(), min_size=1, max_size=8))
    def test_batch_matches_single(self, errors):
        c = code("zzzy", 3)
        z = np.array([e.z_part for e in errors])
        x = np.array([e.x_part for e in errors])
        batch = symplectic_syndromes(c.H, z, x)
        for row, e in zip(batch, errors):
            assert row.tolist() == syndrome(c, e).tolist()

    @given(paulis(), paulis())
    def test_linear(self, a, b):
        c = code("zzzy", 3)
        assert (syndrome(c, compose(a, b)) == (syndrome(c, a) ^ syndrome(c, b))).all()
