from fractions import Fraction

import numpy as np
import pytest

from seqclass.linalg import max_norm
from seqclass.schur import (
    CYCLE_123,
    CYCLE_132,
    IDENTITY_3,
    SchurLabel,
    UnsupportedDimension,
    basis_ket,
    clebsch_lift,
    compose,
    lift_vector,
    permutation_operator,
    schur_transform,
)
from seqclass.states import Basis, analytic_state

from conftest import haar_unitary

H = Fraction(1, 2)


def test_two_qubit_row_order_and_coefficients():
    t = schur_transform(2)
    assert [(lab.s, lab.m) for lab in t.labels] == [(1, 1), (1, 0), (1, -1), (0, 0)]
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(t.unitary[1], [0, r, r, 0], atol=1e-15)
    np.testing.assert_allclose(t.unitary[3], [0, r, -r, 0], atol=1e-15)


def test_three_qubit_row_order():
    t = schur_transform(3)
    expected = [
        (3 * H, 3 * H, 0), (3 * H, H, 0), (3 * H, -H, 0), (3 * H, -3 * H, 0),
        (H, H, 1), (H, -H, 1), (H, H, 0), (H, -H, 0),
    ]
    assert [(lab.s, lab.m, lab.path) for lab in t.labels] == expected


def test_three_qubit_spin_half_path1_row():
    t = schur_transform(3)
    row = t.unitary[t.index(SchurLabel(H, H, 1))]
    expected = (basis_ket("100") + basis_ket("010") - 2 * basis_ket("001")) / np.sqrt(6)
    np.testing.assert_allclose(row, expected, atol=1e-15)


def test_three_halves_minus_half_is_symmetric():
    # the printed row repeats |011>; the symmetric state is used
    t = schur_transform(3)
    row = t.unitary[t.index(SchurLabel(3 * H, -H))]
    expected = (basis_ket("011") + basis_ket("101") + basis_ket("110")) / np.sqrt(3)
    np.testing.assert_allclose(row, expected, atol=1e-15)


@pytest.mark.parametrize("n", [2, 3])
def test_unitary(n):
    u = schur_transform(n).unitary
    assert max_norm(u @ u.conj().T - np.eye(2**n)) <= 1e-12


def test_unsupported_n():
    with pytest.raises(UnsupportedDimension):
        schur_transform(4)


def test_schur_label_validation():
    with pytest.raises(ValueError):
        SchurLabel(1, 2)
    with pytest.raises(ValueError):
        SchurLabel(H, 1)
    assert SchurLabel(Fraction(3, 2), Fraction(-1, 2)).m == Fraction(-1, 2)


def test_lift_top_of_ladder():
    (up, cu), (down, cd) = clebsch_lift(SchurLabel(1, 1), H)
    assert up == SchurLabel(3 * H, 3 * H) and cu == pytest.approx(1.0)
    assert cd == 0.0 and down is None


def test_lift_triplet_top_with_spin_down():
    (up, cu), (down, cd) = clebsch_lift(SchurLabel(1, 1), -H)
    assert up == SchurLabel(3 * H, H)
    assert down == SchurLabel(H, H, 1)
    assert cu == pytest.approx(np.sqrt(1 / 3), abs=1e-15)
    assert cd == pytest.approx(np.sqrt(2 / 3), abs=1e-15)


def test_lift_singlet():
    (up, cu), (down, cd) = clebsch_lift(SchurLabel(0, 0), H)
    assert up == SchurLabel(H, H, 0) and cu == pytest.approx(1.0)
    assert down is None and cd == 0.0


def test_lift_against_transform_up_to_block_phase():
    # Coupling coefficients reproduce the tabulated rows with a -1 phase on the
    # whole spin-1/2 sector (both paths, both m), +1 on spin-3/2.
    t2, t3 = schur_transform(2), schur_transform(3)
    phase = np.array([1, 1, 1, 1, -1, -1, -1, -1])
    for i, lab in enumerate(t2.labels):
        for bit, dm in ((0, H), (1, -H)):
            comp = np.kron(t2.unitary[i], basis_ket(str(bit)))
            via_transform = t3.unitary @ comp
            np.testing.assert_allclose(phase * lift_vector(lab, dm), via_transform, atol=1e-14)


def test_permutation_identity():
    assert np.array_equal(permutation_operator(IDENTITY_3), np.eye(8))


def test_permutation_123_on_basis_state():
    P = permutation_operator(CYCLE_123)
    np.testing.assert_array_equal(P @ basis_ket("001"), basis_ket("100"))
    # |i1 i2 i3> -> |i3 i1 i2>
    np.testing.assert_array_equal(P @ basis_ket("110"), basis_ket("011"))


def test_permutation_is_representation():
    P = permutation_operator
    for s in (CYCLE_123, CYCLE_132, (1, 0, 2), (0, 2, 1)):
        for t in (CYCLE_123, (2, 1, 0)):
            assert np.array_equal(P(compose(s, t)), P(s) @ P(t))
    assert compose(CYCLE_123, CYCLE_132) == IDENTITY_3


def test_invalid_permutation():
    with pytest.raises(ValueError):
        permutation_operator((0, 0, 1))


def _comp(pat):
    return analytic_state(pat).in_basis(Basis.COMPUTATIONAL).matrix


def test_p123_conjugation_runs_cycle_backwards():
    # P((123)) sends |a a b> to |b a a>, so rho_001 goes to rho_100 = rho_011
    P = permutation_operator(CYCLE_123)
    assert max_norm(P @ _comp("001") @ P.T - _comp("011")) <= 1e-12
    assert max_norm(P.T @ _comp("001") @ P - _comp("010")) <= 1e-12


def test_three_step_recipe_reproduces_rho010_and_rho011():
    # 1. rho_001 to computational basis  2. relabel |i1 i2 i3> -> |i2 i3 i1>
    # 3. back to the Schur basis
    t3 = schur_transform(3)
    relabel = np.zeros((8, 8))
    for x in range(8):
        b = format(x, "03b")
        relabel[int(b[1] + b[2] + b[0], 2), x] = 1
    assert np.array_equal(relabel, permutation_operator(CYCLE_132))
    rho = _comp("001")
    for target in ("010", "011"):
        rho = relabel @ rho @ relabel.T
        assert max_norm(t3.to_schur(rho) - analytic_state(target).matrix) <= 1e-12


def test_schur_weyl_commutation():
    rng = np.random.default_rng(11)
    perms = [permutation_operator(s) for s in (CYCLE_123, (1, 0, 2), (0, 2, 1))]
    for _ in range(100):
        u = haar_unitary(rng)
        uuu = np.kron(np.kron(u, u), u)
        for P in perms:
            assert max_norm(P @ uuu - uuu @ P) <= 1e-10


def test_schur_basis_block_diagonalises_collective_rotation():
    rng = np.random.default_rng(3)
    t3 = schur_transform(3)
    u = haar_unitary(rng)
    block = t3.to_schur(np.kron(np.kron(u, u), u))
    # no coupling between s=3/2 and s=1/2, nor between the two paths
    assert max_norm(block[:4, 4:]) <= 1e-12
    assert max_norm(block[4:6, 6:]) <= 1e-12
    assert max_norm(block[4:6, 4:6] - block[6:, 6:]) <= 1e-12
