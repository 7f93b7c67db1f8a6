import numpy as np
import pytest

from squeezetransfer.errors import BasisMismatch, NotHermitian, NotTensorBasis
from squeezetransfer.qalgebra import (
    Dicke,
    Fock,
    OperatorMatrix,
    StateVector,
    Tensor,
    eigh,
    expval,
    identity,
    partial_trace,
    propagator,
    tensor,
)
from squeezetransfer.qstates import boson_ops, coherent_state, dicke_state, fock_state, spin_ops


def random_hermitian(rng, d, basis=None):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return OperatorMatrix(basis or Fock(d - 1), (m + m.conj().T) / 2, hermitian=True)


def test_basis_dims():
    assert Fock(4).dim == 5
    assert Dicke.from_j(1.5).dim == 4
    assert Tensor(Dicke(2), Fock(3)).dim == 12
    with pytest.raises(ValueError):
        Dicke.from_j(0.3)


def test_state_length_checked():
    with pytest.raises(BasisMismatch):
        StateVector(Fock(2), [1, 0])


def test_hermitian_flag_verified():
    with pytest.raises(NotHermitian):
        OperatorMatrix(Fock(1), [[0, 1], [0, 0]], hermitian=True)


def test_eigh_diagonal():
    es = eigh(OperatorMatrix(Fock(2), np.diag([0.0, 1.0, 2.0]), hermitian=True))
    assert np.allclose(es.eigenvalues, [0, 1, 2])
    assert np.allclose(np.abs(es.eigenvectors), np.eye(3))


def test_eigh_spin_half_sx():
    es = eigh(spin_ops(0.5).S_x)
    assert np.allclose(es.eigenvalues, [-0.5, 0.5])


def test_eigh_requires_flag():
    with pytest.raises(NotHermitian):
        eigh(OperatorMatrix(Fock(1), np.eye(2)))


def test_eigh_reconstruction(rng):
    a = random_hermitian(rng, 12)
    es = eigh(a)
    v = es.eigenvectors
    scale = np.linalg.norm(a.entries)
    assert np.max(np.abs(a.entries @ v - v * es.eigenvalues)) <= 1e-10 * scale
    assert np.max(np.abs(v.conj().T @ v - np.eye(12))) <= 1e-10
    assert np.all(np.diff(es.eigenvalues) >= 0)


def test_dicke_hamiltonian_spectrum_symmetric():
    from squeezetransfer.dicke import DickeConfig, build_hamiltonian

    h = build_hamiltonian(DickeConfig(2, n_max=16))
    # small explicit case: N=2, n_max=2 built by hand from Kronecker products
    sm = np.array([[0, np.sqrt(2), 0], [0, 0, np.sqrt(2)], [0, 0, 0]])
    a = np.diag([1.0, np.sqrt(2)], 1)
    hs = (np.kron(sm.T, a) + np.kron(sm, a.T)) / np.sqrt(2)
    oracle = np.sort(np.roots(np.poly(hs)).real)
    es = eigh(OperatorMatrix(Tensor(Dicke(2), Fock(2)), hs, hermitian=True))
    assert np.allclose(es.eigenvalues, oracle, atol=1e-6)
    assert np.allclose(es.eigenvalues, -es.eigenvalues[::-1], atol=1e-10)
    assert np.allclose(np.linalg.eigvalsh(h.entries), -np.linalg.eigvalsh(h.entries)[::-1], atol=1e-9)


def test_propagator_identity_and_phase():
    op = OperatorMatrix(Fock(1), np.diag([0.0, 2.0]), hermitian=True)
    assert np.allclose(propagator(op, 0.0).entries, np.eye(2))
    assert np.allclose(propagator(op, np.pi / 2).entries, np.diag([1, -1]), atol=1e-12)


def test_propagator_group_law(rng):
    h = random_hermitian(rng, 8)
    u1, u2, u12 = propagator(h, 0.3), propagator(h, 1.1), propagator(h, 1.4)
    assert np.max(np.abs(u1.entries @ u2.entries - u12.entries)) <= 1e-10
    for u in (u1, u2, u12):
        assert np.max(np.abs(u.entries.conj().T @ u.entries - np.eye(8))) <= 1e-10


def test_norm_conservation(rng):
    h = random_hermitian(rng, 10)
    psi = StateVector.normalized(Fock(9), rng.normal(size=10) + 0j)
    for t in (0.1, 1.0, 17.0):
        assert abs((propagator(h, t) @ psi).norm - 1) <= 1e-10


def test_tensor_basics(rng):
    v = tensor(fock_state(0, 2), fock_state(0, 3))
    assert v.amps[0] == 1 and v.basis.dim == 12
    i = tensor(identity(Fock(1)), identity(Fock(2)))
    assert np.allclose(i.entries, np.eye(6))
    a = OperatorMatrix(Fock(2), rng.normal(size=(3, 3)))
    b = OperatorMatrix(Fock(1), rng.normal(size=(2, 2)))
    u = StateVector(Fock(2), rng.normal(size=3))
    w = StateVector(Fock(1), rng.normal(size=2))
    lhs = tensor(a, b) @ tensor(u, w)
    rhs = tensor(a @ u, b @ w)
    assert np.allclose(lhs.amps, rhs.amps)


def test_tensor_associative(rng):
    ms = [OperatorMatrix(Fock(k), rng.normal(size=(k + 1, k + 1))) for k in (1, 2, 1)]
    left = tensor(tensor(ms[0], ms[1]), ms[2])
    right = tensor(ms[0], tensor(ms[1], ms[2]))
    assert np.max(np.abs(left.entries - right.entries)) <= 1e-12


def test_partial_trace_product():
    u = StateVector.normalized(Fock(1), [1, 1j])
    v = StateVector.normalized(Fock(2), [1, 2, 3])
    rho = partial_trace(tensor(u, v), "left")
    assert np.allclose(rho.entries, np.outer(u.amps, u.amps.conj()))
    rho_r = partial_trace(tensor(u, v).density(), "right")
    assert np.allclose(rho_r.entries, np.outer(v.amps, v.amps.conj()))


def test_partial_trace_bell():
    bell = StateVector.normalized(Tensor(Fock(1), Fock(1)), [1, 0, 0, 1])
    assert np.allclose(partial_trace(bell, "left").entries, np.eye(2) / 2)


def test_partial_trace_expectation(rng):
    basis = Tensor(Fock(2), Dicke(3))
    psi = StateVector.normalized(basis, rng.normal(size=12) + 1j * rng.normal(size=12))
    a = random_hermitian(rng, 3)
    rho = partial_trace(psi, "left")
    lhs = np.trace(rho.entries @ a.entries)
    rhs = expval(psi, tensor(a, identity(Dicke(3))))
    assert abs(lhs - rhs) <= 1e-12
    assert abs(np.trace(rho.entries) - 1) <= 1e-10
    assert np.min(np.linalg.eigvalsh(rho.entries)) >= -1e-10


def test_partial_trace_needs_tensor():
    with pytest.raises(NotTensorBasis):
        partial_trace(fock_state(0, 2), "left")


def test_expval_examples():
    ops = boson_ops(4)
    assert expval(fock_state(0, 4), ops.number) == 0
    n_op = spin_ops(2).number_N
    for n in range(5):
        assert expval(dicke_state(2, n), n_op) == n
    with pytest.raises(BasisMismatch):
        expval(fock_state(0, 3), ops.number)


def test_expval_coherent_mean():
    alpha = 0.7995
    psi = coherent_state(alpha, 32)
    assert abs(expval(psi, boson_ops(32).number).real - alpha ** 2) <= 1e-10
