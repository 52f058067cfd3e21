import numpy as np
import pytest

import oracle
from shiftlab import (
    InputError,
    OperatorTuple,
    SpaceKind,
    Subspace,
    has_gws,
    krylov_closure,
    local_corank,
    make_shift,
    mult_upper,
    multiplicity,
    orthonormalize,
    prefix_coinvariant,
    semi_invariant_bound_check,
    shifted_closure_check,
    wandering_subspace,
)


def two_jordan_blocks():
    T = np.zeros((4, 4), dtype=complex)
    T[1, 0] = 1.0
    T[3, 2] = 1.0
    return T


def commuting_polynomials(rng, d, n_ops):
    """A commuting tuple built from polynomials of one random matrix."""
    M = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    M /= np.linalg.norm(M, 2)
    ops = []
    for _ in range(n_ops):
        coeffs = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        ops.append(coeffs[0] * np.eye(d) + coeffs[1] * M + coeffs[2] * M @ M)
    return ops


def test_operator_tuple_validation_and_commutators():
    with pytest.raises(InputError):
        OperatorTuple(())
    with pytest.raises(InputError):
        OperatorTuple((np.eye(2), np.eye(3)))
    t = OperatorTuple((np.eye(3), np.diag([1.0, 2.0, 3.0])))
    assert t.commutator_residual < 1e-15
    bad = OperatorTuple((np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])))
    assert bad.commutator_residual > 0.5


def test_shifted_tuple():
    t = OperatorTuple((np.zeros((2, 2)),))
    s = t.shifted(3.0)
    assert np.allclose(s.ops[0], -3 * np.eye(2))
    with pytest.raises(InputError):
        t.shifted((1.0, 2.0))


def test_krylov_closure_single_shift():
    T = make_shift(SpaceKind.hardy(), 5).operator
    full = krylov_closure((T,), np.eye(5)[:, :1])
    assert full.dim == 5
    tail = krylov_closure((T,), np.eye(5)[:, 4:])
    assert tail.dim == 1
    middle = krylov_closure((T,), np.eye(5)[:, 2:3])
    assert middle.dim == 3  # e_2, e_3, e_4


def test_krylov_closure_restricted():
    T = make_shift(SpaceKind.hardy(), 5).operator
    L = Subspace(np.eye(5)[:, 2:], _checked=True)  # invariant tail
    closed = krylov_closure((T,), np.eye(5)[:, 2:3], restrict_to=L)
    assert closed.dim == 3
    assert L.containment_residual(closed) < 1e-12
    # a generator orthogonal to the last directions only reaches part of L
    closed2 = krylov_closure((T,), np.eye(5)[:, 4:], restrict_to=L)
    assert closed2.dim == 1


def test_krylov_closure_matches_bruteforce_orbit():
    rng = np.random.default_rng(23)
    for trial in range(10):
        ops = commuting_polynomials(rng, 6, 2)
        G = rng.standard_normal((6, 1)) + 1j * rng.standard_normal((6, 1))
        got = krylov_closure(ops, G).dim
        want = oracle.orbit_dim(ops, G)
        assert got == want


def test_shifted_closure_check_random_sweep():
    rng = np.random.default_rng(31)
    for trial in range(30):
        d = int(rng.integers(2, 7))
        ops = commuting_polynomials(rng, d, int(rng.integers(2, 4)))
        cols = int(rng.integers(1, 3))
        G = rng.standard_normal((d, cols)) + 1j * rng.standard_normal((d, cols))
        lam = rng.standard_normal(len(ops)) + 1j * rng.standard_normal(len(ops))
        assert shifted_closure_check(ops, G, tuple(lam), tol=1e-8)


def test_wandering_subspace_of_full_shift():
    T = make_shift(SpaceKind.dirichlet(), 5).operator
    W = wandering_subspace((T,), Subspace.full(5))
    assert W.dim == 1
    assert np.allclose(np.abs(W.basis[:, 0]), np.eye(5)[:, 0])
    assert has_gws((T,), Subspace.full(5))


def test_wandering_subspace_two_blocks():
    T = two_jordan_blocks()
    W = wandering_subspace((T,), Subspace.full(4))
    assert W.dim == 2
    assert has_gws((T,), Subspace.full(4))


def test_local_corank_against_matrix_rank():
    rng = np.random.default_rng(41)
    T = two_jordan_blocks()
    L = Subspace.full(4)
    for _ in range(20):
        lam = (rng.standard_normal() + 1j * rng.standard_normal(),)
        got = local_corank((T,), L, lam)
        want = oracle.corank_at([T], lam)
        assert got == want
    assert local_corank((T,), L, (0.0,)) == 2


def test_multiplicity_single_shift_is_one():
    T = make_shift(SpaceKind.hardy(), 6).operator
    res = multiplicity((T,))
    assert (res.lower, res.upper, res.certified) == (1, 1, True)
    assert res.witness_generators is not None and len(res.witness_generators) == 1


def test_multiplicity_two_blocks_is_two():
    res = multiplicity((two_jordan_blocks(),))
    assert (res.lower, res.upper, res.certified) == (2, 2, True)
    assert res.witness_point == (0j,)


def test_multiplicity_zero_operator_needs_full_basis():
    res = multiplicity((np.zeros((3, 3)),))
    assert (res.lower, res.upper, res.certified) == (3, 3, True)


def test_multiplicity_zero_subspace():
    res = multiplicity((np.eye(3),), Subspace.zero(3))
    assert (res.lower, res.upper, res.certified) == (0, 0, True)


def test_multiplicity_on_invariant_subspace():
    T = make_shift(SpaceKind.bergman(), 6).operator
    L = Subspace(np.eye(6)[:, 3:], _checked=True)
    res = multiplicity((T,), L)
    assert (res.lower, res.upper, res.certified) == (1, 1, True)


def test_multiplicity_respects_extra_lambda_samples():
    # diagonal with a repeated eigenvalue away from the default grid: the
    # repeated point is found by eigenvalue combos either way; passing it
    # explicitly must not change the certified answer
    T = np.diag([0.7, 0.7, -0.2])
    res = multiplicity((T,))
    res2 = multiplicity((T,), lambda_samples=[(0.7,)])
    assert res.certified and res2.certified
    assert res.upper == res2.upper == 2


def test_multiplicity_matches_bruteforce():
    rng = np.random.default_rng(59)
    cases = []
    # single operators with known structure
    cases.append(([two_jordan_blocks()], np.eye(4)))
    T = make_shift(SpaceKind.hardy(), 5).operator
    cases.append(([T], np.eye(5)))
    # commuting pairs from polynomials of a random matrix
    for _ in range(3):
        ops = commuting_polynomials(rng, 5, 2)
        cases.append((ops, np.eye(5)))
    for ops, basis in cases:
        res = multiplicity(tuple(ops))
        low, up = oracle.mult_bruteforce(ops, basis, seed=3)
        assert res.lower == low
        assert res.upper == up
        assert res.certified == (low == up)


def test_mult_upper_validation_and_search():
    T = two_jordan_blocks()
    L = Subspace.full(4)
    assert mult_upper((T,), L, 2) is not None
    assert mult_upper((T,), L, 1, trials=16) is None  # two blocks need two
    with pytest.raises(InputError):
        mult_upper((T,), L, -1)


def test_semi_invariant_bound_check():
    T = make_shift(SpaceKind.hardy(), 6).operator
    L1 = Subspace.full(6)
    L2 = Subspace(np.eye(6)[:, 3:], _checked=True)
    rep = semi_invariant_bound_check((T,), L1, L2)
    assert rep.dim_gap == 3
    assert rep.bound_holds is True
    assert rep.mult_gap.upper <= rep.mult_big.upper
    assert max(rep.invariance_residuals) < 1e-12
    assert rep.identity_residual < 1e-12
