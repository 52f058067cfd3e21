"""Brute-force cross-checks, kept independent of the package on purpose.

Only raw numpy here: orbit spans are enumerated degree layer by degree layer
(valid for commuting tuples) with np.linalg.matrix_rank deciding dimensions,
and multiplicities are bracketed by exhaustive corank sampling plus random
generator search.  Slow but simple, for ambient dimensions up to ~10.
"""

import itertools

import numpy as np


def orbit_dim(ops, G, tol=1e-8, max_degree=None):
    """Dimension of the smallest subspace containing G's columns and invariant
    under every operator.  Degree-layer enumeration; stops when a whole layer
    adds no rank."""
    G = np.atleast_2d(np.asarray(G, dtype=complex))
    if G.shape[0] == 1 and ops[0].shape[0] != 1:
        G = G.T
    n = len(ops)
    if max_degree is None:
        max_degree = G.shape[0]
    layer = {(0,) * n: G}
    stacked = [G]
    rank = np.linalg.matrix_rank(np.hstack(stacked), tol=tol)
    for _ in range(max_degree):
        nxt = {}
        for k, V in layer.items():
            for i in range(n):
                kk = tuple(v + (1 if j == i else 0) for j, v in enumerate(k))
                if kk not in nxt:
                    nxt[kk] = ops[i] @ V
        stacked.extend(nxt.values())
        new_rank = np.linalg.matrix_rank(np.hstack(stacked), tol=tol)
        if new_rank == rank:
            return int(rank)
        rank, layer = new_rank, nxt
    return int(rank)


def corank_at(local_ops, lam, tol=1e-8):
    """k - rank of the stacked shifted operators, straight from matrix_rank."""
    k = local_ops[0].shape[0]
    eye = np.eye(k, dtype=complex)
    M = np.hstack([C - l * eye for C, l in zip(local_ops, lam)])
    return k - int(np.linalg.matrix_rank(M, tol=tol))


def restrict(ops, basis):
    """Local matrices of the tuple on an invariant subspace with orthonormal basis."""
    return [basis.conj().T @ A @ basis for A in ops]


def sample_points(local_ops, max_combos=400):
    """Origin plus all combinations of (rounded, deduplicated) eigenvalues."""
    n = len(local_ops)
    pts = [tuple(0.0 + 0.0j for _ in range(n))]
    spectra = []
    for C in local_ops:
        evs = np.linalg.eigvals(C)
        seen = {}
        for z in evs:
            seen[(round(z.real, 7), round(z.imag, 7))] = complex(z)
        spectra.append(list(seen.values()))
    pts.extend(itertools.islice(itertools.product(*spectra), max_combos))
    return pts


def mult_bruteforce(ops, basis, seed=0, attempts=40, tol=1e-8):
    """(lower, upper) bracket for the number of generators of the restriction.

    lower = best corank over origin + eigenvalue combinations; upper = least
    r for which some random r-column generator set has full orbit.  upper is
    None when the search fails outright (should not happen for r = dim).
    """
    local = restrict(ops, basis)
    k = basis.shape[1]
    if k == 0:
        return 0, 0
    lower = max(1, max(corank_at(local, p, tol=tol) for p in sample_points(local)))
    rng = np.random.default_rng(seed)
    for r in range(lower, k + 1):
        for _ in range(attempts):
            G = rng.standard_normal((k, r)) + 1j * rng.standard_normal((k, r))
            if orbit_dim(local, G, tol=tol) == k:
                return lower, r
    return lower, None
