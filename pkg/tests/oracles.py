"""Brute-force reference computations, independent of the library's echelon code.

Everything here enumerates vectors or subsets outright, so it is only
usable on tiny inputs.
"""

from itertools import combinations, product

import numpy as np


def all_vectors(n):
    for bits in product((0, 1), repeat=n):
        yield np.array(bits, dtype=np.uint8)


def apply(M, v):
    return (np.asarray(M, dtype=np.int64) @ v.astype(np.int64)) % 2


def span(cols, n):
    """Set of all vectors (as tuples) in the span of the given columns."""
    cols = [np.asarray(c, dtype=np.uint8) for c in cols]
    out = set()
    for coeffs in product((0, 1), repeat=len(cols)):
        v = np.zeros(n, dtype=np.int64)
        for c, a in zip(cols, coeffs):
            if a:
                v = v + c
        out.add(tuple(v % 2))
    return out


def log2_size(s):
    n = len(s)
    k = n.bit_length() - 1
    assert 1 << k == n
    return k


def rank(M):
    M = np.asarray(M)
    images = {tuple(apply(M, v)) for v in all_vectors(M.shape[1])}
    return log2_size(images)


def kernel(M):
    M = np.asarray(M)
    return {tuple(v) for v in all_vectors(M.shape[1]) if not apply(M, v).any()}


def intervals(elements, less):
    out = []
    for size in range(len(elements) + 1):
        for S in combinations(elements, size):
            S = set(S)
            if all(not (less(a, c) and less(c, b)) or c in S for a in S for b in S for c in elements):
                out.append(frozenset(S))
    return out


def adjacent_pairs(elements, less):
    ivs = intervals(elements, less)
    ivset = set(ivs)
    out = set()
    for I in ivs:
        for J in ivs:
            if not I or not J or I & J or (I | J) not in ivset:
                continue
            if any(less(q, p) for p in I for q in J):
                continue
            out.add((I, J))
    return out


def homology_dims(D, degrees, idx):
    """``{k: dim H_k}`` of the subcomplex on ``idx`` by counting cycles and boundaries."""
    idx = list(idx)
    D = np.asarray(D)[np.ix_(idx, idx)]
    degrees = np.asarray(degrees)[idx]
    m = len(idx)
    dims = {}
    for k in sorted(set(degrees.tolist())):
        cycles = set()
        for v in all_vectors(m):
            if (v.astype(bool) & (degrees != k)).any():
                continue
            if not apply(D, v).any():
                cycles.add(tuple(v))
        bds = {tuple(apply(D, v)) for v in all_vectors(m) if not (v.astype(bool) & (degrees != k + 1)).any()}
        dims[k] = log2_size(cycles) - log2_size(bds)
    return dims


def filtered_homology_dims(D, degrees):
    """``dim F_pH_k / F_{p−1}H_k`` where ``F_pH`` is the image of ``H(F_p)`` in ``H(C)``; keys ``(p, k)``."""
    D = np.asarray(D)
    n = D.shape[0]
    degrees = np.asarray(degrees)
    out = {}
    for k in sorted(set(degrees.tolist())):
        bds = {tuple(apply(D, v)) for v in all_vectors(n) if not (v.astype(bool) & (degrees != k + 1)).any()}
        prev = log2_size(bds)
        for p in range(n):
            cycles = set()
            for v in all_vectors(n):
                if (v.astype(bool) & (degrees != k)).any() or v[p + 1 :].any():
                    continue
                if not apply(D, v).any():
                    cycles.add(tuple(v))
            together = {tuple((np.array(a) + np.array(b)) % 2) for a in cycles for b in bds}
            size = log2_size(together)
            out[(p, k)] = size - prev
            prev = size
    return out


def all_transition_matrices(basis):
    """Every matrix with identity diagonal blocks and free degree-0 entries on ``<``-related pairs."""
    n = len(basis)
    order = basis.order
    free = [
        (i, j)
        for i, gi in enumerate(basis.generators)
        for j, gj in enumerate(basis.generators)
        if gi.degree == gj.degree and order.less(gi.element, gj.element)
    ]
    base = np.zeros((n, n), dtype=np.uint8)
    for p in order.elements:
        for i in basis.of_element(p):
            base[i, i] = 1
    for bits in product((0, 1), repeat=len(free)):
        M = base.copy()
        for (i, j), b in zip(free, bits):
            M[i, j] = b
        yield M
