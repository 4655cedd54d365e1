"""Multivariate polynomial dictionaries.

Monomials are ordered graded-lexicographically (constant first, then total
degree 1, 2, ...; within a degree x1 powers come first), so serialized
coefficient vectors are portable. No scaling is applied at this layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np


@dataclass(frozen=True)
class PolyBasis:
    n_vars: int
    max_degree: int
    exponents: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.exponents)

    @property
    def key(self) -> str:
        """Identifier used to match serialized coefficients to a basis."""
        return f"poly:nvars={self.n_vars}:deg={self.max_degree}"


def build_basis(n_vars: int, max_degree: int) -> PolyBasis:
    """All monomials in ``n_vars`` variables up to total degree ``max_degree``."""
    if n_vars < 1:
        raise ValueError("n_vars must be >= 1")
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    exps: list[tuple[int, ...]] = []
    for degree in range(max_degree + 1):
        for combo in combinations_with_replacement(range(n_vars), degree):
            e = [0] * n_vars
            for v in combo:
                e[v] += 1
            exps.append(tuple(e))
    return PolyBasis(n_vars=n_vars, max_degree=max_degree, exponents=tuple(exps))


def eval_basis(basis: PolyBasis, X: np.ndarray) -> np.ndarray:
    """Evaluate every monomial at every row of ``X``; returns (d, size)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != basis.n_vars:
        raise ValueError(f"X has {X.shape[1]} columns, basis expects {basis.n_vars}")
    # Per-variable power tables, then products selected by exponent.
    powers = X[:, :, None] ** np.arange(basis.max_degree + 1)[None, None, :]
    exps = np.asarray(basis.exponents, dtype=int)
    out = np.ones((X.shape[0], basis.size))
    for v in range(basis.n_vars):
        out *= powers[:, v, exps[:, v]]
    return out
