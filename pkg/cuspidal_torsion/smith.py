"""Exact integer linear algebra: Smith normal form and lattice quotients.

Matrices are numpy arrays of dtype object so that every entry is an
arbitrary-precision Python int. Row and column clearing uses 2x2 unimodular
extended-gcd steps; the pivot of each stage is the entry of minimal nonzero
absolute value in the remaining block.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from sympy import Matrix

from .errors import DomainError

logger = logging.getLogger(__name__)

# Re-verify every decomposition when a caller leaves check unset; the test
# suite turns this on.
VERIFY_DECOMPOSITIONS = False


def as_int_matrix(rows, columns=None):
    """Build an object-dtype integer matrix from nested sequences.

    Args:
        rows: sequence of integer rows
        columns: width to use when rows is empty

    Returns:
        numpy array of Python ints with shape (len(rows), columns)
    """
    rows = [[int(x) for x in row] for row in rows]
    if not rows:
        return np.zeros((0, columns or 0), dtype=object)
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise DomainError("matrix rows have different lengths")
    matrix = np.empty((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            matrix[i, j] = x
    return matrix


def identity(n):
    return as_int_matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)


def exgcd(a, b):
    """Extended GCD as a unimodular 2x2 matrix.

    Returns:
        A 2x2 integer matrix M of determinant 1 with M @ [a, b] = [gcd(a, b), 0].
        If a divides b, M[0, 1] is 0.
    """
    a_sign = -1 if a < 0 else 1
    a *= a_sign
    b_sign = -1 if b < 0 else 1
    b *= b_sign

    # Euclid on the column [a, b], tracking row operations in the augmented part.
    m = as_int_matrix([[b, 0, 1], [a, 1, 0]])
    while m[1, 0] != 0:
        quotient = m[0, 0] // m[1, 0]
        m[0] -= quotient * m[1]
        m = m[::-1].copy()

    g = m[0, 0]
    m = m[:, 1:].copy()
    m *= np.array([a_sign, b_sign], dtype=object)
    if g != 0:
        m[1] = np.array([-b_sign * b // g, a_sign * a // g], dtype=object)
    return m


def inv_2x2_det1(m):
    """Inverse of a 2x2 integer matrix of determinant 1."""
    return as_int_matrix([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


@dataclass(frozen=True, eq=False)
class SnfResult:
    """Smith normal form U @ M @ V = D of an integer matrix M.

    ``left`` is U, ``right`` is V; ``left_inverse`` and ``right_inverse`` are
    their exact inverses. ``diagonal`` lists d_1 | d_2 | ... (zeros last).
    """

    matrix: np.ndarray
    diagonal: Tuple[int, ...]
    left: np.ndarray
    right: np.ndarray
    left_inverse: np.ndarray
    right_inverse: np.ndarray

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self):
        """Nonzero diagonal entries."""
        return tuple(d for d in self.diagonal if d != 0)

    @property
    def torsion(self):
        """Invariant factors of the cokernel torsion (entries > 1)."""
        return tuple(d for d in self.diagonal if d > 1)

    def diagonal_matrix(self):
        rows, columns = self.matrix.shape
        d = np.zeros((rows, columns), dtype=object)
        for i, value in enumerate(self.diagonal):
            d[i, i] = value
        return d

    def check(self):
        """Re-verify the decomposition by exact multiplication."""
        rows, columns = self.matrix.shape
        assert (self.left @ self.matrix @ self.right == self.diagonal_matrix()).all()
        assert (self.left @ self.left_inverse == identity(rows)).all()
        assert (self.right @ self.right_inverse == identity(columns)).all()
        for i in range(1, len(self.diagonal)):
            prev, cur = self.diagonal[i - 1], self.diagonal[i]
            assert prev >= 0 and cur >= 0
            assert (cur == 0) or (prev != 0 and cur % prev == 0)
        return True


def smith_normal_form(matrix, check=None):
    """Compute the Smith normal form of an integer matrix with transforms.

    Args:
        matrix: integer matrix (nested sequences or numpy array)
        check: re-verify U @ M @ V = D by exact multiplication; None defers
            to the module switch VERIFY_DECOMPOSITIONS

    Returns:
        SnfResult with diagonal d_1 | d_2 | ... and unimodular transforms
    """
    a = matrix if isinstance(matrix, np.ndarray) else as_int_matrix(matrix)
    a = a.astype(object)
    rows, columns = a.shape
    d = a.copy()
    # Invariants: A == S @ D @ T, S @ s_inv == I, t_inv @ T == I.
    s, t = identity(rows), identity(columns)
    s_inv, t_inv = identity(rows), identity(columns)

    def row_op(i, j, m):
        d[[i, j]] = m @ d[[i, j]]
        s[:, [i, j]] = s[:, [i, j]] @ inv_2x2_det1(m)
        s_inv[[i, j]] = m @ s_inv[[i, j]]

    def col_op(i, j, m):
        d[:, [i, j]] = d[:, [i, j]] @ m
        t[[i, j]] = inv_2x2_det1(m) @ t[[i, j]]
        t_inv[:, [i, j]] = t_inv[:, [i, j]] @ m

    def negate_row(i):
        d[i] = -d[i]
        s[:, i] = -s[:, i]
        s_inv[i] = -s_inv[i]

    def swap_rows(i, j):
        if i != j:
            row_op(i, j, as_int_matrix([[0, 1], [-1, 0]]))

    def swap_cols(i, j):
        if i != j:
            col_op(i, j, as_int_matrix([[0, -1], [1, 0]]))

    def clear_col(i):
        if (d[i + 1:, i] == 0).all():
            return False
        for j in range(i + 1, rows):
            if d[j, i] != 0:
                row_op(i, j, exgcd(d[i, i], d[j, i]))
        return True

    def clear_row(i):
        if (d[i, i + 1:] == 0).all():
            return False
        for j in range(i + 1, columns):
            if d[i, j] != 0:
                col_op(i, j, exgcd(d[i, i], d[i, j]).T)
        return True

    def diagonalize_from(i):
        clear_col(i)
        while clear_row(i) and clear_col(i):
            pass

    size = min(rows, columns)
    for i in range(size):
        block = d[i:, i:]
        nonzero = [(abs(block[r, c]), r, c) for r in range(block.shape[0])
                   for c in range(block.shape[1]) if block[r, c] != 0]
        if not nonzero:
            break
        _, r, c = min(nonzero)
        swap_rows(i, i + r)
        swap_cols(i, i + c)
        diagonalize_from(i)

    # Enforce d_i | d_j by folding column j into column i and re-clearing.
    for i in range(size):
        for j in range(i + 1, size):
            while d[i, i] != 0 and d[j, j] % d[i, i] != 0:
                col_op(i, j, as_int_matrix([[1, 0], [1, 1]]))
                diagonalize_from(i)

    for i in range(size):
        if d[i, i] < 0:
            negate_row(i)

    diagonal = tuple(int(d[i, i]) for i in range(size))
    result = SnfResult(
        matrix=a,
        diagonal=diagonal,
        left=s_inv,
        right=t_inv,
        left_inverse=s,
        right_inverse=t,
    )
    logger.debug("SNF of %dx%d matrix: %s", rows, columns, diagonal)
    if check is None:
        check = VERIFY_DECOMPOSITIONS
    if check:
        result.check()
    return result


def determinant(matrix):
    """Exact determinant of a square integer matrix (sympy, fraction-free)."""
    m = matrix if isinstance(matrix, np.ndarray) else as_int_matrix(matrix)
    return int(Matrix(m.tolist()).det(method="bareiss"))


def cokernel_invariants(relations, rank):
    """Invariant factors and free rank of Z^rank / (row span of relations).

    Args:
        relations: integer rows of length rank
        rank: ambient rank

    Returns:
        (torsion invariant factors > 1, free rank)
    """
    matrix = as_int_matrix(relations, rank)
    if matrix.shape[0] == 0:
        return (), rank
    snf = smith_normal_form(matrix)
    return snf.torsion, rank - snf.rank


def lattice_basis(generators, rank):
    """A Z-basis (as rows) of the lattice spanned by the generator rows.

    With G = S @ D @ T, the row span of G equals that of D @ T, whose nonzero
    rows d_i * T[i] form a basis.
    """
    matrix = as_int_matrix(generators, rank)
    snf = smith_normal_form(matrix)
    basis = [
        [snf.diagonal[i] * x for x in snf.right_inverse[i]]
        for i in range(len(snf.diagonal))
        if snf.diagonal[i] != 0
    ]
    return as_int_matrix(basis, rank)


def sublattice_quotient(lattice_generators, sublattice_generators, rank):
    """Invariant factors of K / P for lattices P <= K given by generators.

    Coordinates of P's generators in a basis of K are found by an exact rational
    solve; they must be integral.

    Raises:
        DomainError: if P is not contained in K or K is not of full rank
    """
    basis = lattice_basis(lattice_generators, rank)
    if basis.shape[0] != rank:
        raise DomainError("the ambient lattice must have full rank")
    basis_inverse = Matrix(basis.tolist()).inv()
    coordinates = []
    for row in sublattice_generators:
        solved = Matrix([[int(x) for x in row]]) * basis_inverse
        if any(not value.is_integer for value in solved):
            raise DomainError("sublattice is not contained in the lattice")
        coordinates.append([int(value) for value in solved])
    torsion, free = cokernel_invariants(coordinates, rank)
    if free:
        raise DomainError("sublattice does not have finite index")
    return torsion
