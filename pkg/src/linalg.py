"""
Exact and float linear algebra over the scalar backends

Row echelon form and back substitution follow the classic rational
elimination scheme: pivot on the first usable entry of each column, record
the free variables, then back substitute. Over the float backend the pivot is
the entry of largest modulus and entries below ``tolerance * max|a|`` count
as zero.

Square exact systems (``solve`` and ``determinant``) go through fraction-free
Bareiss elimination instead: rows are first scaled to Gaussian integers, every
update divides exactly by the previous pivot, and pivots are searched over the
whole remaining submatrix. A zero pivot after that search means the matrix is
singular.
"""

import logging
from math import lcm
from typing import List, Optional, Sequence

import numpy as np

from config import LOG_LEVEL, LOG_FORMAT
from field import EXACT, FLOAT, GaussianRational, Scalar, SingularMatrixError, backend_of

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL),
    format=LOG_FORMAT
)
logger = logging.getLogger(__name__)

Matrix = List[List[Scalar]]


def _backend_for(matrix: Sequence[Sequence[Scalar]]):
    for row in matrix:
        for x in row:
            return backend_of(x)
    return EXACT


def _zero_threshold(matrix: Sequence[Sequence[Scalar]], backend) -> float:
    if backend is EXACT:
        return 0.0
    largest = max((abs(x) for row in matrix for x in row), default=0.0)
    return backend.tolerance * max(largest, 1e-300)


def _is_zero(x: Scalar, backend, threshold: float) -> bool:
    if backend is EXACT:
        return x == 0
    return abs(x) <= threshold


def form_echelon(m: Matrix, t: Optional[List[Scalar]] = None, backend=None) -> List[int]:
    """
    Bring ``m`` (and the right-hand side ``t``) to row echelon form in place.

    Returns:
        Column indices of the free variables.
    """
    free_vars: List[int] = []
    n_rows = len(m)
    if n_rows == 0:
        return free_vars
    n_cols = len(m[0])
    backend = backend or _backend_for(m)
    threshold = _zero_threshold(m, backend)
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r >= n_rows:
            free_vars.append(piv_c)
            continue
        if backend is EXACT:
            candidates = [r for r in range(piv_r, n_rows) if m[r][piv_c] != 0]
            i_row = candidates[0] if candidates else None
        else:
            i_row = max(range(piv_r, n_rows), key=lambda r: abs(m[r][piv_c]))
            if _is_zero(m[i_row][piv_c], backend, threshold):
                i_row = None
        if i_row is None:
            free_vars.append(piv_c)
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
            if t is not None:
                t[piv_r], t[i_row] = t[i_row], t[piv_r]
        fp = m[piv_r][piv_c]
        for r in range(piv_r + 1, n_rows):
            fr = m[r][piv_c]
            if _is_zero(fr, backend, threshold):
                continue
            frp = fr / fp
            for c in range(piv_c, n_cols):
                m[r][c] = m[r][c] - m[piv_r][c] * frp
            if t is not None:
                t[r] = t[r] - t[piv_r] * frp
        piv_r += 1
    return free_vars


def back_substitution(m: Matrix, t: Optional[List[Scalar]], free_vars: List[int],
                      sol: List[Scalar], backend=None) -> Optional[List[Scalar]]:
    """
    Solve an echelon system given values for the free variables in ``sol``.

    Returns:
        The completed solution, or None when the system is inconsistent.
    """
    n_rows = len(m)
    n_cols = len(sol)
    backend = backend or _backend_for(m)
    threshold = _zero_threshold(m, backend)
    rank = n_cols - len(free_vars)
    if t is not None:
        for r in range(rank, n_rows):
            if not _is_zero(t[r], backend, threshold):
                return None
    free_flags = [False] * n_cols
    for c in free_vars:
        free_flags[c] = True
    piv_cols = [c for c, f in enumerate(free_flags) if not f]
    zero = backend.scalar(0)
    for r in range(len(piv_cols) - 1, -1, -1):
        piv_c = piv_cols[r]
        s = zero if t is None else -t[r]
        for c in range(piv_c + 1, n_cols):
            s = s + m[r][c] * sol[c]
        sol[piv_c] = -s / m[r][piv_c]
    return sol


def copy_matrix(matrix: Sequence[Sequence[Scalar]]) -> Matrix:
    return [list(row) for row in matrix]


def mat_vec(matrix: Sequence[Sequence[Scalar]], vector: Sequence[Scalar]) -> List[Scalar]:
    backend = _backend_for(matrix)
    out = []
    for row in matrix:
        s = backend.scalar(0)
        for a, x in zip(row, vector):
            if a != 0:
                s = s + a * x
        out.append(s)
    return out


def nullspace(matrix: Sequence[Sequence[Scalar]], n_cols: Optional[int] = None, backend=None) -> List[List[Scalar]]:
    """
    Basis of the right kernel of ``matrix``.

    Args:
        matrix: rows of scalars
        n_cols: number of columns, needed when ``matrix`` has no rows
        backend: scalar backend, inferred from the entries by default

    Returns:
        One vector per free variable.
    """
    backend = backend or _backend_for(matrix)
    if not matrix:
        size = n_cols or 0
        return [[backend.scalar(1 if c == f else 0) for c in range(size)] for f in range(size)]
    m = copy_matrix(matrix)
    free_vars = form_echelon(m, backend=backend)
    n = len(m[0])
    basis = []
    for f in free_vars:
        sol = [backend.scalar(0)] * n
        sol[f] = backend.scalar(1)
        basis.append(back_substitution(m, None, free_vars, sol, backend=backend))
    logger.debug(f"Nullspace of {len(matrix)}x{n} matrix has dimension {len(basis)}")
    return basis


def rank(matrix: Sequence[Sequence[Scalar]], backend=None) -> int:
    if not matrix:
        return 0
    m = copy_matrix(matrix)
    free_vars = form_echelon(m, backend=backend)
    return len(m[0]) - len(free_vars)


def _integral_rows(m: Matrix, t: Optional[List[Scalar]] = None) -> int:
    """Scale every row of an exact system to Gaussian integers in place; returns the product of the scales."""
    scale = 1
    for r, row in enumerate(m):
        entries = row if t is None else row + [t[r]]
        d = lcm(*(x.re.denominator for x in entries), *(x.im.denominator for x in entries))
        if d != 1:
            m[r] = [x * d for x in row]
            if t is not None:
                t[r] = t[r] * d
        scale *= d
    return scale


def fraction_free_eliminate(m: Matrix, t: Optional[List[Scalar]] = None):
    """
    Bareiss elimination of a square exact matrix with full pivoting, in place.

    After the call ``m`` is upper triangular in the permuted column order and
    its last diagonal entry is the determinant of the permuted matrix.

    Returns:
        (column order, sign of the row and column permutations)

    Raises:
        SingularMatrixError: no nonzero pivot is left in the remaining submatrix
    """
    n = len(m)
    columns = list(range(n))
    sign = 1
    previous = GaussianRational(1)
    for k in range(n):
        pivot = next(((r, c) for r in range(k, n) for c in range(k, n) if m[r][c] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"Matrix of size {n} is singular (zero pivot at step {k})")
        r, c = pivot
        if r != k:
            m[k], m[r] = m[r], m[k]
            if t is not None:
                t[k], t[r] = t[r], t[k]
            sign = -sign
        if c != k:
            for row in m:
                row[k], row[c] = row[c], row[k]
            columns[k], columns[c] = columns[c], columns[k]
            sign = -sign
        p = m[k][k]
        for i in range(k + 1, n):
            f = m[i][k]
            for j in range(k + 1, n):
                m[i][j] = (p * m[i][j] - f * m[k][j]) / previous
            if t is not None:
                t[i] = (p * t[i] - f * t[k]) / previous
            m[i][k] = GaussianRational(0)
        previous = p
    return columns, sign


def _solve_fraction_free(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> List[Scalar]:
    m = [[GaussianRational.coerce(x) for x in row] for row in matrix]
    t = [GaussianRational.coerce(x) for x in rhs]
    _integral_rows(m, t)
    columns, _ = fraction_free_eliminate(m, t)
    n = len(m)
    x = [GaussianRational(0)] * n
    for k in range(n - 1, -1, -1):
        s = t[k]
        for j in range(k + 1, n):
            s = s - m[k][j] * x[j]
        x[k] = s / m[k][k]
    sol = [GaussianRational(0)] * n
    for k, c in enumerate(columns):
        sol[c] = x[k]
    return sol


def _determinant_fraction_free(matrix: Sequence[Sequence[Scalar]]) -> GaussianRational:
    m = [[GaussianRational.coerce(x) for x in row] for row in matrix]
    if not m:
        return GaussianRational(1)
    scale = _integral_rows(m)
    try:
        _, sign = fraction_free_eliminate(m)
    except SingularMatrixError:
        return GaussianRational(0)
    return m[-1][-1] * sign / scale


def solve(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar], backend=None) -> List[Scalar]:
    """
    Solve a square system exactly.

    Raises:
        SingularMatrixError: the matrix is not invertible
    """
    backend = backend or _backend_for(matrix)
    if backend is EXACT and len(matrix) == len(rhs) and all(len(row) == len(rhs) for row in matrix):
        return _solve_fraction_free(matrix, rhs)
    m = copy_matrix(matrix)
    t = list(rhs)
    free_vars = form_echelon(m, t, backend=backend)
    if free_vars:
        raise SingularMatrixError(f"Matrix of size {len(matrix)} is singular (free columns {free_vars})")
    sol = [backend.scalar(0)] * len(m[0])
    result = back_substitution(m, t, free_vars, sol, backend=backend)
    if result is None:
        raise SingularMatrixError("Inconsistent linear system")
    return result


def determinant(matrix: Sequence[Sequence[Scalar]], backend=None) -> Scalar:
    """Determinant by elimination; exact matrices use the fraction-free path."""
    backend = backend or _backend_for(matrix)
    if backend is EXACT:
        return _determinant_fraction_free(matrix)
    m = copy_matrix(matrix)
    n = len(m)
    det = backend.scalar(1)
    threshold = _zero_threshold(m, backend)
    for c in range(n):
        pivot_row = None
        if backend is EXACT:
            for r in range(c, n):
                if m[r][c] != 0:
                    pivot_row = r
                    break
        else:
            pivot_row = max(range(c, n), key=lambda r: abs(m[r][c]))
            if _is_zero(m[pivot_row][c], backend, threshold):
                pivot_row = None
        if pivot_row is None:
            return backend.scalar(0)
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            det = -det
        pivot = m[c][c]
        det = det * pivot
        for r in range(c + 1, n):
            factor = m[r][c] / pivot
            if factor != 0:
                for cc in range(c, n):
                    m[r][cc] = m[r][cc] - factor * m[c][cc]
    return det


def to_numpy(matrix: Sequence[Sequence[Scalar]]) -> np.ndarray:
    return np.array([[FLOAT.scalar(x) for x in row] for row in matrix], dtype=complex)


def singular_values(matrix: Sequence[Sequence[Scalar]]) -> np.ndarray:
    """Singular values in decreasing order."""
    if not matrix:
        return np.zeros(0)
    return np.linalg.svd(to_numpy(matrix), compute_uv=False)


def numeric_rank(matrix: Sequence[Sequence[Scalar]], relative_tolerance: float) -> int:
    """Number of singular values above ``relative_tolerance`` times the largest one."""
    values = singular_values(matrix)
    if values.size == 0 or values[0] == 0:
        return 0
    return int(np.sum(values > relative_tolerance * values[0]))


def eigenvectors(matrix: Sequence[Sequence[Scalar]]):
    """Float eigen-decomposition (eigenvalues, column eigenvectors)."""
    return np.linalg.eig(to_numpy(matrix))
