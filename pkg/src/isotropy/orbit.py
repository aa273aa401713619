"""Congruence-orbit geometry: codimension counts and a tangent oracle.

The codimension of the orthogonal-congruence orbit of a canonical
symmetric matrix has a closed formula in the structure data.  An
independent check comes from the tangent space at S: the image of the
linear map sending a skew matrix X to X^T S + S X inside the symmetric
matrices.  Both are computed exactly and must always agree.
"""

from .errors import IntegrityError, ParameterError, StructureError
from .forms import MultiSegreStructure, SegreStructure, symmetric_form
from .matrices import ExactMatrix
from .scalars import ZERO
from .stabilizer import describe_isotropy


class OrbitReport:
    """All counts attached to one orbit, cross-checked on construction."""

    __slots__ = ("structure", "n", "codim_formula", "isotropy_dim",
                 "tangent_dim", "oracle_codim")

    def __init__(self, structure, n, codim_formula, isotropy_dim,
                 tangent_dim, oracle_codim):
        if codim_formula != n + isotropy_dim:
            raise IntegrityError(
                f"codimension {codim_formula} != {n} + {isotropy_dim}")
        if tangent_dim + oracle_codim != n * (n + 1) // 2:
            raise IntegrityError(
                f"tangent {tangent_dim} + codim {oracle_codim} != "
                f"{n * (n + 1) // 2}")
        object.__setattr__(self, "structure", structure)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "codim_formula", codim_formula)
        object.__setattr__(self, "isotropy_dim", isotropy_dim)
        object.__setattr__(self, "tangent_dim", tangent_dim)
        object.__setattr__(self, "oracle_codim", oracle_codim)

    def __setattr__(self, name, value):
        raise AttributeError("OrbitReport is immutable")

    def __eq__(self, other):
        if not isinstance(other, OrbitReport):
            return NotImplemented
        return all(getattr(self, f) == getattr(other, f)
                   for f in self.__slots__)

    def __repr__(self):
        return (f"OrbitReport(n={self.n}, codim={self.codim_formula}, "
                f"isotropy_dim={self.isotropy_dim})")


def codim_formula(structure) -> int:
    """Orbit codimension from the structure data alone.

    Single eigenvalue: sum over groups of alpha_r m_r times
    ((m_r + 1)/2 plus the multiplicities of all deeper groups).
    Several eigenvalues add up part by part.
    """
    if isinstance(structure, MultiSegreStructure):
        return sum(codim_formula(p) for p in structure.parts)
    if not isinstance(structure, SegreStructure):
        raise StructureError(
            "expected SegreStructure or MultiSegreStructure, "
            f"got {type(structure).__name__}")
    total = 0
    for r, (alpha, m) in enumerate(structure.blocks):
        deeper = sum(structure.mults[s] for s in range(r))
        total += alpha * m * (m + 1) // 2 + alpha * m * deeper
    return total


def _skew_pairs(n):
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def _sym_pairs(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


def tangent_oracle(s: ExactMatrix):
    """Exact tangent data at a symmetric matrix S.

    Vectorizes X -> X^T S + S X from skew to symmetric matrices over the
    canonical coordinate bases (strictly upper entries; upper triangle)
    and returns (tangent_dim, oracle_codim, kernel_dim) from its exact
    rank.  Works for any exact symmetric S, canonical or not.
    """
    if not s.is_square:
        raise ParameterError(f"matrix is {s.rows}x{s.cols}, need square")
    if not s.is_symmetric:
        raise ParameterError("tangent oracle needs a symmetric matrix")
    n = s.rows
    skew_pairs = _skew_pairs(n)
    sym_pairs = _sym_pairs(n)
    columns = []
    for (u, v) in skew_pairs:
        # image of E_uv - E_vu; X^T S + S X = S X - X S for skew X
        image = [ZERO] * len(sym_pairs)
        for row, (i, j) in enumerate(sym_pairs):
            val = ZERO
            if j == u:
                val = val - s[i, v]
            if j == v:
                val = val + s[i, u]
            if i == u:
                val = val - s[v, j]
            if i == v:
                val = val + s[u, j]
            image[row] = val
        columns.append(image)
    if columns:
        system = ExactMatrix.build(
            len(sym_pairs), len(columns), lambda r, c: columns[c][r])
        rank = system.rank()
    else:
        rank = 0
    kernel_dim = len(skew_pairs) - rank
    tangent_dim = rank
    oracle_codim = n * (n + 1) // 2 - tangent_dim
    return tangent_dim, oracle_codim, kernel_dim


def consistency_check(structure) -> OrbitReport:
    """Compare the formula, the solver dimension, and the tangent oracle.

    Any disagreement is an internal fault and raises IntegrityError; on
    success the assembled OrbitReport comes back.
    """
    n = structure.n
    codim = codim_formula(structure)
    isotropy_dim = describe_isotropy(structure).dimension
    tangent_dim, oracle_codim, kernel_dim = tangent_oracle(
        symmetric_form(structure))
    if codim != n + isotropy_dim:
        raise IntegrityError(
            f"formula codim {codim} != n + isotropy dim "
            f"{n} + {isotropy_dim}")
    if codim != oracle_codim:
        raise IntegrityError(
            f"formula codim {codim} != tangent oracle codim {oracle_codim}")
    if kernel_dim != isotropy_dim:
        raise IntegrityError(
            f"tangent kernel {kernel_dim} != isotropy dim {isotropy_dim}")
    return OrbitReport(structure, n, codim, isotropy_dim,
                       tangent_dim, oracle_codim)
