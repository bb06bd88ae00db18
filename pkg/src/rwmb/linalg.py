"""Exact sparse linear algebra over the rationals and prime fields.

Matrices are immutable.  Over a prime field with a small modulus the entries
live in a scipy CSR array of int64 residues, so products and Kronecker
products run in compiled code.  Over the rationals (and for large primes) the
entries live in a dict of rows holding gmpy2 rationals or Python ints.
Gaussian elimination always runs on the dict-of-rows form with first-nonzero
pivoting, which makes every basis it returns deterministic.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np
import scipy.sparse as sp

# Largest modulus for which int64 sums of products cannot overflow on the
# domain sizes this library handles.
_CSR_MAX_PRIME = 1 << 22


class LinalgError(Exception):
    """Base class for linear algebra failures."""


class ShapeMismatch(LinalgError, ValueError):
    pass


class FieldMismatch(LinalgError, ValueError):
    pass


class NotIdempotent(LinalgError):
    pass


class NotSurjective(LinalgError):
    pass


class NotWellDefined(LinalgError):
    """The map to be factored does not vanish on the kernel of the epimorphism."""


class NoSolution(LinalgError):
    pass


class NonUnique(LinalgError):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(int(p))

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        text = text.strip()
        if text in ("Q", "QQ"):
            return cls(0)
        for prefix in ("Fp:", "F", "GF"):
            if text.startswith(prefix) and text[len(prefix):].isdigit():
                return cls(int(text[len(prefix):]))
        raise ValueError(f"unknown field {text!r}; use 'Q' or 'Fp:<prime>'")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def uses_csr(self) -> bool:
        return 0 < self.p < _CSR_MAX_PRIME

    def __str__(self) -> str:
        return "Q" if self.p == 0 else f"Fp:{self.p}"

    def element(self, x):
        """Coerce ints, strings like '-3/4', Fractions or mpq into the field."""
        if isinstance(x, str):
            x = x.strip()
            if "/" in x:
                a, b = x.split("/")
                x = Fraction(int(a), int(b))
            else:
                x = int(x)
        if self.p == 0:
            if isinstance(x, Fraction):
                return gmpy2.mpq(x.numerator, x.denominator)
            return gmpy2.mpq(x)
        if isinstance(x, (Fraction, type(gmpy2.mpq()))):
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return gmpy2.mpq(0) if self.p == 0 else 0

    @property
    def one(self):
        return gmpy2.mpq(1) if self.p == 0 else 1

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / x
        return pow(int(x), -1, self.p)

    def norm(self, x):
        """Canonical representative after ring arithmetic."""
        return x % self.p if self.p else x

    def format(self, x) -> str:
        """'a/b' in lowest terms with b > 0, or a plain integer."""
        if self.p:
            return str(int(x))
        q = gmpy2.mpq(x)
        if q.denominator == 1:
            return str(int(q.numerator))
        return f"{int(q.numerator)}/{int(q.denominator)}"

    def to_fraction(self, x) -> Fraction:
        if self.p:
            return Fraction(int(x))
        return Fraction(int(x.numerator), int(x.denominator))


QQ = FieldSpec(0)


def _canon_csr(m, p: int):
    m = sp.csr_array(m, dtype=np.int64)
    m.data %= p
    m.eliminate_zeros()
    m.sort_indices()
    m.sum_duplicates()
    return m


class ExactMatrix:
    """Immutable sparse matrix over a :class:`FieldSpec`.

    Two matrices compare equal iff they have the same shape, field and
    nonzero entries.
    """

    __slots__ = ("rows", "cols", "field", "_csr", "_rowmap", "_hash")

    def __init__(self, rows: int, cols: int, field: FieldSpec, *, _csr=None, _rowmap=None):
        self.rows = int(rows)
        self.cols = int(cols)
        self.field = field
        self._csr = _csr
        self._rowmap = _rowmap
        self._hash = None

    # construction -----------------------------------------------------------

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries, field: FieldSpec) -> "ExactMatrix":
        """Build from a mapping or iterable of ``((i, j), value)`` / ``(i, j, value)``."""
        if isinstance(entries, Mapping):
            items = (((i, j), v) for (i, j), v in entries.items())
        else:
            items = (((e[0], e[1]), e[2]) for e in entries)
        rowmap: dict[int, dict[int, object]] = {}
        for (i, j), v in items:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ShapeMismatch(f"entry ({i},{j}) outside {rows}x{cols}")
            v = field.element(v)
            r = rowmap.setdefault(i, {})
            r[j] = field.norm(r.get(j, field.zero) + v)
        return cls._from_rowmap(rows, cols, field, rowmap)

    @classmethod
    def _from_rowmap(cls, rows, cols, field, rowmap) -> "ExactMatrix":
        clean = {}
        for i, r in rowmap.items():
            rr = {j: v for j, v in r.items() if v}
            if rr:
                clean[i] = rr
        if field.uses_csr:
            return cls(rows, cols, field, _csr=_rowmap_to_csr(rows, cols, clean, field.p))
        return cls(rows, cols, field, _rowmap=clean)

    @classmethod
    def from_dense(cls, data, field: FieldSpec) -> "ExactMatrix":
        data = [list(r) for r in data]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for i, r in enumerate(data):
            if len(r) != cols:
                raise ShapeMismatch("ragged dense input")
            for j, v in enumerate(r):
                v = field.element(v)
                if v:
                    entries[(i, j)] = v
        return cls.from_entries(rows, cols, entries, field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec) -> "ExactMatrix":
        if field.uses_csr:
            return cls(rows, cols, field, _csr=sp.csr_array((rows, cols), dtype=np.int64))
        return cls(rows, cols, field, _rowmap={})

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "ExactMatrix":
        return cls.monomial(list(range(n)), n, [field.one] * n, field, cols=n)

    @classmethod
    def monomial(cls, targets, rows: int, values, field: FieldSpec, cols: int | None = None):
        """Matrix whose column ``j`` is ``values[j]`` times basis vector ``targets[j]``."""
        cols = len(targets) if cols is None else cols
        if field.uses_csr:
            vals = np.array([int(v) % field.p for v in values], dtype=np.int64)
            m = sp.csr_array(
                (vals, (np.asarray(targets, dtype=np.int64), np.arange(cols, dtype=np.int64))),
                shape=(rows, cols),
            )
            return cls(rows, cols, field, _csr=_canon_csr(m, field.p))
        rowmap: dict[int, dict[int, object]] = {}
        for j, (t, v) in enumerate(zip(targets, values)):
            if v:
                rowmap.setdefault(t, {})[j] = field.element(v)
        return cls(rows, cols, field, _rowmap=rowmap)

    # access -----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def rowmap(self) -> dict[int, dict[int, object]]:
        """Row-indexed view of the nonzero entries (do not mutate)."""
        if self._rowmap is None:
            self._rowmap = _csr_to_rowmap(self._csr)
        return self._rowmap

    def csr(self):
        if self._csr is None:
            if not self.field.uses_csr:
                raise TypeError("CSR view only exists for small prime fields")
            self._csr = _rowmap_to_csr(self.rows, self.cols, self._rowmap, self.field.p)
        return self._csr

    def entries(self) -> dict[tuple[int, int], object]:
        return {(i, j): v for i, r in self.rowmap().items() for j, v in r.items()}

    @property
    def nnz(self) -> int:
        if self._csr is not None:
            return int(self._csr.nnz)
        return sum(len(r) for r in self._rowmap.values())

    def __getitem__(self, ij):
        i, j = ij
        return self.rowmap().get(i, {}).get(j, self.field.zero)

    def to_dense(self) -> list[list]:
        out = [[self.field.zero] * self.cols for _ in range(self.rows)]
        for i, r in self.rowmap().items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def columns(self) -> list[dict[int, object]]:
        cols: list[dict[int, object]] = [{} for _ in range(self.cols)]
        for i, r in self.rowmap().items():
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def is_zero(self) -> bool:
        return self.nnz == 0

    # equality ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape or self.field != other.field:
            return False
        if self._csr is not None and other._csr is not None:
            return (self._csr != other._csr).nnz == 0
        return self.rowmap() == other.rowmap()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self.field, frozenset(self.entries().items())))
        return self._hash

    def first_difference(self, other: "ExactMatrix"):
        """Lexicographically first (i, j, self[i,j], other[i,j]) where they differ, or None."""
        _check_same(self, other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")
        d = self - other
        if d.is_zero():
            return None
        i = min(d.rowmap())
        j = min(d.rowmap()[i])
        return (i, j, self[i, j], other[i, j])

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols}, {self.field}, nnz={self.nnz})"

    # arithmetic -------------------------------------------------------------

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return matmul(self, other)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        _check_same(self, other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        if self.field.uses_csr:
            return ExactMatrix(self.rows, self.cols, self.field,
                               _csr=_canon_csr(self.csr() + other.csr(), self.field.p))
        out = {i: dict(r) for i, r in self.rowmap().items()}
        for i, r in other.rowmap().items():
            o = out.setdefault(i, {})
            for j, v in r.items():
                o[j] = self.field.norm(o.get(j, 0) + v)
        return ExactMatrix._from_rowmap(self.rows, self.cols, self.field, out)

    def scale(self, c) -> "ExactMatrix":
        c = self.field.element(c)
        if not c:
            return ExactMatrix.zeros(self.rows, self.cols, self.field)
        if self.field.uses_csr:
            m = self.csr().copy()
            m.data = (m.data * int(c)) % self.field.p
            return ExactMatrix(self.rows, self.cols, self.field, _csr=m)
        f = self.field
        return ExactMatrix(self.rows, self.cols, f, _rowmap={
            i: {j: f.norm(v * c) for j, v in r.items()} for i, r in self.rowmap().items()})

    def __neg__(self) -> "ExactMatrix":
        return self.scale(-1)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def transpose(self) -> "ExactMatrix":
        if self.field.uses_csr:
            return ExactMatrix(self.cols, self.rows, self.field,
                               _csr=_canon_csr(self.csr().T, self.field.p))
        out: dict[int, dict[int, object]] = {}
        for i, r in self.rowmap().items():
            for j, v in r.items():
                out.setdefault(j, {})[i] = v
        return ExactMatrix(self.cols, self.rows, self.field, _rowmap=out)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def select_columns(self, cols: list[int]) -> "ExactMatrix":
        pos = {c: k for k, c in enumerate(cols)}
        out = {}
        for i, r in self.rowmap().items():
            rr = {pos[j]: v for j, v in r.items() if j in pos}
            if rr:
                out[i] = rr
        return ExactMatrix._from_rowmap(self.rows, len(cols), self.field, out)

    def select_rows(self, rows: list[int]) -> "ExactMatrix":
        rm = self.rowmap()
        out = {k: dict(rm[i]) for k, i in enumerate(rows) if i in rm}
        return ExactMatrix._from_rowmap(len(rows), self.cols, self.field, out)

    def reindex(self, row_perm, col_perm, rows: int, cols: int) -> "ExactMatrix":
        """Entry (i, j) moves to (row_perm[i], col_perm[j])."""
        if self.field.uses_csr:
            coo = self.csr().tocoo()
            rp = np.asarray(row_perm, dtype=np.int64)
            cp = np.asarray(col_perm, dtype=np.int64)
            m = sp.csr_array((coo.data, (rp[coo.row], cp[coo.col])), shape=(rows, cols))
            return ExactMatrix(rows, cols, self.field, _csr=_canon_csr(m, self.field.p))
        out: dict[int, dict[int, object]] = {}
        for i, r in self.rowmap().items():
            o = out.setdefault(row_perm[i], {})
            for j, v in r.items():
                o[col_perm[j]] = v
        return ExactMatrix._from_rowmap(rows, cols, self.field, out)

    def rank(self) -> int:
        return len(rref(self)[0])


def _check_same(a: ExactMatrix, b: ExactMatrix):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")


def _rowmap_to_csr(rows, cols, rowmap, p):
    n = sum(len(r) for r in rowmap.values())
    ri = np.empty(n, dtype=np.int64)
    ci = np.empty(n, dtype=np.int64)
    vals = np.empty(n, dtype=np.int64)
    k = 0
    for i, r in rowmap.items():
        for j, v in r.items():
            ri[k] = i
            ci[k] = j
            vals[k] = int(v) % p
            k += 1
    return _canon_csr(sp.csr_array((vals, (ri, ci)), shape=(rows, cols)), p)


def _csr_to_rowmap(m) -> dict[int, dict[int, int]]:
    out = {}
    indptr, indices, data = m.indptr, m.indices.tolist(), m.data.tolist()
    for i in range(m.shape[0]):
        a, b = indptr[i], indptr[i + 1]
        if a != b:
            out[i] = dict(zip(indices[a:b], data[a:b]))
    return out


def matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact product ``a @ b``."""
    _check_same(a, b)
    if a.cols != b.rows:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    f = a.field
    if f.uses_csr:
        return ExactMatrix(a.rows, b.cols, f, _csr=_canon_csr(a.csr() @ b.csr(), f.p))
    brm = b.rowmap()
    out = {}
    for i, r in a.rowmap().items():
        acc: dict[int, object] = {}
        for k, x in r.items():
            bk = brm.get(k)
            if bk is None:
                continue
            for j, y in bk.items():
                acc[j] = acc.get(j, 0) + x * y
        if f.p:
            acc = {j: v % f.p for j, v in acc.items()}
        acc = {j: v for j, v in acc.items() if v}
        if acc:
            out[i] = acc
    return ExactMatrix(a.rows, b.cols, f, _rowmap=out)


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker product with row-major indices: block (i, j) is ``a[i, j] * b``."""
    _check_same(a, b)
    f = a.field
    rows, cols = a.rows * b.rows, a.cols * b.cols
    if f.uses_csr:
        return ExactMatrix(rows, cols, f, _csr=_canon_csr(sp.kron(a.csr(), b.csr(), format="csr"), f.p))
    out = {}
    brm = b.rowmap()
    for i, ra in a.rowmap().items():
        for k, rb in brm.items():
            row = {}
            for j, x in ra.items():
                base = j * b.cols
                for l, y in rb.items():
                    row[base + l] = f.norm(x * y)
            out[i * b.rows + k] = row
    return ExactMatrix(rows, cols, f, _rowmap=out)


def kron_all(mats: Iterable[ExactMatrix], field: FieldSpec) -> ExactMatrix:
    out = ExactMatrix.identity(1, field)
    for m in mats:
        out = kron(out, m)
    return out


def block_diag_identity_kron(left: int, m: ExactMatrix, right: int) -> ExactMatrix:
    """``id_left (x) m (x) id_right`` without materialising the identities first."""
    f = m.field
    if left == 1 and right == 1:
        return m
    if f.uses_csr:
        x = m.csr()
        if right != 1:
            x = sp.kron(x, sp.identity(right, dtype=np.int64, format="csr"), format="csr")
        if left != 1:
            x = sp.kron(sp.identity(left, dtype=np.int64, format="csr"), x, format="csr")
        return ExactMatrix(left * m.rows * right, left * m.cols * right, f, _csr=_canon_csr(x, f.p))
    return kron(kron(ExactMatrix.identity(left, f), m), ExactMatrix.identity(right, f))


# Gaussian elimination -------------------------------------------------------

def _rref_rows(rows: list[dict[int, object]], field: FieldSpec, stop_col: int | None = None):
    """Reduced row echelon form of a list of sparse rows.

    Returns ``(pivots, prow)`` where ``pivots`` is the sorted list of pivot
    columns and ``prow[c]`` is the reduced row whose leading 1 sits in column
    ``c``.  When ``stop_col`` is given, pivots are only taken in columns below
    it; a row whose support lies entirely at or beyond ``stop_col`` is kept
    under its own leading column anyway so that callers can detect
    inconsistency.
    """
    p = field.p
    prow: dict[int, dict[int, object]] = {}
    # column -> set of pivot columns whose rows have a nonzero there
    occurs: dict[int, set[int]] = {}
    for r in rows:
        r = dict(r)
        hits = [c for c in r if c in prow]
        for c in hits:
            x = r.get(c)
            if not x:
                continue
            for k, v in prow[c].items():
                nv = r.get(k, 0) - x * v
                if p:
                    nv %= p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        if not r:
            continue
        lead = min(r)
        inv = field.inv(r[lead])
        if p:
            r = {k: v * inv % p for k, v in r.items()}
        else:
            r = {k: v * inv for k, v in r.items()}
        # clear the new pivot column from existing rows
        for c in list(occurs.get(lead, ())):
            row = prow[c]
            x = row.get(lead)
            if not x:
                continue
            for k, v in r.items():
                nv = row.get(k, 0) - x * v
                if p:
                    nv %= p
                if nv:
                    if k not in row:
                        occurs.setdefault(k, set()).add(c)
                    row[k] = nv
                else:
                    row.pop(k, None)
                    s = occurs.get(k)
                    if s is not None:
                        s.discard(c)
        prow[lead] = r
        for k in r:
            if k != lead:
                occurs.setdefault(k, set()).add(lead)
    return sorted(prow), prow


def rref(m: ExactMatrix):
    """Pivot columns and reduced rows of ``m``."""
    rm = m.rowmap()
    return _rref_rows([rm[i] for i in sorted(rm)], m.field)


def rank(m: ExactMatrix) -> int:
    return m.rank()


def kernel_basis(m: ExactMatrix) -> list[ExactMatrix]:
    """Basis of the null space as column vectors, one per free column."""
    pivots, prow = rref(m)
    pivset = set(pivots)
    f = m.field
    out = []
    for free in range(m.cols):
        if free in pivset:
            continue
        entries = {(free, 0): f.one}
        for c in pivots:
            v = prow[c].get(free)
            if v:
                entries[(c, 0)] = f.norm(-v)
        out.append(ExactMatrix.from_entries(m.cols, 1, entries, f))
    return out


def kernel_matrix(m: ExactMatrix) -> ExactMatrix:
    """Kernel basis assembled as the columns of one matrix."""
    vecs = kernel_basis(m)
    entries = {}
    for k, v in enumerate(vecs):
        for (i, _), x in v.entries().items():
            entries[(i, k)] = x
    return ExactMatrix.from_entries(m.cols, len(vecs), entries, m.field)


def is_injective(m: ExactMatrix) -> bool:
    return m.rank() == m.cols


def is_surjective(m: ExactMatrix) -> bool:
    return m.rank() == m.rows


def cokernel_projection(q: ExactMatrix) -> tuple[ExactMatrix, int]:
    """Surjection ``proj`` from the target of ``q`` with ``proj @ q == 0``.

    The rows of ``proj`` are indexed by the non-pivot columns of ``q^T``;
    each row is the left kernel vector of ``q`` attached to that free index.
    """
    kt = kernel_basis(q.transpose())
    dim = len(kt)
    entries = {}
    for k, v in enumerate(kt):
        for (i, _), x in v.entries().items():
            entries[(k, i)] = x
    proj = ExactMatrix.from_entries(dim, q.rows, entries, q.field)
    return proj, dim


def cokernel_free_indices(q: ExactMatrix) -> list[int]:
    """Target indices that index the rows of :func:`cokernel_projection`."""
    pivots, _ = rref(q.transpose())
    pv = set(pivots)
    return [i for i in range(q.rows) if i not in pv]


def solve(a: ExactMatrix, b: ExactMatrix, *, require_unique: bool = False) -> ExactMatrix:
    """A matrix ``x`` with ``a @ x == b``; free variables are set to zero.

    Raises :class:`NoSolution` if the system is inconsistent and, when
    ``require_unique`` is set, :class:`NonUnique` if ``a`` has a kernel.
    """
    _check_same(a, b)
    if a.rows != b.rows:
        raise ShapeMismatch(f"solve: {a.shape} vs {b.shape}")
    f = a.field
    n = a.cols
    arm, brm = a.rowmap(), b.rowmap()
    rows = []
    for i in range(a.rows):
        r = dict(arm.get(i, {}))
        for j, v in brm.get(i, {}).items():
            r[n + j] = v
        if r:
            rows.append(r)
    pivots, prow = _rref_rows(rows, f)
    if pivots and pivots[-1] >= n:
        raise NoSolution("inconsistent linear system")
    if require_unique and len(pivots) < n:
        raise NonUnique(f"solution space has dimension {n - len(pivots)}")
    out = {}
    for c in pivots:
        rr = {j - n: v for j, v in prow[c].items() if j >= n}
        if rr:
            out[c] = rr
    return ExactMatrix._from_rowmap(n, b.cols, f, out)


def right_inverse(p: ExactMatrix) -> ExactMatrix:
    """Section ``s`` with ``p @ s == id``, supported on the pivot columns of ``p``."""
    try:
        return solve(p, ExactMatrix.identity(p.rows, p.field))
    except NoSolution:
        raise NotSurjective(f"map of rank {p.rank()} onto dimension {p.rows}") from None


def left_inverse(i: ExactMatrix) -> ExactMatrix:
    """Retraction ``r`` with ``r @ i == id`` for an injective ``i``."""
    if not is_injective(i):
        raise NoSolution("map is not injective")
    return right_inverse(i.transpose()).transpose()


def inverse(m: ExactMatrix) -> ExactMatrix:
    if m.rows != m.cols:
        raise ShapeMismatch("inverse of a non-square matrix")
    return solve(m, ExactMatrix.identity(m.rows, m.field), require_unique=True)


def split_idempotent(e: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
    """Factor an idempotent as ``check @ hat`` with ``hat @ check == id``.

    ``check`` consists of the pivot columns of ``e``; ``hat`` is the unique
    solution of ``check @ hat == e``.
    """
    if e.rows != e.cols or matmul(e, e) != e:
        raise NotIdempotent("e @ e != e")
    pivots, _ = rref(e)
    check = e.select_columns(pivots)
    hat = solve(check, e, require_unique=True)
    assert matmul(hat, check) == ExactMatrix.identity(len(pivots), e.field)
    return hat, check


def solve_along_surjection(p: ExactMatrix, f: ExactMatrix, section: ExactMatrix | None = None) -> ExactMatrix:
    """The unique ``g`` with ``g @ p == f`` for a surjective ``p``.

    A right inverse of ``p`` may be supplied when one is known structurally.
    Well-definedness (``f`` kills the kernel of ``p``) is verified by
    recomposing: ``g @ p == f`` holds exactly iff ``f`` vanishes on
    ``ker p``.
    """
    _check_same(p, f)
    if p.cols != f.cols:
        raise ShapeMismatch(f"sources differ: {p.shape} vs {f.shape}")
    if section is None:
        section = right_inverse(p)
    elif matmul(p, section) != ExactMatrix.identity(p.rows, p.field):
        raise NotSurjective("supplied section is not a right inverse")
    g = matmul(f, section)
    if matmul(g, p) != f:
        raise NotWellDefined("map does not vanish on the kernel of the epimorphism")
    return g
