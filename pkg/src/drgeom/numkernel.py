"""Numeric and exact-rational kernels.

Two independent layers live here: a thin symmetric-eigensolver wrapper with
deterministic eigenvalue clustering, and a sparse multivariate polynomial
over exact rationals (arbitrary-precision, no floating point) supporting
reduction modulo a univariate relation, symmetric-function elimination and
resultants.  Everything is immutable after construction and safe to map
over parameter grids in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

SYM_TOL = 1e-12
CLUSTER_TOL = 1e-7
RANK_TOL = 1e-9


# ---------------------------------------------------------------------------
# symmetric eigensolver with clustering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenDecomposition:
    """Sorted spectrum of a symmetric operator with gap-clustering.

    ``vectors[:, i]`` is the eigenvector for ``eigenvalues[i]``; within each
    cluster the basis is re-derived by Gram-Schmidt against coordinate order,
    so it does not depend on LAPACK's arbitrary choice inside multiplicities.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    clusters: tuple[tuple[int, ...], ...]
    residual: float

    def cluster_values(self) -> list[float]:
        return [float(np.mean(self.eigenvalues[list(c)])) for c in self.clusters]

    def cluster_basis(self, k: int) -> np.ndarray:
        return self.vectors[:, list(self.clusters[k])]


def cluster_indices(values: Sequence[float], tol: float) -> tuple[tuple[int, ...], ...]:
    """Group indices of sorted values into chains with consecutive gap <= tol."""
    clusters: list[list[int]] = []
    for i, x in enumerate(values):
        if clusters and abs(x - values[clusters[-1][-1]]) <= tol:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return tuple(tuple(c) for c in clusters)


def _deterministic_cluster_basis(vecs: np.ndarray) -> np.ndarray:
    """Gram-Schmidt the coordinate axes projected onto span(vecs)."""
    n, m = vecs.shape
    proj = vecs @ vecs.T
    basis: list[np.ndarray] = []
    for i in range(n):
        w = proj[:, i].copy()
        for b in basis:
            w -= (b @ w) * b
        nw = np.linalg.norm(w)
        if nw > 1e-8:
            basis.append(w / nw)
        if len(basis) == m:
            break
    if len(basis) != m:  # pathological projector; keep LAPACK's basis
        return vecs
    return np.column_stack(basis)


def eig_sym(m: np.ndarray, sym_tol: float = SYM_TOL,
            cluster_tol: float = CLUSTER_TOL) -> EigenDecomposition:
    """Spectral decomposition of a symmetric matrix, rejecting asymmetry."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.size:
        asym = float(np.max(np.abs(m - m.T)))
        if asym > sym_tol:
            raise ValueError(f"matrix is not symmetric: max asymmetry {asym:.3e} > {sym_tol:.3e}")
    if m.size == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0)), (), 0.0)
    m = 0.5 * (m + m.T)
    vals, vecs = np.linalg.eigh(m)
    clusters = cluster_indices(list(vals), cluster_tol)
    cols = []
    for c in clusters:
        block = vecs[:, list(c)]
        cols.append(block if len(c) == 1 else _deterministic_cluster_basis(block))
    vecs = np.hstack(cols)
    residual = float(np.linalg.norm(m - vecs @ np.diag(vals) @ vecs.T))
    return EigenDecomposition(vals, vecs, clusters, residual)


# ---------------------------------------------------------------------------
# exact rational multivariate polynomials
# ---------------------------------------------------------------------------

RationalLike = Fraction | int


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # exact binary value of the float
    raise TypeError(f"cannot coerce {type(x).__name__} to an exact rational")


class MPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Terms map exponent tuples (aligned with ``variables``) to nonzero
    Fractions.  All arithmetic is exact; instances are immutable.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], RationalLike]):
        vs = tuple(variables)
        if len(set(vs)) != len(vs):
            raise ValueError(f"duplicate variable names in {vs}")
        cleaned: dict[tuple[int, ...], Fraction] = {}
        for exp, c in terms.items():
            c = _as_fraction(c)
            if c:
                exp = tuple(int(e) for e in exp)
                if len(exp) != len(vs):
                    raise ValueError("exponent length does not match variable count")
                cleaned[exp] = c
        self.variables = vs
        self.terms = cleaned

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> MPoly:
        return cls(variables, {})

    @classmethod
    def constant(cls, c, variables: Sequence[str] = ()) -> MPoly:
        vs = tuple(variables)
        return cls(vs, {tuple([0] * len(vs)): _as_fraction(c)})

    @classmethod
    def symbols(cls, names: str) -> tuple[MPoly, ...]:
        """Create variables sharing one ring, e.g. ``t, q = MPoly.symbols("t q")``."""
        vs = tuple(names.split())
        out = []
        for i in range(len(vs)):
            exp = [0] * len(vs)
            exp[i] = 1
            out.append(cls(vs, {tuple(exp): Fraction(1)}))
        return tuple(out)

    # -- ring structure -----------------------------------------------------

    def _aligned(self, other: MPoly) -> tuple[tuple[str, ...], MPoly, MPoly]:
        if self.variables == other.variables:
            return self.variables, self, other
        merged = list(self.variables) + [v for v in other.variables if v not in self.variables]
        return tuple(merged), self.embed(merged), other.embed(merged)

    def embed(self, variables: Sequence[str]) -> MPoly:
        """Reinterpret in a larger (or reordered) variable ring."""
        vs = tuple(variables)
        pos = {v: i for i, v in enumerate(vs)}
        for v in self.variables:
            if v not in pos:
                raise ValueError(f"target ring is missing variable {v!r}")
        terms: dict[tuple[int, ...], Fraction] = {}
        for exp, c in self.terms.items():
            new = [0] * len(vs)
            for v, e in zip(self.variables, exp):
                new[pos[v]] = e
            terms[tuple(new)] = terms.get(tuple(new), Fraction(0)) + c
        return MPoly(vs, terms)

    def _coerce(self, other) -> MPoly:
        if isinstance(other, MPoly):
            return other
        return MPoly.constant(_as_fraction(other), self.variables)

    def __add__(self, other) -> MPoly:
        other = self._coerce(other)
        vs, a, b = self._aligned(other)
        terms = dict(a.terms)
        for exp, c in b.terms.items():
            terms[exp] = terms.get(exp, Fraction(0)) + c
        return MPoly(vs, terms)

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        return MPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> MPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MPoly:
        other = self._coerce(other)
        vs, a, b = self._aligned(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                exp = tuple(x + y for x, y in zip(e1, e2))
                terms[exp] = terms.get(exp, Fraction(0)) + c1 * c2
        return MPoly(vs, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MPoly:
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = MPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other) -> MPoly:
        c = _as_fraction(other)
        return MPoly(self.variables, {e: v / c for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            try:
                other = MPoly.constant(_as_fraction(other), self.variables)
            except TypeError:
                return NotImplemented
        _, a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = "*".join(f"{v}^{e}" if e > 1 else v
                            for v, e in zip(self.variables, exp) if e)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)

    # -- queries ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, var: str) -> int:
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return max((e[i] for e in self.terms), default=0)

    def coeff_of(self, var: str, power: int) -> MPoly:
        """Coefficient of var**power, as a polynomial in the remaining ring."""
        i = self.variables.index(var)
        terms = {}
        for exp, c in self.terms.items():
            if exp[i] == power:
                e = list(exp)
                e[i] = 0
                terms[tuple(e)] = terms.get(tuple(e), Fraction(0)) + c
        return MPoly(self.variables, terms)

    def depends_on(self, var: str) -> bool:
        return self.degree(var) > 0

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial."""
        for exp, c in self.terms.items():
            if any(exp):
                raise ValueError(f"polynomial is not constant: {self!r}")
        return next(iter(self.terms.values()), Fraction(0))

    def evaluate(self, assignment: Mapping[str, RationalLike]) -> Fraction:
        missing = [v for v in self.variables
                   if v not in assignment and self.depends_on(v)]
        if missing:
            raise ValueError(f"missing values for {missing}")
        vals = [_as_fraction(assignment.get(v, 0)) for v in self.variables]
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = c
            for x, e in zip(vals, exp):
                if e:
                    term *= x ** e
            total += term
        return total

    def substitute(self, var: str, value) -> MPoly:
        """Replace a variable by a polynomial (or rational) value, exactly."""
        if var not in self.variables:
            return self
        i = self.variables.index(var)
        if not isinstance(value, MPoly):
            value = MPoly.constant(_as_fraction(value), self.variables)
        out = MPoly.zero(self.variables)
        powers: dict[int, MPoly] = {0: MPoly.constant(1, self.variables)}
        maxdeg = self.degree(var)
        for k in range(1, maxdeg + 1):
            powers[k] = powers[k - 1] * value
        for k in range(maxdeg + 1):
            coeff = self.coeff_of(var, k)
            if not coeff.is_zero:
                out = out + coeff * powers[k]
        return out

    # -- exact division -----------------------------------------------------

    def divexact(self, other: MPoly) -> MPoly | None:
        """Exact multivariate quotient self/other, or None if not divisible."""
        vs, a, b = self._aligned(self._coerce(other))
        if b.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        quo: dict[tuple[int, ...], Fraction] = {}
        rem = dict(a.terms)
        blead = max(b.terms)
        bc = b.terms[blead]
        while rem:
            rlead = max(rem)
            diff = tuple(x - y for x, y in zip(rlead, blead))
            if any(d < 0 for d in diff):
                return None
            c = rem[rlead] / bc
            quo[diff] = quo.get(diff, Fraction(0)) + c
            for e2, c2 in b.terms.items():
                exp = tuple(x + y for x, y in zip(diff, e2))
                nc = rem.get(exp, Fraction(0)) - c * c2
                if nc:
                    rem[exp] = nc
                else:
                    rem.pop(exp, None)
        return MPoly(vs, quo)


def poly_reduce(a: MPoly, var: str, modulus: MPoly) -> MPoly:
    """Reduce ``a`` modulo a relation monic in ``var`` (exact long division).

    The result has degree in ``var`` strictly below deg(modulus) and is
    congruent to ``a`` modulo the relation.
    """
    vs, a, modulus = a._aligned(modulus)
    d = modulus.degree(var)
    if d < 1:
        raise ValueError("modulus must have degree >= 1 in the reduction variable")
    lead = modulus.coeff_of(var, d)
    if not lead == MPoly.constant(1, vs):
        raise ValueError(f"modulus is not monic in {var!r}: leading coefficient {lead!r}")
    i = vs.index(var)
    tvar = MPoly(vs, {tuple(1 if j == i else 0 for j in range(len(vs))): Fraction(1)})
    rem = a
    while rem.degree(var) >= d:
        k = rem.degree(var)
        c = rem.coeff_of(var, k)
        rem = rem - c * tvar ** (k - d) * modulus
    return rem


class NotSymmetricError(ValueError):
    """Raised when an expression is not symmetric in the requested variables."""

    def __init__(self, residue: MPoly):
        self.residue = residue
        super().__init__(f"non-symmetric residue: {residue!r}")


def elementary_symmetric(variables: Sequence[MPoly]) -> list[MPoly]:
    """e_1..e_k of the given variable polynomials."""
    k = len(variables)
    elems: list[MPoly] = []
    # dynamic programming over prod (1 + x_i t): coefficients of t^j
    coeffs = [MPoly.constant(1, variables[0].variables)]
    for x in variables:
        new = coeffs + [MPoly.zero(x.variables)]
        for j in range(len(coeffs), 0, -1):
            new[j] = (coeffs[j] if j < len(coeffs) else MPoly.zero(x.variables)) + coeffs[j - 1] * x
        coeffs = new
    for j in range(1, k + 1):
        elems.append(coeffs[j])
    return elems


def symmetric_eliminate(expr: MPoly, sym_vars: Sequence[str],
                        elem_values: Sequence) -> MPoly:
    """Rewrite a polynomial symmetric in ``sym_vars`` via elementary symmetric
    functions and substitute their values, removing the variables entirely.

    ``elem_values`` supplies e_1..e_k (rationals or polynomials in the other
    variables).  Non-symmetric input raises NotSymmetricError carrying the
    offending residue.
    """
    sym_vars = tuple(sym_vars)
    k = len(sym_vars)
    vs = tuple(expr.variables)
    for v in sym_vars:
        if v not in vs:
            expr = expr.embed(list(vs) + [v])
            vs = expr.variables
    idx = [vs.index(v) for v in sym_vars]
    gens = []
    for v in sym_vars:
        exp = [0] * len(vs)
        exp[vs.index(v)] = 1
        gens.append(MPoly(vs, {tuple(exp): Fraction(1)}))
    elems = elementary_symmetric(gens)
    values = [val if isinstance(val, MPoly) else MPoly.constant(_as_fraction(val), vs)
              for val in elem_values]
    if len(values) != k:
        raise ValueError(f"need {k} elementary symmetric values, got {len(values)}")

    result = MPoly.zero(vs)
    work = expr
    while True:
        # pick the lex-largest monomial in the symmetric variables
        cand = [(tuple(e[i] for i in idx), e) for e in work.terms if any(e[i] for i in idx)]
        if not cand:
            break
        sym_exp, full_exp = max(cand)
        if any(sym_exp[i] < sym_exp[i + 1] for i in range(k - 1)):
            raise NotSymmetricError(work)
        c = work.terms[full_exp]
        rest_exp = tuple(0 if i in idx else e for i, e in enumerate(full_exp))
        rest = MPoly(vs, {rest_exp: c})
        sym_prod_gen = MPoly.constant(1, vs)
        sym_prod_val = MPoly.constant(1, vs)
        exps = list(sym_exp) + [0]
        for j in range(k):
            power = exps[j] - exps[j + 1]
            if power:
                sym_prod_gen = sym_prod_gen * elems[j] ** power
                sym_prod_val = sym_prod_val * values[j] ** power
        work = work - rest * sym_prod_gen
        result = result + rest * sym_prod_val
    result = result + work
    for e in result.terms:
        for i in idx:
            if e[i]:
                raise NotSymmetricError(result)
    return _drop_vars(result, sym_vars)


def _drop_vars(p: MPoly, names: Iterable[str]) -> MPoly:
    names = set(names)
    keep = [v for v in p.variables if v not in names]
    pos = [p.variables.index(v) for v in keep]
    terms = {}
    for exp, c in p.terms.items():
        for v in names:
            if exp[p.variables.index(v)]:
                raise ValueError(f"polynomial still depends on {v!r}")
        terms[tuple(exp[i] for i in pos)] = c
    return MPoly(keep, terms)


def mpoly_resultant(a: MPoly, b: MPoly, var: str) -> MPoly:
    """Resultant of a and b with respect to ``var`` (Sylvester determinant)."""
    vs, a, b = a._aligned(b)
    m, n = a.degree(var), b.degree(var)
    if m == 0 and n == 0:
        raise ValueError("both polynomials are constant in the resultant variable")
    ac = [a.coeff_of(var, k) for k in range(m, -1, -1)]
    bc = [b.coeff_of(var, k) for k in range(n, -1, -1)]
    size = m + n
    rows: list[list[MPoly]] = []
    zero = MPoly.zero(vs)
    for i in range(n):
        rows.append([zero] * i + ac + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + bc + [zero] * (size - n - 1 - i))
    return _det_bareiss(rows)


def _det_bareiss(rows: list[list[MPoly]]) -> MPoly:
    """Fraction-free determinant over the polynomial ring."""
    n = len(rows)
    m = [row[:] for row in rows]
    sign = 1
    prev = MPoly.constant(1, rows[0][0].variables if n else ())
    for k in range(n - 1):
        if m[k][k].is_zero:
            for r in range(k + 1, n):
                if not m[r][k].is_zero:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return MPoly.zero(rows[0][0].variables)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                q = num.divexact(prev)
                if q is None:  # Bareiss guarantees exactness; belt and braces
                    raise ArithmeticError("fraction-free elimination failed")
                m[i][j] = q
            m[i][k] = MPoly.zero(m[i][k].variables)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


# ---------------------------------------------------------------------------
# exact univariate root bracketing
# ---------------------------------------------------------------------------

def poly_eval_fraction(coeffs: Sequence[RationalLike], x: RationalLike) -> Fraction:
    """Horner evaluation over exact rationals; coeffs ascending."""
    x = _as_fraction(x)
    total = Fraction(0)
    for c in reversed([_as_fraction(c) for c in coeffs]):
        total = total * x + c
    return total


def rational_bisect(coeffs: Sequence[RationalLike], lo: RationalLike, hi: RationalLike,
                    max_width: RationalLike = Fraction(1, 10 ** 16)) -> tuple[Fraction, Fraction]:
    """Bisection with exact sign evaluation; returns a bracketing interval.

    Requires a strict sign change on [lo, hi]; an exact root hit collapses
    the bracket to a point.
    """
    lo, hi = _as_fraction(lo), _as_fraction(hi)
    max_width = _as_fraction(max_width)
    flo = poly_eval_fraction(coeffs, lo)
    fhi = poly_eval_fraction(coeffs, hi)
    if flo == 0:
        return lo, lo
    if fhi == 0:
        return hi, hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > max_width:
        mid = (lo + hi) / 2
        fm = poly_eval_fraction(coeffs, mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def bracket_midpoint(bracket: tuple[Fraction, Fraction]) -> float:
    lo, hi = bracket
    return float((lo + hi) / 2)
