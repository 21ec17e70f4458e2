"""Spectral decomposition of the normal Jacobi operator.

A NormalFrame packages a unit normal xi = V + Y + sA together with the
derived subspaces: the four-dimensional core span(A, V, Y, J_Y V), the
commutant p of (V, J_Y V) inside v, the (-1)-eigenspace of K^2 in the
center, and the distinguished unit vectors T0 and Q.  The full predicted
spectrum of the Jacobi operator along xi consists of -1, -1/4 and, for
each K^2-eigenvalue mu != -1, a triple of roots of a shifted cubic; the
explicit eigenvector families are certified against the assembled operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .curvature import CurvatureContext
from .dralgebra import DamekRicci
from .numkernel import MPoly, cluster_indices, eig_sym, rational_bisect

CERT_TOL = 1e-9


def _orthonormalize(cols: list[np.ndarray], tol: float = 1e-10) -> np.ndarray:
    basis: list[np.ndarray] = []
    for w in cols:
        w = w.astype(float).copy()
        for b in basis:
            w -= (b @ w) * b
        nw = np.linalg.norm(w)
        if nw > tol:
            basis.append(w / nw)
    if not basis:
        return np.zeros((cols[0].shape[0] if cols else 0, 0))
    return np.column_stack(basis)


def _complete_basis(n: int, cols: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal completion of the given columns."""
    basis = [cols[:, i] for i in range(cols.shape[1])]
    for i in range(n):
        w = np.zeros(n)
        w[i] = 1.0
        for b in basis:
            w -= (b @ w) * b
        nw = np.linalg.norm(w)
        if nw > 1e-10:
            basis.append(w / nw)
        if len(basis) == n:
            break
    return np.column_stack(basis[cols.shape[1]:])


@dataclass(frozen=True)
class NormalFrame:
    """Unit normal data (V, Y, s) with derived subspaces, all precomputed."""

    g: DamekRicci
    v: np.ndarray
    y: np.ndarray
    s: float
    # derived, filled by make_frame
    xi: np.ndarray = field(repr=False, default=None)
    t0: np.ndarray = field(repr=False, default=None)
    q_vec: np.ndarray = field(repr=False, default=None)
    s4: np.ndarray = field(repr=False, default=None)
    p_basis: np.ndarray = field(repr=False, default=None)
    z_minus1: np.ndarray = field(repr=False, default=None)
    v_minus1: np.ndarray = field(repr=False, default=None)
    k_matrix: np.ndarray = field(repr=False, default=None)
    k_basis: np.ndarray = field(repr=False, default=None)
    mu_clusters: tuple = ()

    @property
    def vsq(self) -> float:
        return float(self.v @ self.v)

    @property
    def ysq(self) -> float:
        return float(self.y @ self.y)

    @property
    def d_minus1(self) -> int:
        return self.z_minus1.shape[1]

    @property
    def d_p(self) -> int:
        return self.p_basis.shape[1]

    def mu_values(self) -> list[float]:
        return [m for m, _ in self.mu_clusters]

    def mu_space(self, k: int) -> np.ndarray:
        return self.mu_clusters[k][1]

    def k_apply(self, z: np.ndarray) -> np.ndarray:
        """K_{V,Y} of a center vector lying in Y-perp."""
        return self.k_basis @ (self.k_matrix @ (self.k_basis.T @ z))


def make_frame(g: DamekRicci, v: np.ndarray, y: np.ndarray, s: float,
               unit_tol: float = 1e-9, cluster_tol: float = 1e-7) -> NormalFrame:
    """Build a NormalFrame, validating |xi| = 1 and deriving all subspaces."""
    v = np.asarray(v, dtype=float)
    y = np.asarray(y, dtype=float)
    norm = float(v @ v + y @ y + s * s)
    if abs(norm - 1.0) > unit_tol:
        raise ValueError(f"|xi|^2 = {norm} is not 1 within {unit_tol}")
    xi = g.vec(v, y, s).flat()
    nv, ny = float(np.linalg.norm(v)), float(np.linalg.norm(y))
    jyv = g.j_z(y) @ v if ny > 0 else np.zeros(g.d_v)

    t0 = None
    if ny > 0 and nv > 0:
        t0 = (g.vec(jyv, s * y, -(ny ** 2)).flat()) / ny
    q_vec = None
    if nv > 0:
        q_vec = (g.vec(s * v, None, -(nv ** 2)).flat()) / nv

    cols = [g.vec(a=1.0).flat(), g.vec(v).flat()]
    if ny > 0:
        cols.append(g.vec(z=y).flat())
        if nv > 0:
            cols.append(g.vec(jyv).flat())
    s4 = _orthonormalize(cols)

    # p = kernel of U -> ([U, V], [U, J_Y V]) via rank-revealing SVD;
    # with Y = 0 the commutant is additionally cut down to V-perp
    if nv > 0:
        rows = [ (g.module.generators[i] @ v) for i in range(g.d_z) ]
        if ny > 0:
            rows += [ (g.module.generators[i] @ jyv) for i in range(g.d_z) ]
        else:
            rows.append(v)
        mat = np.stack(rows)
        _, sing, vh = np.linalg.svd(mat)
        rank = int(np.sum(sing > 1e-9))
        p_basis = vh[rank:].T if rank < g.d_v else np.zeros((g.d_v, 0))
    else:
        p_basis = np.eye(g.d_v)

    if nv > 0 and ny > 0:
        k_matrix, k_basis = g.k_operator(v, y)
        z_minus1, _ = g.k_square_minus1_space(v, y, cluster_tol)
        k2 = k_matrix @ k_matrix
        k2 = 0.5 * (k2 + k2.T)
        vals, vecs = np.linalg.eigh(k2)
        clusters = cluster_indices(list(vals), cluster_tol)
        mu_clusters = []
        for c in clusters:
            mu = float(np.mean(vals[list(c)]))
            if abs(mu + 1.0) <= cluster_tol:
                continue
            mu_clusters.append((mu, k_basis @ vecs[:, list(c)]))
    else:
        k_matrix = np.zeros((0, 0))
        k_basis = np.zeros((g.d_z, 0))
        z_minus1 = np.zeros((g.d_z, 0))
        mu_clusters = []

    v_minus1 = (_orthonormalize([g.j_z(z_minus1[:, i]) @ v
                                 for i in range(z_minus1.shape[1])])
                if z_minus1.shape[1] else np.zeros((g.d_v, 0)))

    return NormalFrame(g, v, y, float(s), xi=xi, t0=t0, q_vec=q_vec, s4=s4,
                       p_basis=p_basis, z_minus1=z_minus1, v_minus1=v_minus1,
                       k_matrix=k_matrix, k_basis=k_basis,
                       mu_clusters=tuple(mu_clusters))


def random_frame(g: DamekRicci, rng: np.random.Generator,
                 min_component: float = 0.05) -> NormalFrame:
    """Generic unit normal with all three components bounded away from zero."""
    while True:
        v = rng.standard_normal(g.d_v)
        y = rng.standard_normal(g.d_z)
        s = float(rng.standard_normal())
        x = np.concatenate([v, y, [s]])
        x /= np.linalg.norm(x)
        v, y, s = x[:g.d_v], x[g.d_v:-1], float(x[-1])
        if min(v @ v, y @ y, s * s) >= min_component:
            return make_frame(g, v, y, s)


# ---------------------------------------------------------------------------
# cubic eigenvalue families
# ---------------------------------------------------------------------------

def alpha_cubic(mu: float, v: float, y: float) -> dict:
    """The three Jacobi eigenvalues of a mu-family, by exact bisection.

    They solve (alpha+1)(alpha+1/4)^2 = 27/64 v^2 y (1+mu); the substitution
    eta = 4 alpha + 1 turns this into eta^2(eta+3) = q with
    q = 27 v^2 y (1+mu).  Roots are bracketed with exact rational signs.
    """
    if -1e-9 < mu <= 1e-9:
        mu = 0.0  # numerical noise around the kernel eigenvalue
    if not (-1.0 < mu <= 0.0):
        raise ValueError(f"mu = {mu} outside (-1, 0]; the -1 family is handled separately")
    if not (v > 0 and y > 0 and v + y < 1):
        raise ValueError(f"need v, y > 0 and v + y < 1, got v={v}, y={y}")
    q = Fraction(27) * Fraction(v) ** 2 * Fraction(y) * (1 + Fraction(mu))
    # p(t) = t^3 + 3 t^2 - q, roots in (-3,-2), (-2,0), (0,1)
    coeffs = [-q, Fraction(0), Fraction(3), Fraction(1)]
    width = Fraction(1, 10 ** 15)
    brackets = [rational_bisect(coeffs, Fraction(-3), Fraction(-2), width),
                rational_bisect(coeffs, Fraction(-2), Fraction(0), width),
                rational_bisect(coeffs, Fraction(0), Fraction(1), width)]
    etas = [float((lo + hi) / 2) for lo, hi in brackets]
    alphas = [(e - 1.0) / 4.0 for e in etas]
    return {"q": q, "etas": etas, "alphas": alphas, "brackets": brackets}


def eta_alpha_exact_identity() -> bool:
    """p(4a+1) == 64 (a+1)(a+1/4)^2 - q as an exact polynomial identity."""
    a, q = MPoly.symbols("a q")
    t = 4 * a + 1
    p_shifted = t ** 3 + 3 * t ** 2 - q
    target = 64 * (a + 1) * (a + Fraction(1, 4)) ** 2 - q
    return (p_shifted - target).is_zero


def f_cubic_roots(q: float) -> dict:
    """Roots of f(t) = t^3 + 3/2 t^2 + 9/16 t + q^2 with interlacing proof.

    Valid for q in (0, 1/4); returns the three roots with the certified
    chain -1 < a1 < -3/4 < a2 < -1/4 < a3 <= 0 and the exact sign
    certificates f(0) > 0 and f(-q) < 0 that place a3 inside (-q, 0).
    """
    qf = Fraction(q)
    if not (0 < qf < Fraction(1, 4)):
        raise ValueError(f"q = {q} outside (0, 1/4)")
    coeffs = [qf ** 2, Fraction(9, 16), Fraction(3, 2), Fraction(1)]
    width = Fraction(1, 10 ** 15)
    b1 = rational_bisect(coeffs, Fraction(-1), Fraction(-3, 4), width)
    b2 = rational_bisect(coeffs, Fraction(-3, 4), Fraction(-1, 4), width)
    b3 = rational_bisect(coeffs, Fraction(-1, 4), Fraction(0), width)
    roots = [float((lo + hi) / 2) for lo, hi in (b1, b2, b3)]
    f0 = qf ** 2
    f_minus_q = -qf * (qf - Fraction(9, 4)) * (qf - Fraction(1, 4))
    from .numkernel import poly_eval_fraction
    assert poly_eval_fraction(coeffs, -qf) == f_minus_q
    return {"roots": roots, "brackets": (b1, b2, b3),
            "f_at_0": f0, "f_at_minus_q": f_minus_q,
            "certificate": bool(f0 > 0 and f_minus_q < 0)}


# ---------------------------------------------------------------------------
# eigenvector families
# ---------------------------------------------------------------------------

def center_family_vector(frame: NormalFrame, z: np.ndarray, kind: str) -> np.ndarray:
    """(|V|^2 - 1) Z + J_{|Y| K Z - s Z} V ('minus1') or the quarter variant."""
    g = frame.g
    ny = float(np.linalg.norm(frame.y))
    kz = frame.k_apply(z)
    arg = ny * kz - frame.s * z
    jv = g.j_z(arg) @ frame.v
    if kind == "minus1":
        return g.vec(jv, (frame.vsq - 1.0) * z, 0.0).flat()
    if kind == "quarter":
        return g.vec(jv, frame.vsq * z, 0.0).flat()
    raise ValueError(f"unknown family kind {kind!r}")


def psi_map(frame: NormalFrame, l: int, z: np.ndarray,
            proj_tol: float = 1e-8) -> np.ndarray:
    """The homothety from a mu-eigenspace of K^2 onto the l-th cubic family.

    psi_l(Z) = eta_l nu_l Z + 3 nu_l J_Z J_Y V - 9 |V|^2 |Y| J_{KZ} V
               - 3 s eta_l J_Z V  with eta_l = 4 alpha_l + 1,
    nu_l = eta_l + 3 |V|^2.  Z must lie in the chosen mu-eigenspace.
    """
    g = frame.g
    z = np.asarray(z, dtype=float)
    nz = np.linalg.norm(z)
    if nz == 0:
        return np.zeros(g.dim)
    mu, basis, _ = _locate_mu(frame, z, proj_tol)
    roots = alpha_cubic(mu, frame.vsq, frame.ysq)
    eta = roots["etas"][l]
    nu = eta + 3.0 * frame.vsq
    ny = float(np.linalg.norm(frame.y))
    jyv = g.j_z(frame.y) @ frame.v
    kz = frame.k_apply(z)
    vec_v = (3.0 * nu * (g.j_z(z) @ jyv) - 9.0 * frame.vsq * ny * (g.j_z(kz) @ frame.v)
             - 3.0 * frame.s * eta * (g.j_z(z) @ frame.v))
    return g.vec(vec_v, eta * nu * z, 0.0).flat()


def psi_homothety_ratio(frame: NormalFrame, l: int, mu: float) -> float:
    """Closed-form |psi_l(Z)|^2 / |Z|^2 for Z in the mu-eigenspace."""
    v, y = frame.vsq, frame.ysq
    ny = np.sqrt(y)
    roots = alpha_cubic(mu, v, y)
    eta = roots["etas"][l]
    nu = eta + 3.0 * v
    return ((eta * nu) ** 2 + 9.0 * nu ** 2 * y * v - 81.0 * mu * v ** 3 * y
            + 9.0 * frame.s ** 2 * eta ** 2 * v + 54.0 * mu * nu * v ** 2 * y)


def _locate_mu(frame: NormalFrame, z: np.ndarray, proj_tol: float):
    nz = np.linalg.norm(z)
    for k, (mu, basis) in enumerate(frame.mu_clusters):
        proj = basis @ (basis.T @ z)
        if np.linalg.norm(z - proj) <= proj_tol * nz:
            return mu, basis, k
    raise ValueError("Z does not lie in a single K^2 eigenspace away from -1")


# ---------------------------------------------------------------------------
# full spectral report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray
    clusters: tuple
    predicted: np.ndarray
    match_residual: float
    certificate_residuals: dict
    dims: dict
    basis_perp: np.ndarray = field(repr=False, default=None)
    jacobi_perp: np.ndarray = field(repr=False, default=None)

    @property
    def complete(self) -> bool:
        return self.predicted.shape == self.eigenvalues.shape


def xi_spectrum(frame: NormalFrame, ctx: CurvatureContext,
                cert_tol: float = CERT_TOL) -> SpectralReport:
    """Numeric spectrum of the Jacobi operator on xi-perp plus certificates.

    For a fully generic frame (V, Y, s all nonzero) the -1/-1/4 families and
    every psi_l image are checked as eigenvector certificates; with Y = 0
    the two-eigenvalue structure is certified instead.
    """
    g = frame.g
    if abs(float(frame.xi @ frame.xi) - 1.0) > 1e-9:
        raise ValueError("xi is not a unit vector")
    jac = ctx.jacobi(frame.xi)
    perp = _complete_basis(g.dim, frame.xi[:, None])
    jac_perp = perp.T @ jac @ perp
    dec = eig_sym(jac_perp)

    nv, ny, s = np.sqrt(frame.vsq), np.sqrt(frame.ysq), frame.s
    preds: list[float] = []
    certs: dict[str, float] = {}
    dims = {"d_p": frame.d_p, "d_minus1": frame.d_minus1}

    def cert(name: str, vec: np.ndarray, alpha: float):
        nv_ = np.linalg.norm(vec)
        if nv_ == 0:
            return
        res = float(np.linalg.norm(jac @ vec - alpha * vec)) / nv_
        certs[name] = max(certs.get(name, 0.0), res)

    if ny > 1e-13 and nv > 1e-13 and abs(s) > 1e-13:
        preds.append(-1.0)
        cert("t0", frame.t0, -1.0)
        for i in range(frame.d_minus1):
            z = frame.z_minus1[:, i]
            preds.append(-1.0)
            cert("center_minus1", center_family_vector(frame, z, "minus1"), -1.0)
            cert("center_quarter", center_family_vector(frame, z, "quarter"), -0.25)
            preds.append(-0.25)
        # s4 minus span(xi, t0)
        rest = _orthonormalize([frame.s4[:, i] - frame.xi * (frame.xi @ frame.s4[:, i])
                                - frame.t0 * (frame.t0 @ frame.s4[:, i])
                                for i in range(frame.s4.shape[1])])
        for i in range(rest.shape[1]):
            preds.append(-0.25)
            cert("s4_quarter", rest[:, i], -0.25)
        for i in range(frame.d_p):
            preds.append(-0.25)
            cert("p_quarter", g.vec(frame.p_basis[:, i]).flat(), -0.25)
        for mu, basis in frame.mu_clusters:
            roots = alpha_cubic(mu, frame.vsq, frame.ysq)
            for l in range(3):
                for i in range(basis.shape[1]):
                    preds.append(roots["alphas"][l])
                    cert(f"psi_{l}", psi_map(frame, l, basis[:, i]), roots["alphas"][l])
        # homothety spread per (mu, l)
        spread = 0.0
        for mu, basis in frame.mu_clusters:
            if basis.shape[1] < 1:
                continue
            for l in range(3):
                ratios = [float(np.linalg.norm(psi_map(frame, l, basis[:, i])) ** 2)
                          for i in range(basis.shape[1])]
                closed = psi_homothety_ratio(frame, l, mu)
                for r in ratios:
                    spread = max(spread, abs(r - closed) / max(closed, 1e-30))
        certs["psi_homothety_spread"] = spread
    elif ny <= 1e-13 and nv > 1e-13 and abs(s) > 1e-13:
        # no-center-component case: eigenvalues exactly {-1, -1/4}
        for i in range(g.d_z):
            z = np.zeros(g.d_z)
            z[i] = 1.0
            jzv = g.j_z(z) @ frame.v
            preds.append(-1.0)
            cert("line_minus1", g.vec(jzv, s * z, 0.0).flat(), -1.0)
            preds.append(-0.25)
            cert("line_quarter", g.vec(-s * jzv, frame.vsq * z, 0.0).flat(), -0.25)
        preds.append(-0.25)
        cert("q_quarter", frame.q_vec, -0.25)
        for i in range(frame.d_p):
            preds.append(-0.25)
            cert("p_quarter", g.vec(frame.p_basis[:, i]).flat(), -0.25)
    else:
        preds = list(np.sort(dec.eigenvalues))

    predicted = np.sort(np.asarray(preds))
    if predicted.shape == dec.eigenvalues.shape:
        match = float(np.max(np.abs(predicted - dec.eigenvalues)))
    else:
        match = float("inf")
    return SpectralReport(dec.eigenvalues, dec.clusters, predicted, match,
                          certs, dims, basis_perp=perp, jacobi_perp=jac_perp)
