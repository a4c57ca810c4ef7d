"""Poisson structures, brackets, Hamiltonian and modular vector fields,
the Schouten differential, and the cosymplectic / b-Poisson constructors.

Sign conventions, fixed once here and cited everywhere else:
    {f, g} = Pi(df, dg),     X_g(f) = {f, g},
    alpha^sharp(f) = Pi(df, alpha).
"""

from __future__ import annotations

import itertools

import numpy as np

from . import expr as ex
from . import forms as fm
from .errors import (
    DegenerateVolume,
    DegreeTooHigh,
    FlatNotInvertible,
    ZetaDegenerate,
)


class PoissonStructure:
    """A bivector field on a product manifold."""

    def __init__(self, manifold, pi):
        if pi.kind != fm.VECTOR or pi.degree != 2:
            raise ValueError("pi must be a degree-2 multivector")
        self.manifold = manifold
        self.pi = pi

    def pi_entry(self, j, k):
        return self.pi.component((j, k))

    def __repr__(self):
        return f"<PoissonStructure on {self.manifold.coord_names} pi={self.pi!r}>"


def bracket(P, f, g):
    """{f, g} = sum_{j<k} Pi^{jk} (d_j f d_k g - d_k f d_j g)."""
    M = P.manifold
    names = M.coord_names
    terms = []
    for (j, k), c in P.pi.comps.items():
        fj = ex.derive(f, names[j])
        fk = ex.derive(f, names[k])
        gj = ex.derive(g, names[j])
        gk = ex.derive(g, names[k])
        t = ex.add(ex.mul(fj, gk), ex.mul(-1.0, fk, gj))
        if not ex.is_zero_expr(t):
            terms.append(ex.mul(c, t))
    return ex.add(*terms) if terms else ex.ZERO


def hamiltonian_field(P, g):
    """X_g with X_g(f) = {f, g}."""
    M = P.manifold
    names = M.coord_names
    comps = {}
    for j in range(M.dim):
        parts = []
        for k in range(M.dim):
            pik = P.pi.component((j, k))
            if ex.is_zero_expr(pik):
                continue
            gk = ex.derive(g, names[k])
            if not ex.is_zero_expr(gk):
                parts.append(ex.mul(pik, gk))
        if parts:
            comps[(j,)] = ex.add(*parts)
    return fm.Graded(M, 1, comps, fm.VECTOR)


def sharp(P, alpha):
    """Anchor map: alpha^sharp = sum_j (sum_k Pi^{jk} alpha_k) d_j."""
    if alpha.kind != fm.FORM or alpha.degree != 1:
        raise ValueError("sharp expects a 1-form")
    M = P.manifold
    comps = {}
    for j in range(M.dim):
        parts = []
        for (k,), ak in alpha.comps.items():
            pik = P.pi.component((j, k))
            if ex.is_zero_expr(pik):
                continue
            parts.append(ex.mul(pik, ak))
        if parts:
            comps[(j,)] = ex.add(*parts)
    return fm.Graded(M, 1, comps, fm.VECTOR)


def jacobi_residual(P, f, g, h, rng=None, n=200, window=None):
    """Max over sample points of |{f,{g,h}} + {g,{h,f}} + {h,{f,g}}|."""
    rng = rng if rng is not None else np.random.default_rng(7)
    cyc = ex.add(
        bracket(P, f, bracket(P, g, h)),
        bracket(P, g, bracket(P, h, f)),
        bracket(P, h, bracket(P, f, g)),
    )
    pts = P.manifold.sample_points(n, rng, window)
    vals = ex.eval_many(cyc, P.manifold, pts)
    return float(np.max(np.abs(vals)))


def jacobi_residual_coordinates(P, rng=None, n=200, window=None):
    """Worst Jacobi residual over all coordinate-function triples."""
    names = P.manifold.coord_names
    worst = 0.0
    for trip in itertools.combinations(names, 3):
        f, g, h = (ex.coord(t) for t in trip)
        worst = max(worst, jacobi_residual(P, f, g, h, rng=rng, n=n, window=window))
    if P.manifold.dim < 3:
        # any bivector on a 2-dim manifold is Poisson; residual is exactly 0
        return 0.0
    return worst


def is_poisson_field(P, X, rng=None, n=200, window=None):
    """Sampled sup-norm of the coefficients of L_X Pi.

    Equals the worst residual of X({f,h}) - {X(f),h} - {f,X(h)} over
    coordinate pairs (f, h).
    """
    rng = rng if rng is not None else np.random.default_rng(11)
    lx = fm.lie_derivative(X, P.pi)
    pts = P.manifold.sample_points(n, rng, window)
    return lx.max_abs_at(pts)


def modular_field(P, mu):
    """Y_mu = sum_i div_mu(X_{coord_i}) d_i, with exact Expr coefficients."""
    M = P.manifold
    comps = {}
    for i, name in enumerate(M.coord_names):
        xc = hamiltonian_field(P, ex.coord(name))
        d = fm.divergence(xc, mu)
        if not ex.is_zero_expr(d):
            comps[(i,)] = d
    return fm.Graded(M, 1, comps, fm.VECTOR)


def schouten_d(P, V):
    """[Pi, V] for deg(V) <= 2; the coboundary part of d_beta.

    On functions [Pi, f] = -X_f; on vector fields [Pi, X] = -L_X Pi.
    """
    if V.kind != fm.VECTOR:
        V = fm.Graded.function(P.manifold, ex.as_expr(V), fm.VECTOR)
    if V.degree > 2:
        raise DegreeTooHigh("schouten_d restricted to degrees 0..2")
    return fm.schouten(P.pi, V)


# ---------------------------------------------------------------------------
# cosymplectic structures
# ---------------------------------------------------------------------------


class CosymplecticStructure:
    """(eta, omega) with d eta = d omega = 0 and eta ^ omega^n a volume."""

    def __init__(self, manifold, eta, omega):
        if manifold.dim % 2 != 1:
            raise ValueError("cosymplectic manifolds are odd-dimensional")
        self.manifold = manifold
        self.eta = eta
        self.omega = omega
        self.n = (manifold.dim - 1) // 2

    def volume(self):
        out = self.eta
        for _ in range(self.n):
            out = fm.wedge(out, self.omega)
        return out

    def check(self, rng=None, npts=200, tol=1e-10):
        rng = rng if rng is not None else np.random.default_rng(3)
        pts = self.manifold.sample_points(npts, rng)
        r1 = fm.exterior_d(self.eta).max_abs_at(pts) if self.eta.degree < self.manifold.dim else 0.0
        r2 = fm.exterior_d(self.omega).max_abs_at(pts) if self.omega.degree < self.manifold.dim else 0.0
        vol = self.volume()
        top = tuple(range(self.manifold.dim))
        volc = vol.comps.get(top, ex.ZERO)
        vals = ex.eval_many(volc, self.manifold, pts)
        nonvanishing = float(np.min(np.abs(vals)))
        return {"d_eta": r1, "d_omega": r2, "volume_min": nonvanishing,
                "ok": r1 <= tol and r2 <= tol and nonvanishing > tol}

    def flat_matrix(self):
        """F with (flat X)_j = sum_i F[j][i] X^i, F[j][i] = omega_{ij} + eta_i eta_j."""
        M = self.manifold
        d = M.dim
        eta = [self.eta.component((i,)) for i in range(d)]
        F = [[None] * d for _ in range(d)]
        for j in range(d):
            for i in range(d):
                F[j][i] = ex.add(self.omega.component((i, j)), ex.mul(eta[i], eta[j]))
        return F


def _const_value(e):
    if isinstance(e, ex.Const):
        return e.value
    if ex.is_zero_expr(e):
        return 0.0
    return None


def _constant_matrix(F):
    vals = []
    for row in F:
        vrow = []
        for e in row:
            v = _const_value(e)
            if v is None:
                return None
            vrow.append(v)
        vals.append(vrow)
    return np.array(vals)


def flat(C, X):
    """flat(X) = iota_X omega + eta(X) eta, a 1-form."""
    etaX = fm.contract(X, C.eta).comps.get((), ex.ZERO)
    return fm.contract(X, C.omega) + C.eta.scale(etaX)


def flat_inverse(C, alpha):
    """Solve flat(X) = alpha.

    For constant-coefficient structures (the whole catalog) the inverse is
    exact and symbolic; otherwise a pointwise-only callable is returned,
    usable for sampling but not for symbolic downstream work.
    """
    M = C.manifold
    d = M.dim
    F = C.flat_matrix()
    Fc = _constant_matrix(F)
    av = [alpha.component((i,)) for i in range(d)]
    if Fc is not None:
        if abs(np.linalg.det(Fc)) < 1e-12:
            raise FlatNotInvertible("flat matrix is singular")
        inv = np.linalg.inv(Fc)
        comps = {}
        for i in range(d):
            parts = [ex.mul(inv[i, j], av[j]) for j in range(d)
                     if abs(inv[i, j]) > 1e-15 and not ex.is_zero_expr(av[j])]
            if parts:
                comps[(i,)] = ex.add(*parts)
        return fm.Graded(M, 1, comps, fm.VECTOR)

    def pointwise(points):
        env = M.env(points)
        npts = len(np.atleast_2d(points))
        Fm = np.zeros((npts, d, d))
        for j in range(d):
            for i in range(d):
                Fm[:, j, i] = np.broadcast_to(np.asarray(F[j][i].eval(env)), (npts,))
        rhs = np.zeros((npts, d))
        for i in range(d):
            rhs[:, i] = np.broadcast_to(np.asarray(av[i].eval(env)), (npts,))
        try:
            return np.linalg.solve(Fm, rhs)
        except np.linalg.LinAlgError as exc:
            raise FlatNotInvertible(str(exc)) from exc

    return pointwise


def reeb(C):
    """xi = flat^{-1}(eta): eta(xi) = 1, iota_xi omega = 0."""
    xi = flat_inverse(C, C.eta)
    if not isinstance(xi, fm.Graded):
        raise FlatNotInvertible("Reeb field is pointwise-only for this structure")
    return xi


def cosymplectic_poisson(C):
    """Pi(alpha, sigma) = omega(flat^{-1} alpha, flat^{-1} sigma)."""
    M = C.manifold
    d = M.dim
    inv = [flat_inverse(C, fm.form(M, 1, {(i,): 1.0})) for i in range(d)]
    comps = {}
    for i in range(d):
        for j in range(i + 1, d):
            parts = []
            for (a,), ca in inv[i].comps.items():
                for (b,), cb in inv[j].comps.items():
                    w = C.omega.component((a, b))
                    if ex.is_zero_expr(w):
                        continue
                    parts.append(ex.mul(ca, cb, w))
            if parts:
                val = ex.add(*parts)
                if not ex.is_zero_expr(val):
                    comps[(i, j)] = val
    return PoissonStructure(M, fm.Graded(M, 2, comps, fm.VECTOR))


def symplectify(C, angle_name="phi"):
    """Poisson structure of (M x T, omega + eta ^ d angle), nondegenerate."""
    M = C.manifold
    Mhat = M.product_with_circle(angle_name)
    d = Mhat.dim

    def lift(g):
        return fm.Graded(Mhat, g.degree, dict(g.comps), g.kind)

    omega_hat = lift(C.omega) + fm.wedge(
        lift(C.eta), fm.form(Mhat, 1, {(d - 1,): 1.0})
    )
    W = [[omega_hat.component((i, j)) for j in range(d)] for i in range(d)]
    Wc = _constant_matrix(W)
    if Wc is None:
        raise FlatNotInvertible("symplectify needs constant-coefficient input")
    inv = np.linalg.inv(Wc)
    # Pi(df, dg) with Pi^{ij} = (W^{-1})_{ji}: iota_Pi omega = 1 normalization
    comps = {}
    for i in range(d):
        for j in range(i + 1, d):
            v = inv[j, i]
            if abs(v) > 1e-15:
                comps[(i, j)] = ex.as_expr(v)
    return PoissonStructure(Mhat, fm.Graded(Mhat, 2, comps, fm.VECTOR)), omega_hat


# ---------------------------------------------------------------------------
# b-structures
# ---------------------------------------------------------------------------


class BStructure:
    """Z-defining data: zeta = iota_{Pi^n} mu for a chosen volume mu."""

    def __init__(self, zeta, volume):
        self.zeta = ex.as_expr(zeta)
        self.volume = volume

    @classmethod
    def from_volume(cls, P, mu):
        M = P.manifold
        if M.dim % 2 != 0:
            raise ValueError("b-structures need even dimension")
        n = M.dim // 2
        top = P.pi
        for _ in range(n - 1):
            top = fm.wedge(top, P.pi)
        zeta = fm.contract(top, mu).comps.get((), ex.ZERO)
        return cls(zeta, mu)


def find_zero_points(e, manifold, rng, n_lines=60, window=None, tol=1e-12):
    """Sample points of {e = 0} by bisection along random segments."""
    win = window if window is not None else manifold.window
    out = []
    for _ in range(n_lines):
        p = manifold.sample_points(1, rng, win)[0]
        q = manifold.sample_points(1, rng, win)[0]
        fp = ex.eval_at(e, manifold, p)
        fq = ex.eval_at(e, manifold, q)
        if fp == 0.0:
            out.append(p)
            continue
        if fp * fq >= 0:
            continue
        a, b, fa = p, q, fp
        for _ in range(80):
            m = 0.5 * (a + b)
            fmid = ex.eval_at(e, manifold, m)
            if abs(fmid) < tol:
                break
            if fa * fmid < 0:
                b = m
            else:
                a, fa = m, fmid
        out.append(0.5 * (a + b))
    return np.array(out) if out else np.zeros((0, manifold.dim))


def b_check(P, B, rng=None, n_lines=80, dzeta_tol=1e-8):
    """Transversality report for a candidate b-structure.

    Confirms d zeta != 0 at root-found samples of {zeta = 0}; raises
    ZetaDegenerate when |d zeta| < dzeta_tol at some sample.
    """
    M = P.manifold
    if M.dim % 2 != 0:
        raise ValueError("b_check needs even dimension")
    rng = rng if rng is not None else np.random.default_rng(23)
    zs = find_zero_points(B.zeta, M, rng, n_lines=n_lines)
    grads = [ex.derive(B.zeta, n) for n in M.coord_names]
    min_grad = np.inf
    for p in zs:
        g = np.array([ex.eval_at(gc, M, p) for gc in grads])
        min_grad = min(min_grad, float(np.linalg.norm(g)))
    if len(zs) and min_grad < dzeta_tol:
        raise ZetaDegenerate(
            f"|d zeta| = {min_grad:.3e} at a sample of the critical locus"
        )
    # zeta must reproduce iota_{Pi^n} mu
    n = M.dim // 2
    top = P.pi
    for _ in range(n - 1):
        top = fm.wedge(top, P.pi)
    zeta_mu = fm.contract(top, B.volume).comps.get((), ex.ZERO)
    pts = M.sample_points(200, rng)
    diff = ex.eval_many(ex.add(zeta_mu, ex.mul(-1.0, B.zeta)), M, pts)
    return {
        "is_b_poisson": bool(len(zs)) and min_grad >= dzeta_tol,
        "z_samples": zs,
        "min_dzeta": None if not len(zs) else min_grad,
        "zeta_consistency": float(np.max(np.abs(diff))),
    }
