"""Graded antisymmetric calculus: differential forms, multivector fields,
b-forms, and the usual operators (wedge, contraction, d, Lie derivative,
divergence, the b-de Rham differential).

Coefficients are Expr trees keyed by strictly increasing coordinate index
tuples; antisymmetry is structural.  Contraction pairs the first slots of
the form with the multivector: for decomposables,
iota_{v1^...^vq} omega (w...) = omega(v1, ..., vq, w...).
A worked 3-dim example of the sign convention lives in the README.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import expr as ex
from .errors import DegenerateVolume, DegreeMismatch

FORM = "form"
VECTOR = "vector"


def _merge_sign(I, J):
    """Sorted merge of disjoint strictly increasing tuples with parity sign."""
    merged = sorted(I + J)
    seq = list(I + J)
    # count inversions of the concatenation relative to sorted order
    sign = 1
    arr = list(seq)
    for i in range(len(arr)):
        for j in range(i + 1, len(arr)):
            if arr[i] > arr[j]:
                sign = -sign
    return tuple(merged), sign


def _perm_sign(seq):
    sign = 1
    arr = list(seq)
    for i in range(len(arr)):
        for j in range(i + 1, len(arr)):
            if arr[i] > arr[j]:
                sign = -sign
    return sign


class Graded:
    """Antisymmetric coefficient table of fixed degree over a manifold."""

    def __init__(self, manifold, degree, comps=None, kind=FORM):
        # degree > dim is allowed only as the zero space (wedge overflow)
        if degree < 0:
            raise DegreeMismatch(f"negative degree {degree}")
        self.manifold = manifold
        self.degree = degree
        self.kind = kind
        clean = {}

        for idx, c in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise DegreeMismatch(f"index {idx} has wrong length for degree {degree}")
            if len(set(idx)) != len(idx):
                continue
            s = _perm_sign(idx)
            key = tuple(sorted(idx))
            term = c if s == 1 else ex.mul(-1.0, c)
            clean[key] = ex.add(clean[key], term) if key in clean else term
        self.comps = {k: v for k, v in clean.items() if not ex.is_zero_expr(v)}
        if degree > manifold.dim and self.comps:
            raise DegreeMismatch(f"degree {degree} out of range on dim {manifold.dim}")

    # -- construction helpers ---------------------------------------------
    @classmethod
    def zero(cls, manifold, degree, kind=FORM):
        return cls(manifold, degree, {}, kind)

    @classmethod
    def function(cls, manifold, e, kind=FORM):
        return cls(manifold, 0, {(): ex.as_expr(e)}, kind)

    def component(self, idx):
        """Antisymmetric lookup for an arbitrary (possibly unsorted) tuple."""
        idx = tuple(idx)
        if len(set(idx)) != len(idx):
            return ex.ZERO
        key = tuple(sorted(idx))
        c = self.comps.get(key)
        if c is None:
            return ex.ZERO
        return c if _perm_sign(idx) == 1 else ex.mul(-1.0, c)

    def map_coeffs(self, fn):
        return Graded(
            self.manifold, self.degree,
            {k: fn(v) for k, v in self.comps.items()}, self.kind,
        )

    def __add__(self, other):
        self._check_mate(other, same_degree=True)
        comps = dict(self.comps)
        for k, v in other.comps.items():
            comps[k] = ex.add(comps[k], v) if k in comps else v
        return Graded(self.manifold, self.degree, comps, self.kind)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def scale(self, c):
        return self.map_coeffs(lambda v: ex.mul(c, v))

    def __mul__(self, e):
        """Multiply by a scalar Expr/number."""
        return self.scale(ex.as_expr(e))

    __rmul__ = __mul__

    def is_zero(self):
        return not self.comps

    def _check_mate(self, other, same_degree=False):
        if not isinstance(other, Graded) or other.kind != self.kind:
            raise DegreeMismatch("mixed form/multivector operands")
        if other.manifold is not self.manifold and other.manifold != self.manifold:
            raise DegreeMismatch("operands live on different manifolds")
        if same_degree and other.degree != self.degree:
            raise DegreeMismatch("degree mismatch")

    # -- evaluation ---------------------------------------------------------
    def eval_comps(self, points):
        env = self.manifold.env(points)
        return {k: np.asarray(v.eval(env), dtype=float) for k, v in self.comps.items()}

    def max_abs_at(self, points):
        vals = self.eval_comps(points)
        if not vals:
            return 0.0
        return max(float(np.max(np.abs(np.atleast_1d(v)))) for v in vals.values())

    def __repr__(self):
        kind = "Form" if self.kind == FORM else "MultiVector"
        names = self.manifold.coord_names
        parts = []
        for k, v in sorted(self.comps.items()):
            label = "^".join(names[i] for i in k) if k else "1"
            parts.append(f"{label}: {v!r}")
        return f"<{kind} deg {self.degree} {{{'; '.join(parts)}}}>"


def form(manifold, degree, comps):
    named = _named_to_indices(manifold, comps)
    return Graded(manifold, degree, named, FORM)


def multivector(manifold, degree, comps):
    named = _named_to_indices(manifold, comps)
    return Graded(manifold, degree, named, VECTOR)


def vector_field(manifold, comps_by_name):
    return multivector(manifold, 1, {(n,): e for n, e in comps_by_name.items()})


def _named_to_indices(manifold, comps):
    out = {}
    for idx, c in comps.items():
        idx = tuple(idx) if isinstance(idx, (tuple, list)) else (idx,)
        conv = tuple(
            manifold.index(i) if isinstance(i, str) else int(i) for i in idx
        )
        out[conv] = ex.as_expr(c)
    return out


def wedge(a, b):
    """Graded exterior product (same kind: form^form or vector^vector)."""
    a._check_mate(b)
    comps = {}
    for I, ca in a.comps.items():
        for J, cb in b.comps.items():
            if set(I) & set(J):
                continue
            K, s = _merge_sign(I, J)
            term = ex.mul(s, ca, cb)
            comps[K] = ex.add(comps[K], term) if K in comps else term
    return Graded(a.manifold, a.degree + b.degree, comps, a.kind)


def contract(V, omega):
    """iota_V omega: pair the first slots of the form with the multivector."""
    if V.kind != VECTOR or omega.kind != FORM:
        raise DegreeMismatch("contract expects (multivector, form)")
    if V.degree > omega.degree:
        raise DegreeMismatch("multivector degree exceeds form degree")
    q = V.degree
    comps = {}
    for I, cw in omega.comps.items():
        for J in itertools.combinations(I, q):
            vj = V.comps.get(J)
            if vj is None:
                continue
            K = tuple(i for i in I if i not in J)
            s = _perm_sign(J + K)  # omega(J, K) = s * omega_I with I sorted
            term = ex.mul(s, vj, cw)
            comps[K] = ex.add(comps[K], term) if K in comps else term
    return Graded(omega.manifold, omega.degree - q, comps, FORM)


def exterior_d(omega):
    """de Rham differential; d(d(.)) = 0 pointwise."""
    if omega.kind != FORM:
        raise DegreeMismatch("exterior_d expects a form")
    M = omega.manifold
    if omega.degree >= M.dim:
        return Graded.zero(M, min(omega.degree + 1, M.dim), FORM)
    comps = {}
    for I, c in omega.comps.items():
        for j, name in enumerate(M.coord_names):
            if j in I:
                continue
            dc = ex.derive(c, name)
            if ex.is_zero_expr(dc):
                continue
            K, s = _merge_sign((j,), I)
            term = ex.mul(s, dc)
            comps[K] = ex.add(comps[K], term) if K in comps else term
    return Graded(M, omega.degree + 1, comps, FORM)


def directional(X, e):
    """X(e) for a vector field X and scalar Expr e."""
    if X.kind != VECTOR or X.degree != 1:
        raise DegreeMismatch("directional derivative needs a vector field")
    M = X.manifold
    terms = []
    for (j,), c in X.comps.items():
        de = ex.derive(e, M.coord_names[j])
        if not ex.is_zero_expr(de):
            terms.append(ex.mul(c, de))
    return ex.add(*terms) if terms else ex.ZERO


def xi_derivative(V, i):
    """Left odd derivative d/dxi_i on a multivector (degree drops by one)."""
    if V.degree == 0:
        return Graded.zero(V.manifold, 0, V.kind)
    comps = {}
    for I, c in V.comps.items():
        if i not in I:
            continue
        pos = I.index(i)
        K = I[:pos] + I[pos + 1:]
        term = ex.mul((-1.0) ** pos, c)
        comps[K] = ex.add(comps[K], term) if K in comps else term
    return Graded(V.manifold, V.degree - 1, comps, V.kind)


def schouten(A, B):
    """Schouten-Nijenhuis bracket of multivector fields.

    Odd-coordinate calculus form [A,B] = A*B - (-1)^{(a-1)(b-1)} B*A with
    A*B = sum_i (dA/dxi_i) ^ (dB/dx_i); normalized so that [X,f] = X(f),
    [X,Y] is the Lie bracket and [Pi,f] = -X_f in this project's bracket
    convention {f,g} = Pi(df,dg).
    """
    if A.kind != VECTOR or B.kind != VECTOR:
        raise DegreeMismatch("schouten expects multivectors")
    M = A.manifold
    a, b = A.degree, B.degree

    def star(P, Q):
        out = Graded.zero(M, P.degree - 1 + Q.degree, VECTOR)
        for i, name in enumerate(M.coord_names):
            dP = xi_derivative(P, i)
            if dP.is_zero():
                continue
            dQ = Q.map_coeffs(lambda c, n=name: ex.derive(c, n))
            if dQ.is_zero():
                continue
            out = out + wedge(dP, dQ)
        return out

    AB = star(A, B)
    BA = star(B, A)
    sign = (-1.0) ** ((a - 1) * (b - 1))
    return AB + BA.scale(-sign)


def lie_derivative(X, T):
    """L_X T: Cartan formula on forms, Schouten bracket on multivectors."""
    if X.kind != VECTOR or X.degree != 1:
        raise DegreeMismatch("lie_derivative needs a vector field")
    if T.kind == VECTOR:
        return schouten(X, T)
    if T.degree == 0:
        return Graded.function(T.manifold, directional(X, T.comps.get((), ex.ZERO)))
    out = exterior_d(contract(X, T))
    if T.degree < T.manifold.dim:
        out = out + contract(X, exterior_d(T))
    return out


def divergence(X, mu):
    """div_mu(X) with L_X mu = div * mu; mu a nonvanishing top form."""
    M = X.manifold
    if mu.kind != FORM or mu.degree != M.dim:
        raise DegenerateVolume("volume must be a top-degree form")
    top = tuple(range(M.dim))
    mu_top = mu.comps.get(top)
    if mu_top is None:
        raise DegenerateVolume("volume form is zero")
    lx = lie_derivative(X, mu)
    num = lx.comps.get(top, ex.ZERO)
    if ex.is_zero_expr(num):
        return ex.ZERO
    if isinstance(mu_top, ex.Const):
        return ex.mul(1.0 / mu_top.value, num)
    return ex.mul(num, ex.pow_(mu_top, -1.0))


# ---------------------------------------------------------------------------
# b-forms
# ---------------------------------------------------------------------------


class BForm:
    """alpha ^ (dzeta/zeta) + sigma with alpha of degree k-1, sigma of degree k."""

    def __init__(self, zeta, alpha, sigma):
        if alpha.kind != FORM or sigma.kind != FORM:
            raise DegreeMismatch("BForm components must be forms")
        if sigma.degree != alpha.degree + 1:
            # the top b-degree case: sigma would live one degree above dim
            # and is necessarily zero there
            if not (sigma.is_zero() and alpha.degree + 1 > alpha.manifold.dim):
                raise DegreeMismatch("sigma must have degree alpha.degree + 1")
        self.zeta = ex.as_expr(zeta)
        self.alpha = alpha
        self.sigma = sigma

    @property
    def degree(self):
        return self.sigma.degree

    @property
    def manifold(self):
        return self.sigma.manifold

    def __add__(self, other):
        if other.zeta is not self.zeta:
            raise DegreeMismatch("b-forms with different defining functions")
        return BForm(self.zeta, self.alpha + other.alpha, self.sigma + other.sigma)

    def is_zero_at(self, points, tol=1e-12):
        return (
            self.alpha.max_abs_at(points) <= tol
            and self.sigma.max_abs_at(points) <= tol
        )

    def __repr__(self):
        return f"<BForm zeta={self.zeta!r} alpha={self.alpha!r} sigma={self.sigma!r}>"


def b_exterior_d(theta):
    """^b d (alpha ^ dzeta/zeta + sigma) = d alpha ^ dzeta/zeta + d sigma."""
    return BForm(theta.zeta, exterior_d(theta.alpha), exterior_d(theta.sigma))


def dzeta_over_zeta(manifold, zeta):
    """The b-form dzeta/zeta itself (alpha = 1, sigma = 0)."""
    return BForm(
        zeta,
        Graded.function(manifold, ex.ONE),
        Graded.zero(manifold, 1, FORM),
    )


def b_sharp(P, theta):
    """Theta^sharp for a b-one-form: alpha * (dzeta/zeta)^sharp + sigma^sharp.

    (dzeta/zeta)^sharp extends smoothly over Z for a b-Poisson structure;
    the quotient is computed expression-wise and must be verified removable
    by the caller where it matters.
    """
    from .poisson import sharp  # local import to avoid a cycle

    M = theta.manifold
    dz = exterior_d(Graded.function(M, theta.zeta))
    rough = sharp(P, dz)
    inv = ex.pow_(theta.zeta, -1.0)
    alpha0 = theta.alpha.comps.get((), ex.ZERO)
    part1 = rough.map_coeffs(lambda c: ex.mul(alpha0, c, inv))
    return part1 + sharp(P, theta.sigma)
