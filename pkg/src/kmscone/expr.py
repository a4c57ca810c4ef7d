"""Exact scalar-field expression trees on R^a x T^b.

Immutable, hash-consed trees over the node set {constant, coordinate, add,
mul, pow (real exponent), sin, cos, exp, log-abs, abs, sign, bump family,
bump primitive}.  Evaluation is vectorized over numpy arrays; symbolic
differentiation closes over the node set (the bump family carries a
rational prefactor P(u)/(1-u^2)^m exactly for that reason).

Simplification is deliberately limited to constant folding, 0/1 absorption
and the sin^2+cos^2 collapse; equality of expressions is decided
numerically at sample points, never syntactically.
"""

from __future__ import annotations

import math
import weakref

import numpy as np

from .errors import SingularEvaluation

_INTERN = weakref.WeakValueDictionary()

# exp underflows below this; used to cut off the bump profile in log space
_EXP_UNDERFLOW = -745.0


def _intern(cls, key, builder):
    node = _INTERN.get((cls.__name__,) + key)
    if node is None:
        node = builder()
        _INTERN[(cls.__name__,) + key] = node
    return node


class Expr:
    """Base node.  Subclasses set _key in __init__ and are interned."""

    __slots__ = ("_key", "_hash", "__weakref__")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other  # hash-consing makes identity structural equality

    # -- arithmetic sugar -------------------------------------------------
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, mul(as_expr(-1.0), as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), mul(as_expr(-1.0), self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return mul(self, pow_(as_expr(other), -1.0))

    def __rtruediv__(self, other):
        return mul(as_expr(other), pow_(self, -1.0))

    def __neg__(self):
        return mul(as_expr(-1.0), self)

    def __pow__(self, p):
        return pow_(self, p)

    # -- API ---------------------------------------------------------------
    def eval(self, env):
        """Evaluate on a dict name -> scalar or ndarray; broadcasts."""
        out = self._eval(env)
        if np.ndim(out) == 0:
            return float(out)
        return out

    def _eval(self, env):
        raise NotImplementedError

    def diff(self, name):
        raise NotImplementedError

    def free_coords(self):
        out = set()
        self._collect_coords(out)
        return out

    def _collect_coords(self, out):
        for c in self.children():
            c._collect_coords(out)

    def children(self):
        return ()

    def __repr__(self):
        return to_sexpr(self)


class Const(Expr):
    __slots__ = ("value",)

    def __new__(cls, value):
        value = float(value)
        key = (value,)

        def build():
            node = object.__new__(cls)
            node.value = value
            node._key = key
            node._hash = hash((cls.__name__,) + key)
            return node

        return _intern(cls, key, build)

    def _eval(self, env):
        return self.value

    def diff(self, name):
        return ZERO


class Coord(Expr):
    __slots__ = ("name",)

    def __new__(cls, name):
        key = (name,)

        def build():
            node = object.__new__(cls)
            node.name = name
            node._key = key
            node._hash = hash((cls.__name__,) + key)
            return node

        return _intern(cls, key, build)

    def _eval(self, env):
        try:
            return env[self.name]
        except KeyError:
            raise SingularEvaluation(f"no value bound for coordinate {self.name!r}")

    def diff(self, name):
        return ONE if name == self.name else ZERO

    def _collect_coords(self, out):
        out.add(self.name)


class _NAry(Expr):
    __slots__ = ("args",)

    def __new__(cls, args):
        args = tuple(args)
        key = args

        def build():
            node = object.__new__(cls)
            node.args = args
            node._key = key
            node._hash = hash((cls.__name__,) + key)
            return node

        return _intern(cls, key, build)

    def children(self):
        return self.args


class Add(_NAry):
    __slots__ = ()

    def _eval(self, env):
        out = self.args[0]._eval(env)
        for a in self.args[1:]:
            out = out + a._eval(env)
        return out

    def diff(self, name):
        return add(*[a.diff(name) for a in self.args])


class Mul(_NAry):
    __slots__ = ()

    def _eval(self, env):
        out = self.args[0]._eval(env)
        for a in self.args[1:]:
            out = out * a._eval(env)
        return out

    def diff(self, name):
        terms = []
        for i, a in enumerate(self.args):
            da = a.diff(name)
            if da is ZERO:
                continue
            rest = self.args[:i] + self.args[i + 1:]
            terms.append(mul(da, *rest))
        return add(*terms) if terms else ZERO


class Pow(Expr):
    """base ** p with a real (python float) exponent."""

    __slots__ = ("base", "p")

    def __new__(cls, base, p):
        p = float(p)
        key = (base, p)

        def build():
            node = object.__new__(cls)
            node.base = base
            node.p = p
            node._key = key
            node._hash = hash((cls.__name__,) + key)
            return node

        return _intern(cls, key, build)

    def children(self):
        return (self.base,)

    def _eval(self, env):
        b = np.asarray(self.base._eval(env), dtype=float)
        p = self.p
        if p == float(int(p)):
            if p < 0 and np.any(b == 0.0):
                raise SingularEvaluation(f"{self!r}: negative power at zero base")
            return np.power(b, p)
        if np.any(b < 0.0):
            raise SingularEvaluation(f"{self!r}: non-integer power of negative base")
        if p < 0 and np.any(b == 0.0):
            raise SingularEvaluation(f"{self!r}: negative power at zero base")
        return np.power(b, p)

    def diff(self, name):
        db = self.base.diff(name)
        if db is ZERO:
            return ZERO
        return mul(Const(self.p), pow_(self.base, self.p - 1.0), db)


class _Unary(Expr):
    __slots__ = ("arg",)

    def __new__(cls, arg):
        key = (arg,)

        def build():
            node = object.__new__(cls)
            node.arg = arg
            node._key = key
            node._hash = hash((cls.__name__,) + key)
            return node

        return _intern(cls, key, build)

    def children(self):
        return (self.arg,)


class Sin(_Unary):
    __slots__ = ()

    def _eval(self, env):
        return np.sin(self.arg._eval(env))

    def diff(self, name):
        da = self.arg.diff(name)
        if da is ZERO:
            return ZERO
        return mul(Cos(self.arg), da)


class Cos(_Unary):
    __slots__ = ()

    def _eval(self, env):
        return np.cos(self.arg._eval(env))

    def diff(self, name):
        da = self.arg.diff(name)
        if da is ZERO:
            return ZERO
        return mul(Const(-1.0), Sin(self.arg), da)


class Exp(_Unary):
    __slots__ = ()

    def _eval(self, env):
        return np.exp(self.arg._eval(env))

    def diff(self, name):
        da = self.arg.diff(name)
        if da is ZERO:
            return ZERO
        return mul(self, da)


class LogAbs(_Unary):
    __slots__ = ()

    def _eval(self, env):
        a = np.asarray(self.arg._eval(env), dtype=float)
        if np.any(a == 0.0):
            raise SingularEvaluation(f"{self!r}: log at zero")
        return np.log(np.abs(a))

    def diff(self, name):
        da = self.arg.diff(name)
        if da is ZERO:
            return ZERO
        return mul(da, pow_(self.arg, -1.0))


class Abs(_Unary):
    __slots__ = ()

    def _eval(self, env):
        return np.abs(self.arg._eval(env))

    def diff(self, name):
        da = self.arg.diff(name)
        if da is ZERO:
            return ZERO
        return mul(Sign(self.arg), da)


class Sign(_Unary):
    """Piecewise sign; evaluation at the kink raises (derivative of |.|)."""

    __slots__ = ()

    def _eval(self, env):
        a = np.asarray(self.arg._eval(env), dtype=float)
        if np.any(a == 0.0):
            raise SingularEvaluation(f"{self!r}: sign at its kink")
        return np.sign(a)

    def diff(self, name):
        return ZERO


class BumpPoly(Expr):
    """P(u) / (1-u^2)^m * exp(1 - 1/(1-u^2)) on |u|<1, zero outside.

    The base mollifier is poly=(1,), m=0, normalized so max = 1 at u = 0.
    The family is closed under differentiation, so derivatives of bumps
    evaluate to exactly 0 outside the support instead of hitting a pole.
    """

    __slots__ = ("arg", "poly", "m")

    def __new__(cls, arg, poly=(1.0,), m=0):
        poly = tuple(float(c) for c in poly)
        while len(poly) > 1 and poly[-1] == 0.0:
            poly = poly[:-1]
        m = int(m)
        key = (arg, poly, m)

        def build():
            node = object.__new__(cls)
            node.arg = arg
            node.poly = poly
            node.m = m
            node._key = key
            node._hash = hash((cls.__name__,) + key)
            return node

        return _intern(cls, key, build)

    def children(self):
        return (self.arg,)

    def _eval(self, env):
        u = np.asarray(self.arg._eval(env), dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        if np.any(inside):
            ui = u[inside]
            s = 1.0 - ui * ui
            # log-space guard: (1/s)^m * exp(1 - 1/s) underflows cleanly
            t = 1.0 - 1.0 / s - self.m * np.log(s)
            val = np.where(t < _EXP_UNDERFLOW, 0.0, np.exp(np.maximum(t, _EXP_UNDERFLOW)))
            pv = np.zeros_like(ui)
            for c in reversed(self.poly):
                pv = pv * ui + c
            out[inside] = pv * val
        return out[0] if scalar else out

    def diff(self, name):
        da = self.arg.diff(name)
        if da is ZERO:
            return ZERO
        # d/du [P/(1-u^2)^m e^{1-1/(1-u^2)}] = Q/(1-u^2)^{m+2} e^{...},
        # Q = P'(1-u^2)^2 + 2 m u P (1-u^2) - 2 u P
        P = self.poly
        dP = tuple(c * (i + 1) for i, c in enumerate(P[1:]))
        if not dP:
            dP = (0.0,)
        # (1-u^2)^2 = 1 - 2u^2 + u^4
        q1 = _poly_mul(dP, (1.0, 0.0, -2.0, 0.0, 1.0))
        q2 = _poly_mul(P, (0.0, 2.0 * self.m, 0.0, -2.0 * self.m))
        q3 = _poly_mul(P, (0.0, -2.0))
        Q = _poly_add(_poly_add(q1, q2), q3)
        return mul(BumpPoly(self.arg, Q, self.m + 2), da)


def _poly_mul(a, b):
    out = [0.0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return tuple(out)


def _poly_add(a, b):
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0.0) + (b[i] if i < len(b) else 0.0) for i in range(n)
    )


def _bump_profile_mass():
    # integral of exp(1 - 1/(1-t^2)) over [-1, 1] by high-order Gauss-Legendre
    x, w = np.polynomial.legendre.leggauss(400)
    s = 1.0 - x * x
    t = 1.0 - 1.0 / s
    vals = np.where(t < _EXP_UNDERFLOW, 0.0, np.exp(np.maximum(t, _EXP_UNDERFLOW)))
    return float(np.sum(w * vals))


_BUMP_MASS = _bump_profile_mass()


class BumpPrim(Expr):
    """Normalized antiderivative of the mollifier: 0 for u<=-1, 1 for u>=1.

    Smooth monotone step; the building block for plateau cutoffs 1_U.
    """

    __slots__ = ("arg",)

    _GRID_N = 4097

    def __new__(cls, arg):
        key = (arg,)

        def build():
            node = object.__new__(cls)
            node.arg = arg
            node._key = key
            node._hash = hash((cls.__name__,) + key)
            return node

        return _intern(cls, key, build)

    def children(self):
        return (self.arg,)

    @classmethod
    def _table(cls):
        tab = getattr(cls, "_tab_cache", None)
        if tab is None:
            # cumulative Gauss-Legendre panels of the profile on a dense
            # grid, plus exact node derivatives for cubic Hermite evaluation
            xs = np.linspace(-1.0, 1.0, cls._GRID_N)
            gx, gw = np.polynomial.legendre.leggauss(12)
            vals = np.zeros_like(xs)
            acc = 0.0
            for i in range(len(xs) - 1):
                a, b = xs[i], xs[i + 1]
                mid, half = 0.5 * (a + b), 0.5 * (b - a)
                t = mid + half * gx
                s = 1.0 - t * t
                e = 1.0 - 1.0 / np.maximum(s, 1e-300)
                f = np.where(s <= 0, 0.0, np.where(e < _EXP_UNDERFLOW, 0.0, np.exp(np.maximum(e, _EXP_UNDERFLOW))))
                acc += half * float(np.sum(gw * f))
                vals[i + 1] = acc
            vals /= acc
            s = 1.0 - xs * xs
            e = 1.0 - 1.0 / np.maximum(s, 1e-300)
            derivs = np.where(
                s <= 0, 0.0,
                np.where(e < _EXP_UNDERFLOW, 0.0, np.exp(np.maximum(e, _EXP_UNDERFLOW))),
            ) / _BUMP_MASS
            tab = (xs, vals, derivs)
            cls._tab_cache = tab
        return tab

    def _eval(self, env):
        u = np.asarray(self.arg._eval(env), dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        xs, vals, derivs = self._table()
        h = xs[1] - xs[0]
        idx = np.clip(((u - xs[0]) / h).astype(int), 0, len(xs) - 2)
        t = (u - xs[idx]) / h
        t2 = t * t
        t3 = t2 * t
        out = (
            (2 * t3 - 3 * t2 + 1) * vals[idx]
            + (t3 - 2 * t2 + t) * h * derivs[idx]
            + (-2 * t3 + 3 * t2) * vals[idx + 1]
            + (t3 - t2) * h * derivs[idx + 1]
        )
        out = np.where(u <= -1.0, 0.0, np.where(u >= 1.0, 1.0, out))
        return out[0] if scalar else out

    def diff(self, name):
        da = self.arg.diff(name)
        if da is ZERO:
            return ZERO
        return mul(Const(1.0 / _BUMP_MASS), BumpPoly(self.arg, (1.0,), 0), da)


# ---------------------------------------------------------------------------
# smart constructors (constant folding, 0/1 absorption, sin^2+cos^2 collapse)
# ---------------------------------------------------------------------------

ZERO = Const(0.0)
ONE = Const(1.0)


def as_expr(x):
    if isinstance(x, Expr):
        return x
    return Const(float(x))


def add(*args):
    flat = []
    const = 0.0
    for a in args:
        a = as_expr(a)
        if isinstance(a, Add):
            flat.extend(a.args)
        else:
            flat.append(a)
    terms = []
    for a in flat:
        if isinstance(a, Const):
            const += a.value
        else:
            terms.append(a)
    terms = _collapse_sin2_cos2(terms)
    consts = [t for t in terms if isinstance(t, Const)]
    if consts:
        const += sum(c.value for c in consts)
        terms = [t for t in terms if not isinstance(t, Const)]
    if const != 0.0:
        terms.append(Const(const))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Add(terms)


def _collapse_sin2_cos2(terms):
    sin2 = {}
    cos2 = {}
    for i, t in enumerate(terms):
        if isinstance(t, Pow) and t.p == 2.0:
            if isinstance(t.base, Sin):
                sin2.setdefault(t.base.arg, []).append(i)
            elif isinstance(t.base, Cos):
                cos2.setdefault(t.base.arg, []).append(i)
    drop = set()
    extra = 0
    for argu, idxs in sin2.items():
        mates = cos2.get(argu, [])
        k = min(len(idxs), len(mates))
        for j in range(k):
            drop.add(idxs[j])
            drop.add(mates[j])
            extra += 1
    if not drop:
        return terms
    out = [t for i, t in enumerate(terms) if i not in drop]
    if extra:
        out.append(Const(float(extra)))
    return out


def mul(*args):
    flat = []
    const = 1.0
    for a in args:
        a = as_expr(a)
        if isinstance(a, Mul):
            flat.extend(a.args)
        else:
            flat.append(a)
    factors = []
    for a in flat:
        if isinstance(a, Const):
            const *= a.value
        else:
            factors.append(a)
    if const == 0.0:
        return ZERO
    if const != 1.0:
        factors.insert(0, Const(const))
    if not factors:
        return ONE
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(factors))


def pow_(base, p):
    base = as_expr(base)
    p = float(p)
    if p == 0.0:
        return ONE
    if p == 1.0:
        return base
    if isinstance(base, Const):
        if base.value >= 0 or p == float(int(p)):
            return Const(base.value ** p)
    return Pow(base, p)


def sin(e):
    e = as_expr(e)
    if isinstance(e, Const):
        return Const(math.sin(e.value))
    return Sin(e)


def cos(e):
    e = as_expr(e)
    if isinstance(e, Const):
        return Const(math.cos(e.value))
    return Cos(e)


def exp(e):
    e = as_expr(e)
    if isinstance(e, Const):
        return Const(math.exp(e.value))
    return Exp(e)


def log_abs(e):
    return LogAbs(as_expr(e))


def abs_(e):
    return Abs(as_expr(e))


def sign(e):
    return Sign(as_expr(e))


def bump(e):
    return BumpPoly(as_expr(e), (1.0,), 0)


def smooth_step(e):
    return BumpPrim(as_expr(e))


def coord(name):
    return Coord(name)


def derive(e, name):
    """Pointwise partial derivative; mixed partials commute by construction."""
    return e.diff(name)


# ---------------------------------------------------------------------------
# numeric helpers
# ---------------------------------------------------------------------------


def eval_at(e, manifold, point):
    """Evaluate at one manifold point (sequence in coordinate order)."""
    return e.eval(manifold.env(point))


def eval_many(e, manifold, points):
    out = e.eval(manifold.env(points))
    n = np.asarray(points, dtype=float)
    n = 1 if n.ndim == 1 else n.shape[0]
    if np.ndim(out) == 0:
        return np.full(n, float(out))
    return np.asarray(out, dtype=float)


def expr_allclose(a, b, manifold, rng, n=100, tol=1e-12, window=None):
    """Numeric equality at random sample points (the project-wide notion)."""
    pts = manifold.sample_points(n, rng, window)
    va = eval_many(a, manifold, pts)
    vb = eval_many(b, manifold, pts)
    scale = max(1.0, float(np.max(np.abs(va))), float(np.max(np.abs(vb))))
    return float(np.max(np.abs(va - vb))) <= tol * scale


def is_zero_expr(e):
    return e is ZERO or (isinstance(e, Const) and e.value == 0.0)


def check_periodic(e, manifold):
    """Structurally verify 2*pi-periodicity in every angle coordinate.

    Angle coordinates may only occur inside sin/cos applied to an integer
    linear combination of angles plus angle-free terms.  Global catalog
    fields must pass this; region-restricted densities are exempt.
    """
    angles = set(manifold.angle_names())

    def linear_angle_part(t):
        # returns dict angle->coeff if t is a linear combination with
        # constant coefficients over the angles (plus angle-free rest)
        if isinstance(t, Coord) and t.name in angles:
            return {t.name: 1.0}
        if isinstance(t, Add):
            out = {}
            for a in t.args:
                sub = linear_angle_part(a)
                if sub is None:
                    return None
                for k, v in sub.items():
                    out[k] = out.get(k, 0.0) + v
            return out
        if isinstance(t, Mul):
            consts = [a for a in t.args if isinstance(a, Const)]
            rest = [a for a in t.args if not isinstance(a, Const)]
            if len(rest) == 1:
                sub = linear_angle_part(rest[0])
                if sub is not None:
                    c = 1.0
                    for k in consts:
                        c *= k.value
                    return {k: c * v for k, v in sub.items()}
            if not any(a.free_coords() & angles for a in t.args):
                return {}
            return None
        if not (t.free_coords() & angles):
            return {}
        return None

    def ok(t):
        if isinstance(t, (Sin, Cos)):
            lin = linear_angle_part(t.arg)
            if lin is not None:
                return all(abs(v - round(v)) < 1e-12 for v in lin.values())
            return all(ok(c) for c in t.children())
        if isinstance(t, Coord):
            return t.name not in angles
        return all(ok(c) for c in t.children())

    return ok(e)


# ---------------------------------------------------------------------------
# S-expression serialization
# ---------------------------------------------------------------------------

_HEADS = {
    "add": Add,
    "mul": Mul,
    "sin": Sin,
    "cos": Cos,
    "exp": Exp,
    "logabs": LogAbs,
    "abs": Abs,
    "sign": Sign,
    "step": BumpPrim,
}


def to_sexpr(e):
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Coord):
        return e.name
    if isinstance(e, Add):
        return "(add " + " ".join(to_sexpr(a) for a in e.args) + ")"
    if isinstance(e, Mul):
        return "(mul " + " ".join(to_sexpr(a) for a in e.args) + ")"
    if isinstance(e, Pow):
        return f"(pow {to_sexpr(e.base)} {e.p!r})"
    if isinstance(e, Sin):
        return f"(sin {to_sexpr(e.arg)})"
    if isinstance(e, Cos):
        return f"(cos {to_sexpr(e.arg)})"
    if isinstance(e, Exp):
        return f"(exp {to_sexpr(e.arg)})"
    if isinstance(e, LogAbs):
        return f"(logabs {to_sexpr(e.arg)})"
    if isinstance(e, Abs):
        return f"(abs {to_sexpr(e.arg)})"
    if isinstance(e, Sign):
        return f"(sign {to_sexpr(e.arg)})"
    if isinstance(e, BumpPoly):
        if e.poly == (1.0,) and e.m == 0:
            return f"(bump {to_sexpr(e.arg)})"
        ps = " ".join(repr(c) for c in e.poly)
        return f"(bumppoly ({ps}) {e.m} {to_sexpr(e.arg)})"
    if isinstance(e, BumpPrim):
        return f"(step {to_sexpr(e.arg)})"
    raise TypeError(f"cannot serialize {type(e).__name__}")


def _tokenize(text):
    return text.replace("(", " ( ").replace(")", " ) ").split()


def from_sexpr(text):
    toks = _tokenize(text)
    expr, rest = _parse(toks)
    if rest:
        raise ValueError(f"trailing tokens in s-expression: {rest!r}")
    return expr


def _parse(toks):
    if not toks:
        raise ValueError("unexpected end of s-expression")
    tok, rest = toks[0], toks[1:]
    if tok == "(":
        head, rest = rest[0], rest[1:]
        if head == "pow":
            base, rest = _parse(rest)
            p = float(rest[0])
            rest = rest[1:]
            if rest[0] != ")":
                raise ValueError("malformed pow")
            return pow_(base, p), rest[1:]
        if head == "bumppoly":
            if rest[0] != "(":
                raise ValueError("malformed bumppoly")
            rest = rest[1:]
            poly = []
            while rest[0] != ")":
                poly.append(float(rest[0]))
                rest = rest[1:]
            rest = rest[1:]
            m = int(rest[0])
            rest = rest[1:]
            arg, rest = _parse(rest)
            if rest[0] != ")":
                raise ValueError("malformed bumppoly")
            return BumpPoly(arg, tuple(poly), m), rest[1:]
        if head == "bump":
            arg, rest = _parse(rest)
            if rest[0] != ")":
                raise ValueError("malformed bump")
            return bump(arg), rest[1:]
        args = []
        while rest[0] != ")":
            a, rest = _parse(rest)
            args.append(a)
        rest = rest[1:]
        if head == "add":
            return add(*args), rest
        if head == "mul":
            return mul(*args), rest
        cls = _HEADS.get(head)
        if cls is None or len(args) != 1:
            raise ValueError(f"unknown head {head!r}")
        return cls(args[0]), rest
    try:
        return Const(float(tok)), rest
    except ValueError:
        return Coord(tok), rest


# ---------------------------------------------------------------------------
# test functions: bumps and plateaus
# ---------------------------------------------------------------------------


class TestFunction:
    """Smooth compactly supported function on a manifold window.

    kind 'bump': product of mollifiers, max 1 at the center.
    kind 'plateau': equals 1 on the inner half-box, supported in the box.
    """

    def __init__(self, manifold, center, radii, kind="bump"):
        if kind not in ("bump", "plateau"):
            raise ValueError(f"unknown test-function kind {kind!r}")
        self.manifold = manifold
        self.center = tuple(float(c) for c in center)
        self.radii = tuple(float(r) for r in radii)
        self.kind = kind
        factors = []
        for name, c, r in zip(manifold.coord_names, self.center, self.radii):
            u = (Coord(name) - c) / r
            if kind == "bump":
                factors.append(bump(u))
            else:
                factors.append(mul(smooth_step(4.0 * u + 3.0), smooth_step(3.0 - 4.0 * u)))
        self.expr = mul(*factors)

    @property
    def support_box(self):
        return tuple((c - r, c + r) for c, r in zip(self.center, self.radii))

    def __call__(self, env):
        return self.expr.eval(env)


def matched_pair(manifold, center, radii):
    """(f, 1_f): a bump and a plateau that is 1 on the bump's support."""
    f = TestFunction(manifold, center, radii, kind="bump")
    one_f = TestFunction(manifold, center, [2.0 * r for r in radii], kind="plateau")
    return f, one_f
