"""Small arithmetic expression language for user-supplied data.

Grammar: numbers, the variables of the expression (``x``, ``t``), the
constants ``pi`` and ``e``, binary ``+ - * / ^`` (``**`` is accepted as a
synonym of ``^``), unary minus, and the functions ``exp``, ``sin``,
``cos``.  Exponents must be constant.

Derivatives are exact up to rounding: the expression is re-evaluated on
truncated Taylor series (jets) in the differentiation variable, so
d^k/dx^k at a point is k! times the k-th jet coefficient.
"""

import ast
import math

import numpy as np

from .transforms import HalfLineData

__all__ = ["Expression", "ExpressionError", "Jet", "parse", "from_expressions"]


class ExpressionError(ValueError):
    """Malformed or unsupported expression; ``column`` is 0-based in the source text."""

    def __init__(self, message, text="", column=None):
        self.text = text
        self.column = column
        where = ""
        if column is not None:
            where = f" at column {column + 1}:\n  {text}\n  {' ' * column}^"
        super().__init__(message + where)


class Jet:
    """Truncated Taylor series sum_k c[k] h^k; coefficients may be arrays."""

    __array_ufunc__ = None

    def __init__(self, coeffs):
        self.c = [np.asarray(a, dtype=float) for a in coeffs]

    @classmethod
    def variable(cls, value, order):
        value = np.asarray(value, dtype=float)
        return cls([value, np.ones_like(value)] + [np.zeros_like(value)] * (order - 1))

    @property
    def order(self):
        return len(self.c) - 1

    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        other = np.asarray(other, dtype=float)
        return Jet([other] + [np.zeros_like(other)] * self.order)

    def __add__(self, other):
        other = self._lift(other)
        return Jet([a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return Jet([-a for a in self.c])

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        b = self._lift(other).c
        a = self.c
        return Jet([sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(len(a))])

    __rmul__ = __mul__

    def __truediv__(self, other):
        a = self.c
        b = self._lift(other).c
        q = []
        for k in range(len(a)):
            acc = a[k] - sum(b[i] * q[k - i] for i in range(1, k + 1))
            q.append(acc / b[0])
        return Jet(q)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, p):
        if isinstance(p, Jet):
            raise TypeError("jet exponents are not supported")
        p = float(p)
        if p == int(p) and abs(p) <= 64:
            k = int(abs(p))
            out = self._lift(1.0)
            base = self
            while k:
                if k & 1:
                    out = out * base
                base = base * base
                k >>= 1
            return out if p >= 0 else 1.0 / out
        a = self.c
        y = [a[0] ** p]
        for k in range(1, len(a)):
            acc = sum(((p + 1) * i - k) * a[i] * y[k - i] for i in range(1, k + 1))
            y.append(acc / (k * a[0]))
        return Jet(y)

    def exp(self):
        a = self.c
        e = [np.exp(a[0])]
        for k in range(1, len(a)):
            e.append(sum(i * a[i] * e[k - i] for i in range(1, k + 1)) / k)
        return Jet(e)

    def _sincos(self):
        a = self.c
        s = [np.sin(a[0])]
        c = [np.cos(a[0])]
        for k in range(1, len(a)):
            s.append(sum(i * a[i] * c[k - i] for i in range(1, k + 1)) / k)
            c.append(-sum(i * a[i] * s[k - i] for i in range(1, k + 1)) / k)
        return Jet(s), Jet(c)

    def sin(self):
        return self._sincos()[0]

    def cos(self):
        return self._sincos()[1]

    def derivative(self, k):
        return math.factorial(k) * self.c[k]


def _apply(name, arg):
    if isinstance(arg, Jet):
        return getattr(arg, name)()
    return getattr(np, name)(arg)


_FUNCS = ("exp", "sin", "cos")
_CONSTS = {"pi": math.pi, "e": math.e}
_BINOPS = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
           ast.Mult: lambda a, b: a * b, ast.Div: lambda a, b: a / b}


def _translate(text):
    """Replace '^' by '**'; return new text and a map new column -> old column."""
    out, cols = [], []
    for i, ch in enumerate(text):
        if ch == "^":
            out.append("**")
            cols += [i, i]
        else:
            out.append(ch)
            cols.append(i)
    cols.append(len(text))
    return "".join(out), cols


class Expression:
    """Parsed expression in the variables ``variables``."""

    def __init__(self, text, variables=("x",)):
        self.text = str(text)
        self.variables = tuple(variables)
        src, self._cols = _translate(self.text)
        if not src.strip():
            raise ExpressionError("empty expression", self.text, 0)
        try:
            tree = ast.parse(src.strip(), mode="eval")
        except SyntaxError as exc:
            col = (exc.offset or 1) - 1 + (len(src) - len(src.lstrip()))
            raise ExpressionError("syntax error", self.text, self._col(col)) from None
        self._strip = len(src) - len(src.lstrip())
        self._tree = tree.body
        self.free = set()
        self._check(self._tree)

    def _col(self, c):
        return self._cols[min(max(c, 0), len(self._cols) - 1)]

    def _fail(self, node, message):
        raise ExpressionError(message, self.text, self._col(node.col_offset + self._strip))

    def _check(self, node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                self._fail(node, "only real number literals are allowed")
        elif isinstance(node, ast.Name):
            if node.id in self.variables:
                self.free.add(node.id)
            elif node.id not in _CONSTS:
                self._fail(node, f"unknown name {node.id!r}")
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, (ast.USub, ast.UAdd)):
                self._fail(node, "unsupported unary operator")
            self._check(node.operand)
        elif isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                self._check(node.left)
                sub = Expression.__new__(Expression)
                sub.text, sub.variables, sub._cols, sub._strip = (
                    self.text, self.variables, self._cols, self._strip)
                sub.free = set()
                sub._check(node.right)
                if sub.free:
                    self._fail(node.right, "exponents must be constant")
            elif type(node.op) in _BINOPS:
                self._check(node.left)
                self._check(node.right)
            else:
                self._fail(node, "unsupported operator")
        elif isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id in _FUNCS):
                self._fail(node, "only exp, sin and cos may be called")
            if len(node.args) != 1 or node.keywords:
                self._fail(node, f"{node.func.id} takes exactly one argument")
            self._check(node.args[0])
        else:
            self._fail(node, "unsupported syntax")

    def _eval(self, node, env):
        if isinstance(node, ast.Constant):
            return float(node.value)
        if isinstance(node, ast.Name):
            return env[node.id] if node.id in self.variables else _CONSTS[node.id]
        if isinstance(node, ast.UnaryOp):
            v = self._eval(node.operand, env)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left = self._eval(node.left, env)
            right = self._eval(node.right, env)
            if isinstance(node.op, ast.Pow):
                return left ** float(right)
            return _BINOPS[type(node.op)](left, right)
        return _apply(node.func.id, self._eval(node.args[0], env))

    def _env(self, values):
        missing = [v for v in self.variables if v not in values]
        if missing:
            raise TypeError(f"missing values for {missing}")
        return {k: np.asarray(values[k], dtype=float) for k in self.variables}

    def __call__(self, *args, **kwargs):
        env = self._env({**dict(zip(self.variables, args)), **kwargs})
        with np.errstate(all="ignore"):
            out = self._eval(self._tree, env)
        shape = np.broadcast(*env.values()).shape if env else ()
        return np.broadcast_to(np.asarray(out, dtype=float), shape).copy()

    def derivative(self, var, order, *args, **kwargs):
        """d^order/d var^order, exact up to rounding, at the given point(s)."""
        env = self._env({**dict(zip(self.variables, args)), **kwargs})
        if order == 0:
            return self(**env)
        env[var] = Jet.variable(env[var], order)
        out = self._eval(self._tree, env)
        shape = np.broadcast(*[np.asarray(v.c[0] if isinstance(v, Jet) else v)
                               for v in env.values()]).shape
        val = out.derivative(order) if isinstance(out, Jet) else np.zeros(shape)
        return np.broadcast_to(np.asarray(val, dtype=float), shape).copy()

    def derivative_function(self, var, order):
        return lambda *a, **k: self.derivative(var, order, *a, **k)

    @property
    def is_constant(self):
        return not self.free

    def is_zero(self):
        return self.is_constant and float(self(**{v: 0.0 for v in self.variables})) == 0.0

    def __repr__(self):
        return f"Expression({self.text!r})"


def parse(text, variables=("x",)):
    return Expression(text, variables)


def from_expressions(u0="0", g0="0", f="0", *, decay_rate=1.0, decay_constant=1.0,
                     u0_hat=None, f_hat=None, name=None):
    """HalfLineData from expression strings in x (u0), t (g0) and x, t (f).

    Derivatives for the compatibility checks come from the jet layer, so
    they are exact.  Identically-zero expressions become ``None`` fields.
    """
    eu = parse(u0, ("x",))
    eg = parse(g0, ("t",))
    ef = parse(f, ("x", "t"))
    g0_const = float(eg(t=0.0)) if eg.is_constant else None
    data = HalfLineData(
        u0=None if eu.is_zero() else eu,
        g0=None if eg.is_zero() else (None if g0_const is not None else eg),
        f=None if ef.is_zero() else ef,
        decay_rate=decay_rate, decay_constant=decay_constant,
        u0_derivatives=tuple(eu.derivative_function("x", k) for k in (1, 2, 3)),
        g0_derivatives=(eg.derivative_function("t", 1),),
        g0_constant=g0_const if g0_const else None,
        u0_hat=u0_hat, f_hat=f_hat,
        name=name or f"u0={u0}; g0={g0}; f={f}",
        meta={"u0": str(u0), "g0": str(g0), "f": str(f)})
    return data
