"""Radial profiles: warping factors w(t) and weights f(t) with derivatives.

Profiles are evaluated vectorized and must provide two derivatives. Closed
forms carry exact derivatives; expression profiles differentiate their parse
tree symbolically; sampled profiles use 5-point stencils at the sample
spacing and monotone-cubic interpolation in between.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError
from .models import s_kappa_lambda
from .numerics import stencil_d1, stencil_d2

__all__ = [
    "Profile",
    "ConstantProfile",
    "WarpProfile",
    "RigidityWeightProfile",
    "ExprProfile",
    "CallableProfile",
    "TableProfile",
    "parse_expression",
]


class Profile:
    """Interface: value(t), d1(t), d2(t), all vectorized over t."""

    def value(self, t):
        raise NotImplementedError

    def d1(self, t):
        raise NotImplementedError

    def d2(self, t):
        raise NotImplementedError


class ConstantProfile(Profile):
    def __init__(self, c: float):
        self.c = float(c)

    def value(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full_like(t, self.c)
        return float(out) if out.ndim == 0 else out

    def d1(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        return float(out) if out.ndim == 0 else out

    d2 = d1


class WarpProfile(Profile):
    """The comparison profile itself; derivatives from its defining equation."""

    def __init__(self, kappa: float, lam: float):
        self.kappa = float(kappa)
        self.lam = float(lam)

    def value(self, t):
        return s_kappa_lambda(self.kappa, self.lam, t)[0]

    def d1(self, t):
        return s_kappa_lambda(self.kappa, self.lam, t)[1]

    def d2(self, t):
        return -self.kappa * self.value(t)


class RigidityWeightProfile(Profile):
    """Weight f0 - m * log(profile), the equality-case radial weight.

    d1 = -m * s'/s and d2 = m * (kappa + (s'/s)^2), both exact via the
    profile's defining equation.
    """

    def __init__(self, kappa: float, lam: float, m: float, f0: float = 0.0):
        if m < 0:
            raise DomainError(f"log-weight multiplier must be >= 0, got {m}")
        self.kappa = float(kappa)
        self.lam = float(lam)
        self.m = float(m)
        self.f0 = float(f0)

    def value(self, t):
        s, _ = s_kappa_lambda(self.kappa, self.lam, t)
        return self.f0 - self.m * np.log(s)

    def d1(self, t):
        s, ds = s_kappa_lambda(self.kappa, self.lam, t)
        return -self.m * ds / s

    def d2(self, t):
        s, ds = s_kappa_lambda(self.kappa, self.lam, t)
        q = ds / s
        return self.m * (self.kappa + q * q)


# ---------------------------------------------------------------------------
# expression grammar: constants, t, + - * /, ^ , exp log sin cos sinh cosh pow

_FUNCS = {
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise DomainError(f"profile expression error at column {self.pos + 1}: {msg}")

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self):
        node = self.expr()
        if self.peek() != "":
            self.error("unexpected trailing input")
        return node

    def expr(self):
        node = self.term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                node = ("add", node, self.term())
            elif ch == "-":
                self.pos += 1
                node = ("sub", node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                node = ("mul", node, self.unary())
            elif ch == "/":
                self.pos += 1
                node = ("div", node, self.unary())
            else:
                return node

    def unary(self):
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return ("neg", self.unary())
        if ch == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            return ("pow", base, self.unary())
        return base

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            node = self.expr()
            self.take(")")
            return node
        if ch.isdigit() or ch == ".":
            return ("num", self.number())
        if ch.isalpha():
            name = self.ident()
            if name == "t":
                return ("t",)
            if name == "pi":
                return ("num", math.pi)
            if name == "e":
                return ("num", math.e)
            if name == "pow":
                self.take("(")
                a = self.expr()
                self.take(",")
                b = self.expr()
                self.take(")")
                return ("pow", a, b)
            if name in _FUNCS:
                self.take("(")
                a = self.expr()
                self.take(")")
                return ("fn", name, a)
            self.error(f"unknown name {name!r}")
        self.error("expected a number, 't', a function call, or '('")

    def number(self) -> float:
        start = self.pos
        text = self.text
        n = len(text)
        while self.pos < n and (text[self.pos].isdigit() or text[self.pos] == "."):
            self.pos += 1
        if self.pos < n and text[self.pos] in "eE":
            mark = self.pos
            self.pos += 1
            if self.pos < n and text[self.pos] in "+-":
                self.pos += 1
            if self.pos < n and text[self.pos].isdigit():
                while self.pos < n and text[self.pos].isdigit():
                    self.pos += 1
            else:
                self.pos = mark
        try:
            return float(text[start : self.pos])
        except ValueError:
            self.error(f"bad number {text[start:self.pos]!r}")

    def ident(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start : self.pos]


def parse_expression(text: str):
    """Parse the profile grammar into an AST (nested tuples)."""
    return _simplify(_Parser(text).parse())


def _is_num(node, v=None):
    return node[0] == "num" and (v is None or node[1] == v)


def _simplify(node):
    op = node[0]
    if op in ("num", "t"):
        return node
    if op == "neg":
        a = _simplify(node[1])
        if _is_num(a):
            return ("num", -a[1])
        return ("neg", a)
    if op == "fn":
        a = _simplify(node[2])
        if _is_num(a):
            return ("num", float(_FUNCS[node[1]](a[1])))
        return ("fn", node[1], a)
    a = _simplify(node[1])
    b = _simplify(node[2])
    if _is_num(a) and _is_num(b):
        va, vb = a[1], b[1]
        if op == "add":
            return ("num", va + vb)
        if op == "sub":
            return ("num", va - vb)
        if op == "mul":
            return ("num", va * vb)
        if op == "div":
            return ("num", va / vb)
        if op == "pow":
            return ("num", va**vb)
    if op == "add":
        if _is_num(a, 0.0):
            return b
        if _is_num(b, 0.0):
            return a
    if op == "sub" and _is_num(b, 0.0):
        return a
    if op == "mul":
        if _is_num(a, 0.0) or _is_num(b, 0.0):
            return ("num", 0.0)
        if _is_num(a, 1.0):
            return b
        if _is_num(b, 1.0):
            return a
    if op == "div" and _is_num(b, 1.0):
        return a
    if op == "pow":
        if _is_num(b, 1.0):
            return a
        if _is_num(b, 0.0):
            return ("num", 1.0)
    return (op, a, b)


def _diff(node):
    op = node[0]
    if op == "num":
        return ("num", 0.0)
    if op == "t":
        return ("num", 1.0)
    if op == "neg":
        return ("neg", _diff(node[1]))
    if op == "add":
        return ("add", _diff(node[1]), _diff(node[2]))
    if op == "sub":
        return ("sub", _diff(node[1]), _diff(node[2]))
    if op == "mul":
        a, b = node[1], node[2]
        return ("add", ("mul", _diff(a), b), ("mul", a, _diff(b)))
    if op == "div":
        a, b = node[1], node[2]
        num = ("sub", ("mul", _diff(a), b), ("mul", a, _diff(b)))
        return ("div", num, ("mul", b, b))
    if op == "pow":
        a, b = node[1], node[2]
        if _is_num(b):
            exponent = b[1]
            return ("mul", ("num", exponent), ("mul", ("pow", a, ("num", exponent - 1.0)), _diff(a)))
        # general a^b = exp(b log a)
        inner = ("add", ("mul", _diff(b), ("fn", "log", a)), ("div", ("mul", b, _diff(a)), a))
        return ("mul", ("pow", a, b), inner)
    if op == "fn":
        name, a = node[1], node[2]
        da = _diff(a)
        if name == "exp":
            return ("mul", ("fn", "exp", a), da)
        if name == "log":
            return ("div", da, a)
        if name == "sin":
            return ("mul", ("fn", "cos", a), da)
        if name == "cos":
            return ("neg", ("mul", ("fn", "sin", a), da))
        if name == "sinh":
            return ("mul", ("fn", "cosh", a), da)
        if name == "cosh":
            return ("mul", ("fn", "sinh", a), da)
    raise DomainError(f"cannot differentiate node {node!r}")


def _eval(node, t):
    op = node[0]
    if op == "num":
        return np.full_like(t, node[1])
    if op == "t":
        return t
    if op == "neg":
        return -_eval(node[1], t)
    if op == "add":
        return _eval(node[1], t) + _eval(node[2], t)
    if op == "sub":
        return _eval(node[1], t) - _eval(node[2], t)
    if op == "mul":
        return _eval(node[1], t) * _eval(node[2], t)
    if op == "div":
        return _eval(node[1], t) / _eval(node[2], t)
    if op == "pow":
        return np.power(_eval(node[1], t), _eval(node[2], t))
    return _FUNCS[node[1]](_eval(node[2], t))


class ExprProfile(Profile):
    """Profile from a text expression; derivatives are symbolic and exact."""

    def __init__(self, text: str):
        self.text = text
        self._ast = parse_expression(text)
        self._ast_d1 = _simplify(_diff(self._ast))
        self._ast_d2 = _simplify(_diff(self._ast_d1))

    def _run(self, ast, t):
        t = np.asarray(t, dtype=float)
        out = _eval(ast, t)
        return float(out) if np.ndim(out) == 0 else out

    def value(self, t):
        return self._run(self._ast, t)

    def d1(self, t):
        return self._run(self._ast_d1, t)

    def d2(self, t):
        return self._run(self._ast_d2, t)

    def __repr__(self):
        return f"ExprProfile({self.text!r})"


class CallableProfile(Profile):
    """Profile from Python callables; missing derivatives fall back to
    central 5-point finite differences (which evaluate slightly outside the
    nominal interval near its ends)."""

    def __init__(self, fn, d1=None, d2=None, fd_step: float = 1e-3):
        self._fn = fn
        self._d1 = d1
        self._d2 = d2
        self._h = fd_step

    def value(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self._fn(t), dtype=float)
        return float(out) if out.ndim == 0 else out

    def d1(self, t):
        if self._d1 is not None:
            t = np.asarray(t, dtype=float)
            out = np.asarray(self._d1(t), dtype=float)
            return float(out) if out.ndim == 0 else out
        t = np.asarray(t, dtype=float)
        h = self._h
        out = (self._fn(t - 2 * h) - 8 * self._fn(t - h) + 8 * self._fn(t + h) - self._fn(t + 2 * h)) / (12 * h)
        out = np.asarray(out, dtype=float)
        return float(out) if out.ndim == 0 else out

    def d2(self, t):
        if self._d2 is not None:
            t = np.asarray(t, dtype=float)
            out = np.asarray(self._d2(t), dtype=float)
            return float(out) if out.ndim == 0 else out
        t = np.asarray(t, dtype=float)
        h = self._h
        out = (
            -self._fn(t - 2 * h)
            + 16 * self._fn(t - h)
            - 30 * self._fn(t)
            + 16 * self._fn(t + h)
            - self._fn(t + 2 * h)
        ) / (12 * h * h)
        out = np.asarray(out, dtype=float)
        return float(out) if out.ndim == 0 else out


class TableProfile(Profile):
    """Uniformly sampled profile; derivatives from 5-point stencils on the
    sample grid, all three curves interpolated monotone-cubically."""

    def __init__(self, ts, ys):
        ts = np.asarray(ts, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if ts.ndim != 1 or ts.shape != ys.shape or len(ts) < 5:
            raise DomainError("sampled profiles need >= 5 points for 5-point stencils")
        h = (ts[-1] - ts[0]) / (len(ts) - 1)
        if not np.allclose(np.diff(ts), h, rtol=1e-9, atol=1e-12 * max(abs(ts[-1]), 1.0)):
            raise DomainError("sampled profiles must be uniformly spaced")
        self.ts = ts
        self.ys = ys
        d1 = stencil_d1(ys, h)
        d2 = stencil_d2(ys, h)
        self._f = PchipInterpolator(ts, ys)
        self._f1 = PchipInterpolator(ts, d1)
        self._f2 = PchipInterpolator(ts, d2)

    def value(self, t):
        out = self._f(np.asarray(t, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def d1(self, t):
        out = self._f1(np.asarray(t, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def d2(self, t):
        out = self._f2(np.asarray(t, dtype=float))
        return float(out) if np.ndim(out) == 0 else out
