"""Truncated derivative jets.

A :class:`Jet` carries a function together with its first ``n`` derivatives
(sampled on a common grid), and propagates them through arithmetic with the
Leibniz and Faa di Bruno rules. ``jet.d`` differentiates, dropping one order.
Used to evaluate the nested coefficient expressions without numerical
differentiation.
"""
from math import comb

import numpy as np


class Jet:
    __slots__ = ("c",)

    def __init__(self, derivs):
        self.c = [np.asarray(v, dtype=float) for v in derivs]

    @classmethod
    def const(cls, value, order):
        value = np.asarray(value, dtype=float)
        return cls([value] + [np.zeros_like(value)] * order)

    @property
    def order(self):
        return len(self.c) - 1

    @property
    def value(self):
        return self.c[0]

    def __getitem__(self, k):
        return self.c[k]

    @property
    def d(self):
        """Derivative jet (one order lower)."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        return Jet(self.c[1:])

    def _coerce(self, other, order):
        if isinstance(other, Jet):
            return other.truncate(order)
        return Jet.const(other, order)

    def truncate(self, order):
        return Jet(self.c[: order + 1])

    def __add__(self, other):
        n = self.order if not isinstance(other, Jet) else min(self.order, other.order)
        o = self._coerce(other, n)
        return Jet([a + b for a, b in zip(self.c[: n + 1], o.c)])

    __radd__ = __add__

    def __neg__(self):
        return Jet([-a for a in self.c])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -np.asarray(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([a * other for a in self.c])
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            out.append(sum(comb(k, j) * self.c[j] * other.c[k - j] for j in range(k + 1)))
        return Jet(out)

    __rmul__ = __mul__

    def compose(self, derivs):
        """Apply a scalar function given as ``[f, f', f'', f''']`` evaluated at
        ``self.value`` (callables of one array argument)."""
        g = self.c
        n = self.order
        if len(derivs) < n + 1:
            raise ValueError("not enough outer derivatives")
        f = [fn(g[0]) for fn in derivs[: n + 1]]
        out = [f[0]]
        if n >= 1:
            out.append(f[1] * g[1])
        if n >= 2:
            out.append(f[2] * g[1] ** 2 + f[1] * g[2])
        if n >= 3:
            out.append(f[3] * g[1] ** 3 + 3 * f[2] * g[1] * g[2] + f[1] * g[3])
        if n >= 4:
            raise NotImplementedError("jets above order 3")
        return Jet(out)

    def __pow__(self, p):
        return self.compose(
            [
                lambda x: x**p,
                lambda x: p * x ** (p - 1),
                lambda x: p * (p - 1) * x ** (p - 2),
                lambda x: p * (p - 1) * (p - 2) * x ** (p - 3),
            ]
        )

    def reciprocal(self):
        return self**-1

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet([a / other for a in self.c])
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other
