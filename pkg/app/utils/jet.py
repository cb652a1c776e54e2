"""Truncated multivariate Taylor jets.

A ``Jet`` carries the value of an array-valued function at a point together
with all of its partial derivatives up to some order. Coefficient ``k`` is the
full k-th derivative tensor, stored with the ``k`` derivative axes leading and
the logical shape trailing::

    coeffs[k].shape == (dim,) * k + shape

Arithmetic propagates exact derivatives (Leibniz rule for products, chain rule
for the elementary functions), so composing jets is forward-mode automatic
differentiation nested to arbitrary depth.

Constant jets have infinite order: their derivatives vanish identically and
they never limit the order of a result.
"""

import math
from itertools import combinations
from string import ascii_lowercase, ascii_uppercase
from typing import Callable, Iterable, List, Optional, Sequence, Union

import numpy as np

from app.errors import DegeneracyError, UsageError

ArrayLike = Union[float, int, np.ndarray]
_DERIV = ascii_uppercase


class Jet:
    __slots__ = ("coeffs", "dim", "is_constant")

    def __init__(self, coeffs: Sequence[np.ndarray], dim: int, is_constant: bool = False):
        self.coeffs: List[np.ndarray] = [np.asarray(c, dtype=float) for c in coeffs]
        self.dim = dim
        self.is_constant = is_constant
        if is_constant and len(self.coeffs) != 1:
            raise UsageError("constant jets carry only their value")

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------
    @classmethod
    def constant(cls, value: ArrayLike, dim: int) -> "Jet":
        return cls([np.asarray(value, dtype=float)], dim, is_constant=True)

    @classmethod
    def variable(cls, point: Sequence[float], order: int) -> "Jet":
        """Jet of the coordinate functions x^i at ``point``"""
        x0 = np.asarray(point, dtype=float)
        dim = x0.shape[0]
        coeffs = [x0]
        if order >= 1:
            coeffs.append(np.eye(dim))
        for k in range(2, order + 1):
            coeffs.append(np.zeros((dim,) * (k + 1)))
        return cls(coeffs, dim)

    @classmethod
    def zeros(cls, shape: Sequence[int], dim: int) -> "Jet":
        return cls.constant(np.zeros(tuple(shape)), dim)

    @staticmethod
    def lift(obj: Union["Jet", ArrayLike], dim: int) -> "Jet":
        if isinstance(obj, Jet):
            return obj
        return Jet.constant(obj, dim)

    @classmethod
    def from_value_and_grad(cls, value: ArrayLike, slope: "Jet") -> "Jet":
        """Rebuild a jet from its value and the jet of its gradient"""
        if slope.is_constant and not np.any(slope.value):
            return cls.constant(value, slope.dim)
        if slope.is_constant:
            raise UsageError("a constant non-zero gradient needs an explicit order")
        return cls([np.asarray(value, dtype=float), *slope.coeffs], slope.dim)

    # ------------------------------------------------------------------
    # inspection
    # ------------------------------------------------------------------
    @property
    def order(self) -> float:
        return math.inf if self.is_constant else len(self.coeffs) - 1

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0]

    @property
    def shape(self) -> tuple:
        return self.coeffs[0].shape

    @property
    def ndim(self) -> int:
        return self.coeffs[0].ndim

    def coefficient(self, k: int) -> Optional[np.ndarray]:
        """k-th derivative tensor, or None when it vanishes identically"""
        if self.is_constant:
            return self.coeffs[0] if k == 0 else None
        if k >= len(self.coeffs):
            raise UsageError(f"jet of order {self.order} has no coefficient {k}")
        return self.coeffs[k]

    def dense(self, k: int) -> np.ndarray:
        c = self.coefficient(k)
        if c is None:
            return np.zeros((self.dim,) * k + self.shape)
        return c

    def __repr__(self) -> str:
        return f"Jet(shape={self.shape}, order={self.order})"

    # ------------------------------------------------------------------
    # order manipulation
    # ------------------------------------------------------------------
    def truncate(self, order: int) -> "Jet":
        if self.is_constant:
            return self
        if order > self.order:
            raise UsageError(f"cannot truncate a jet of order {self.order} to {order}")
        return Jet(self.coeffs[: order + 1], self.dim)

    def grad(self) -> "Jet":
        """Jet of the gradient; the derivative axis becomes the first logical axis"""
        if self.is_constant:
            return Jet.constant(np.zeros((self.dim,) + self.shape), self.dim)
        if self.order < 1:
            raise UsageError("cannot differentiate a jet of order 0")
        return Jet(self.coeffs[1:], self.dim)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def _coerce(self, other: Union["Jet", ArrayLike]) -> "Jet":
        other = Jet.lift(other, self.dim)
        if other.dim != self.dim:
            raise UsageError("jets live on spaces of different dimension")
        return other

    def _linear(self, other: "Jet", sign: float) -> "Jet":
        other = self._coerce(other)
        if self.is_constant and other.is_constant:
            return Jet.constant(self.value + sign * other.value, self.dim)
        order = int(min(self.order, other.order))
        rank = max(self.ndim, other.ndim)
        target = np.broadcast_shapes(self.shape, other.shape)
        coeffs = []
        for k in range(order + 1):
            full = (self.dim,) * k + target
            total = np.zeros(full)
            a = self.coefficient(k)
            b = other.coefficient(k)
            if a is not None:
                total = total + _pad(a, k, rank)
            if b is not None:
                total = total + sign * _pad(b, k, rank)
            coeffs.append(total)
        return Jet(coeffs, self.dim)

    def __add__(self, other):
        return self._linear(other, 1.0)

    def __radd__(self, other):
        return self._linear(other, 1.0)

    def __sub__(self, other):
        return self._linear(other, -1.0)

    def __rsub__(self, other):
        return (-self)._linear(other, 1.0)

    def __neg__(self) -> "Jet":
        return self.scale(-1.0)

    def scale(self, factor: float) -> "Jet":
        return Jet([factor * c for c in self.coeffs], self.dim, self.is_constant)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(float(other))
        other = self._coerce(other)
        sa, sb, out = _broadcast_subscripts(self.shape, other.shape)
        return _pair(self, other, sa, sb, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(1.0 / float(other))
        return self * reciprocal(self._coerce(other))

    def __rtruediv__(self, other):
        return self._coerce(other) * reciprocal(self)

    def __pow__(self, exponent: int) -> "Jet":
        if not isinstance(exponent, int) or exponent < 0:
            raise UsageError("jets support non-negative integer powers only")
        result = Jet.constant(np.ones(self.shape), self.dim)
        for _ in range(exponent):
            result = result * self
        return result

    # ------------------------------------------------------------------
    # shape manipulation
    # ------------------------------------------------------------------
    def __getitem__(self, index) -> "Jet":
        if not isinstance(index, tuple):
            index = (index,)
        coeffs = [c[(slice(None),) * k + index] for k, c in enumerate(self.coeffs)]
        return Jet(coeffs, self.dim, self.is_constant)

    def transpose(self, *axes: int) -> "Jet":
        if not axes:
            axes = tuple(reversed(range(self.ndim)))
        coeffs = [
            np.transpose(c, tuple(range(k)) + tuple(k + a for a in axes))
            for k, c in enumerate(self.coeffs)
        ]
        return Jet(coeffs, self.dim, self.is_constant)

    @property
    def T(self) -> "Jet":
        return self.transpose()

    def reshape(self, *shape: int) -> "Jet":
        coeffs = [c.reshape((self.dim,) * k + tuple(shape)) for k, c in enumerate(self.coeffs)]
        return Jet(coeffs, self.dim, self.is_constant)

    # ------------------------------------------------------------------
    # linear algebra
    # ------------------------------------------------------------------
    def inv(self, threshold: float = 1e-12) -> "Jet":
        """Jet of the matrix inverse, via d(A^-1) = -A^-1 dA A^-1"""
        det = np.linalg.det(self.value)
        if abs(det) < threshold:
            raise DegeneracyError(f"|det| = {abs(det):.3e} below {threshold:.1e}")
        value = np.linalg.inv(self.value)
        if self.is_constant:
            return Jet.constant(value, self.dim)
        if self.order == 0:
            return Jet([value], self.dim)
        lower = self.truncate(int(self.order) - 1).inv(threshold)
        slope = -einsum("ij,ajk,kl->ail", lower, self.grad(), lower)
        return Jet.from_value_and_grad(value, slope)

    # ------------------------------------------------------------------
    # reductions
    # ------------------------------------------------------------------
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.value))) if self.value.size else 0.0


def _pad(c: np.ndarray, k: int, rank: int) -> np.ndarray:
    """Insert singleton logical axes so numpy broadcasting aligns logical shapes"""
    missing = rank - (c.ndim - k)
    if missing <= 0:
        return c
    return c.reshape(c.shape[:k] + (1,) * missing + c.shape[k:])


def _broadcast_subscripts(sa: tuple, sb: tuple):
    """Einsum subscripts for elementwise products of suffix-aligned shapes"""
    long_, short = (sa, sb) if len(sa) >= len(sb) else (sb, sa)
    if long_[len(long_) - len(short):] != short:
        raise UsageError(f"cannot broadcast shapes {sa} and {sb}")
    letters = ascii_lowercase[: len(long_)]
    tail = letters[len(long_) - len(short):]
    if len(sa) >= len(sb):
        return letters, tail, letters
    return tail, letters, letters


def _pair(a: Jet, b: Jet, sa: str, sb: str, out: str) -> Jet:
    """Leibniz rule for a bilinear einsum of two jets"""
    if a.is_constant and b.is_constant:
        return Jet.constant(np.einsum(f"{sa},{sb}->{out}", a.value, b.value), a.dim)
    order = int(min(a.order, b.order))
    coeffs = []
    for k in range(order + 1):
        letters = _DERIV[:k]
        total = None
        for i in range(k + 1):
            ca = a.coefficient(i)
            cb = b.coefficient(k - i)
            if ca is None or cb is None:
                continue
            for subset in combinations(range(k), i):
                la = "".join(letters[p] for p in subset)
                lb = "".join(letters[p] for p in range(k) if p not in subset)
                term = np.einsum(f"{la}{sa},{lb}{sb}->{letters}{out}", ca, cb)
                total = term if total is None else total + term
        coeffs.append(total)
    return Jet(coeffs, a.dim)


def _single(a: Jet, s: str, out: str) -> Jet:
    coeffs = [
        np.einsum(f"{_DERIV[:k]}{s}->{_DERIV[:k]}{out}", c)
        for k, c in enumerate(a.coeffs)
    ]
    return Jet(coeffs, a.dim, a.is_constant)


def einsum(subscripts: str, *operands: Union[Jet, ArrayLike]) -> Jet:
    """Einstein summation over jets (lowercase subscripts, explicit output)

    Multi-operand contractions are folded pairwise from the left, keeping only
    the indices later operands or the output still need.
    """
    if "->" not in subscripts:
        raise UsageError("jet einsum needs an explicit output")
    lhs, out = subscripts.replace(" ", "").split("->")
    inputs = lhs.split(",")
    if len(inputs) != len(operands):
        raise UsageError(f"{len(inputs)} subscripts for {len(operands)} operands")
    dim = next((op.dim for op in operands if isinstance(op, Jet)), None)
    if dim is None:
        raise UsageError("jet einsum needs at least one jet operand")
    jets = [Jet.lift(op, dim) for op in operands]

    if len(jets) == 1:
        return _single(jets[0], inputs[0], out)

    acc, acc_sub = jets[0], inputs[0]
    for idx in range(1, len(jets)):
        sub = inputs[idx]
        needed = set(out).union(*inputs[idx + 1:])
        if idx == len(jets) - 1:
            target = out
        else:
            target = "".join(dict.fromkeys(ch for ch in acc_sub + sub if ch in needed))
        acc = _pair(acc, jets[idx], acc_sub, sub, target)
        acc_sub = target
    return acc


def stack(items: Iterable[Union[Jet, ArrayLike]], dim: int, axis: int = 0) -> Jet:
    jets = [Jet.lift(item, dim) for item in items]
    if all(j.is_constant for j in jets):
        return Jet.constant(np.stack([j.value for j in jets], axis=axis), dim)
    order = int(min(j.order for j in jets))
    coeffs = [np.stack([j.dense(k) for j in jets], axis=k + axis) for k in range(order + 1)]
    return Jet(coeffs, dim)


def array(nested, dim: int) -> Jet:
    """Build a jet from nested lists of jets and numbers"""
    if isinstance(nested, (list, tuple)):
        return stack([array(item, dim) for item in nested], dim)
    return Jet.lift(nested, dim)


def _compose(u: Jet, value_fn: Callable, derivative_fn: Callable[[Jet], Jet]) -> Jet:
    """Chain rule: d f(u) = f'(u) du, applied recursively on the derivative jet"""
    head = value_fn(u.value)
    if u.is_constant:
        return Jet.constant(head, u.dim)
    if u.order == 0:
        return Jet([head], u.dim)
    slope = derivative_fn(u.truncate(int(u.order) - 1)) * u.grad()
    return Jet.from_value_and_grad(head, slope)


def exp(u: Jet) -> Jet:
    return _compose(u, np.exp, exp)


def sin(u: Jet) -> Jet:
    return _compose(u, np.sin, cos)


def cos(u: Jet) -> Jet:
    return _compose(u, np.cos, lambda v: -sin(v))


def sinh(u: Jet) -> Jet:
    return _compose(u, np.sinh, cosh)


def cosh(u: Jet) -> Jet:
    return _compose(u, np.cosh, sinh)


def reciprocal(u: Jet) -> Jet:
    if np.any(u.value == 0):
        raise DegeneracyError("reciprocal of a jet with zero value")
    return _compose(u, np.reciprocal, lambda v: -(reciprocal(v) * reciprocal(v)))


def sqrt(u: Jet) -> Jet:
    return _compose(u, np.sqrt, lambda v: reciprocal(sqrt(v)).scale(0.5))


def log(u: Jet) -> Jet:
    return _compose(u, np.log, reciprocal)
