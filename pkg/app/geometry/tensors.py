"""Tensor fields and the backend-agnostic calculus on them.

Every field is evaluated as a :class:`~app.utils.jet.Jet` in a frame ``e_i``
with brackets ``[e_i, e_j] = c^k_ij e_k``. On coordinate charts the frame is
``d/dx^i`` and ``c = 0``; on homogeneous frames the components are constant and
all information sits in ``c``. Formulas below are written once for both.
"""

import threading
from string import ascii_lowercase
from typing import Callable, Sequence, Tuple

import numpy as np
from cachetools import LRUCache

from app.config import settings
from app.errors import DomainError, UsageError
from app.logger import get_logger
from app.models.manifold import Manifold, Point
from app.utils import jet as jets
from app.utils.jet import Jet

logger = get_logger("tensors")

UPPER = "u"
LOWER = "l"

Compute = Callable[[Point, int], Jet]


class TensorField:
    """A smooth tensor field.

    ``kinds`` lists the variance of each component axis (``"u"`` for a vector
    slot, ``"l"`` for a covector slot). Fields built from a valence put the
    upper axes first.
    """

    def __init__(
        self,
        manifold: Manifold,
        kinds: Sequence[str],
        compute: Compute,
        name: str = "",
    ):
        self.manifold = manifold
        self.kinds: Tuple[str, ...] = tuple(kinds)
        self.name = name or "field"
        self._compute = compute
        self._cache: LRUCache = LRUCache(maxsize=settings.field_cache_size)
        self._lock = threading.Lock()

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------
    @classmethod
    def from_formula(
        cls,
        manifold: Manifold,
        kinds: Sequence[str],
        formula: Callable[[Jet], object],
        name: str = "",
    ) -> "TensorField":
        """Field whose components are a jet expression of the coordinates"""
        if manifold.is_frame:
            raise UsageError(f"{name or 'field'}: coordinate formulas need a coordinate chart")

        def compute(point: Point, order: int) -> Jet:
            x = Jet.variable(point.coords, order)
            result = formula(x)
            if isinstance(result, Jet):
                return result
            return jets.array(result, manifold.dim)

        return cls(manifold, kinds, compute, name)

    @classmethod
    def constant(cls, manifold: Manifold, kinds: Sequence[str], components, name: str = "") -> "TensorField":
        value = Jet.constant(np.asarray(components, dtype=float), manifold.dim)
        return cls(manifold, kinds, lambda point, order: value, name)

    @classmethod
    def derived(
        cls,
        kinds: Sequence[str],
        fn: Callable[..., Jet],
        *parents: "TensorField",
        extra: int = 0,
        name: str = "",
    ) -> "TensorField":
        """Field computed pointwise from parent jets carried ``extra`` orders higher"""
        manifold = _common_manifold(*parents)

        def compute(point: Point, order: int) -> Jet:
            return fn(*(parent.jet(point, order + extra) for parent in parents))

        return cls(manifold, kinds, compute, name)

    # ------------------------------------------------------------------
    # inspection
    # ------------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.manifold.dim

    @property
    def rank(self) -> int:
        return len(self.kinds)

    @property
    def valence(self) -> Tuple[int, int]:
        """(covariant, contravariant) slot counts"""
        return self.kinds.count(LOWER), self.kinds.count(UPPER)

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.dim,) * self.rank

    def is_form(self) -> bool:
        return all(kind == LOWER for kind in self.kinds)

    def __repr__(self) -> str:
        return f"TensorField({self.name!r}, kinds={''.join(self.kinds) or '-'})"

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------
    def jet(self, point: Point, order: int = 0) -> Jet:
        if not self.manifold.contains(point):
            raise DomainError(f"{self.name}: point {point.coords} outside the domain of {self.manifold.name}")
        with self._lock:
            cached = self._cache.get(point)
        if cached is not None and cached.order >= order:
            return cached.truncate(order)
        result = self._compute(point, order)
        if result.shape != self.shape:
            raise UsageError(f"{self.name}: computed shape {result.shape}, expected {self.shape}")
        if result.order < order:
            raise UsageError(f"{self.name}: computed order {result.order} below requested {order}")
        with self._lock:
            current = self._cache.get(point)
            if current is None or current.order < result.order:
                self._cache[point] = result
        return result.truncate(order)

    def evaluate(self, point: Point) -> np.ndarray:
        return self.jet(point, 0).value

    __call__ = evaluate

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def _same_slots(self, other: "TensorField") -> None:
        if self.kinds != other.kinds:
            raise UsageError(f"cannot combine {self.name} ({self.kinds}) with {other.name} ({other.kinds})")

    def __add__(self, other: "TensorField") -> "TensorField":
        self._same_slots(other)
        return TensorField.derived(self.kinds, lambda a, b: a + b, self, other, name=f"({self.name}+{other.name})")

    def __sub__(self, other: "TensorField") -> "TensorField":
        self._same_slots(other)
        return TensorField.derived(self.kinds, lambda a, b: a - b, self, other, name=f"({self.name}-{other.name})")

    def __neg__(self) -> "TensorField":
        return self.scaled(-1.0)

    def scaled(self, factor: float) -> "TensorField":
        return TensorField.derived(self.kinds, lambda a: a.scale(factor), self, name=f"{factor:g}*{self.name}")

    def __rmul__(self, factor: float) -> "TensorField":
        return self.scaled(float(factor))


class ScalarField(TensorField):
    """Valence (0, 0) field"""

    def __init__(self, manifold: Manifold, compute: Compute, name: str = ""):
        super().__init__(manifold, (), compute, name)

    @classmethod
    def from_formula(cls, manifold: Manifold, formula: Callable[[Jet], Jet], name: str = "") -> "ScalarField":
        base = TensorField.from_formula(manifold, (), formula, name)
        return cls(manifold, base._compute, name)

    @classmethod
    def constant_value(cls, manifold: Manifold, value: float, name: str = "") -> "ScalarField":
        const = Jet.constant(np.asarray(float(value)), manifold.dim)
        return cls(manifold, lambda point, order: const, name or f"{value:g}")

    @classmethod
    def wrap(cls, field: TensorField) -> "ScalarField":
        if field.rank != 0:
            raise UsageError(f"{field.name} is not a scalar field")
        return cls(field.manifold, field.jet, field.name)

    def value(self, point: Point) -> float:
        return float(self.evaluate(point))


def _common_manifold(*fields: TensorField) -> Manifold:
    manifold = fields[0].manifold
    for field in fields[1:]:
        if field.manifold != manifold:
            raise UsageError(
                f"fields live on different manifolds ({manifold.name}/{manifold.backend.value} "
                f"vs {field.manifold.name}/{field.manifold.backend.value})"
            )
    return manifold


def structure_jet(manifold: Manifold) -> Jet:
    return Jet.constant(manifold.constants(), manifold.dim)


def _letters(count: int, skip: str = "") -> str:
    pool = [ch for ch in ascii_lowercase if ch not in skip]
    return "".join(pool[:count])


# ----------------------------------------------------------------------
# operations
# ----------------------------------------------------------------------
def evaluate(t: TensorField, p: Point) -> np.ndarray:
    """Components of ``t`` at ``p`` in the backend basis"""
    return t.evaluate(p)


def bracket_jet(x: Jet, y: Jet, c: Jet) -> Jet:
    """[X,Y]^k = X^a d_a Y^k - Y^a d_a X^k + c^k_ab X^a Y^b"""
    return (
        jets.einsum("a,ak->k", x, y.grad())
        - jets.einsum("a,ak->k", y, x.grad())
        + jets.einsum("kab,a,b->k", c, x, y)
    )


def lie_bracket(x: TensorField, y: TensorField) -> TensorField:
    if x.kinds != (UPPER,) or y.kinds != (UPPER,):
        raise UsageError("lie_bracket takes two vector fields")
    c = structure_jet(_common_manifold(x, y))
    return TensorField.derived((UPPER,), lambda a, b: bracket_jet(a, b, c), x, y, extra=1, name=f"[{x.name},{y.name}]")


def alternating_derivative_jet(omega: Jet, c: Jet, degree: int) -> Jet:
    """Prefactor-free exterior derivative of a ``degree``-form jet.

    dw(X_0..X_p) = sum_i (-1)^i X_i w(..^i..) + sum_{i<j} (-1)^(i+j) w([X_i,X_j], ..^i..^j..)
    """
    grad = omega.grad()
    p1 = degree + 1
    out = None
    for m in range(p1):
        axes = [0 if q == m else None for q in range(p1)]
        rest = iter(range(1, p1))
        axes = [a if a is not None else next(rest) for a in axes]
        term = grad.transpose(*axes)
        term = term if m % 2 == 0 else -term
        out = term if out is None else out + term
    if degree >= 1:
        rest_letters = _letters(degree - 1, skip="kij")
        pairs = jets.einsum(f"kij,k{rest_letters}->ij{rest_letters}", c, omega)
        for i in range(p1):
            for j in range(i + 1, p1):
                axes = []
                rest = iter(range(2, p1))
                for q in range(p1):
                    axes.append(0 if q == i else 1 if q == j else next(rest))
                term = pairs.transpose(*axes)
                out = out + term if (i + j) % 2 == 0 else out - term
    return out


def exterior_derivative(omega: TensorField) -> TensorField:
    """d of a p-form, p in {0, 1, 2, 3}.

    1-forms use the half convention dη(X,Y) = ½(Xη(Y) − Yη(X) − η([X,Y]));
    higher degrees use the prefactor-free alternating sum.
    """
    if not omega.is_form():
        raise UsageError(f"{omega.name} is not a differential form")
    degree = omega.rank
    if degree > 3:
        raise UsageError(f"exterior derivative of degree {degree} forms is not supported")
    c = structure_jet(omega.manifold)
    factor = 0.5 if degree == 1 else 1.0

    def compute(w: Jet) -> Jet:
        result = alternating_derivative_jet(w, c, degree)
        return result.scale(factor) if factor != 1.0 else result

    return TensorField.derived(LOWER * (degree + 1), compute, omega, extra=1, name=f"d{omega.name}")


def lie_derivative_jet(x: Jet, t: Jet, kinds: Sequence[str], c: Jet) -> Jet:
    """(L_X T) from B^k_j = -d_j X^k + c^k_aj X^a"""
    rank = len(kinds)
    letters = _letters(rank, skip="kmpa")
    b = -x.grad().transpose(1, 0) + jets.einsum("kaj,a->kj", c, x)
    result = jets.einsum(f"a,a{letters}->{letters}", x, t.grad())
    for slot, kind in enumerate(kinds):
        src = letters[:slot] + "m" + letters[slot + 1:]
        if kind == UPPER:
            term = jets.einsum(f"{letters[slot]}m,{src}->{letters}", b, t)
        else:
            term = -jets.einsum(f"m{letters[slot]},{src}->{letters}", b, t)
        result = result + term
    return result


def lie_derivative(x: TensorField, t: TensorField) -> TensorField:
    if x.kinds != (UPPER,):
        raise UsageError("lie_derivative needs a vector field to flow along")
    c = structure_jet(_common_manifold(x, t))
    return TensorField.derived(
        t.kinds, lambda a, b: lie_derivative_jet(a, b, t.kinds, c), x, t, extra=1, name=f"L_{x.name}{t.name}"
    )


# ----------------------------------------------------------------------
# metric contractions
# ----------------------------------------------------------------------
def inverse_metric(g: TensorField) -> TensorField:
    """g^{ij}; raises DegeneracyError when |det g| falls below the threshold"""
    if g.kinds != (LOWER, LOWER):
        raise UsageError(f"{g.name} is not a (2,0) tensor")
    cached = getattr(g, "_inverse", None)
    if cached is None:
        cached = TensorField.derived(
            (UPPER, UPPER), lambda m: m.inv(settings.det_threshold), g, name=f"{g.name}^-1"
        )
        g._inverse = cached
    return cached


def _move(t: Jet, slot: int, matrix: Jet, rank: int) -> Jet:
    letters = _letters(rank, skip="m")
    src = letters[:slot] + "m" + letters[slot + 1:]
    return jets.einsum(f"{letters[slot]}m,{src}->{letters}", matrix, t)


def metric_contract(t: TensorField, g: TensorField, actions: Sequence[Tuple]) -> TensorField:
    """Apply raise/lower/trace actions in order.

    Actions are ``("raise", slot)``, ``("lower", slot)`` or
    ``("trace", slot_a, slot_b)``. Raised and lowered axes keep their position;
    a trace removes both axes.
    """
    g_inv = inverse_metric(g)
    kinds = list(t.kinds)
    steps = []
    for action in actions:
        verb = action[0]
        if verb in ("raise", "lower"):
            slot = action[1]
            want = LOWER if verb == "raise" else UPPER
            if kinds[slot] != want:
                raise UsageError(f"cannot {verb} slot {slot} of kind {kinds[slot]}")
            kinds[slot] = UPPER if verb == "raise" else LOWER
            steps.append((verb, slot, len(kinds)))
        elif verb == "trace":
            a, b = sorted(action[1:3])
            pair = (kinds[a], kinds[b])
            steps.append(("trace", a, b, pair, len(kinds)))
            del kinds[b]
            del kinds[a]
        else:
            raise UsageError(f"unknown index action {verb!r}")

    def compute(tj: Jet, gj: Jet, ginv: Jet) -> Jet:
        out = tj
        for step in steps:
            if step[0] == "raise":
                out = _move(out, step[1], ginv, step[2])
            elif step[0] == "lower":
                out = _move(out, step[1], gj, step[2])
            else:
                _, a, b, pair, rank = step
                letters = _letters(rank, skip="pq")
                src = list(letters)
                src[a], src[b] = "p", "q"
                keep = "".join(ch for i, ch in enumerate(letters) if i not in (a, b))
                src = "".join(src)
                if pair[0] != pair[1]:
                    out = jets.einsum(f"{src.replace('q', 'p')}->{keep}", out)
                elif pair[0] == LOWER:
                    out = jets.einsum(f"pq,{src}->{keep}", ginv, out)
                else:
                    out = jets.einsum(f"pq,{src}->{keep}", gj, out)
        return out

    return TensorField.derived(kinds, compute, t, g, g_inv, name=f"contract({t.name})")


def wedge(a: TensorField, b: TensorField) -> TensorField:
    """(a ∧ b)(X,Y,Z) = a(X)b(Y,Z) + a(Y)b(Z,X) + a(Z)b(X,Y) for a 1-form and a 2-form"""
    if a.kinds != (LOWER,) or b.kinds != (LOWER, LOWER):
        raise UsageError("wedge supports a 1-form with a 2-form only")
    return TensorField.derived(
        (LOWER,) * 3, wedge_jet, a, b, name=f"{a.name}^{b.name}"
    )


def wedge_jet(a: Jet, b: Jet) -> Jet:
    return (
        jets.einsum("i,jk->ijk", a, b)
        + jets.einsum("j,ki->ijk", a, b)
        + jets.einsum("k,ij->ijk", a, b)
    )


def interior(x: TensorField, omega: TensorField) -> TensorField:
    """(X ⌟ ω)(Y, ...) = ω(X, Y, ...)"""
    if x.kinds != (UPPER,) or not omega.is_form() or omega.rank == 0:
        raise UsageError("interior product takes a vector field and a form of positive degree")
    rest = _letters(omega.rank - 1, skip="a")
    return TensorField.derived(
        omega.kinds[1:],
        lambda v, w: jets.einsum(f"a,a{rest}->{rest}", v, w),
        x,
        omega,
        name=f"{x.name}_|{omega.name}",
    )


def wedge_interior(a: TensorField, b: TensorField) -> TensorField:
    """Dispatch to ``wedge`` or ``interior`` by the argument valences"""
    if a.kinds == (UPPER,):
        return interior(a, b)
    if a.kinds == (LOWER,):
        return wedge(a, b)
    raise UsageError(f"unsupported wedge/interior arguments {a.kinds} and {b.kinds}")


# ----------------------------------------------------------------------
# pointwise helpers
# ----------------------------------------------------------------------
def symmetry_defect(value: np.ndarray, antisymmetric: bool = True) -> float:
    """max over slot pairs of |T - sign * T^swap|"""
    sign = -1.0 if antisymmetric else 1.0
    worst = 0.0
    for i in range(value.ndim):
        for j in range(i + 1, value.ndim):
            swapped = np.swapaxes(value, i, j)
            worst = max(worst, float(np.max(np.abs(value - sign * swapped))))
    return worst

