"""Step functions on the dyadic group with exact Haar-measure functionals.

The group is the countable product of Z_2; a point is a 0/1 coordinate
sequence x = (x_0, x_1, ...). A depth-n coset I_n(x) pins the first n
coordinates and has Haar measure 2^-n. A function constant on depth-N
cosets is stored as 2^N values indexed so that x_0 is the most significant
bit of the coset index, which makes every I_n(x) a contiguous index range.

All p = 1 functionals are exact: values are rational numbers (dyadic
rationals everywhere the library constructs them) and integrals are finite
rational sums. Non-integer p goes through binary64 with a documented
relative accuracy of about 1e-12.
"""

from __future__ import annotations

import math
import numbers
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

MAX_RESOLUTION = 30

RationalLike = Union["DyadicRational", Fraction, int, float]

_INT64_SAFE = 1 << 62


def _is_pow2(d: int) -> bool:
    return d > 0 and (d & (d - 1)) == 0


class DyadicRational:
    """Exact rational of the form numerator / 2^exponent.

    Canonical form keeps the exponent as small as possible: the numerator is
    odd, or the exponent is zero (zero is stored as 0/2^0). Addition,
    subtraction, multiplication, absolute value and comparison are exact;
    mixing with Fraction promotes to Fraction.
    """

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            raise ValueError(f"exponent must be >= 0, got {exp}")
        if num == 0:
            exp = 0
        else:
            while exp > 0 and (num & 1) == 0:
                num >>= 1
                exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, *a):  # immutable value type
        raise AttributeError("DyadicRational is immutable")

    @classmethod
    def from_fraction(cls, q: Fraction | int) -> "DyadicRational":
        q = Fraction(q)
        if not _is_pow2(q.denominator):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, q.denominator.bit_length() - 1)

    @property
    def numerator(self) -> int:
        return self.num

    @property
    def denominator(self) -> int:
        return 1 << self.exp

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    _FORMAT = re.compile(r"^(-?\d+)/2\^(\d+)$")

    @classmethod
    def parse(cls, text: str) -> "DyadicRational":
        m = cls._FORMAT.match(text.strip())
        if m is None:
            raise ValueError(f"expected '<numerator>/2^<exponent>', got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.num}/2^{self.exp}"

    def __repr__(self) -> str:
        return f"DyadicRational({self.num}, {self.exp})"

    def __float__(self) -> float:
        return self.num / (1 << self.exp)

    def __bool__(self) -> bool:
        return self.num != 0

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def _coerce(self, other):
        if isinstance(other, DyadicRational):
            return other
        if isinstance(other, int):
            return DyadicRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (Fraction, float)):
                return self.to_fraction() + Fraction(other)
            return NotImplemented
        e = max(self.exp, o.exp)
        return DyadicRational((self.num << (e - self.exp)) + (o.num << (e - o.exp)), e)

    __radd__ = __add__

    def __neg__(self) -> "DyadicRational":
        return DyadicRational(-self.num, self.exp)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (Fraction, float)):
                return self.to_fraction() - Fraction(other)
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (Fraction, float)):
                return self.to_fraction() * Fraction(other)
            return NotImplemented
        return DyadicRational(self.num * o.num, self.exp + o.exp)

    __rmul__ = __mul__

    def __abs__(self) -> "DyadicRational":
        return DyadicRational(abs(self.num), self.exp)

    def __truediv__(self, other):
        if isinstance(other, (DyadicRational, int, Fraction, float)):
            q = self.to_fraction() / _to_fraction(other)
            return exactify(q)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (DyadicRational, int, Fraction, float)):
            q = _to_fraction(other) / self.to_fraction()
            return exactify(q)
        return NotImplemented

    def _cmp_key(self, other):
        if isinstance(other, DyadicRational):
            e = max(self.exp, other.exp)
            return self.num << (e - self.exp), other.num << (e - other.exp)
        if isinstance(other, (int, Fraction, float)):
            return self.to_fraction(), Fraction(other)
        return None

    def __eq__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is None else k[0] == k[1]

    def __lt__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is None else k[0] < k[1]

    def __le__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is None else k[0] <= k[1]

    def __gt__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is None else k[0] > k[1]

    def __ge__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is None else k[0] >= k[1]


# virtual registration: Fraction and friends accept DyadicRational via
# the numerator/denominator protocol
numbers.Rational.register(DyadicRational)


def exactify(q: Fraction) -> Fraction | DyadicRational:
    """Return q as a DyadicRational when its denominator is a power of two."""
    if _is_pow2(q.denominator):
        return DyadicRational(q.numerator, q.denominator.bit_length() - 1)
    return q


def _to_fraction(v: RationalLike) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, DyadicRational):
        return v.to_fraction()
    if isinstance(v, (int, float)):
        return Fraction(v)
    raise TypeError(f"cannot interpret {type(v).__name__} as an exact rational")


def int_array(nums: Sequence[int]) -> np.ndarray:
    """Integer numpy array, int64 when safe, and exact object dtype otherwise."""
    bound = max((abs(int(v)) for v in nums), default=0)
    if bound < _INT64_SAFE:
        return np.asarray([int(v) for v in nums], dtype=np.int64)
    return np.asarray([int(v) for v in nums], dtype=object)


class StepFunction:
    """A function constant on the 2^N depth-N cosets, with exact rational values.

    Every constructor in this library produces dyadic-rational values
    (integer numerator over a power-of-two denominator); weighted maximal
    functions may carry general rationals, e.g. thirds from a V(n) = 6
    denominator, and the functionals below stay exact either way. Instances
    are immutable; refining the resolution by bit-doubling values changes
    no integral or norm.
    """

    __slots__ = ("resolution", "_values", "_nums", "_exp", "_cache")

    def __init__(self, resolution: int, values: Iterable[RationalLike]):
        _check_resolution(resolution)
        vals = tuple(_to_fraction(v) for v in values)
        if len(vals) != 1 << resolution:
            raise ValueError(
                f"need 2^{resolution} = {1 << resolution} values, got {len(vals)}"
            )
        object.__setattr__(self, "resolution", resolution)
        object.__setattr__(self, "_values", vals)
        object.__setattr__(self, "_nums", None)
        object.__setattr__(self, "_exp", None)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, *a):
        raise AttributeError("StepFunction is immutable")

    @classmethod
    def from_dyadic_ints(
        cls, resolution: int, nums: Sequence[int] | np.ndarray, exp: int
    ) -> "StepFunction":
        """Fast constructor from numerators over a common denominator 2^exp."""
        _check_resolution(resolution)
        if exp < 0:
            raise ValueError(f"exponent must be >= 0, got {exp}")
        if len(nums) != 1 << resolution:
            raise ValueError(
                f"need 2^{resolution} = {1 << resolution} values, got {len(nums)}"
            )
        f = cls.__new__(cls)
        object.__setattr__(f, "resolution", resolution)
        object.__setattr__(f, "_values", None)
        arr = np.asarray(nums) if isinstance(nums, np.ndarray) else int_array(nums)
        arr.setflags(write=False)
        object.__setattr__(f, "_nums", arr)
        object.__setattr__(f, "_exp", int(exp))
        object.__setattr__(f, "_cache", {})
        return f

    @classmethod
    def constant(cls, value: RationalLike, resolution: int) -> "StepFunction":
        return cls(resolution, [_to_fraction(value)] * (1 << resolution))

    @classmethod
    def zero(cls, resolution: int) -> "StepFunction":
        return cls.from_dyadic_ints(resolution, [0] * (1 << resolution), 0)

    @classmethod
    def indicator(cls, selector: "CosetSelector", resolution: int) -> "StepFunction":
        mask = selector.mask(resolution)
        return cls.from_dyadic_ints(resolution, mask.astype(np.int64), 0)

    @property
    def values(self) -> tuple[Fraction, ...]:
        if self._values is None:
            d = 1 << self._exp
            vals = tuple(Fraction(int(n), d) for n in self._nums)
            object.__setattr__(self, "_values", vals)
        return self._values

    def value_at(self, coset_index: int) -> Fraction:
        if self._values is not None:
            return self._values[coset_index]
        return Fraction(int(self._nums[coset_index]), 1 << self._exp)

    @property
    def is_dyadic(self) -> bool:
        if self._nums is not None:
            return True
        if "is_dyadic" not in self._cache:
            self._cache["is_dyadic"] = all(_is_pow2(v.denominator) for v in self._values)
        return self._cache["is_dyadic"]

    def dyadic_ints(self) -> tuple[np.ndarray, int]:
        """Numerators over a common power-of-two denominator, (array, exponent).

        Raises ValueError if any value has a non-dyadic denominator.
        """
        if self._nums is not None:
            return self._nums, self._exp
        if "ints" not in self._cache:
            exp = 0
            for v in self._values:
                d = v.denominator
                if not _is_pow2(d):
                    raise ValueError(
                        "step function has non-dyadic values; exact integer form unavailable"
                    )
                exp = max(exp, d.bit_length() - 1)
            nums = int_array(
                [v.numerator << (exp - (v.denominator.bit_length() - 1)) for v in self._values]
            )
            nums.setflags(write=False)
            self._cache["ints"] = (nums, exp)
        return self._cache["ints"]

    def rational_ints(self) -> tuple[np.ndarray, int]:
        """Numerators over the least common denominator, (array, denominator).

        Works for any exact rational values; the denominator is a power of
        two exactly when the function is dyadic.
        """
        if self._nums is not None:
            return self._nums, 1 << self._exp
        if "rational_ints" not in self._cache:
            den = 1
            for v in self._values:
                den = den * v.denominator // math.gcd(den, v.denominator)
            nums = int_array([v.numerator * (den // v.denominator) for v in self._values])
            nums.setflags(write=False)
            self._cache["rational_ints"] = (nums, den)
        return self._cache["rational_ints"]

    def refine(self, resolution: int) -> "StepFunction":
        """Same function expressed on the finer depth-`resolution` cosets."""
        if resolution < self.resolution:
            raise ValueError(
                f"cannot refine from resolution {self.resolution} down to {resolution}"
            )
        if resolution == self.resolution:
            return self
        k = 1 << (resolution - self.resolution)
        if self._nums is not None:
            return StepFunction.from_dyadic_ints(
                resolution, np.repeat(self._nums, k), self._exp
            )
        out: list[Fraction] = []
        for v in self._values:
            out.extend([v] * k)
        return StepFunction(resolution, out)

    def _binary(self, other: "StepFunction", op) -> "StepFunction":
        if not isinstance(other, StepFunction):
            return NotImplemented
        n = max(self.resolution, other.resolution)
        a, b = self.refine(n), other.refine(n)
        if a._nums is not None and b._nums is not None:
            e = max(a._exp, b._exp)
            x, y = a._nums, b._nums
            xb = int(np.abs(x).max(initial=0)) << (e - a._exp)
            yb = int(np.abs(y).max(initial=0)) << (e - b._exp)
            if (x.dtype == np.int64 or y.dtype == np.int64) and xb + yb >= _INT64_SAFE:
                x, y = x.astype(object), y.astype(object)
            x = x * (1 << (e - a._exp)) if e > a._exp else x
            y = y * (1 << (e - b._exp)) if e > b._exp else y
            return StepFunction.from_dyadic_ints(n, op(x, y), e)
        return StepFunction(n, [op(u, v) for u, v in zip(a.values, b.values)])

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __neg__(self) -> "StepFunction":
        if self._nums is not None:
            return StepFunction.from_dyadic_ints(self.resolution, -self._nums, self._exp)
        return StepFunction(self.resolution, [-v for v in self._values])

    def scale(self, c: RationalLike) -> "StepFunction":
        q = _to_fraction(c)
        if self._nums is not None and _is_pow2(q.denominator):
            nums = self._nums
            bound = int(np.abs(nums).max(initial=0)) * abs(q.numerator)
            if nums.dtype == np.int64 and bound >= _INT64_SAFE:
                nums = nums.astype(object)
            return StepFunction.from_dyadic_ints(
                self.resolution,
                nums * q.numerator,
                self._exp + q.denominator.bit_length() - 1,
            )
        return StepFunction(self.resolution, [v * q for v in self.values])

    def __mul__(self, c):
        if not isinstance(c, StepFunction):
            return self.scale(c)
        n = max(self.resolution, c.resolution)
        a, b = self.refine(n), c.refine(n)
        if a._nums is not None and b._nums is not None:
            x, y = a._nums, b._nums
            bound = int(np.abs(x).max(initial=0)) * int(np.abs(y).max(initial=0))
            if (x.dtype == np.int64 or y.dtype == np.int64) and bound >= _INT64_SAFE:
                x, y = x.astype(object), y.astype(object)
            return StepFunction.from_dyadic_ints(n, x * y, a._exp + b._exp)
        return StepFunction(n, [u * v for u, v in zip(a.values, b.values)])

    __rmul__ = __mul__

    def abs(self) -> "StepFunction":
        if self._nums is not None:
            return StepFunction.from_dyadic_ints(
                self.resolution, np.abs(self._nums), self._exp
            )
        return StepFunction(self.resolution, [abs(v) for v in self._values])

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        n = max(self.resolution, other.resolution)
        a, b = self.refine(n), other.refine(n)
        if a._nums is not None and b._nums is not None and a._exp == b._exp:
            return bool(np.array_equal(a._nums, b._nums))
        return a.values == b.values

    def __repr__(self) -> str:
        return f"StepFunction(resolution={self.resolution}, 2^{self.resolution} values)"


def _check_resolution(n: int) -> None:
    if not (0 <= n <= MAX_RESOLUTION):
        raise ValueError(f"resolution must be in [0, {MAX_RESOLUTION}], got {n}")


@dataclass(frozen=True)
class CosetSelector:
    """A coset I_depth(anchor) or its complement, as a measurable index set.

    The anchor packs the pinned coordinates x_0..x_{depth-1} with x_0 in the
    most significant bit, so members form one contiguous index range at any
    resolution >= depth.
    """

    depth: int
    anchor: int = 0
    complement: bool = False

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")
        if not (0 <= self.anchor < (1 << self.depth)):
            raise ValueError(
                f"anchor must be a {self.depth}-bit prefix, got {self.anchor}"
            )

    @classmethod
    def whole_group(cls) -> "CosetSelector":
        return cls(depth=0, anchor=0)

    @classmethod
    def zero_coset(cls, depth: int) -> "CosetSelector":
        """I_depth = I_depth(0)."""
        return cls(depth=depth, anchor=0)

    @classmethod
    def outside_zero_coset(cls, depth: int) -> "CosetSelector":
        """The complement of I_depth."""
        return cls(depth=depth, anchor=0, complement=True)

    def measure(self) -> Fraction:
        m = Fraction(1, 1 << self.depth)
        return 1 - m if self.complement else m

    def contains_index(self, coset_index: int, resolution: int) -> bool:
        if resolution < self.depth:
            raise ValueError(
                f"resolution {resolution} is coarser than selector depth {self.depth}"
            )
        inside = (coset_index >> (resolution - self.depth)) == self.anchor
        return inside != self.complement

    def mask(self, resolution: int) -> np.ndarray:
        if resolution < self.depth:
            raise ValueError(
                f"resolution {resolution} is coarser than selector depth {self.depth}"
            )
        idx = np.arange(1 << resolution, dtype=np.int64)
        inside = (idx >> (resolution - self.depth)) == self.anchor
        return ~inside if self.complement else inside


def shell_decompose(depth: int) -> list[CosetSelector]:
    """The disjoint shells I_s \\ I_{s+1}, s = 0..depth-1, covering everything
    outside I_depth.

    Each shell is itself a coset: the points whose first 1-coordinate sits at
    position s. Measures are 2^-(s+1) and sum to 1 - 2^-depth.
    """
    if depth < 1:
        raise ValueError(f"shell decomposition needs depth >= 1, got {depth}")
    return [CosetSelector(depth=s + 1, anchor=1) for s in range(depth)]


def unit_point(s: int, resolution: int) -> int:
    """Coset index of the point with coordinate 1 at position s and 0 elsewhere."""
    if s < 0:
        raise ValueError(f"coordinate position must be >= 0, got {s}")
    if s >= resolution:
        raise ValueError(
            f"coordinate position s={s} needs resolution > s, got {resolution}"
        )
    return 1 << (resolution - 1 - s)


def haar_integral(f: StepFunction) -> Fraction | DyadicRational:
    """Exact integral of f with respect to the Haar measure.

    Returns a DyadicRational whenever the result is dyadic (it always is for
    dyadic-valued f), a Fraction otherwise.
    """
    if f.is_dyadic:
        nums, exp = f.dyadic_ints()
        total = int(np.sum(nums, dtype=object)) if nums.dtype == np.int64 else sum(
            int(v) for v in nums
        )
        return exactify(Fraction(total, 1 << (exp + f.resolution)))
    total = sum(f.values, start=Fraction(0))
    return exactify(total / (1 << f.resolution))


def lp_norm(f: StepFunction, p: RationalLike) -> Fraction | DyadicRational | float:
    """(integral of |f|^p)^(1/p); exact for p = 1, binary64 otherwise.

    The binary64 path is accurate to roughly 1e-12 relative error.
    """
    q = _to_fraction(p)
    if q <= 0:
        raise ValueError(f"p must be > 0, got {p}")
    if q == 1:
        return haar_integral(f.abs())
    vals = [abs(v) for v in f.values]
    pw = float(q)
    total = sum(float(v) ** pw for v in vals) / (1 << f.resolution)
    return total ** (1.0 / pw)


def weak_lp(
    f: StepFunction,
    p: RationalLike,
    selector: CosetSelector | None = None,
) -> Fraction | DyadicRational | float:
    """The weak-L_p statistic sup_t t * mu{|f| >= t}^(1/p) over the selector.

    The event is the non-strict {|f| >= t}. The supremum is attained at one
    of the finitely many values of |f| and is found exactly by sorting them;
    p = 1 is exact rational arithmetic, other p use binary64.
    """
    q = _to_fraction(p)
    if q <= 0:
        raise ValueError(f"p must be > 0, got {p}")
    n = f.resolution
    if selector is None:
        selector = CosetSelector.whole_group()
    mask = selector.mask(n)
    if not mask.any():
        return exactify(Fraction(0)) if q == 1 else 0.0
    if q == 1 and f.is_dyadic:
        nums, exp = f.dyadic_ints()
        sel = np.abs(nums[mask])
        sel = np.sort(sel)[::-1]
        if sel.dtype == np.int64 and int(sel[0] if len(sel) else 0) * len(sel) >= _INT64_SAFE:
            sel = sel.astype(object)
        ranks = np.arange(1, len(sel) + 1, dtype=np.int64)
        best = int(np.max(sel * ranks))
        return exactify(Fraction(best, 1 << (exp + n)))
    sel_vals = [abs(v) for v, m in zip(f.values, mask) if m]
    sel_vals.sort(reverse=True)
    unit = Fraction(1, 1 << n)
    if q == 1:
        best = max((v * (j + 1) for j, v in enumerate(sel_vals)), default=Fraction(0))
        return exactify(best * unit)
    pw = float(q)
    best_f = 0.0
    for j, v in enumerate(sel_vals):
        cand = float(v) * (float((j + 1) * unit)) ** (1.0 / pw)
        best_f = max(best_f, cand)
    return best_f


# --- plain-text serialization -------------------------------------------------

def dump_step_function(f: StepFunction) -> str:
    """Serialize to the fixture format: 'N=<res>' then one '<num>/2^<exp>' per coset."""
    if not f.is_dyadic:
        raise ValueError("only dyadic-valued step functions can be serialized")
    lines = [f"N={f.resolution}"]
    lines.extend(str(DyadicRational.from_fraction(v)) for v in f.values)
    return "\n".join(lines) + "\n"


def parse_step_function(text: str) -> StepFunction:
    lines = [ln.strip() for ln in text.strip().splitlines()]
    if not lines or not lines[0].startswith("N="):
        raise ValueError("fixture must start with 'N=<resolution>'")
    try:
        resolution = int(lines[0][2:])
    except ValueError:
        raise ValueError(f"bad resolution line {lines[0]!r}") from None
    _check_resolution(resolution)
    body = lines[1:]
    if len(body) != 1 << resolution:
        raise ValueError(
            f"expected 2^{resolution} = {1 << resolution} value lines, got {len(body)}"
        )
    return StepFunction(resolution, [DyadicRational.parse(ln) for ln in body])


def save_step_function(f: StepFunction, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dump_step_function(f))


def load_step_function(path) -> StepFunction:
    with open(path, "r", encoding="ascii") as fh:
        return parse_step_function(fh.read())
