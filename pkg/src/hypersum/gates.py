"""Gate families and exact pointwise evaluation.

All arithmetic is exact: weights, thresholds and biases are
``fractions.Fraction``, field coefficients are Python ints.  Points of the
hypercube are 0/1 sequences; where a point is packed into an integer mask,
bit i of the mask encodes x_{i+1} (little-endian).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, str, Fraction]


class Family(str, Enum):
    THR = "thr"
    ETHR = "ethr"
    RELU = "relu"
    FP_POLY = "fp"


def as_fraction(x: Rational) -> Fraction:
    """Coerce an int, decimal string ("3", "-1/2") or Fraction to Fraction.

    Floats are rejected: they would smuggle rounding into exact arithmetic.
    """
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use int, Fraction or 'p/q' string")
    return Fraction(x)


def bits_from_mask(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def mask_from_bits(bits: Sequence[int]) -> int:
    mask = 0
    for i, b in enumerate(bits):
        if b:
            mask |= 1 << i
    return mask


def _check_point(x: Sequence[int], n: int) -> None:
    if len(x) != n:
        raise ValueError(f"point has {len(x)} coordinates, gate expects {n}")


def _fraction_weights(ws: Iterable[Rational]) -> tuple[Fraction, ...]:
    out = tuple(as_fraction(w) for w in ws)
    if not out:
        raise ValueError("gate needs at least one variable")
    return out


@dataclass(frozen=True)
class ThresholdGate:
    """[sum_i w_i x_i >= t], valued in {0, 1}."""

    weights: tuple[Fraction, ...]
    threshold: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", _fraction_weights(self.weights))
        object.__setattr__(self, "threshold", as_fraction(self.threshold))

    @property
    def n(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class ExactThresholdGate:
    """[sum_i w_i x_i = t], valued in {0, 1}."""

    weights: tuple[Fraction, ...]
    target: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", _fraction_weights(self.weights))
        object.__setattr__(self, "target", as_fraction(self.target))

    @property
    def n(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class ReluGate:
    """max{0, sum_i w_i x_i + a}, valued in the non-negative rationals."""

    weights: tuple[Fraction, ...]
    bias: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", _fraction_weights(self.weights))
        object.__setattr__(self, "bias", as_fraction(self.bias))

    @property
    def n(self) -> int:
        return len(self.weights)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True, eq=True)
class FpPolynomial:
    """Multilinear polynomial over F_p with subset monomials.

    ``monomials`` maps a variable-subset mask (bit i = variable x_{i+1}) to a
    coefficient in {1, ..., p-1}; the constructor reduces mod p and drops
    zeros.  ``degree_bound`` defaults to the largest stored monomial size and
    may be declared larger.
    """

    p: int
    n: int
    monomials: dict[int, int]
    degree_bound: int = -1  # -1: infer from the monomials

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.n < 1:
            raise ValueError("n must be positive")
        reduced: dict[int, int] = {}
        for mask, coeff in self.monomials.items():
            if mask < 0 or mask >> self.n:
                raise ValueError(f"monomial mask {mask} out of range for n={self.n}")
            c = coeff % self.p
            if c:
                reduced[mask] = c
        object.__setattr__(self, "monomials", reduced)
        actual = max((m.bit_count() for m in reduced), default=0)
        if self.degree_bound == -1:
            object.__setattr__(self, "degree_bound", actual)
        elif self.degree_bound < actual:
            raise ValueError(
                f"degree_bound {self.degree_bound} below actual degree {actual}"
            )

    # dicts are unhashable; use .key() where a hashable identity is needed
    __hash__ = None  # type: ignore[assignment]

    @property
    def degree(self) -> int:
        return max((m.bit_count() for m in self.monomials), default=0)

    def key(self) -> tuple:
        return (self.p, self.n, tuple(sorted(self.monomials.items())))

    @classmethod
    def from_terms(
        cls,
        p: int,
        n: int,
        terms: Iterable[tuple[Iterable[int], int]],
        degree_bound: int = -1,
    ) -> "FpPolynomial":
        """Build from (variables, coeff) pairs with 1-indexed variables."""
        monomials: dict[int, int] = {}
        for variables, coeff in terms:
            mask = 0
            for v in variables:
                if not 1 <= v <= n:
                    raise ValueError(f"variable index {v} out of range 1..{n}")
                mask |= 1 << (v - 1)
            monomials[mask] = monomials.get(mask, 0) + coeff
        return cls(p, n, monomials, degree_bound)


Gate = Union[ThresholdGate, ExactThresholdGate, ReluGate, FpPolynomial]

_FAMILY_TYPES = {
    Family.THR: ThresholdGate,
    Family.ETHR: ExactThresholdGate,
    Family.RELU: ReluGate,
    Family.FP_POLY: FpPolynomial,
}


def family_of(gate: Gate) -> Family:
    for fam, typ in _FAMILY_TYPES.items():
        if isinstance(gate, typ):
            return fam
    raise TypeError(f"unknown gate type {type(gate).__name__}")


def eval_thr(g: ThresholdGate, x: Sequence[int]) -> int:
    _check_point(x, g.n)
    acc = Fraction(0)
    for w, b in zip(g.weights, x):
        if b:
            acc += w
    return 1 if acc >= g.threshold else 0


def eval_ethr(g: ExactThresholdGate, x: Sequence[int]) -> int:
    _check_point(x, g.n)
    acc = Fraction(0)
    for w, b in zip(g.weights, x):
        if b:
            acc += w
    return 1 if acc == g.target else 0


def eval_relu(g: ReluGate, x: Sequence[int]) -> Fraction:
    _check_point(x, g.n)
    acc = g.bias
    for w, b in zip(g.weights, x):
        if b:
            acc += w
    return acc if acc > 0 else Fraction(0)


def eval_fp(q: FpPolynomial, x: Sequence[int]) -> int:
    """Value in {0, ..., p-1}; a monomial contributes iff all its variables are 1."""
    _check_point(x, q.n)
    mask = mask_from_bits(x)
    acc = 0
    for mono, coeff in q.monomials.items():
        if mono & mask == mono:
            acc += coeff
    return acc % q.p


def gate_value(gate: Gate, x: Sequence[int]) -> Union[int, Fraction]:
    if isinstance(gate, ThresholdGate):
        return eval_thr(gate, x)
    if isinstance(gate, ExactThresholdGate):
        return eval_ethr(gate, x)
    if isinstance(gate, ReluGate):
        return eval_relu(gate, x)
    if isinstance(gate, FpPolynomial):
        return eval_fp(gate, x)
    raise TypeError(f"unknown gate type {type(gate).__name__}")


@dataclass(frozen=True)
class LinComb:
    """A sparse linear combination sum_i alpha_i * gate_i of same-family gates."""

    family: Family
    coefficients: tuple[Fraction, ...]
    gates: tuple[Gate, ...]
    n: int = -1  # -1: infer from the first gate

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(
            self, "coefficients", tuple(as_fraction(c) for c in self.coefficients)
        )
        object.__setattr__(self, "gates", tuple(self.gates))
        if len(self.coefficients) != len(self.gates):
            raise ValueError("coefficient/gate count mismatch")
        typ = _FAMILY_TYPES[self.family]
        for g in self.gates:
            if not isinstance(g, typ):
                raise ValueError(
                    f"gate {type(g).__name__} does not belong to family {self.family.value}"
                )
        if self.n == -1:
            if not self.gates:
                raise ValueError("n is required for an empty combination")
            object.__setattr__(self, "n", self.gates[0].n)
        if self.n < 1:
            raise ValueError("n must be positive")
        for g in self.gates:
            if g.n != self.n:
                raise ValueError("gates disagree on the number of variables")
        if self.family is Family.FP_POLY:
            primes = {g.p for g in self.gates}
            if len(primes) > 1:
                raise ValueError("fp gates disagree on the prime")

    @property
    def sparsity(self) -> int:
        return len(self.gates)


def eval_lincomb(c: LinComb, x: Sequence[int]) -> Fraction:
    _check_point(x, c.n)
    acc = Fraction(0)
    for coeff, gate in zip(c.coefficients, c.gates):
        acc += coeff * gate_value(gate, x)
    return acc


def normalize_integer(gate: Gate) -> tuple[Gate, Fraction]:
    """Rescale a gate to integer weights, returning (gate, scale).

    THR: weights scaled by the LCD of the weights, threshold scaled and then
    ceiled (integer sums make [s >= t] and [s >= ceil(t)] agree) — same
    function.  ETHR: weights and target share the LCD — same function.
    RELU: weights and bias share the LCD; the normalized gate evaluates to
    scale times the original, so callers divide by the returned scale.
    """
    if isinstance(gate, ThresholdGate):
        scale = math.lcm(*(w.denominator for w in gate.weights))
        weights = tuple(Fraction(w * scale) for w in gate.weights)
        threshold = Fraction(math.ceil(gate.threshold * scale))
        return ThresholdGate(weights, threshold), Fraction(scale)
    if isinstance(gate, ExactThresholdGate):
        scale = math.lcm(
            *(w.denominator for w in gate.weights), gate.target.denominator
        )
        weights = tuple(Fraction(w * scale) for w in gate.weights)
        return ExactThresholdGate(weights, Fraction(gate.target * scale)), Fraction(scale)
    if isinstance(gate, ReluGate):
        scale = math.lcm(*(w.denominator for w in gate.weights), gate.bias.denominator)
        weights = tuple(Fraction(w * scale) for w in gate.weights)
        return ReluGate(weights, Fraction(gate.bias * scale)), Fraction(scale)
    raise TypeError(f"cannot normalize {type(gate).__name__}")


def integer_weights(gate: Union[ThresholdGate, ExactThresholdGate, ReluGate]) -> list[int]:
    """The weights as plain ints; raises if any weight is fractional."""
    out = []
    for w in gate.weights:
        if w.denominator != 1:
            raise ValueError("gate has non-integer weights; apply normalize_integer")
        out.append(w.numerator)
    return out
