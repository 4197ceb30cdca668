"""Root counting and Sum-Products for low-degree polynomials over F_p.

The fast root counter splits off the last m = floor(n/(6dp)) variables,
sums a modulus-amplified indicator over all suffix assignments, and reads
per-prefix suffix-root counts out of the residues of a single polynomial over
the remaining variables.  Systems and Sum-Products reduce to root counts by
summing over coefficient and target tuples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import CapExceeded, InvariantViolation
from .gates import FpPolynomial, _is_prime

DEFAULT_DENSE_CAP = 26
_NP_MODULUS_LIMIT = 1 << 31


def _poly_mul_dense(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@dataclass(frozen=True)
class ModAmplifier:
    """Integer polynomial of degree 2*ell - 1 with P(y) == y^... amplified:

    y = 0 (mod m)  =>  P(y) = 0 (mod m^ell)
    y = 1 (mod m)  =>  P(y) = 1 (mod m^ell)

    for every modulus m.  ``coefficients[i]`` is the coefficient of y^i.
    """

    ell: int
    coefficients: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, y: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * y + c
        return acc


def mod_amplifier(ell: int) -> ModAmplifier:
    """P_ell(y) = 1 - (1-y)^ell * sum_{j<ell} C(ell+j-1, j) y^j, expanded."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    one_minus_y_pow = [1]
    for _ in range(ell):
        one_minus_y_pow = _poly_mul_dense(one_minus_y_pow, [1, -1])
    inner = [math.comb(ell + j - 1, j) for j in range(ell)]
    prod = _poly_mul_dense(one_minus_y_pow, inner)
    coeffs = [-c for c in prod]
    coeffs[0] += 1
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return ModAmplifier(ell, tuple(coeffs))


@dataclass(frozen=True)
class MultilinearRingPoly:
    """Multilinear polynomial over Z/modulus with subset-mask monomials."""

    modulus: int
    n_vars: int
    coeffs: dict[int, int]

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        if self.n_vars < 0:
            raise ValueError("n_vars must be >= 0")
        reduced = {}
        for mask, c in self.coeffs.items():
            if mask < 0 or mask >> self.n_vars:
                raise ValueError(f"mask {mask} out of range for n_vars={self.n_vars}")
            c %= self.modulus
            if c:
                reduced[mask] = c
        object.__setattr__(self, "coeffs", reduced)

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def constant(cls, modulus: int, n_vars: int, value: int) -> "MultilinearRingPoly":
        return cls(modulus, n_vars, {0: value})

    @property
    def degree(self) -> int:
        return max((m.bit_count() for m in self.coeffs), default=0)

    def _compatible(self, other: "MultilinearRingPoly") -> None:
        if self.modulus != other.modulus or self.n_vars != other.n_vars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "MultilinearRingPoly") -> "MultilinearRingPoly":
        self._compatible(other)
        out = dict(self.coeffs)
        for mask, c in other.coeffs.items():
            out[mask] = out.get(mask, 0) + c
        return MultilinearRingPoly(self.modulus, self.n_vars, out)

    def __sub__(self, other: "MultilinearRingPoly") -> "MultilinearRingPoly":
        self._compatible(other)
        out = dict(self.coeffs)
        for mask, c in other.coeffs.items():
            out[mask] = out.get(mask, 0) - c
        return MultilinearRingPoly(self.modulus, self.n_vars, out)

    def __mul__(self, other: "MultilinearRingPoly") -> "MultilinearRingPoly":
        """Product with multilinear reduction: x_i^2 = x_i, so monomial masks
        combine by union."""
        self._compatible(other)
        out: dict[int, int] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                key = m1 | m2
                out[key] = out.get(key, 0) + c1 * c2
        return MultilinearRingPoly(self.modulus, self.n_vars, out)

    def scaled(self, factor: int) -> "MultilinearRingPoly":
        return MultilinearRingPoly(
            self.modulus, self.n_vars, {m: c * factor for m, c in self.coeffs.items()}
        )


def _eval_table(poly: MultilinearRingPoly):
    """Values of ``poly`` at every point, index = point mask.

    Subset-sum (zeta) transform over the coefficient table: after processing
    variable i, entry ``mask`` holds the sum of coefficients over monomials
    contained in ``mask`` restricted to the processed variables.
    """
    nv = poly.n_vars
    size = 1 << nv
    if poly.modulus <= _NP_MODULUS_LIMIT:
        f = np.zeros(size, dtype=np.int64)
        for mask, c in poly.coeffs.items():
            f[mask] = c
        for i in range(nv):
            view = f.reshape(-1, 2, 1 << i)
            view[:, 1, :] += view[:, 0, :]
            f %= poly.modulus
        return f
    f = [0] * size
    for mask, c in poly.coeffs.items():
        f[mask] = c
    mod = poly.modulus
    for i in range(nv):
        bit = 1 << i
        for mask in range(size):
            if mask & bit:
                f[mask] = (f[mask] + f[mask ^ bit]) % mod
    return f


def eval_all_points(
    poly: MultilinearRingPoly, dense_cap: int = DEFAULT_DENSE_CAP
) -> list[int]:
    """Dense table of poly values on {0,1}^n_vars (exact residues)."""
    if poly.n_vars > dense_cap:
        raise CapExceeded(
            f"dense table over {poly.n_vars} variables, cap is {dense_cap}"
        )
    table = _eval_table(poly)
    if isinstance(table, np.ndarray):
        return [int(v) for v in table]
    return table


@dataclass(frozen=True)
class FpSumProdParams:
    """Shape parameters for the F_p pipeline; m is the suffix-variable count."""

    p: int
    d: int
    k: int
    n: int

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.d < 1 or self.k < 1 or self.n < 1:
            raise ValueError("d, k, n must be positive")

    @property
    def m(self) -> int:
        return self.n // (6 * self.d * self.p)


def amplifier_order(p: int, m: int) -> int:
    """Amplification level whose modulus p^ell can hold any count 0..2^m.

    For p >= 3, p^m already exceeds 2^m.  For p = 2 one extra level is needed:
    a prefix whose suffixes are all roots has count 2^m = 0 (mod 2^m), which
    would collide with a rootless prefix.
    """
    return m + 1 if p == 2 else m


def suffix_count_poly(
    q: FpPolynomial, params: FpSumProdParams
) -> MultilinearRingPoly:
    """Polynomial over the first n-m variables whose residues count suffix roots.

    For every prefix b, the value mod p^ell equals |{a in {0,1}^m :
    q(b, a) = 0 mod p}|, where the suffix is the last m variables.  Built by
    summing amplifier(1 - q_sub^(p-1)) over all 2^m suffix assignments in
    Z/p^ell; q_sub is q with the suffix substituted, coefficients lifted.
    """
    if q.p != params.p or q.n != params.n:
        raise ValueError("polynomial and parameters disagree")
    m = params.m
    if m < 1:
        raise ValueError("m = 0: no suffix to split off, use direct enumeration")
    p = q.p
    n = q.n
    prefix_vars = n - m
    ell = amplifier_order(p, m)
    modulus = p**ell
    amp = mod_amplifier(ell)
    amp_coeffs = [c % modulus for c in amp.coefficients]
    one = MultilinearRingPoly.constant(modulus, prefix_vars, 1)
    total = MultilinearRingPoly(modulus, prefix_vars, {})
    prefix_mask = (1 << prefix_vars) - 1
    for a in range(1 << m):
        sub: dict[int, int] = {}
        for mask, c in q.monomials.items():
            if (mask >> prefix_vars) & ~a:
                continue
            key = mask & prefix_mask
            sub[key] = sub.get(key, 0) + c
        q_sub = MultilinearRingPoly(modulus, prefix_vars, sub)
        power = q_sub
        for _ in range(p - 2):
            power = power * q_sub
        y = one - power
        acc = MultilinearRingPoly.constant(modulus, prefix_vars, amp_coeffs[-1])
        for c in reversed(amp_coeffs[:-1]):
            acc = acc * y + MultilinearRingPoly.constant(modulus, prefix_vars, c)
        total = total + acc
    return total


# must hold all p^k combination polynomials of one system (p <= 5, k <= 4)
@lru_cache(maxsize=4096)
def _value_histogram(p: int, n: int, items: tuple[tuple[int, int], ...]) -> tuple[int, ...]:
    """hist[v] = |{x : poly(x) = v mod p}| for the nonconstant part ``items``."""
    poly = MultilinearRingPoly(p, n, dict(items))
    table = _eval_table(poly)
    if isinstance(table, np.ndarray):
        return tuple(int(c) for c in np.bincount(table, minlength=p))
    hist = [0] * p
    for v in table:
        hist[v] += 1
    return tuple(hist)


def count_roots(q: FpPolynomial, *, dense_cap: int = DEFAULT_DENSE_CAP) -> int:
    """|{x in {0,1}^n : q(x) = 0 mod p}|.

    Constant polynomials are answered directly.  When m = floor(n/(6dp)) >= 1
    (d the actual degree), the suffix-count construction reduces the table to
    2^(n-m) entries whose residues are exact counts; otherwise the value
    histogram of a full dense evaluation is used.
    """
    nonconst = {mask: c for mask, c in q.monomials.items() if mask}
    const = q.monomials.get(0, 0)
    if not nonconst:
        return (1 << q.n) if const % q.p == 0 else 0
    d = max(mask.bit_count() for mask in nonconst)
    m = q.n // (6 * d * q.p)
    if m >= 1:
        if q.n - m > dense_cap:
            raise CapExceeded(
                f"dense table over {q.n - m} variables, cap is {dense_cap}"
            )
        params = FpSumProdParams(p=q.p, d=d, k=1, n=q.n)
        counter = suffix_count_poly(q, params)
        table = _eval_table(counter)
        if isinstance(table, np.ndarray):
            return int(table.sum())
        return sum(table)
    if q.n > dense_cap:
        raise CapExceeded(f"dense table over {q.n} variables, cap is {dense_cap}")
    hist = _value_histogram(q.p, q.n, tuple(sorted(nonconst.items())))
    return hist[(-const) % q.p]


def _shared_shape(polys: Sequence[FpPolynomial]) -> tuple[int, int]:
    if not polys:
        raise ValueError("need at least one polynomial")
    p = polys[0].p
    n = polys[0].n
    for q in polys:
        if q.p != p:
            raise ValueError("polynomials disagree on the prime")
        if q.n != n:
            raise ValueError("polynomials disagree on the number of variables")
    return p, n


def _combination(
    polys: Sequence[FpPolynomial],
    coeffs: Sequence[int],
    targets: Sequence[int],
    p: int,
    n: int,
) -> FpPolynomial:
    """sum_j coeffs[j] * (polys[j] - targets[j]) as an F_p polynomial."""
    acc: dict[int, int] = {}
    for b, q, t in zip(coeffs, polys, targets):
        if not b:
            continue
        for mask, c in q.monomials.items():
            acc[mask] = acc.get(mask, 0) + b * c
        acc[0] = acc.get(0, 0) - b * t
    return FpPolynomial(p, n, acc)


def count_system(
    polys: Sequence[FpPolynomial],
    targets: Sequence[int],
    *,
    dense_cap: int = DEFAULT_DENSE_CAP,
    with_accumulator: bool = False,
):
    """|{x : polys[j](x) = targets[j] mod p for all j}|.

    Sums, over all coefficient tuples b in F_p^k, the number of roots of
    sum_j b_j (polys[j] - targets[j]) minus the number of points where that
    combination equals 1; the accumulator is p^k times the answer.  A
    non-divisible accumulator indicates a bug and raises InvariantViolation.
    """
    p, n = _shared_shape(polys)
    k = len(polys)
    if len(targets) != k:
        raise ValueError("polynomial/target count mismatch")
    targets = [t % p for t in targets]
    acc = 0
    for b in itertools.product(range(p), repeat=k):
        comb = _combination(polys, b, targets, p, n)
        zeros = count_roots(comb, dense_cap=dense_cap)
        shifted = dict(comb.monomials)
        shifted[0] = shifted.get(0, 0) - 1
        ones = count_roots(FpPolynomial(p, n, shifted), dense_cap=dense_cap)
        acc += zeros - ones
    if acc % p**k:
        raise InvariantViolation(
            f"accumulator {acc} not divisible by p^k = {p**k}"
        )
    count = acc // p**k
    if with_accumulator:
        return count, acc
    return count


def sumprod_fp(
    polys: Sequence[FpPolynomial],
    n: Optional[int] = None,
    *,
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> int:
    """sum over x of prod_i lift(polys[i](x)), values lifted to {0..p-1}.

    Expands the product over value tuples: tuples containing a zero value
    carry weight zero and are skipped; each remaining tuple contributes its
    integer product of values times the number of points realizing it.
    """
    if not polys:
        if n is None:
            raise ValueError("n is required when the polynomial list is empty")
        return 1 << n
    p, shape_n = _shared_shape(polys)
    if n is not None and n != shape_n:
        raise ValueError(f"explicit n={n} disagrees with the polynomials")
    k = len(polys)
    total = 0
    for values in itertools.product(range(1, p), repeat=k):
        weight = 1
        for v in values:
            weight *= v
        total += weight * count_system(polys, values, dense_cap=dense_cap)
    return total
