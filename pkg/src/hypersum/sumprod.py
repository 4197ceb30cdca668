"""Exact Sum-Products of gate products over the Boolean hypercube.

Threshold and ReLU products are expanded into sums over tuples of
exact-threshold targets, every tuple's conjunction is packed into a single
subset-sum query against one shared weight vector, and all queries reuse the
same pair of half-enumeration tables.  The packed base is chosen once per
call, large enough for every tuple, so the expensive half enumeration happens
once rather than per tuple.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import CapExceeded
from .fppoly import DEFAULT_DENSE_CAP, sumprod_fp
from .gates import (
    ExactThresholdGate,
    FpPolynomial,
    Gate,
    ReluGate,
    ThresholdGate,
    normalize_integer,
)
from .mitm import count_subset_sum, half_sums, split_point
from .transforms import (
    DEFAULT_TERM_CAP,
    collapse_ethr_conjunction,
    thr_to_ethrs,
)

DEFAULT_TUPLE_CAP = 10**7

# numpy kernels must not overflow int64 partial results
_INT64_BOUND = 1 << 62


def _shared_n(gates: Sequence, n: Optional[int]) -> int:
    if not gates:
        if n is None:
            raise ValueError("n is required when no gates are given")
        return n
    sizes = {g.n for g in gates}
    if len(sizes) != 1:
        raise ValueError("gates disagree on the number of variables")
    size = sizes.pop()
    if n is not None and n != size:
        raise ValueError(f"explicit n={n} disagrees with the gates")
    return size


class _PairCounter:
    """Split-and-list tables for one integer weight vector, queried many times.

    count(t) returns |{x : <w, x> = t}|; the half enumerations and their
    aggregation are done once at construction.
    """

    def __init__(self, weights: Sequence[int]) -> None:
        ws = [int(w) for w in weights]
        h = split_point(len(ws))
        first = half_sums(ws[:h])
        second = half_sums(ws[h:])
        self.vector_mode = isinstance(first, np.ndarray) and isinstance(
            second, np.ndarray
        )
        if self.vector_mode:
            k1, c1 = np.unique(first, return_counts=True)
            k2, c2 = np.unique(second, return_counts=True)
            if len(k1) <= len(k2):
                self.loop_keys, self.loop_counts = k1, c1
                self.match_keys, self.match_counts = k2, c2
            else:
                self.loop_keys, self.loop_counts = k2, c2
                self.match_keys, self.match_counts = k1, c1
            self.max_match = int(self.match_counts.max())
        else:
            agg1 = Counter(first if isinstance(first, list) else first.tolist())
            agg2 = Counter(second if isinstance(second, list) else second.tolist())
            if len(agg1) <= len(agg2):
                self.loop_items, self.match_dict = sorted(agg1.items()), dict(agg2)
            else:
                self.loop_items, self.match_dict = sorted(agg2.items()), dict(agg1)

    def count(self, target: int) -> int:
        if self.vector_mode:
            need = int(target) - self.loop_keys
            idx = np.searchsorted(self.match_keys, need)
            idx[idx == len(self.match_keys)] = 0
            hit = self.match_keys[idx] == need
            pair = self.loop_counts[hit].astype(object) * self.match_counts[
                idx[hit]
            ].astype(object)
            return int(pair.sum())
        total = 0
        for key, cnt in self.loop_items:
            other = self.match_dict.get(target - key)
            if other:
                total += cnt * other
        return total

    def weighted_total(self, targets: np.ndarray, coeffs) -> int:
        """sum over i of coeffs[i] * count(targets[i]); vector mode only.

        The caller guarantees the int64 bound on every partial product.
        """
        total = 0
        for key, cnt in zip(self.loop_keys.tolist(), self.loop_counts.tolist()):
            need = targets - key
            idx = np.searchsorted(self.match_keys, need)
            idx[idx == len(self.match_keys)] = 0
            hit = self.match_keys[idx] == need
            matched = self.match_counts[idx[hit]]
            if coeffs is None:
                sub = int(matched.sum())
            else:
                sub = int(np.dot(coeffs[hit], matched))
            total += cnt * sub
        return total


def _tuple_count(lists: Sequence[Sequence], cap: int) -> int:
    count = 1
    for lst in lists:
        count *= len(lst)
        if count > cap:
            raise CapExceeded(f"product expansion needs > {cap} tuples")
    return count


def _packed_base(span_and_targets: Sequence[tuple[int, int]]) -> int:
    """Base B so per-gate digits of any packed target/sum cannot interfere.

    Each entry is (sum of |weights|, max |target|) for one gate; B exceeds
    twice every digit magnitude that can arise.
    """
    return 2 * sum(span + tmax for span, tmax in span_and_targets) + 1


def _packed_weights(
    weight_rows: Sequence[Sequence[int]], base: int, n: int
) -> list[int]:
    packed = [0] * n
    scale = 1
    for row in weight_rows:
        for j, w in enumerate(row):
            packed[j] += scale * w
        scale *= base
    return packed


def _packed_target_arrays(target_lists: Sequence[Sequence[int]], base: int):
    """Per-gate target lists scaled by the gate's base power."""
    out = []
    scale = 1
    for targets in target_lists:
        out.append([scale * t for t in targets])
        scale *= base
    return out


def _cartesian_sums_np(scaled_lists) -> np.ndarray:
    arr = np.array(scaled_lists[0], dtype=np.int64)
    for lst in scaled_lists[1:]:
        nxt = np.array(lst, dtype=np.int64)
        arr = (arr[:, None] + nxt[None, :]).ravel()
    return arr


def sumprod_thr(
    gates: Sequence[ThresholdGate],
    n: Optional[int] = None,
    *,
    term_cap: int = DEFAULT_TERM_CAP,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
) -> int:
    """sum over x of prod_i [<w_i, x> >= t_i], exactly.

    Each gate is decomposed into exact-threshold gates at consecutive targets,
    the product expands into disjoint target tuples, and every tuple becomes
    one lookup against a shared pair of half tables.
    """
    n = _shared_n(gates, n)
    if not gates:
        return 1 << n
    weight_rows = []
    target_lists = []
    spans = []
    for gate in gates:
        scaled, _ = normalize_integer(gate)
        parts = thr_to_ethrs(scaled, term_cap)
        if not parts:
            return 0
        ws = [w.numerator for w in scaled.weights]
        targets = [g.target.numerator for g in parts]
        weight_rows.append(ws)
        target_lists.append(targets)
        spans.append((sum(abs(w) for w in ws), max(abs(targets[0]), abs(targets[-1]))))
    n_tuples = _tuple_count(target_lists, tuple_cap)
    base = _packed_base(spans)
    packed = _packed_weights(weight_rows, base, n)
    scaled_lists = _packed_target_arrays(target_lists, base)
    counter = _PairCounter(packed)
    max_target = sum(max(abs(v) for v in lst) for lst in scaled_lists)
    key_bound = sum(abs(w) for w in packed) + max_target
    match_bound = n_tuples * (1 << (n - split_point(n)))
    if counter.vector_mode and key_bound < _INT64_BOUND and match_bound < _INT64_BOUND:
        targets = _cartesian_sums_np(scaled_lists)
        return counter.weighted_total(targets, None)
    total = 0
    for combo in itertools.product(*scaled_lists):
        total += counter.count(sum(combo))
    return total


def _relu_supports(
    gate: ReluGate, term_cap: int
) -> tuple[list[int], list[int], list[int]]:
    """(weights, targets, values) of the scaled gate's positive support.

    The gate must have integer weights and bias; it equals
    sum_t (t + bias) * [<w, x> = t] over the returned targets, all of which
    give positive values.
    """
    ws = [w.numerator for w in gate.weights]
    bias = gate.bias.numerator
    lo = sum(w for w in ws if w < 0)
    hi = sum(w for w in ws if w > 0)
    start = max(lo, 1 - bias)
    if start > hi:
        return ws, [], []
    if hi - start + 1 > term_cap:
        raise CapExceeded(
            f"relu decomposition needs {hi - start + 1} terms, cap is {term_cap}"
        )
    targets = list(range(start, hi + 1))
    return ws, targets, [t + bias for t in targets]


def sumprod_relu(
    gates: Sequence[ReluGate],
    n: Optional[int] = None,
    *,
    term_cap: int = DEFAULT_TERM_CAP,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
) -> Fraction:
    """sum over x of prod_i max(0, <w_i, x> + a_i), exactly.

    Gates are rescaled to integers, their positive supports expand the product
    into target tuples weighted by the product of clamped values, and the
    integer total is divided back by the product of the rescaling factors.
    """
    n = _shared_n(gates, n)
    if not gates:
        return Fraction(1 << n)
    denom = 1
    weight_rows = []
    target_lists = []
    value_lists = []
    spans = []
    for gate in gates:
        scaled, scale = normalize_integer(gate)
        denom *= scale
        ws, targets, values = _relu_supports(scaled, term_cap)
        if not targets:
            return Fraction(0)
        weight_rows.append(ws)
        target_lists.append(targets)
        value_lists.append(values)
        spans.append((sum(abs(w) for w in ws), max(abs(targets[0]), abs(targets[-1]))))
    n_tuples = _tuple_count(target_lists, tuple_cap)
    base = _packed_base(spans)
    packed = _packed_weights(weight_rows, base, n)
    scaled_lists = _packed_target_arrays(target_lists, base)
    counter = _PairCounter(packed)
    max_coeff = 1
    for values in value_lists:
        max_coeff *= max(values)
    max_target = sum(max(abs(v) for v in lst) for lst in scaled_lists)
    key_bound = sum(abs(w) for w in packed) + max_target
    match_bound = n_tuples * (1 << (n - split_point(n))) * max_coeff
    if counter.vector_mode and key_bound < _INT64_BOUND and match_bound < _INT64_BOUND:
        targets = _cartesian_sums_np(scaled_lists)
        coeffs = _cartesian_products_np(value_lists)
        total = counter.weighted_total(targets, coeffs)
        return Fraction(total) / denom
    total = 0
    for picks in itertools.product(*[list(zip(s, v)) for s, v in zip(scaled_lists, value_lists)]):
        t = sum(p[0] for p in picks)
        coeff = 1
        for p in picks:
            coeff *= p[1]
        total += coeff * counter.count(t)
    return Fraction(total) / denom


def _cartesian_products_np(value_lists) -> np.ndarray:
    arr = np.array(value_lists[0], dtype=np.int64)
    for lst in value_lists[1:]:
        nxt = np.array(lst, dtype=np.int64)
        arr = (arr[:, None] * nxt[None, :]).ravel()
    return arr


def sumprod_ethr(
    gates: Sequence[ExactThresholdGate],
    n: Optional[int] = None,
) -> int:
    """sum over x of prod_i [<w_i, x> = t_i]: collapse to one gate, then count."""
    n = _shared_n(gates, n)
    if not gates:
        return 1 << n
    scaled = [normalize_integer(g)[0] for g in gates]
    merged = collapse_ethr_conjunction(scaled)
    return count_subset_sum(
        [w.numerator for w in merged.weights], merged.target.numerator
    )


def sumprod(
    gates: Sequence[Gate],
    n: Optional[int] = None,
    *,
    term_cap: int = DEFAULT_TERM_CAP,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> Union[int, Fraction]:
    """sum over x in {0,1}^n of prod_i gate_i(x), dispatched on the family.

    All gates must belong to one family.  Threshold, exact-threshold and
    field-polynomial products are integers; ReLU products are Fractions.
    An empty product is the constant 1, so the result is 2^n.
    """
    if not gates:
        if n is None:
            raise ValueError("n is required when no gates are given")
        return 1 << n
    kinds = {type(g) for g in gates}
    if len(kinds) != 1:
        raise ValueError("gates must share one family")
    kind = kinds.pop()
    if kind is ThresholdGate:
        return sumprod_thr(gates, n, term_cap=term_cap, tuple_cap=tuple_cap)
    if kind is ExactThresholdGate:
        return sumprod_ethr(gates, n)
    if kind is ReluGate:
        return sumprod_relu(gates, n, term_cap=term_cap, tuple_cap=tuple_cap)
    if kind is FpPolynomial:
        return sumprod_fp(list(gates), n, dense_cap=dense_cap)
    raise TypeError(f"unsupported gate type {kind.__name__}")
