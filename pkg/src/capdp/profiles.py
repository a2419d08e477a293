"""Value profiles over a capacity index, with absorbing sentinels.

A profile is a finite sequence ``f[0..L]`` whose entries are integers or
one of two sentinels:

* ``BOTTOM``: no feasible choice at this index.  Identity-absorbing for
  max-plus work (any sum touching it is discarded).
* ``TOP``: the min-plus mirror (no feasible choice, weight side).

A profile never mixes the two sentinels: BOTTOM belongs to value-indexed
max profiles, TOP to weight-indexed min profiles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

import numpy as np

from ._kernels import (
    NEG_CODE,
    NEG_THRESH,
    POS_CODE,
    POS_THRESH,
    naive_maxplus_codes,
    naive_minplus_codes,
)
from .errors import ValidationError

# Finite inputs to the public ops are capped here; one addition of two
# capped payloads stays below the sentinel detection threshold.
VALUE_LIMIT = 1 << 55
_STORE_LIMIT = 1 << 57


class _Sentinel:
    __slots__ = ("_name",)

    def __init__(self, name: str) -> None:
        self._name = name

    def __repr__(self) -> str:
        return self._name

    def __reduce__(self):
        return (_sentinel_by_name, (self._name,))


BOTTOM = _Sentinel("BOTTOM")
TOP = _Sentinel("TOP")

ExtValue = Union[int, _Sentinel]


def _sentinel_by_name(name: str) -> _Sentinel:
    return BOTTOM if name == "BOTTOM" else TOP


def encode_value(v: ExtValue) -> int:
    if v is BOTTOM:
        return NEG_CODE
    if v is TOP:
        return POS_CODE
    if not isinstance(v, (int, np.integer)):
        raise ValidationError(f"profile entry must be int, BOTTOM or TOP, got {v!r}")
    iv = int(v)
    if abs(iv) > _STORE_LIMIT:
        raise ValidationError(f"profile entry {iv} exceeds the magnitude cap 2**57")
    return iv


def decode_code(c: int) -> ExtValue:
    if c <= NEG_THRESH:
        return BOTTOM
    if c >= POS_THRESH:
        return TOP
    return int(c)


class ValueProfile:
    """Immutable int64-backed sequence of ExtValue entries."""

    __slots__ = ("_codes",)

    def __init__(self, entries: Iterable[ExtValue]):
        codes = np.fromiter((encode_value(v) for v in entries), np.int64)
        if codes.shape[0] == 0:
            raise ValidationError("profile must have at least one entry")
        has_bot = bool(np.any(codes <= NEG_THRESH))
        has_top = bool(np.any(codes >= POS_THRESH))
        if has_bot and has_top:
            raise ValidationError("profile cannot mix BOTTOM and TOP")
        self._codes = codes
        codes.setflags(write=False)

    @classmethod
    def from_codes(cls, codes: np.ndarray) -> "ValueProfile":
        p = object.__new__(cls)
        arr = np.ascontiguousarray(codes, dtype=np.int64)
        arr.setflags(write=False)
        p._codes = arr
        return p

    @property
    def codes(self) -> np.ndarray:
        return self._codes

    def __len__(self) -> int:
        return int(self._codes.shape[0])

    def __getitem__(self, i):
        if isinstance(i, slice):
            return ValueProfile.from_codes(self._codes[i].copy())
        return decode_code(int(self._codes[i]))

    def __iter__(self) -> Iterator[ExtValue]:
        return (decode_code(int(c)) for c in self._codes)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ValueProfile):
            return bool(np.array_equal(self._codes, other._codes))
        if isinstance(other, (list, tuple)):
            try:
                return self == ValueProfile(other)
            except ValidationError:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._codes.tobytes())

    def __repr__(self) -> str:
        return f"ValueProfile({self.tolist()!r})"

    def tolist(self) -> list[ExtValue]:
        return [decode_code(int(c)) for c in self._codes]

    def running_max(self) -> "ValueProfile":
        """Entrywise best-so-far; turns an exact-index profile into at-most."""
        return ValueProfile.from_codes(np.maximum.accumulate(self._codes))

    def is_finite(self) -> bool:
        return bool(
            np.all(self._codes > NEG_THRESH) and np.all(self._codes < POS_THRESH)
        )


def as_codes(seq, *, op_limit: int = VALUE_LIMIT) -> np.ndarray:
    """Encode a ValueProfile or iterable for use as an op input."""
    if isinstance(seq, ValueProfile):
        codes = seq.codes
    else:
        codes = np.fromiter((encode_value(v) for v in seq), np.int64)
    if codes.shape[0] == 0:
        raise ValidationError("operand must have at least one entry")
    finite = (codes > NEG_THRESH) & (codes < POS_THRESH)
    if np.any(np.abs(codes[finite]) > op_limit):
        raise ValidationError("operand entries exceed the magnitude cap 2**55")
    return codes


def naive_maxplus_conv(a, b) -> ValueProfile:
    """c[i] = max over j of a[j] + b[i-j]; quadratic reference."""
    ac = as_codes(a)
    bc = as_codes(b)
    if np.any(ac >= POS_THRESH) or np.any(bc >= POS_THRESH):
        raise ValidationError("max-plus operands cannot contain TOP")
    return ValueProfile.from_codes(naive_maxplus_codes(ac, bc))


def naive_minplus_conv(a, b) -> ValueProfile:
    """c[i] = min over j of a[j] + b[i-j]; quadratic reference."""
    ac = as_codes(a)
    bc = as_codes(b)
    if np.any(ac <= NEG_THRESH) or np.any(bc <= NEG_THRESH):
        raise ValidationError("min-plus operands cannot contain BOTTOM")
    return ValueProfile.from_codes(naive_minplus_codes(ac, bc))


CONCAVE = "concave"
VIOLATION = "violation"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class ConcavityWitness:
    """Outcome of a concavity check.

    kind is one of CONCAVE, VIOLATION (index points at the middle of the
    offending triple), NOT_APPLICABLE (sentinel layout rules the check out).
    """

    kind: str
    index: int | None = None
    triple: tuple[ExtValue, ExtValue, ExtValue] | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.kind == CONCAVE


def _finite_core(codes: np.ndarray) -> tuple[int, int] | None:
    """Bounds of the finite block, or None if BOTTOMs are not a clean
    prefix/suffix (or a TOP shows up)."""
    n = codes.shape[0]
    if np.any(codes >= POS_THRESH):
        return None
    finite = codes > NEG_THRESH
    idx = np.flatnonzero(finite)
    if idx.shape[0] == 0:
        return (n, n - 1)
    p, q = int(idx[0]), int(idx[-1])
    if idx.shape[0] != q - p + 1:
        return None
    return (p, q)


def check_concave(seq) -> ConcavityWitness:
    """Concave means the finite diffs are non-increasing.

    BOTTOM entries are tolerated only as a contiguous prefix and/or suffix;
    anything else (interior holes, TOP) comes back NOT_APPLICABLE.
    """
    codes = as_codes(seq, op_limit=_STORE_LIMIT)
    core = _finite_core(codes)
    if core is None:
        return ConcavityWitness(NOT_APPLICABLE, note="sentinels break the finite core")
    p, q = core
    if p > q:
        return ConcavityWitness(CONCAVE, note="no finite entries")
    diffs = np.diff(codes[p:q + 1])
    bad = np.flatnonzero(diffs[1:] > diffs[:-1])
    if bad.shape[0]:
        i = p + 1 + int(bad[0])
        triple = (decode_code(int(codes[i - 1])),
                  decode_code(int(codes[i])),
                  decode_code(int(codes[i + 1])))
        return ConcavityWitness(VIOLATION, index=i, triple=triple)
    return ConcavityWitness(CONCAVE)


def check_kstep_concave(seq, k: int) -> ConcavityWitness:
    """k-step concave: entries at stride-k indices form a concave core and
    every off-stride entry repeats its predecessor."""
    if k < 1:
        raise ValidationError("stride k must be >= 1")
    codes = as_codes(seq, op_limit=_STORE_LIMIT)
    n = codes.shape[0]
    if n > 1:
        off = (np.arange(1, n) % k) != 0
        moved = codes[1:] != codes[:-1]
        viol = np.flatnonzero(off & moved)
        if viol.shape[0]:
            i = int(viol[0]) + 1
            lo = decode_code(int(codes[i - 1]))
            mid = decode_code(int(codes[i]))
            hi = decode_code(int(codes[i + 1])) if i + 1 < n else None
            return ConcavityWitness(
                VIOLATION, index=i,
                triple=(lo, mid, hi),
                note="off-stride entry differs from its predecessor",
            )
    core_codes = codes[::k]
    witness = check_concave(ValueProfile.from_codes(core_codes.copy()))
    if witness.kind == CONCAVE:
        return ConcavityWitness(CONCAVE)
    if witness.kind == NOT_APPLICABLE:
        return ConcavityWitness(NOT_APPLICABLE, note=witness.note)
    ci = witness.index * k
    return ConcavityWitness(VIOLATION, index=ci, triple=witness.triple,
                            note="stride core is not concave")
