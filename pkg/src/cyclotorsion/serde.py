"""Serialization conventions: rationals as "p/q" strings, canonical JSON."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any


def frac_to_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def frac_from_str(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def canonical_json(obj: Any) -> str:
    """Deterministic rendering used for digests and on-disk artifacts."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def json_digest(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()
