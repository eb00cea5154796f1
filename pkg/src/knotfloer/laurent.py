"""Symmetric Laurent polynomials with integer coefficients.

These carry Alexander polynomials: symmetric under T <-> 1/T and
normalized to take the value 1 at T = 1.
"""

from __future__ import annotations


class LaurentPoly:
    """Laurent polynomial in T over the integers, stored sparsely."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls({0: 1})

    def coeff(self, e: int) -> int:
        return self.coeffs.get(e, 0)

    @property
    def degree(self) -> int:
        """Top exponent; for an Alexander polynomial this is the genus."""
        if not self.coeffs:
            return 0
        return max(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    def substitute_power(self, p: int) -> LaurentPoly:
        """T -> T^p."""
        return LaurentPoly({e * p: c for e, c in self.coeffs.items()})

    def eval_at_one(self) -> int:
        return sum(self.coeffs.values())

    def is_symmetric(self) -> bool:
        return all(self.coeff(-e) == c for e, c in self.coeffs.items())

    def exponents_desc(self) -> list[int]:
        return sorted(self.coeffs, reverse=True)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in self.exponents_desc():
            c = self.coeffs[e]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else f"{mag}*") + (f"T^{e}" if e != 1 else "T")
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_json_obj(self) -> dict:
        return {"coeffs": [{"exp": e, "coef": self.coeffs[e]} for e in self.exponents_desc()]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> LaurentPoly:
        return cls({int(item["exp"]): int(item["coef"]) for item in obj["coeffs"]})
