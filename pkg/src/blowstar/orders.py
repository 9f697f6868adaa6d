"""Monomial orders: lex, graded reverse lex, and block elimination orders.

A block order ``block(E, inner)`` compares the exponents of the eliminated
variables E first (by grevlex) and falls back to the inner order on the
remaining variables, so any monomial touching E beats any monomial that
does not -- the property elimination rests on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UsageError
from .kernel import order_key

_KINDS = ("lex", "grevlex", "block")
_INNER = ("lex", "grevlex")


@dataclass(frozen=True)
class Order:
    kind: str
    elim: frozenset = field(default_factory=frozenset)
    inner: str = "grevlex"

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise UsageError(f"unknown order kind {self.kind!r}")
        if self.kind == "block" and not self.elim:
            raise UsageError("block order requires a nonempty eliminated set")
        if self.inner not in _INNER:
            raise UsageError(f"unknown inner order {self.inner!r}")

    def spec_for(self, table):
        """Kernel-level order descriptor for a concrete table."""
        if self.kind == "lex":
            return ("lex",)
        if self.kind == "grevlex":
            return ("grevlex",)
        missing = self.elim - set(table.names)
        if missing:
            raise UsageError(f"block order eliminates unknown variables {sorted(missing)}")
        mask = tuple(1 if n in self.elim else 0 for n in table.names)
        return ("block", mask, self.inner)

    def key(self, table):
        return order_key(self.spec_for(table))


LEX = Order("lex")
GREVLEX = Order("grevlex")


def block(elim, inner="grevlex"):
    return Order("block", frozenset(elim), inner)


def compare(m1, m2, order, table):
    """Three-way comparison of exponent tuples: positive when m1 > m2."""
    if len(m1) != len(table) or len(m2) != len(table):
        raise UsageError("monomial length does not match the table")
    k = order.key(table)
    a, b = k(tuple(m1)), k(tuple(m2))
    return (a > b) - (a < b)
