"""Exact multivariate polynomials over Q with named variables.

This is the substrate for every ring in the toolkit:

* ground polynomial rings Q[x1..xm],
* the same rings with the distinguished indeterminate ``t`` adjoined
  (kept last in the table by convention),
* blowup chart rings, which add reserved variables ``y1..yn`` on top of
  the ground variables.

Coefficients are ``fractions.Fraction`` values, which already satisfy the
required normal form (reduced, positive denominator, canonical zero).
A monomial is an exponent tuple parallel to the variable table; a
polynomial is an immutable mapping from monomials to nonzero coefficients,
stored in descending graded-reverse-lex order so printing and iteration
are deterministic.

Text syntax (used by the CLI and throughout the tests)::

    poly    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := '-' factor | atom ('^' INT)?
    atom    := INT ('/' INT)? | VAR | '(' poly ')'
    VAR     := [a-z][a-z0-9_]*

Juxtaposition is not multiplication: write ``3*x``, never ``3x``.
``parse_poly`` and ``str()`` round-trip bit-exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError, UsageError
from .kernel import order_key

Rat = Fraction

_NAME_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_CHART_RE = re.compile(r"y[0-9]")

_GREVLEX_FULL = ("grevlex",)


class VarTable:
    """Ordered, duplicate-free list of variable names.

    ``t`` is reserved for the Nagata indeterminate and sits last when
    present; names matching ``y<digit>...`` are reserved for blowup chart
    variables and are only introduced by the chart builder.
    """

    __slots__ = ("names", "_index")

    def __init__(self, names):
        self.names = tuple(names)
        self._index = {n: i for i, n in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise UsageError(f"duplicate variable names in {self.names}")

    def __eq__(self, other):
        return isinstance(other, VarTable) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarTable{self.names}"

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UsageError(f"unknown variable {name!r} (table {self.names})") from None

    @property
    def has_t(self):
        return "t" in self._index

    def with_t(self):
        """Table with t adjoined last (idempotent)."""
        if self.has_t:
            return self
        return VarTable(self.names + ("t",))

    def without(self, drop):
        drop = set(drop)
        for d in drop:
            if d not in self._index:
                raise UsageError(f"cannot drop {d!r}: not in table {self.names}")
        return VarTable(tuple(n for n in self.names if n not in drop))

    def extend(self, extra):
        """Internal: adjoin extra variables at the end, bypassing name checks."""
        return VarTable(self.names + tuple(extra))

    def fresh_aux(self, base="w"):
        """A variable name not present in the table (for elimination tricks)."""
        if base not in self._index:
            return base
        k = 0
        while f"{base}{k}" in self._index:
            k += 1
        return f"{base}{k}"


def table(*names, t=False):
    """Public table factory: validates names against the reserved patterns."""
    for n in names:
        if not _NAME_RE.match(n):
            raise UsageError(f"invalid variable name {n!r}")
        if n == "t":
            raise UsageError("'t' is reserved; request it with t=True")
        if _CHART_RE.match(n):
            raise UsageError(f"{n!r} is reserved for chart variables (y<digit>)")
    names = tuple(names) + (("t",) if t else ())
    return VarTable(names)


class Poly:
    """Immutable exact polynomial attached to a VarTable.

    ``terms`` maps exponent tuples to nonzero Fractions and is kept in
    descending grevlex order over the full table.  Two polynomials are
    equal iff their tables and term maps are equal.
    """

    __slots__ = ("table", "terms")

    def __init__(self, table, terms):
        self.table = table
        clean = {m: c for m, c in terms.items() if c}
        key = order_key(_GREVLEX_FULL)
        self.terms = {m: clean[m] for m in sorted(clean, key=key, reverse=True)}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, table):
        return cls(table, {})

    @classmethod
    def one(cls, table):
        return cls.const(table, 1)

    @classmethod
    def const(cls, table, value):
        c = Fraction(value)
        if not c:
            return cls(table, {})
        return cls(table, {(0,) * len(table): c})

    @classmethod
    def var(cls, table, name, exp=1):
        e = [0] * len(table)
        e[table.index(name)] = exp
        return cls(table, {tuple(e): Fraction(1)})

    # -- predicates and views ----------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0,) * len(self.table): Fraction(1)}

    def is_constant(self):
        return all(not any(m) for m in self.terms)

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise UsageError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def deg_var(self, name):
        """Degree in one variable (0 when the variable is absent or f = 0)."""
        if not self.terms:
            return 0
        i = self.table.index(name)
        return max(m[i] for m in self.terms)

    def deg_in(self, names):
        """Max joint degree over the given variables across all terms."""
        if not self.terms:
            return 0
        idx = [self.table.index(n) for n in names]
        return max(sum(m[i] for i in idx) for m in self.terms)

    def variables(self):
        """Names with a nonzero exponent somewhere."""
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.table.names[i])
        return used

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if self.table != other.table:
            raise UsageError(
                f"mismatched variable tables {self.table.names} vs {other.table.names}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.table, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            nv = out.get(m, Fraction(0)) + c
            if nv:
                out[m] = nv
            else:
                out.pop(m, None)
        return Poly(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.table, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Poly(self.table, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                nv = out.get(m, Fraction(0)) + c1 * c2
                if nv:
                    out[m] = nv
                else:
                    del out[m]
        return Poly(self.table, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise UsageError("polynomial powers must be non-negative integers")
        result = Poly.one(self.table)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def mul_term(self, mono, coeff):
        """Multiply by coeff * (monomial given as an exponent tuple)."""
        c = Fraction(coeff)
        if not c:
            return Poly.zero(self.table)
        return Poly(
            self.table,
            {tuple(a + b for a, b in zip(m, mono)): v * c for m, v in self.terms.items()},
        )

    def monic(self):
        if not self.terms:
            return self
        lc = next(iter(self.terms.values()))
        if lc == 1:
            return self
        return self * (Fraction(1) / lc)

    # -- structure ops -------------------------------------------------------

    def cast(self, target):
        """Re-express over another table; every used variable must exist there."""
        if target == self.table:
            return self
        positions = []
        for i, n in enumerate(self.table.names):
            positions.append(target._index.get(n))
        width = len(target)
        out = {}
        for m, c in self.terms.items():
            e = [0] * width
            for i, exp in enumerate(m):
                if not exp:
                    continue
                j = positions[i]
                if j is None:
                    raise UsageError(
                        f"cannot cast: variable {self.table.names[i]!r} missing "
                        f"from target table {target.names}"
                    )
                e[j] = exp
            out[tuple(e)] = c
        return Poly(target, out)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.table == other.table
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.table, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- printing ------------------------------------------------------------

    def _mono_str(self, m):
        parts = []
        for name, e in zip(self.table.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        first = True
        for m, c in self.terms.items():
            mono = self._mono_str(m)
            neg = c < 0
            mag = -c if neg else c
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = f"{mag}"
            if first:
                out.append(("-" if neg else "") + body)
                first = False
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Poly({self})"


# -- t-coefficient calculus ---------------------------------------------------


def coeffs_in_t(f):
    """Write f = sum c_i * t^i and return [(i, c_i)] ascending, c_i free of t.

    The coefficients live in the table with t removed.
    """
    if not f.table.has_t:
        raise UsageError("coeffs_in_t: table has no variable 't'")
    ti = f.table.index("t")
    sub = f.table.without(("t",))
    buckets = {}
    for m, c in f.terms.items():
        d = m[ti]
        rest = tuple(e for i, e in enumerate(m) if i != ti)
        buckets.setdefault(d, {})[rest] = c
    return [(d, Poly(sub, buckets[d])) for d in sorted(buckets)]


def poly_from_t_coeffs(pairs, table_with_t):
    """Inverse of coeffs_in_t: rebuild sum c_i * t^i over the given table."""
    if not table_with_t.has_t:
        raise UsageError("target table has no variable 't'")
    t = Poly.var(table_with_t, "t")
    out = Poly.zero(table_with_t)
    for d, c in pairs:
        out = out + c.cast(table_with_t) * t**d
    return out


def deg_t(f):
    """Degree in t; 0 for t-free polynomials (including 0)."""
    if not f.table.has_t:
        return 0
    return f.deg_var("t")


# -- substitution ---------------------------------------------------------------


def subst(f, repl, target):
    """Substitute variables by polynomials over ``target``.

    ``repl`` maps names to Poly values over target; unmapped variables must
    exist in target and map to themselves.
    """
    cache = {}

    def power(name, e):
        p = cache.get((name, e))
        if p is None:
            base = repl[name] if name in repl else Poly.var(target, name)
            p = base**e
            cache[(name, e)] = p
        return p

    out = Poly.zero(target)
    for m, c in f.terms.items():
        part = Poly.const(target, c)
        for name, e in zip(f.table.names, m):
            if e:
                part = part * power(name, e)
        out = out + part
    return out


def subst_common_den(f, num_repl, den, target):
    """Substitute each mapped variable v by num_repl[v]/den (shared denominator).

    Returns (numerator, den**D) where D is the joint degree of f in the
    mapped variables, so the quotient is cleared by the minimal power of den.
    """
    mapped = set(num_repl)
    big_d = f.deg_in([n for n in mapped if n in f.table._index]) if f.terms else 0
    cache = {}

    def power(p, e):
        key = (id(p), e)
        v = cache.get(key)
        if v is None:
            v = p**e
            cache[key] = v
        return v

    num = Poly.zero(target)
    for m, c in f.terms.items():
        part = Poly.const(target, c)
        y_deg = 0
        for name, e in zip(f.table.names, m):
            if not e:
                continue
            if name in mapped:
                part = part * power(num_repl[name], e)
                y_deg += e
            else:
                part = part * Poly.var(target, name, e)
        part = part * power(den, big_d - y_deg)
        num = num + part
    return num, den**big_d


# -- parsing --------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>[0-9]+)|(?P<name>[a-z][a-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos and not text[pos:].strip():
            break
        if not m:
            break
        if m.lastgroup is None:
            break
        tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    rest = text[pos:].strip()
    if rest:
        bad_at = pos + len(text[pos:]) - len(text[pos:].lstrip())
        line = text.count("\n", 0, bad_at) + 1
        col = bad_at - (text.rfind("\n", 0, bad_at) + 1)
        raise ParseError(f"unexpected character {text[bad_at]!r}", line, col)
    return tokens


class _Parser:
    def __init__(self, text, table):
        self.text = text
        self.table = table
        self.tokens = _tokenize(text)
        self.i = 0

    def _err(self, msg, pos=None):
        if pos is None:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1)
        raise ParseError(msg, line, col)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        p = self.expr()
        if self.i < len(self.tokens):
            self._err(f"trailing input starting at {self.tokens[self.i][1]!r}")
        return p

    def expr(self):
        p = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            elif kind in ("int", "name") or (kind == "op" and val == "("):
                self._err("missing '*' (juxtaposition is not multiplication)")
            else:
                return p

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        p = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind2, val2, pos2 = self.take()
            if kind2 != "int":
                self._err("exponent must be a non-negative integer literal", pos2)
            p = p ** int(val2)
        return p

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, pos3 = self.take()
                if k3 != "int":
                    self._err("expected integer denominator after '/'", pos3)
                if int(v3) == 0:
                    self._err("zero denominator in rational literal", pos3)
                return Poly.const(self.table, Fraction(int(val), int(v3)))
            return Poly.const(self.table, int(val))
        if kind == "name":
            if val not in self.table:
                self._err(f"unknown variable {val!r} (table {self.table.names})", pos)
            return Poly.var(self.table, val)
        if kind == "op" and val == "(":
            p = self.expr()
            k2, v2, pos2 = self.take()
            if not (k2 == "op" and v2 == ")"):
                self._err("expected ')'", pos2)
            return p
        if kind == "op" and val == "/":
            self._err("division is not a polynomial operation", pos)
        self._err("expected a number, variable or '('", pos)


def parse_poly(text, table):
    """Parse the text syntax into a Poly over the given table."""
    if not text.strip():
        raise ParseError("empty polynomial text", 1, 0)
    return _Parser(text, table).parse()
