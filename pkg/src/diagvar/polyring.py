"""Exact sparse multivariate polynomials over Z and Z/p.

A polynomial is a mapping from exponent tuples to nonzero coefficients.
Coefficients are Python ints, so integer arithmetic never overflows; mod-p
coefficients are kept as canonical representatives in [0, p).  Hot paths
(multiplication, truncated powers) pack exponent tuples into single ints,
one byte per variable, so monomial products become integer additions.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping

from .errors import ContextError, DomainError, PolyParseError, SchemaError

__all__ = [
    "Domain",
    "ZZ",
    "GF",
    "VarContext",
    "MvPolynomial",
    "parse_poly",
    "format_poly",
    "poly_to_json",
    "poly_from_json",
]


def _is_prime(p: int) -> bool:
    # Miller-Rabin with bases 2,3,5,7 is deterministic below 3.2e9,
    # which covers the whole allowed modulus range [2, 2^31).
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if p % q == 0:
            return p == q
    d, r = p - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class Domain:
    """Coefficient domain: exact integers (p is None) or the prime field Z/p."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and (p < 2 or p >= 2**31 or not _is_prime(p)):
            raise DomainError(f"modulus must be a prime in [2, 2^31), got {p}")
        self.p = p

    @property
    def is_modp(self) -> bool:
        return self.p is not None

    def reduce(self, c: int) -> int:
        return c if self.p is None else c % self.p

    def __eq__(self, other):
        return isinstance(other, Domain) and self.p == other.p

    def __hash__(self):
        return hash(("Domain", self.p))

    def __repr__(self):
        return "ZZ" if self.p is None else f"GF({self.p})"


ZZ = Domain()


def GF(p: int) -> Domain:
    """The prime field with p elements."""
    return Domain(p)


class VarContext:
    """Ordered, immutable list of variable names shared by polynomials."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ContextError("variable names must be unique")
        self.names = names
        self._index = {nm: i for i, nm in enumerate(names)}

    @classmethod
    def matrix(cls, n: int, with_t: bool = False) -> "VarContext":
        """Row-major x_i_j context (1-based) for an n-by-n generic matrix."""
        names = [f"x_{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
        if with_t:
            names.append("t")
        return cls(names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ContextError(f"unknown variable {name!r}") from None

    def with_var(self, name: str) -> "VarContext":
        if name in self._index:
            raise ContextError(f"variable {name!r} already present")
        return VarContext(self.names + (name,))

    def __contains__(self, name) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VarContext) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarContext({list(self.names)!r})"


# Packed representation: one byte per variable, exponents limited to 127 so
# the top bit of every byte stays free for the truncation test below.
_FIELD_MAX = 127


def _pack(terms: dict, arity: int):
    packed = {}
    mx = 0
    for m, c in terms.items():
        e = max(m, default=0)
        if e > _FIELD_MAX:
            return None
        if e > mx:
            mx = e
        packed[int.from_bytes(bytes(m), "little")] = c
    return packed, mx


def _unpack_key(key: int, arity: int) -> tuple:
    return tuple(key.to_bytes(arity, "little"))


def _bound_masks(bound) -> tuple[int, int]:
    # (key + add) & flag is nonzero exactly when some exponent exceeds its
    # bound: adding 128 - (b+1) to a byte holding x sets bit 7 iff x > b,
    # and cannot carry into the next byte while exponents stay <= 127.
    add = 0
    flag = 0
    for i, b in enumerate(bound):
        if b < _FIELD_MAX:
            add |= (128 - (b + 1)) << (8 * i)
            flag |= 128 << (8 * i)
    return add, flag


def _reduced(out: dict, p: int | None) -> dict:
    if p is None:
        return {k: v for k, v in out.items() if v}
    red = {}
    for k, v in out.items():
        v %= p
        if v:
            red[k] = v
    return red


def _mul_packed(pa: dict, pb: dict, p, masks) -> dict:
    if len(pa) < len(pb):
        pa, pb = pb, pa
    items_b = list(pb.items())
    out = {}
    get = out.get
    if masks is None:
        for ka, ca in pa.items():
            for kb, cb in items_b:
                k = ka + kb
                v = get(k)
                out[k] = ca * cb if v is None else v + ca * cb
    else:
        add, flag = masks
        for ka, ca in pa.items():
            for kb, cb in items_b:
                k = ka + kb
                if (k + add) & flag:
                    continue
                v = get(k)
                out[k] = ca * cb if v is None else v + ca * cb
    return _reduced(out, p)


def _mul_tuples(ta: dict, tb: dict, p, bound) -> dict:
    if len(ta) < len(tb):
        ta, tb = tb, ta
    items_b = list(tb.items())
    out = {}
    get = out.get
    for ma, ca in ta.items():
        for mb, cb in items_b:
            m = tuple(map(int.__add__, ma, mb))
            if bound is not None and any(e > b for e, b in zip(m, bound)):
                continue
            v = get(m)
            out[m] = ca * cb if v is None else v + ca * cb
    return _reduced(out, p)


class MvPolynomial:
    """Immutable sparse polynomial over a Domain in a VarContext."""

    __slots__ = ("ctx", "dom", "terms", "_packed")

    def __init__(self, ctx: VarContext, dom: Domain, terms=None):
        self.ctx = ctx
        self.dom = dom
        clean: dict = {}
        if terms:
            arity = len(ctx)
            items = terms.items() if isinstance(terms, Mapping) else terms
            for m, c in items:
                m = tuple(m)
                if len(m) != arity:
                    raise ContextError(
                        f"monomial arity {len(m)} does not match context arity {arity}"
                    )
                if any(e < 0 for e in m):
                    raise ValueError(f"negative exponent in monomial {m}")
                clean[m] = clean.get(m, 0) + c
            p = dom.p
            if p is None:
                clean = {m: c for m, c in clean.items() if c}
            else:
                clean = {m: c % p for m, c in clean.items() if c % p}
        self.terms = clean
        self._packed = None

    @classmethod
    def _raw(cls, ctx, dom, clean_terms: dict) -> "MvPolynomial":
        f = object.__new__(cls)
        f.ctx = ctx
        f.dom = dom
        f.terms = clean_terms
        f._packed = None
        return f

    @classmethod
    def zero(cls, ctx, dom) -> "MvPolynomial":
        return cls._raw(ctx, dom, {})

    @classmethod
    def constant(cls, ctx, dom, c: int) -> "MvPolynomial":
        c = dom.reduce(c)
        if not c:
            return cls.zero(ctx, dom)
        return cls._raw(ctx, dom, {(0,) * len(ctx): c})

    @classmethod
    def one(cls, ctx, dom) -> "MvPolynomial":
        return cls.constant(ctx, dom, 1)

    @classmethod
    def variable(cls, ctx, dom, name: str) -> "MvPolynomial":
        i = ctx.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(ctx)))
        return cls._raw(ctx, dom, {exps: 1})

    @classmethod
    def monomial(cls, ctx, dom, exps, coeff: int = 1) -> "MvPolynomial":
        return cls(ctx, dom, {tuple(exps): coeff})

    # -- basic structure -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def n_terms(self) -> int:
        return len(self.terms)

    def coefficient(self, exps) -> int:
        """The stored coefficient of the given exponent tuple, or 0."""
        m = tuple(exps)
        if len(m) != len(self.ctx):
            raise ContextError("monomial arity does not match context arity")
        return self.terms.get(m, 0)

    def total_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(sum(m) for m in self.terms)

    def homogeneous_degree(self) -> int | None:
        """Common total degree of all terms, or None if degrees differ."""
        if not self.terms:
            raise ValueError("zero polynomial has no homogeneous degree")
        degs = {sum(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def leading_monomial(self) -> tuple:
        """Greatest monomial in graded reverse lexicographic order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=lambda m: (sum(m), tuple(-e for e in reversed(m))))

    def variables_used(self) -> set:
        """Names of variables appearing with a positive exponent."""
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.ctx.names[i])
        return used

    def _check_compat(self, other: "MvPolynomial"):
        if self.ctx != other.ctx:
            raise ContextError("operands live in different variable contexts")
        if self.dom != other.dom:
            raise DomainError("operands live in different coefficient domains")

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = MvPolynomial.constant(self.ctx, self.dom, other)
        if not isinstance(other, MvPolynomial):
            return NotImplemented
        self._check_compat(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        p = self.dom.p
        for m, c in b.items():
            v = out.get(m, 0) + c
            if p is not None:
                v %= p
            if v:
                out[m] = v
            elif m in out:
                del out[m]
        return MvPolynomial._raw(self.ctx, self.dom, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.dom.p
        if p is None:
            terms = {m: -c for m, c in self.terms.items()}
        else:
            terms = {m: p - c for m, c in self.terms.items()}
        return MvPolynomial._raw(self.ctx, self.dom, terms)

    def __sub__(self, other):
        if isinstance(other, int):
            other = MvPolynomial.constant(self.ctx, self.dom, other)
        if not isinstance(other, MvPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _scaled(self, c: int) -> "MvPolynomial":
        c = self.dom.reduce(c)
        if not c or not self.terms:
            return MvPolynomial.zero(self.ctx, self.dom)
        p = self.dom.p
        if p is None:
            terms = {m: cc * c for m, cc in self.terms.items()}
        else:
            # p prime and both factors nonzero mod p, so no zeros appear
            terms = {m: cc * c % p for m, cc in self.terms.items()}
        return MvPolynomial._raw(self.ctx, self.dom, terms)

    def __mul__(self, other):
        if isinstance(other, int):
            return self._scaled(other)
        if not isinstance(other, MvPolynomial):
            return NotImplemented
        self._check_compat(other)
        return self._mul(other, None)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self._scaled(other)
        return NotImplemented

    def _packed_form(self):
        if self._packed is None:
            self._packed = _pack(self.terms, len(self.ctx)) or False
        return self._packed or None

    def _mul(self, other: "MvPolynomial", bound) -> "MvPolynomial":
        ta, tb = self.terms, other.terms
        if not ta or not tb:
            return MvPolynomial.zero(self.ctx, self.dom)
        p = self.dom.p
        if len(ta) == 1 or len(tb) == 1:
            if len(tb) == 1:
                many, ((ms, cs),) = ta, tb.items()
            else:
                many, ((ms, cs),) = tb, ta.items()
            out = {}
            for m, c in many.items():
                mm = tuple(map(int.__add__, m, ms))
                if bound is not None and any(e > b for e, b in zip(mm, bound)):
                    continue
                v = c * cs
                if p is not None:
                    v %= p
                    if not v:
                        continue
                out[mm] = v
            return MvPolynomial._raw(self.ctx, self.dom, out)
        pa = self._packed_form()
        pb = other._packed_form()
        if pa is not None and pb is not None and pa[1] + pb[1] <= _FIELD_MAX:
            masks = _bound_masks(bound) if bound is not None else None
            prod = _mul_packed(pa[0], pb[0], p, masks)
            arity = len(self.ctx)
            terms = {_unpack_key(k, arity): v for k, v in prod.items()}
        else:
            terms = _mul_tuples(ta, tb, p, bound)
        return MvPolynomial._raw(self.ctx, self.dom, terms)

    def _truncated(self, bound) -> "MvPolynomial":
        """Drop every monomial with an exponent above the per-variable bound."""
        terms = {
            m: c
            for m, c in self.terms.items()
            if all(e <= b for e, b in zip(m, bound))
        }
        if len(terms) == len(self.terms):
            return self
        return MvPolynomial._raw(self.ctx, self.dom, terms)

    def pow_capped(self, k: int, cap: int | None = None) -> "MvPolynomial":
        """Exact k-th power; with a cap, every monomial holding an exponent
        >= cap is deleted, eagerly during the squaring chain (sound because
        exponents only grow under multiplication)."""
        if k < 0:
            raise ValueError("exponent must be non-negative")
        if cap is not None and cap < 1:
            raise ValueError("cap must be at least 1")
        result = MvPolynomial.one(self.ctx, self.dom)
        if k == 0:
            return result
        bound = None if cap is None else (cap - 1,) * len(self.ctx)
        base = self if bound is None else self._truncated(bound)
        while True:
            if k & 1:
                result = result._mul(base, bound)
            k >>= 1
            if not k:
                return result
            base = base._mul(base, bound)

    def substitute(self, assignments: Mapping[str, "MvPolynomial"]) -> "MvPolynomial":
        """Simultaneous substitution of variables by polynomials
        (a ring homomorphism on this context)."""
        if not assignments:
            return self
        reps = {}
        for name, g in assignments.items():
            i = self.ctx.index(name)
            if isinstance(g, int):
                g = MvPolynomial.constant(self.ctx, self.dom, g)
            self._check_compat(g)
            reps[i] = g
        if not self.terms:
            return self
        p = self.dom.p
        pow_cache: dict = {}
        out: dict = {}
        for m, c in self.terms.items():
            base = list(m)
            parts = []
            dead = False
            for i, g in reps.items():
                e = m[i]
                if not e:
                    continue
                base[i] = 0
                key = (i, e)
                gp = pow_cache.get(key)
                if gp is None:
                    gp = g.pow_capped(e)
                    pow_cache[key] = gp
                if not gp.terms:
                    dead = True
                    break
                parts.append(gp)
            if dead:
                continue
            acc = {tuple(base): c}
            for gp in parts:
                acc = _mul_tuples(acc, gp.terms, p, None)
            for mm, cc in acc.items():
                out[mm] = out.get(mm, 0) + cc
        return MvPolynomial._raw(self.ctx, self.dom, _reduced(out, p))

    # -- context and domain changes ---------------------------------------

    def with_context(self, new_ctx: VarContext) -> "MvPolynomial":
        """Reinterpret in another context, matching variables by name.
        Fails if a variable actually used here is absent from the target."""
        if new_ctx == self.ctx:
            return self
        pos = [new_ctx._index.get(name) for name in self.ctx.names]
        arity = len(new_ctx)
        out = {}
        for m, c in self.terms.items():
            exps = [0] * arity
            for i, e in enumerate(m):
                if not e:
                    continue
                j = pos[i]
                if j is None:
                    raise ContextError(
                        f"variable {self.ctx.names[i]!r} is not present in the target context"
                    )
                exps[j] = e
            out[tuple(exps)] = c
        return MvPolynomial._raw(new_ctx, self.dom, out)

    def with_domain(self, dom: Domain) -> "MvPolynomial":
        """Reinterpret the coefficients; only Z -> Z/p reduction is allowed."""
        if dom == self.dom:
            return self
        if self.dom.is_modp:
            raise DomainError("cannot convert coefficients out of a prime field")
        p = dom.p
        terms = {m: c % p for m, c in self.terms.items() if c % p}
        return MvPolynomial._raw(self.ctx, dom, terms)

    # -- comparison and display -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = MvPolynomial.constant(self.ctx, self.dom, other)
        return (
            isinstance(other, MvPolynomial)
            and self.dom == other.dom
            and self.ctx == other.ctx
            and self.terms == other.terms
        )

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MvPolynomial({format_poly(self)!r})"


# -- canonical text form ----------------------------------------------------


def format_poly(f: MvPolynomial) -> str:
    """Canonical string form: graded-lexicographic order, total degree
    descending, ties broken by the exponent tuples themselves.  Parsing the
    result returns an equal polynomial."""
    if not f.terms:
        return "0"
    names = f.ctx.names
    bits = []
    for m in sorted(f.terms, key=lambda m: (sum(m), m), reverse=True):
        c = f.terms[m]
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        neg = c < 0
        mag = -c if neg else c
        if factors:
            body = "*".join(factors) if mag == 1 else str(mag) + "*" + "*".join(factors)
        else:
            body = str(mag)
        if not bits:
            bits.append("-" + body if neg else body)
        else:
            bits.append(("- " if neg else "+ ") + body)
    return " ".join(bits)


_TOKEN_RE = re.compile(r"(\d+)|(x_\d+_\d+|t)|([+\-*^])|(\S)")


def _tokens(text: str):
    toks = []
    for mo in _TOKEN_RE.finditer(text):
        if mo.group(4):
            raise PolyParseError(f"unexpected character {mo.group(4)!r}", mo.start())
        if mo.group(1):
            toks.append(("int", mo.group(1), mo.start()))
        elif mo.group(2):
            toks.append(("var", mo.group(2), mo.start()))
        else:
            toks.append(("op", mo.group(3), mo.start()))
    return toks


def parse_poly(text: str, ctx: VarContext, dom: Domain) -> MvPolynomial:
    """Parse the ASCII grammar: terms joined by '+'/'-', each term an integer
    coefficient and/or '*'-joined variable powers like x_1_2^3."""
    toks = _tokens(text)
    n = len(toks)
    pos = 0

    def error(msg):
        at = toks[pos][2] if pos < n else len(text)
        raise PolyParseError(msg, at)

    def parse_varpow(exps):
        nonlocal pos
        kind, value, _ = toks[pos]
        if kind != "var":
            error("expected a variable")
        i = ctx.index(value)
        pos += 1
        e = 1
        if pos < n and toks[pos][:2] == ("op", "^"):
            pos += 1
            if pos >= n or toks[pos][0] != "int":
                error("expected a positive integer exponent after '^'")
            e = int(toks[pos][1])
            if e <= 0:
                error("exponent must be positive")
            pos += 1
        exps[i] += e

    def parse_term():
        nonlocal pos
        if pos >= n:
            error("expected a term")
        coeff = 1
        exps = [0] * len(ctx)
        kind, value, _ = toks[pos]
        if kind == "int":
            coeff = int(value)
            pos += 1
        elif kind == "var":
            parse_varpow(exps)
        else:
            error("expected a term")
        while pos < n and toks[pos][:2] == ("op", "*"):
            pos += 1
            parse_varpow(exps)
        return tuple(exps), coeff

    if not toks:
        raise PolyParseError("empty input", 0)
    terms = []
    sign = 1
    if toks[0][:2] == ("op", "-"):
        sign = -1
        pos += 1
    while True:
        exps, coeff = parse_term()
        terms.append((exps, sign * coeff))
        if pos >= n:
            break
        kind, value, _ = toks[pos]
        if kind == "op" and value in "+-":
            sign = 1 if value == "+" else -1
            pos += 1
        else:
            error("expected '+' or '-'")
    return MvPolynomial(ctx, dom, terms)


# -- JSON form ----------------------------------------------------------------


def poly_to_json(f: MvPolynomial) -> dict:
    if f.dom.is_modp:
        domain = {"kind": "Fp", "p": f.dom.p}
    else:
        domain = {"kind": "Z"}
    order = sorted(f.terms, key=lambda m: (sum(m), m), reverse=True)
    return {
        "vars": list(f.ctx.names),
        "domain": domain,
        "terms": [{"coeff": str(f.terms[m]), "exps": list(m)} for m in order],
    }


def poly_from_json(obj) -> MvPolynomial:
    try:
        ctx = VarContext(obj["vars"])
        dk = obj["domain"]["kind"]
        if dk == "Z":
            dom = ZZ
        elif dk == "Fp":
            dom = GF(int(obj["domain"]["p"]))
        else:
            raise SchemaError(f"unknown domain kind {dk!r}")
        terms = []
        for t in obj["terms"]:
            terms.append((tuple(int(e) for e in t["exps"]), int(t["coeff"])))
        return MvPolynomial(ctx, dom, terms)
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"malformed polynomial JSON: {e}") from e
