"""Skew polynomial arithmetic in the Ore extension R[x; sigma, delta].

Elements are kept in left normal form sum_i a_i x^i.  Multiplication uses
the commutation rule x*r = sigma(r)*x + delta(r), driven through the
monomial operator M_{k,l}: the sum of all composite words in delta and
sigma with exactly k delta factors and l sigma factors.  Two independent
product routes are provided so they can be cross-validated:

* the closed coefficient formula
      coeff_m(f*g) = sum_{n=0..m} sum_{j>=n} a_j * M_{j-n,n}(b_{m-n})
  with M computed by the recursion
      M_{k,l} = delta . M_{k-1,l} + sigma . M_{k,l-1},   M_{0,0} = id
* :func:`poly_mul_commutation`, which expands products by repeatedly
  applying the single-step rule and collecting left-form terms.

A brute-force word enumeration of M_{k,l} is kept as an oracle for the
recursion (:func:`monomial_operator_words`).
"""

from __future__ import annotations

import itertools
import math
import random

from .report import CheckReport
from .rings import RingContext

NEG_INF = float("-inf")


def monomial_operator_apply(ctx: RingContext, k: int, l: int, a):
    """M_{k,l}(delta, sigma) applied to a, via the additive recursion.

    Values are memoized per ring context and input element, so repeated
    series products over the same small carrier cost a dictionary lookup.
    """
    if k < 0 or l < 0:
        return ctx.zero()
    cache = ctx._mkl_cache
    hit = cache.get((k, l, a))
    if hit is not None:
        return hit
    for kk in range(k + 1):
        for ll in range(l + 1):
            key = (kk, ll, a)
            if key in cache:
                continue
            if kk == 0 and ll == 0:
                val = a
            else:
                val = ctx.zero()
                if kk > 0:
                    val = ctx.add(val, ctx.delta(cache[(kk - 1, ll, a)]))
                if ll > 0:
                    val = ctx.add(val, ctx.sigma(cache[(kk, ll - 1, a)]))
            cache[key] = val
    return cache[(k, l, a)]


def monomial_operator_words(ctx: RingContext, k: int, l: int, a):
    """Oracle for M_{k,l}: enumerate every word with k delta letters and l
    sigma letters, apply each to a, and sum.  Returns (value, word_count);
    the count must equal C(k+l, k)."""
    total = ctx.zero()
    count = 0
    n = k + l
    for delta_slots in itertools.combinations(range(n), k):
        slots = set(delta_slots)
        x = a
        for idx in reversed(range(n)):
            x = ctx.delta(x) if idx in slots else ctx.sigma(x)
        total = ctx.add(total, x)
        count += 1
    return total, count


class SkewPoly:
    """Left normal form sum_i a_i x^i; the zero polynomial has no coefficients."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: RingContext, coeffs):
        zero = ctx.zero()
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == zero:
            coeffs.pop()
        self.ctx = ctx
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx):
        return cls(ctx, (ctx.one(),))

    @classmethod
    def var(cls, ctx):
        return cls(ctx, (ctx.zero(), ctx.one()))

    @classmethod
    def from_scalar(cls, ctx, a):
        return cls(ctx, (a,))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ctx.zero()

    def _check_ctx(self, other):
        if not isinstance(other, SkewPoly) or other.ctx != self.ctx:
            raise ValueError("ring context mismatch")

    def __add__(self, other):
        self._check_ctx(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(self.ctx,
                        [self.ctx.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self):
        return SkewPoly(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check_ctx(other)
        ctx = self.ctx
        if self.is_zero() or other.is_zero():
            return SkewPoly.zero(ctx)
        zero = ctx.zero()
        deg = len(self.coeffs) + len(other.coeffs) - 2
        out = []
        for m in range(deg + 1):
            acc = zero
            for n in range(m + 1):
                b = other.coeff(m - n)
                if b == zero:
                    continue
                for j in range(n, len(self.coeffs)):
                    a = self.coeffs[j]
                    if a == zero:
                        continue
                    acc = ctx.add(acc, ctx.mul(a, monomial_operator_apply(ctx, j - n, n, b)))
            out.append(acc)
        return SkewPoly(ctx, out)

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative exponents are not defined")
        result = SkewPoly.one(self.ctx)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        return (isinstance(other, SkewPoly) and other.ctx == self.ctx
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.ctx.name, self.coeffs))

    def __repr__(self):
        return f"SkewPoly({self.ctx.name}, {self.render()!r})"

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        ctx = self.ctx
        zero = ctx.zero()
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == zero:
                continue
            cs = ctx.render(c)
            if i == 0:
                parts.append(cs)
                continue
            xp = "x" if i == 1 else f"x^{i}"
            if cs == "1":
                parts.append(xp)
            elif " + " in cs or " - " in cs:
                parts.append(f"({cs})*{xp}")
            else:
                parts.append(f"{cs}*{xp}")
        return " + ".join(parts)


class RightFormPoly:
    """Finite sum of terms x^i * a_i, degrees strictly increasing."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingContext, terms):
        zero = ctx.zero()
        combined = {}
        for i, a in terms:
            if i < 0:
                raise ValueError("negative degree")
            combined[i] = ctx.add(combined.get(i, zero), a)
        self.ctx = ctx
        self.terms = tuple((i, a) for i, a in sorted(combined.items()) if a != zero)

    def __eq__(self, other):
        return (isinstance(other, RightFormPoly) and other.ctx == self.ctx
                and other.terms == self.terms)

    def __repr__(self):
        body = " + ".join(
            f"x^{i}*{self.ctx.render(a)}" for i, a in self.terms) or "0"
        return f"RightFormPoly({self.ctx.name}, {body!r})"


def normalize_right_to_left(p: RightFormPoly) -> SkewPoly:
    """Rewrite sum_i x^i a_i in left normal form: the coefficient of x^j is
    sum_{i >= j} M_{i-j, j}(a_i)."""
    ctx = p.ctx
    if not p.terms:
        return SkewPoly.zero(ctx)
    top = p.terms[-1][0]
    coeffs = []
    for j in range(top + 1):
        acc = ctx.zero()
        for i, a in p.terms:
            if i >= j:
                acc = ctx.add(acc, monomial_operator_apply(ctx, i - j, j, a))
        coeffs.append(acc)
    return SkewPoly(ctx, coeffs)


def _push_term_right(ctx, a, j, acc):
    # a*x^j = x*(b*x^(j-1)) - delta(b)*x^(j-1)  with  b = sigma^(-1)(a)
    if a == ctx.zero():
        return
    if j == 0:
        acc[0] = ctx.add(acc.get(0, ctx.zero()), a)
        return
    b = ctx.sigma_inv(a)
    shifted = {}
    _push_term_right(ctx, b, j - 1, shifted)
    for i, c in shifted.items():
        acc[i + 1] = ctx.add(acc.get(i + 1, ctx.zero()), c)
    _push_term_right(ctx, ctx.neg(ctx.delta(b)), j - 1, acc)


def left_to_right_form(f: SkewPoly) -> RightFormPoly:
    """Inverse rearrangement: move x to the left of every coefficient by
    iterated commutation (requires sigma to be invertible)."""
    acc = {}
    for j, a in enumerate(f.coeffs):
        _push_term_right(f.ctx, a, j, acc)
    return RightFormPoly(f.ctx, acc.items())


def _x_times(h: SkewPoly) -> SkewPoly:
    # x * (sum b_j x^j) = sum sigma(b_j) x^(j+1) + sum delta(b_j) x^j
    ctx = h.ctx
    out = [ctx.zero()] * (len(h.coeffs) + 1)
    for j, b in enumerate(h.coeffs):
        out[j + 1] = ctx.add(out[j + 1], ctx.sigma(b))
        out[j] = ctx.add(out[j], ctx.delta(b))
    return SkewPoly(ctx, out)


def poly_mul_commutation(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    """Product computed without the closed formula: build x^i * g by
    iterating the single commutation step, scale from the left by a_i and
    sum.  Used as an independent oracle against SkewPoly.__mul__."""
    if f.ctx != g.ctx:
        raise ValueError("ring context mismatch")
    ctx = f.ctx
    result = SkewPoly.zero(ctx)
    cur = g
    for i, a in enumerate(f.coeffs):
        if i > 0:
            cur = _x_times(cur)
        if a != ctx.zero():
            scaled = SkewPoly(ctx, [ctx.mul(a, c) for c in cur.coeffs])
            result = result + scaled
    return result


def random_poly(ctx: RingContext, max_degree: int, rng: random.Random) -> SkewPoly:
    return SkewPoly(ctx, [ctx.sample(rng) for _ in range(max_degree + 1)])


def mkl_oracle_check(ctx: RingContext, max_total: int = 6,
                     count_total: int = 8) -> CheckReport:
    """Recursion vs word enumeration for all k+l <= max_total over the whole
    carrier, plus the C(k+l, k) word-count identity up to count_total."""
    checked = 0
    cex = None
    elems = sorted(ctx.elements())
    for total in range(max_total + 1):
        for k in range(total + 1):
            l = total - k
            for a in elems:
                checked += 1
                by_words, count = monomial_operator_words(ctx, k, l, a)
                if count != math.comb(total, k):
                    cex = f"word count mismatch at k={k}, l={l}"
                    break
                if by_words != monomial_operator_apply(ctx, k, l, a):
                    cex = (f"M_{{{k},{l}}} mismatch at a={ctx.render(a)}: "
                           f"words give {ctx.render(by_words)}")
                    break
            if cex:
                break
        if cex:
            break
    if cex is None:
        for total in range(count_total + 1):
            for k in range(total + 1):
                checked += 1
                n_words = sum(1 for _ in itertools.combinations(range(total), k))
                if n_words != math.comb(total, k):
                    cex = f"word count mismatch at k={k}, l={total - k}"
                    break
    return CheckReport(
        name="mkl-oracle",
        passed=cex is None,
        checked=checked,
        counterexample=cex,
        details={"max_total_degree": max_total},
    )


def poly_law_check(ctx: RingContext, samples: int, seed: int,
                   max_degree: int = 3) -> CheckReport:
    """Seeded random triples: associativity, distributivity, and agreement
    of the closed-formula product with the iterated-commutation oracle."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    checked = 0
    cex = None
    for _ in range(samples):
        f = random_poly(ctx, max_degree, rng)
        g = random_poly(ctx, max_degree, rng)
        h = random_poly(ctx, max_degree, rng)
        fg = f * g
        checked += 4
        if fg != poly_mul_commutation(f, g):
            cex = f"products disagree: f={f.render()}, g={g.render()}"
        elif (fg * h) != f * (g * h):
            cex = f"associativity fails: f={f.render()}, g={g.render()}, h={h.render()}"
        elif (f + g) * h != f * h + g * h:
            cex = f"right distributivity fails: f={f.render()}, g={g.render()}, h={h.render()}"
        elif f * (g + h) != f * g + f * h:
            cex = f"left distributivity fails: f={f.render()}, g={g.render()}, h={h.render()}"
        if cex:
            break
        # degree bound
        checked += 1
        if not (fg.degree <= f.degree + g.degree or f.is_zero() or g.is_zero()):
            cex = f"degree bound fails: f={f.render()}, g={g.render()}"
            break
    return CheckReport(
        name="poly-assoc",
        passed=cex is None,
        checked=checked,
        counterexample=cex,
        details={"max_degree": max_degree},
    )
