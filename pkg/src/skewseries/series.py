"""Truncated twisted power series and their filtration/graded structure.

With R finite local, I = J(R) nilpotent and sigma, delta as in
:mod:`skewseries.rings`, the twisted power series ring S = R[[x; sigma,
delta]] carries the descending chain of two-sided ideals

    G_k = prod_i I^(k-i) x^i        (I^j = R for j <= 0).

The quotients S/G_N are finite and exactly computable: a class is stored
as coefficients (c_0, ..., c_{N-1}) with c_i the canonical representative
mod I^(N-i).  Truncating by G_N rather than by x-degree is deliberate:
when delta != 0 the x-degree cut is not a two-sided ideal (delta pushes
high-degree terms down), while G_N always is.

The associated graded ring of the filtration is modelled on
Gr_I(R)[xbar; sigma_bar, delta_bar]: homogeneous pieces are indexed by
(radical layer i, xbar-degree l) of total degree i+l, sigma_bar acts
layerwise, and delta_bar raises the layer by one while lowering the
xbar-degree, so it lands in the same total degree.  The delta_bar term is
kept because it is generally nonzero on deeper layers (for the q-twist
preset, delta(t) = t^2 sits exactly one layer down), and dropping it would
break multiplicativity of the principal symbol.
"""

from __future__ import annotations

import random

from .report import CheckReport
from .rings import RingContext
from .skewpoly import SkewPoly, monomial_operator_apply


class TruncatedSeries:
    """A class in S/G_N, stored as canonical quotient coefficients."""

    __slots__ = ("ctx", "precision", "coeffs")

    def __init__(self, ctx: RingContext, precision: int, coeffs):
        if precision < 1:
            raise ValueError("precision must be >= 1")
        coeffs = list(coeffs)[:precision]
        coeffs += [ctx.zero()] * (precision - len(coeffs))
        self.ctx = ctx
        self.precision = precision
        self.coeffs = tuple(
            ctx.reduce_clamped(c, precision - i) for i, c in enumerate(coeffs))

    @classmethod
    def from_poly(cls, f: SkewPoly, precision: int) -> "TruncatedSeries":
        """Image of a skew polynomial under T -> S -> S/G_N."""
        return cls(f.ctx, precision, f.coeffs)

    @classmethod
    def zero(cls, ctx, precision):
        return cls(ctx, precision, ())

    @classmethod
    def one(cls, ctx, precision):
        return cls(ctx, precision, (ctx.one(),))

    @classmethod
    def var(cls, ctx, precision):
        return cls.from_poly(SkewPoly.var(ctx), precision)

    @classmethod
    def constant(cls, ctx, precision, a):
        return cls(ctx, precision, (a,))

    def to_poly(self) -> SkewPoly:
        """The canonical polynomial representative (degree < N)."""
        return SkewPoly(self.ctx, self.coeffs)

    def is_zero(self) -> bool:
        zero = self.ctx.zero()
        return all(c == zero for c in self.coeffs)

    def _check_compat(self, other):
        if not isinstance(other, TruncatedSeries) or other.ctx != self.ctx:
            raise ValueError("ring context mismatch")
        if other.precision != self.precision:
            raise ValueError("precision mismatch")

    def __add__(self, other):
        self._check_compat(other)
        return TruncatedSeries(
            self.ctx, self.precision,
            [self.ctx.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return TruncatedSeries(
            self.ctx, self.precision, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Closed product formula on lifted representatives, reduced at the
        end.  Terms whose monomial operator carries at least
        radical_nilpotency delta factors must vanish (I is nilpotent); this
        is asserted rather than assumed."""
        self._check_compat(other)
        ctx = self.ctx
        zero = ctx.zero()
        nil = ctx.radical_nilpotency
        n_prec = self.precision
        out = []
        for m in range(n_prec):
            acc = zero
            for n in range(m + 1):
                b = other.coeffs[m - n]
                if b == zero:
                    continue
                for j in range(n, n_prec):
                    a = self.coeffs[j]
                    if a == zero:
                        continue
                    k = j - n
                    v = monomial_operator_apply(ctx, k, n, b)
                    if k >= nil:
                        if v != zero:
                            raise AssertionError(
                                "sigma-nilpotence bound violated in series product")
                        continue
                    acc = ctx.add(acc, ctx.mul(a, v))
            out.append(acc)
        return TruncatedSeries(ctx, n_prec, out)

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative exponents are not defined")
        result = TruncatedSeries.one(self.ctx, self.precision)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and other.ctx == self.ctx
                and other.precision == self.precision and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.ctx.name, self.precision, self.coeffs))

    def __repr__(self):
        return f"TruncatedSeries({self.ctx.name}, {self.render()!r})"

    def filtration_degree(self) -> int:
        """Largest k <= N with self in G_k/G_N; N exactly for the zero class.

        Membership in G_k asks val(c_i) >= k - i for every slot, so the
        degree is min_i (val(c_i) + i) capped at N."""
        d = self.precision
        zero = self.ctx.zero()
        for i, c in enumerate(self.coeffs):
            if c != zero:
                d = min(d, self.ctx.ideal_valuation(c) + i)
        return d

    def reduce_precision(self, new_precision: int) -> "TruncatedSeries":
        """The image under S/G_N -> S/G_M for M <= N."""
        if not 1 <= new_precision <= self.precision:
            raise ValueError("can only reduce to a coarser precision")
        return TruncatedSeries(self.ctx, new_precision, self.coeffs[:new_precision])

    def render(self) -> str:
        ctx = self.ctx
        zero = ctx.zero()
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == zero:
                continue
            cs = ctx.render(c)
            if " + " in cs or " - " in cs:
                cs = f"({cs})"
            term = f"{cs} (mod {ctx.ideal_power_label(self.precision - i)})"
            if i == 1:
                term += "*x"
            elif i > 1:
                term += f"*x^{i}"
            parts.append(term)
        body = " + ".join(parts) if parts else "0"
        return f"{body} [N={self.precision}]"


def series_from_poly(f: SkewPoly, precision: int) -> TruncatedSeries:
    return TruncatedSeries.from_poly(f, precision)


def filtration_degree(f: TruncatedSeries) -> int:
    return f.filtration_degree()


class GradedElem:
    """Element of the associated graded ring, as a map
    (radical layer i, xbar-degree l) -> canonical representative of
    I^i/I^(i+1); every stored component is nonzero in its layer."""

    __slots__ = ("ctx", "components")

    def __init__(self, ctx: RingContext, components):
        self.ctx = ctx
        self.components = tuple(components)

    @classmethod
    def build(cls, ctx: RingContext, items) -> "GradedElem":
        """Accumulate raw (layer, xdeg) -> value contributions, reduce each
        into its layer quotient and drop the ones that vanish there."""
        zero = ctx.zero()
        nil = ctx.radical_nilpotency
        acc = {}
        for (layer, xdeg), val in items:
            if layer < 0 or xdeg < 0:
                raise ValueError("negative graded index")
            if layer >= nil:
                continue
            key = (layer, xdeg)
            acc[key] = ctx.add(acc.get(key, zero), val)
        comps = []
        for key in sorted(acc, key=lambda kv: (kv[1], kv[0])):
            layer, _ = key
            raw = acc[key]
            if raw not in ctx.ideal_power(layer):
                raise ValueError("component representative outside its radical layer")
            rep = ctx.reduce_clamped(raw, layer + 1)
            if rep != zero:
                comps.append((key, rep))
        return cls(ctx, comps)

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx):
        return cls.build(ctx, [((0, 0), ctx.one())])

    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other):
        if not isinstance(other, GradedElem) or other.ctx != self.ctx:
            raise ValueError("ring context mismatch")
        return GradedElem.build(self.ctx, list(self.components) + list(other.components))

    def __mul__(self, other):
        """Layerwise Ore product.  Moving xbar^l past a layer-j class b uses
        the rearrangement xbar^l b = sum_n M_{l-n,n}(b) xbar^n where each
        delta factor raises the radical layer by one, preserving the total
        degree; contributions whose layer reaches the nilpotency index die."""
        if not isinstance(other, GradedElem) or other.ctx != self.ctx:
            raise ValueError("ring context mismatch")
        ctx = self.ctx
        nil = ctx.radical_nilpotency
        items = []
        for (i, l), a in self.components:
            for (j, mdeg), b in other.components:
                for n in range(l + 1):
                    k = l - n
                    layer = i + j + k
                    if layer >= nil:
                        continue
                    v = monomial_operator_apply(ctx, k, n, b)
                    items.append(((layer, n + mdeg), ctx.mul(a, v)))
        return GradedElem.build(ctx, items)

    def __eq__(self, other):
        return (isinstance(other, GradedElem) and other.ctx == self.ctx
                and other.components == self.components)

    def __hash__(self):
        return hash((self.ctx.name, self.components))

    def __repr__(self):
        return f"GradedElem({self.ctx.name}, {self.render()!r})"

    def render(self) -> str:
        if not self.components:
            return "0"
        parts = []
        for (layer, xdeg), rep in self.components:
            cs = self.ctx.render(rep)
            if " + " in cs or " - " in cs:
                cs = f"({cs})"
            term = f"{cs} (layer {layer})"
            if xdeg == 1:
                term += "*xbar"
            elif xdeg > 1:
                term += f"*xbar^{xdeg}"
            parts.append(term)
        return " + ".join(parts)


def graded_mul(u: GradedElem, v: GradedElem) -> GradedElem:
    return u * v


def principal_symbol(f: TruncatedSeries) -> GradedElem:
    """Image of a nonzero class in G_k/G_(k+1), k its filtration degree:
    one component (layer k-i, xdeg i) for each slot whose valuation sits
    exactly on the boundary."""
    if f.is_zero():
        raise ValueError("zero has no principal symbol")
    ctx = f.ctx
    k = f.filtration_degree()
    zero = ctx.zero()
    items = []
    for i, c in enumerate(f.coeffs):
        if c != zero and ctx.ideal_valuation(c) == k - i:
            items.append(((k - i, i), c))
    return GradedElem.build(ctx, items)


# -- random generators --------------------------------------------------


def random_series(ctx: RingContext, precision: int, rng: random.Random) -> TruncatedSeries:
    return TruncatedSeries(ctx, precision, [ctx.sample(rng) for _ in range(precision)])


def random_nonzero_series(ctx, precision, rng) -> TruncatedSeries:
    for _ in range(1000):
        f = random_series(ctx, precision, rng)
        if not f.is_zero():
            return f
    raise RuntimeError("failed to sample a nonzero class")


def random_series_in_filtration(ctx, precision, k, rng) -> TruncatedSeries:
    """Uniform class of G_k/G_N: slot i drawn from I^max(k-i, 0)."""
    coeffs = []
    for i in range(precision):
        coeffs.append(rng.choice(ctx.ideal_power_list(max(k - i, 0))))
    return TruncatedSeries(ctx, precision, coeffs)


def filtration_generators(ctx: RingContext, precision: int, k: int) -> list:
    """Module generators of G_k/G_N: w*x^i with w a product of k-i radical
    generators for the slots below k, and the bare powers x^i above."""
    gens = []
    for i in range(precision):
        j = k - i
        if j <= 0:
            gens.append(TruncatedSeries(
                ctx, precision,
                [ctx.zero()] * i + [ctx.one()]))
        elif j < ctx.radical_nilpotency:
            for w in ctx.ideal_power_gens(j):
                gens.append(TruncatedSeries(
                    ctx, precision, [ctx.zero()] * i + [w]))
        # j >= nilpotency: that slot of G_k is zero
    return gens


# -- property checks -----------------------------------------------------


def ideal_closure_check(ctx: RingContext, precision: int, k: int,
                        samples: int, seed: int) -> CheckReport:
    """G_k absorbs multiplication by S/G_N on both sides, exhaustively on
    the module generators for the x-multiplication case and on seeded
    random pairs otherwise; also checks G_k * G_l <= G_(k+l)."""
    if k < 0 or k > precision:
        raise ValueError("filtration index must satisfy 0 <= k <= N")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    x = TruncatedSeries.var(ctx, precision)
    checked = 0
    cex = None
    gen_checks = 0

    for gen in filtration_generators(ctx, precision, k):
        for prod, tag in ((x * gen, "x*g"), (gen * x, "g*x")):
            checked += 1
            gen_checks += 1
            if prod.filtration_degree() < k:
                cex = f"{tag} leaves G_{k} for generator g = {gen.render()}"
                break
        if cex:
            break

    if cex is None:
        for _ in range(samples):
            s = random_series(ctx, precision, rng)
            g = random_series_in_filtration(ctx, precision, k, rng)
            checked += 2
            if (s * g).filtration_degree() < k:
                cex = f"s*g leaves G_{k}: s={s.render()}, g={g.render()}"
                break
            if (g * s).filtration_degree() < k:
                cex = f"g*s leaves G_{k}: s={s.render()}, g={g.render()}"
                break
            l = rng.randint(0, precision)
            h = random_series_in_filtration(ctx, precision, l, rng)
            bound = min(precision, k + l)
            checked += 2
            if (g * h).filtration_degree() < bound:
                cex = f"G_{k}*G_{l} leaves G_{k + l}: g={g.render()}, h={h.render()}"
                break
            if (h * g).filtration_degree() < bound:
                cex = f"G_{l}*G_{k} leaves G_{k + l}: g={g.render()}, h={h.render()}"
                break

    return CheckReport(
        name="ideal-closure",
        passed=cex is None,
        checked=checked,
        counterexample=cex,
        details={"filtration_index": k, "generator_checks": gen_checks},
    )


def graded_iso_check(ctx: RingContext, precision: int,
                     samples: int, seed: int) -> CheckReport:
    """Multiplicativity of the principal symbol: when the filtration degree
    of a product is the sum of the factor degrees, the symbol of the product
    equals the product of the symbols in the graded model; when the degree
    jumps, the model product must vanish."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    exact = jump = skipped = 0
    cex = None

    def check_pair(f, g):
        nonlocal exact, jump, skipped, cex
        df, dg = f.filtration_degree(), g.filtration_degree()
        if df + dg >= precision:
            skipped += 1
            return
        model = principal_symbol(f) * principal_symbol(g)
        prod = f * g
        if prod.filtration_degree() == df + dg:
            exact += 1
            if principal_symbol(prod) != model:
                cex = (f"symbol mismatch: f={f.render()}, g={g.render()}, "
                       f"symbol(fg)={principal_symbol(prod).render()}, "
                       f"model={model.render()}")
        else:
            jump += 1
            if not model.is_zero():
                cex = (f"degree jumped but symbols multiply to "
                       f"{model.render()}: f={f.render()}, g={g.render()}")

    # deterministic boundary pairs: radical-generator constants whose layers
    # can sum past the nilpotency index guarantee the cancellation branch
    nil = ctx.radical_nilpotency
    for k1 in range(1, nil):
        for k2 in range(1, nil):
            for w1 in ctx.ideal_power_gens(k1):
                for w2 in ctx.ideal_power_gens(k2):
                    check_pair(TruncatedSeries.constant(ctx, precision, w1),
                               TruncatedSeries.constant(ctx, precision, w2))
                    if cex:
                        break
                if cex:
                    break
            if cex:
                break
        if cex:
            break

    if cex is None:
        for _ in range(samples):
            f = random_nonzero_series(ctx, precision, rng)
            g = random_nonzero_series(ctx, precision, rng)
            check_pair(f, g)
            if cex:
                break
    return CheckReport(
        name="graded-iso",
        passed=cex is None,
        checked=exact + jump,
        counterexample=cex,
        details={"exact_branch": exact, "jump_branch": jump, "skipped": skipped},
    )


def series_law_check(ctx: RingContext, precision: int,
                     samples: int, seed: int) -> CheckReport:
    """Associativity, distributivity and representative independence of the
    product in S/G_N, on seeded random triples."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    checked = 0
    cex = None
    nil = ctx.radical_nilpotency
    for _ in range(samples):
        f = random_series(ctx, precision, rng)
        g = random_series(ctx, precision, rng)
        h = random_series(ctx, precision, rng)
        checked += 3
        if (f * g) * h != f * (g * h):
            cex = f"associativity fails: f={f.render()}, g={g.render()}, h={h.render()}"
            break
        if f * (g + h) != f * g + f * h:
            cex = f"left distributivity fails: f={f.render()}, g={g.render()}, h={h.render()}"
            break
        if (f + g) * h != f * h + g * h:
            cex = f"right distributivity fails: f={f.render()}, g={g.render()}, h={h.render()}"
            break
        # the product must be well defined on classes: multiply polynomial
        # lifts differing by a G_N element and compare the truncations
        i = rng.randrange(precision)
        pert = rng.choice(ctx.ideal_power_list(min(precision - i, nil)))
        lift = f.to_poly()
        lift2 = lift + SkewPoly(ctx, [ctx.zero()] * i + [pert])
        g_lift = g.to_poly()
        checked += 2
        if TruncatedSeries.from_poly(lift2 * g_lift, precision) != f * g or \
                TruncatedSeries.from_poly(g_lift * lift2, precision) != g * f:
            cex = (f"product not well defined on classes: f={f.render()}, "
                   f"perturbation {ctx.render(pert)} at slot {i}")
            break
    return CheckReport(
        name="series-assoc",
        passed=cex is None,
        checked=checked,
        counterexample=cex,
        details={"precision": precision},
    )
