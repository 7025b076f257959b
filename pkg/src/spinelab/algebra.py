"""Graded-commutative algebras over F_p and their degree-preserving maps.

An algebra is a tensor product of a polynomial part (generators in even
degree) and an exterior part (generators in odd degree), with the Koszul
sign rule: odd generators anticommute and square to zero.  Products of
algebras are modeled as one object with component-tagged monomials, so an
element of A x B is a formal sum spread over both components and the unit
is the sum of the component units.

Degree-wise everything is finite linear algebra over F_p: morphisms have
matrices per degree, equalizers are kernels, invariants of a finite group
of order prime to p come from the averaging projector.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from spinelab import linalg
from spinelab.series import GradedDims, PowerSeriesRat, geometric, one_plus


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    kind: str  # "poly" | "ext"

    def __post_init__(self):
        if self.kind not in ("poly", "ext"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.degree < 1:
            raise ValueError("generator degree must be >= 1")
        if self.kind == "poly" and self.degree % 2:
            raise ValueError(f"polynomial generator {self.name} must have even degree")
        if self.kind == "ext" and self.degree % 2 == 0:
            raise ValueError(f"exterior generator {self.name} must have odd degree")


class GradedAlgebra:
    """Finitely generated polynomial (x) exterior algebra over F_p."""

    def __init__(self, p: int, generators: Iterable):
        if p < 3 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
            raise ValueError("p must be an odd prime")
        gens = []
        for g in generators:
            gens.append(g if isinstance(g, Generator) else Generator(*g))
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")
        self.p = p
        self.generators = tuple(gens)
        self._index = {g.name: i for i, g in enumerate(gens)}
        self._basis_cache: dict = {}

    def __repr__(self):
        gens = ", ".join(f"{g.name}[{g.degree}]" for g in self.generators)
        return f"GradedAlgebra(F_{self.p}; {gens})"

    def __eq__(self, other):
        return (
            isinstance(other, GradedAlgebra)
            and not isinstance(other, ProductAlgebra)
            and self.p == other.p
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.p, self.generators))

    # monomials are exponent tuples aligned with self.generators
    def one_monomial(self):
        return (0,) * len(self.generators)

    def unit_monomials(self):
        return ((self.one_monomial(), 1),)

    def monomial_degree(self, mono) -> int:
        return sum(e * g.degree for e, g in zip(mono, self.generators))

    def monomial_mul(self, a, b):
        """Product of two monomials: (coefficient, monomial) or None.

        Each odd factor of b walks left past the odd factors of a with
        larger generator index, so the sign exponent is
        sum_{j < i} b_j * a_i over odd generators.
        """
        swaps = 0
        odd_b_seen = 0
        for i, g in enumerate(self.generators):
            if g.degree % 2:
                swaps += a[i] * odd_b_seen
                odd_b_seen += b[i]
        out = []
        for i, g in enumerate(self.generators):
            e = a[i] + b[i]
            if g.kind == "ext" and e > 1:
                return None
            out.append(e)
        return ((-1) ** swaps % self.p, tuple(out))

    def basis(self, d: int):
        """Monomials of degree d in lexicographic exponent order."""
        if d not in self._basis_cache:
            out = []

            def rec(i, remaining, prefix):
                if i == len(self.generators):
                    if remaining == 0:
                        out.append(tuple(prefix))
                    return
                g = self.generators[i]
                top = 1 if g.kind == "ext" else remaining // g.degree
                for e in range(min(top, remaining // g.degree) + 1):
                    rec(i + 1, remaining - e * g.degree, prefix + [e])

            rec(0, d, [])
            self._basis_cache[d] = tuple(sorted(out))
        return self._basis_cache[d]

    def monomial_str(self, mono) -> str:
        parts = [
            g.name if e == 1 else f"{g.name}^{e}"
            for e, g in zip(mono, self.generators)
            if e
        ]
        return "*".join(parts) if parts else "1"

    def poincare_series(self) -> PowerSeriesRat:
        series = PowerSeriesRat.make([1])
        for g in self.generators:
            series = series * (geometric(g.degree) if g.kind == "poly" else one_plus(g.degree))
        return series

    def generator_element(self, name: str) -> "Element":
        if name not in self._index:
            raise ValueError(f"no generator named {name!r}")
        mono = [0] * len(self.generators)
        mono[self._index[name]] = 1
        return Element(self, {tuple(mono): 1})

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "generators": [
                {"name": g.name, "degree": g.degree, "kind": g.kind}
                for g in self.generators
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GradedAlgebra":
        return cls(
            data["p"],
            [(g["name"], g["degree"], g["kind"]) for g in data["generators"]],
        )


class ProductAlgebra(GradedAlgebra):
    """Finite product of graded algebras with component-tagged monomials."""

    def __init__(self, components: Iterable[GradedAlgebra]):
        components = tuple(components)
        if not components:
            raise ValueError("need at least one component")
        p = components[0].p
        if any(c.p != p for c in components):
            raise ValueError("components must share the prime")
        self.p = p
        self.components = components
        self._basis_cache = {}

    def __repr__(self):
        return f"ProductAlgebra({' x '.join(map(repr, self.components))})"

    def __eq__(self, other):
        return (
            isinstance(other, ProductAlgebra)
            and self.p == other.p
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.p, self.components))

    def unit_monomials(self):
        return tuple(
            ((ci, c.one_monomial()), 1) for ci, c in enumerate(self.components)
        )

    def monomial_degree(self, mono) -> int:
        ci, inner = mono
        return self.components[ci].monomial_degree(inner)

    def monomial_mul(self, a, b):
        if a[0] != b[0]:
            return None  # cross terms vanish in a product
        got = self.components[a[0]].monomial_mul(a[1], b[1])
        if got is None:
            return None
        coeff, mono = got
        return coeff, (a[0], mono)

    def basis(self, d: int):
        if d not in self._basis_cache:
            out = []
            for ci, comp in enumerate(self.components):
                out.extend((ci, m) for m in comp.basis(d))
            self._basis_cache[d] = tuple(out)
        return self._basis_cache[d]

    def monomial_str(self, mono) -> str:
        ci, inner = mono
        return f"[{ci}]{self.components[ci].monomial_str(inner)}"

    def embed(self, ci: int, elt: "Element") -> "Element":
        if elt.parent != self.components[ci]:
            raise ValueError("element does not live in that component")
        return Element(self, {(ci, m): c for m, c in elt.coeffs.items()})

    def pair(self, *elements) -> "Element":
        """The element (e_0, ..., e_k) of the product."""
        if len(elements) != len(self.components):
            raise ValueError("one element per component required")
        out = Element(self, {})
        for ci, elt in enumerate(elements):
            out = out + self.embed(ci, elt)
        return out


class Element:
    """Finite F_p-linear combination of monomials of one algebra."""

    def __init__(self, parent, coeffs: dict):
        self.parent = parent
        p = parent.p
        self.coeffs = {m: c % p for m, c in coeffs.items() if c % p}

    @classmethod
    def zero(cls, parent) -> "Element":
        return cls(parent, {})

    @classmethod
    def one(cls, parent) -> "Element":
        return cls(parent, dict(parent.unit_monomials()))

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.parent == other.parent
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.parent, tuple(sorted(self.coeffs.items()))))

    def __add__(self, other):
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return Element(self.parent, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) - c
        return Element(self.parent, out)

    def __neg__(self):
        return Element(self.parent, {m: -c for m, c in self.coeffs.items()})

    def __rmul__(self, scalar: int):
        return Element(self.parent, {m: scalar * c for m, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.__rmul__(other)
        out: dict = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                got = self.parent.monomial_mul(m1, m2)
                if got is None:
                    continue
                sign, m = got
                out[m] = out.get(m, 0) + sign * c1 * c2
        return Element(self.parent, out)

    def __pow__(self, n: int):
        out = Element.one(self.parent)
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_homogeneous(self) -> bool:
        degrees = {self.parent.monomial_degree(m) for m in self.coeffs}
        return len(degrees) <= 1

    def degree(self) -> int:
        degrees = {self.parent.monomial_degree(m) for m in self.coeffs}
        if len(degrees) != 1:
            raise ValueError("element is zero or inhomogeneous")
        return degrees.pop()

    def vector(self, d: int) -> list:
        basis = self.parent.basis(d)
        index = {m: i for i, m in enumerate(basis)}
        vec = [0] * len(basis)
        for m, c in self.coeffs.items():
            if self.parent.monomial_degree(m) != d:
                raise ValueError("element has terms outside the requested degree")
            vec[index[m]] = c
        return vec

    @classmethod
    def from_vector(cls, parent, d: int, vec) -> "Element":
        basis = parent.basis(d)
        return cls(parent, {m: c for m, c in zip(basis, vec)})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs):
            c = self.coeffs[m]
            s = self.parent.monomial_str(m)
            parts.append(s if c == 1 else f"{c}*{s}")
        return " + ".join(parts)


def tensor(p: int, *algebras: GradedAlgebra, suffixes: Optional[list] = None) -> GradedAlgebra:
    """Tensor product, concatenating generator lists.

    Suffixes, when given, are appended to the generator names of each
    factor to keep names distinct.
    """
    gens = []
    for i, alg in enumerate(algebras):
        suffix = suffixes[i] if suffixes else ""
        for g in alg.generators:
            gens.append(Generator(g.name + suffix, g.degree, g.kind))
    return GradedAlgebra(p, gens)


# ---------------------------------------------------------------------------
# morphisms


class AlgebraMorphism:
    """Degree-preserving multiplicative map given on generators."""

    def __init__(self, source: GradedAlgebra, target, images: dict):
        if isinstance(source, ProductAlgebra):
            raise TypeError("use ProductMorphism for a product source")
        if set(images) != {g.name for g in source.generators}:
            raise ValueError("images must cover exactly the source generators")
        for g in source.generators:
            img = images[g.name]
            if not img.is_zero() and img.degree() != g.degree:
                raise ValueError(f"image of {g.name} is not homogeneous of its degree")
        self.source = source
        self.target = target
        self.images = dict(images)

    def apply_monomial(self, mono) -> Element:
        out = Element.one(self.target)
        for e, g in zip(mono, self.source.generators):
            for _ in range(e):
                out = out * self.images[g.name]
        return out

    def apply(self, elt: Element) -> Element:
        if elt.parent != self.source:
            raise ValueError("element does not live in the source")
        if not elt.is_homogeneous():
            raise ValueError("apply expects a homogeneous element")
        out = Element.zero(self.target)
        for m, c in elt.coeffs.items():
            out = out + c * self.apply_monomial(m)
        return out

    def matrix_in_degree(self, d: int) -> list:
        """Rows indexed by target basis, columns by source basis."""
        src = self.source.basis(d)
        tgt = self.target.basis(d)
        index = {m: i for i, m in enumerate(tgt)}
        mat = [[0] * len(src) for _ in tgt]
        for j, mono in enumerate(src):
            img = self.apply_monomial(mono)
            for m, c in img.coeffs.items():
                if self.target.monomial_degree(m) != d:
                    raise ValueError("morphism does not preserve degree")
                mat[index[m]][j] = c
        return mat

    def is_surjective_in_degree(self, d: int) -> bool:
        return linalg.rank(self.matrix_in_degree(d), self.source.p) == len(
            self.target.basis(d)
        )


class ProductMorphism:
    """A map out of a product that factors through one projection."""

    def __init__(self, source: ProductAlgebra, component: int, inner: AlgebraMorphism):
        if inner.source != source.components[component]:
            raise ValueError("inner morphism must start at the chosen component")
        self.source = source
        self.component = component
        self.inner = inner
        self.target = inner.target

    def apply_monomial(self, mono) -> Element:
        ci, inner_mono = mono
        if ci != self.component:
            return Element.zero(self.target)
        return self.inner.apply_monomial(inner_mono)

    def apply(self, elt: Element) -> Element:
        out = Element.zero(self.target)
        for m, c in elt.coeffs.items():
            out = out + c * self.apply_monomial(m)
        return out

    def matrix_in_degree(self, d: int) -> list:
        src = self.source.basis(d)
        tgt = self.target.basis(d)
        index = {m: i for i, m in enumerate(tgt)}
        mat = [[0] * len(src) for _ in tgt]
        for j, mono in enumerate(src):
            img = self.apply_monomial(mono)
            for m, c in img.coeffs.items():
                mat[index[m]][j] = c
        return mat


def identity_morphism(alg: GradedAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(
        alg, alg, {g.name: alg.generator_element(g.name) for g in alg.generators}
    )


def dimensions(alg, bound: int) -> GradedDims:
    """Number of admissible monomials per degree."""
    return GradedDims(bound, tuple(len(alg.basis(d)) for d in range(bound + 1)))


# ---------------------------------------------------------------------------
# equalizers


@dataclass
class EqualizerResult:
    source: object
    dims: GradedDims
    bases: dict  # degree -> list of Element

    def contains(self, f, g, elt: Element) -> bool:
        return f.apply(elt) == g.apply(elt)


def equalizer(f, g, bound: int) -> EqualizerResult:
    """Degree-wise kernel of f - g on their common source.

    When the source is a product A x B and f, g factor through the two
    projections, the kernel consists of the pairs (u, v) with f(u) = g(v).
    """
    if f.source != g.source or f.target != g.target:
        raise ValueError("equalizer needs morphisms with equal source and target")
    p = f.source.p
    dims = []
    bases = {}
    for d in range(bound + 1):
        mf = f.matrix_in_degree(d)
        mg = g.matrix_in_degree(d)
        if not mf or not mf[0]:
            n = len(f.source.basis(d))
            delta = [[0] * n] if n else []
            kernel = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        else:
            delta = [
                [(a - b) % p for a, b in zip(ra, rb)] for ra, rb in zip(mf, mg)
            ]
            kernel = linalg.nullspace(delta, p)
        dims.append(len(kernel))
        bases[d] = [Element.from_vector(f.source, d, vec) for vec in kernel]
    return EqualizerResult(f.source, GradedDims(bound, tuple(dims)), bases)


# ---------------------------------------------------------------------------
# invariants of a finite group action


@dataclass
class InvariantsResult:
    algebra: object
    dims: GradedDims
    bases: dict  # degree -> list of Element


def _close_group(morphisms: list) -> list:
    """Closure of degree-preserving endomorphisms under composition."""
    def key(m):
        return tuple(sorted((g.name, tuple(sorted(m.images[g.name].coeffs.items())))
                            for g in m.source.generators))

    seen = {key(m): m for m in morphisms}
    frontier = list(seen.values())
    while frontier:
        m = frontier.pop()
        for g in list(seen.values()):
            comp = compose_morphisms(m, g)
            k = key(comp)
            if k not in seen:
                seen[k] = comp
                frontier.append(comp)
        if len(seen) > 10_000:
            raise ValueError("group closure did not stabilize")
    return list(seen.values())


def compose_morphisms(outer: AlgebraMorphism, inner: AlgebraMorphism) -> AlgebraMorphism:
    if inner.target != outer.source:
        raise ValueError("morphisms do not compose")
    images = {
        g.name: outer.apply(inner.images[g.name]) for g in inner.source.generators
    }
    return AlgebraMorphism(inner.source, outer.target, images)


def invariants(alg: GradedAlgebra, action: list, bound: int) -> InvariantsResult:
    """Fixed subspace of a finite group acting by algebra automorphisms.

    ``action`` lists generating endomorphisms (images of generators are
    homogeneous of the same degree); the full group is closed off and must
    have order prime to p so that averaging projects onto the invariants.
    """
    group = _close_group([identity_morphism(alg)] + list(action))
    n = len(group)
    p = alg.p
    if n % p == 0:
        raise ValueError("group order divisible by p: averaging unavailable")
    ninv = pow(n, p - 2, p)
    dims = []
    bases = {}
    for d in range(bound + 1):
        basis = alg.basis(d)
        size = len(basis)
        if size == 0:
            dims.append(0)
            bases[d] = []
            continue
        proj = [[0] * size for _ in range(size)]
        for g in group:
            mat = g.matrix_in_degree(d)
            for i in range(size):
                for j in range(size):
                    proj[i][j] = (proj[i][j] + mat[i][j]) % p
        proj = [[(ninv * x) % p for x in row] for row in proj]
        # column space of the idempotent = fixed subspace
        rr, pivots = linalg.rref([list(col) for col in zip(*proj)], p)
        vectors = [rr[i] for i in range(len(pivots))]
        dims.append(len(pivots))
        bases[d] = [Element.from_vector(alg, d, vec) for vec in vectors]
    return InvariantsResult(alg, GradedDims(bound, tuple(dims)), bases)


def swap_action(alg: GradedAlgebra, pairs: list) -> AlgebraMorphism:
    """The involution exchanging the named generator pairs."""
    images = {g.name: alg.generator_element(g.name) for g in alg.generators}
    for a, b in pairs:
        images[a] = alg.generator_element(b)
        images[b] = alg.generator_element(a)
    return AlgebraMorphism(alg, alg, images)


# ---------------------------------------------------------------------------
# cohomology of the metacyclic groups Z/p x| Z/m


def _element_of_order(p: int, m: int) -> int:
    """A unit of exact multiplicative order m mod p."""
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            return pow(g, (p - 1) // m, p)
    raise ValueError("no primitive root found")


def _prime_factors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def cohomology_of_metacyclic(p: int, m: int, probe: Optional[int] = None) -> GradedAlgebra:
    """Invariants of an exterior-times-polynomial pair under a weight-one
    scaling action of Z/m, presented on two detected generators.

    For m = p-1 the generator degrees come out as (2p-3, 2p-2); they are
    found by probing invariant dimensions, not assumed.
    """
    if m < 1 or (p - 1) % m != 0:
        raise ValueError("m must divide p-1")
    base = GradedAlgebra(p, [("x", 1, "ext"), ("y", 2, "poly")])
    if m == 1:
        return base
    lam = _element_of_order(p, m)
    action = AlgebraMorphism(
        base,
        base,
        {
            "x": lam * base.generator_element("x"),
            "y": lam * base.generator_element("y"),
        },
    )
    probe = probe if probe is not None else 4 * m + 4
    inv = invariants(base, [action], probe)
    odd = next((d for d in range(1, probe + 1, 2) if inv.dims[d]), None)
    even = next((d for d in range(2, probe + 1, 2) if inv.dims[d]), None)
    if odd is None or even is None:
        raise ValueError("probe bound too small to detect both generators")
    out = GradedAlgebra(p, [(f"u{odd}", odd, "ext"), (f"c{even}", even, "poly")])
    if dimensions(out, probe).dims != inv.dims.dims:
        raise ValueError("invariants are not free on the two detected generators")
    return out


# ---------------------------------------------------------------------------
# free-module verification and relation checking


def verify_free_module(
    eq: EqualizerResult, f, g, subring_gens: list, module_gens: list, bound: int
) -> bool:
    """Check the equalizer is a free module over the stated subring.

    Products (subring monomial) * (module generator) must be linearly
    independent and span the equalizer in every degree up to the bound.
    The subring generators are required to lie in the equalizer first.
    """
    for elt in subring_gens + module_gens:
        if not eq.contains(f, g, elt):
            raise ValueError("a stated generator is not equalized")
    ring = GradedAlgebra(
        eq.source.p,
        [
            (f"g{i}", elt.degree(), "ext" if elt.degree() % 2 else "poly")
            for i, elt in enumerate(subring_gens)
        ],
    )
    p = eq.source.p
    for d in range(bound + 1):
        vectors = []
        for mg in module_gens:
            mg_deg = 0 if mg.is_zero() else mg.degree()
            rest = d - mg_deg
            if rest < 0:
                continue
            for mono in ring.basis(rest):
                prod = mg
                for e, elt in zip(mono, subring_gens):
                    for _ in range(e):
                        prod = prod * elt
                if not prod.is_zero():
                    vectors.append(prod.vector(d))
        want = eq.dims[d]
        if len(vectors) != want:
            return False
        if vectors and linalg.rank([list(col) for col in zip(*vectors)], p) != want:
            return False
    return True


def check_relations(pairs: list) -> list:
    """Evaluate (lhs, rhs) element pairs; True where they agree."""
    return [lhs == rhs for lhs, rhs in pairs]


# ---------------------------------------------------------------------------
# a tiny expression grammar: integers, '*', '^', '+', '-', generator names

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\*|\^|\+|\-|\(|\))")


def parse_element(alg, text: str) -> Element:
    """Parse expressions like ``2*z4^2 + z4*w3`` into an element."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"bad token at {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)
    state = {"i": 0}

    def peek():
        return tokens[state["i"]]

    def take():
        tok = tokens[state["i"]]
        state["i"] += 1
        return tok

    def atom() -> Element:
        tok = take()
        if tok == "(":
            e = expr()
            if take() != ")":
                raise ValueError("unbalanced parenthesis")
            return e
        if tok is None:
            raise ValueError("unexpected end of expression")
        if tok.isdigit():
            return int(tok) * Element.one(alg)
        if not tok.isidentifier():
            raise ValueError(f"unexpected token {tok!r}")
        return alg.generator_element(tok)

    def factor() -> Element:
        e = atom()
        if peek() == "^":
            take()
            exp = take()
            if exp is None or not exp.isdigit():
                raise ValueError("exponent must be an integer")
            e = e ** int(exp)
        return e

    def term() -> Element:
        e = factor()
        while peek() == "*":
            take()
            e = e * factor()
        return e

    def expr() -> Element:
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        e = sign * term()
        while peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
            e = e + sign * term()
        return e

    out = expr()
    if peek() is not None:
        raise ValueError(f"trailing tokens near {peek()!r}")
    return out
