"""Graded polynomial arithmetic over Q and induced module orders.

Representation conventions (kept deliberately plain for speed):

    monomial   tuple of n nonnegative ints (the exponent vector)
    Poly       dict {monomial: Fraction}, no zero coefficients stored
    Elem       dict {basis index: Poly}, no zero polynomials stored

Free-module elements of the degree-0 ring are Elems concentrated on index 0.
The monomial order is the weighted reverse lexicographic order with positive
integer weights nu: higher weighted degree wins, ties broken by the
rightmost nonzero coordinate of the difference being negative.  Module
orders are induced level by level through a fixed list of images, with ties
broken by the larger basis index.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ZeroElementError


@dataclass(frozen=True)
class GradedContext:
    n: int
    nu: tuple  # positive integer weights, gcd 1

    def degree(self, mono):
        return sum(e * w for e, w in zip(mono, self.nu))

    def unit(self):
        return (0,) * self.n


# ---------------------------------------------------------------------------
# monomials

def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))

def mono_divides(a, b):
    """True when x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))

def mono_div(a, b):
    """Exponent vector of x^a / x^b; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))

def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def wrlo_key(mono, ctx: GradedContext):
    """Sort key realizing the weighted reverse lexicographic order."""
    return (ctx.degree(mono), tuple(-e for e in reversed(mono)))


def wrlo_compare(alpha, beta, ctx: GradedContext):
    """-1, 0 or +1 as alpha <, =, > beta under the order."""
    ka, kb = wrlo_key(alpha, ctx), wrlo_key(beta, ctx)
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------------------
# polynomials and module elements

def poly_add_term(poly, coeff, mono):
    c = poly.get(mono, 0) + coeff
    if c:
        poly[mono] = c
    elif mono in poly:
        del poly[mono]


def elem_add_term(elem, idx, coeff, mono):
    poly = elem.setdefault(idx, {})
    poly_add_term(poly, coeff, mono)
    if not poly:
        del elem[idx]


def elem_combine(acc, other, coeff=1, mono=None):
    """acc += coeff * x^mono * other, in place."""
    for idx, poly in other.items():
        for m, c in poly.items():
            elem_add_term(acc, idx, coeff * c, m if mono is None else mono_mul(mono, m))


def elem_scale_term(elem, coeff, mono):
    """coeff * x^mono * elem as a new Elem."""
    out = {}
    for idx, poly in elem.items():
        out[idx] = {mono_mul(mono, m): coeff * c for m, c in poly.items()}
    return out


def elem_is_zero(elem):
    return not elem


def elem_copy(elem):
    return {idx: dict(poly) for idx, poly in elem.items()}


def elem_eq(a, b):
    return a == b


def poly_to_elem(poly, idx=0):
    return {idx: dict(poly)} if poly else {}


def leading_term(poly, ctx: GradedContext):
    """(coefficient, monomial) of the largest term of a plain polynomial."""
    if not poly:
        raise ZeroElementError("leading term of zero polynomial")
    m = max(poly, key=lambda mono: wrlo_key(mono, ctx))
    return poly[m], m


# ---------------------------------------------------------------------------
# the tower of induced module orders

class OrderTower:
    """Monomial orders on the free modules of a resolution chain.

    Level 0 is the ring itself (a free module of rank 1) ordered by wrlo.
    Level k >= 1 is ordered through the enumerated images of its basis in
    level k-1: a module monomial m*e_i maps to m * Lm(image_i), compared one
    level down, ties resolved by the larger basis index.  The comparison is
    flattened at construction time into, per basis index, an accumulated
    level-0 monomial and the tuple of basis indices met during the descent;
    both tables are immutable after add_level, so concurrent readers are
    safe.
    """

    def __init__(self, ctx: GradedContext):
        self.ctx = ctx
        self.acc = [[ctx.unit()]]   # acc[level][idx]: level-0 monomial
        self.path = [[()]]          # path[level][idx]: descent index tuple
        self.lms = [None]           # lms[level][idx]: (coeff, mono, idx) of image

    @property
    def levels(self):
        return len(self.acc)

    def key(self, level, mono, idx):
        """Sortable key for the module monomial x^mono * e_idx at a level."""
        return (
            wrlo_key(mono_mul(mono, self.acc[level][idx]), self.ctx),
            self.path[level][idx] + (idx,),
        )

    def compare(self, level, m1, i, m2, j):
        k1, k2 = self.key(level, m1, i), self.key(level, m2, j)
        return (k1 > k2) - (k1 < k2)

    def leading_module_term(self, elem, level):
        """(coefficient, monomial, basis index) of the largest term."""
        if not elem:
            raise ZeroElementError("leading term of zero module element")
        best = None
        best_key = None
        for idx, poly in elem.items():
            for mono, coeff in poly.items():
                k = self.key(level, mono, idx)
                if best_key is None or k > best_key:
                    best_key = k
                    best = (coeff, mono, idx)
        return best

    def add_level(self, images):
        """Append the order induced by the images of the next level's basis.

        ``images`` are nonzero Elems of the current top level.
        """
        level = self.levels - 1
        lms = [self.leading_module_term(f, level) for f in images]
        acc = []
        path = []
        for (_, mono, p) in lms:
            acc.append(mono_mul(mono, self.acc[level][p]))
            path.append(self.path[level][p] + (p,))
        self.acc.append(acc)
        self.path.append(path)
        self.lms.append(lms)


def module_compare(m1, i, m2, j, tower: OrderTower, level):
    return tower.compare(level, m1, i, m2, j)


# ---------------------------------------------------------------------------
# division and S-vectors

def divide(g, basis, tower: OrderTower, level):
    """Standard expression g = sum q_i * basis_i + remainder.

    At every step the current leading term is reduced by the lowest-index
    basis element whose leading term divides it; irreducible leading terms
    move to the remainder.  Quotients are plain polynomials.
    """
    basis_lts = [tower.leading_module_term(b, level) for b in basis]
    quotients = [{} for _ in basis]
    remainder = {}
    work = elem_copy(g)
    while work:
        coeff, mono, idx = tower.leading_module_term(work, level)
        for bi, (bc, bm, bidx) in enumerate(basis_lts):
            if bidx == idx and mono_divides(bm, mono):
                q = coeff / bc
                qm = mono_div(mono, bm)
                poly_add_term(quotients[bi], q, qm)
                elem_combine(work, basis[bi], -q, qm)
                break
        else:
            elem_add_term(remainder, idx, coeff, mono)
            elem_add_term(work, idx, -coeff, mono)
    return quotients, remainder


def s_vector(fi, fj, tower: OrderTower, level):
    """The leading-term-cancelling combination of two module elements.

    Returns (S, m_ji, m_ij) where S = m_ji*fi - m_ij*fj and each m is a
    signed monomial (coefficient, exponent vector).  Returns None when the
    leading terms sit on different basis elements (their least common
    multiple is zero, so no pair is formed).
    """
    ci, mi, ii = tower.leading_module_term(fi, level)
    cj, mj, ij = tower.leading_module_term(fj, level)
    if ii != ij:
        return None
    lcm = mono_lcm(mi, mj)
    m_ji = (Fraction(1) / ci, mono_div(lcm, mi))
    m_ij = (Fraction(1) / cj, mono_div(lcm, mj))
    s = elem_scale_term(fi, m_ji[0], m_ji[1])
    elem_combine(s, fj, -m_ij[0], m_ij[1])
    return s, m_ji, m_ij


# ---------------------------------------------------------------------------
# text format

def _term_str(coeff, mono, suffix=""):
    factors = []
    for v, e in enumerate(mono):
        if e == 0:
            continue
        factors.append(f"x{v + 1}" if e == 1 else f"x{v + 1}^{e}")
    c = abs(coeff)
    if c != 1 or not factors:
        factors.insert(0, str(c))
    return "*".join(factors) + suffix


def poly_str(poly, ctx: GradedContext):
    """Render a polynomial, terms in decreasing order."""
    if not poly:
        return "0"
    monos = sorted(poly, key=lambda m: wrlo_key(m, ctx), reverse=True)
    out = []
    for m in monos:
        c = poly[m]
        sep = "" if not out else (" + " if c > 0 else " - ")
        if not out and c < 0:
            sep = "-"
        out.append(sep + _term_str(c, m))
    return "".join(out)


def elem_str(elem, tower: OrderTower, level):
    """Render a module element, terms in decreasing order, e[k,j] 1-based.

    Level 0 is the ring itself, so its single basis element is left implicit.
    """
    if not elem:
        return "0"
    terms = [
        (tower.key(level, mono, idx), coeff, mono, idx)
        for idx, poly in elem.items()
        for mono, coeff in poly.items()
    ]
    terms.sort(key=lambda t: t[0], reverse=True)
    out = []
    for _, coeff, mono, idx in terms:
        sep = "" if not out else (" + " if coeff > 0 else " - ")
        if not out and coeff < 0:
            sep = "-"
        suffix = "" if level == 0 else f"·e[{level},{idx + 1}]"
        out.append(sep + _term_str(coeff, mono, suffix))
    return "".join(out)


def _parse_term(text, n):
    suffix_idx = None
    if "·" in text:
        text, ref = text.split("·", 1)
        if not (ref.startswith("e[") and ref.endswith("]")):
            raise ValueError(f"bad basis reference {ref!r}")
        _, j = ref[2:-1].split(",")
        suffix_idx = int(j) - 1
    coeff = Fraction(1)
    mono = [0] * n
    for factor in text.split("*"):
        if factor.startswith("x"):
            if "^" in factor:
                var, e = factor[1:].split("^")
                mono[int(var) - 1] += int(e)
            else:
                mono[int(factor[1:]) - 1] += 1
        else:
            coeff *= Fraction(factor)
    return coeff, tuple(mono), suffix_idx


def parse_elem(text, n):
    """Inverse of elem_str / poly_str (level information is discarded)."""
    if text.strip() == "0":
        return {}
    pieces = text.replace(" - ", "\x00-").replace(" + ", "\x00").split("\x00")
    elem = {}
    for piece in pieces:
        piece = piece.strip()
        sign = 1
        while piece.startswith("-"):
            sign = -sign
            piece = piece[1:]
        coeff, mono, idx = _parse_term(piece, n)
        elem_add_term(elem, 0 if idx is None else idx, sign * coeff, mono)
    return elem


def parse_poly(text, n):
    elem = parse_elem(text, n)
    if not elem:
        return {}
    if set(elem) != {0}:
        raise ValueError("module element where a polynomial was expected")
    return elem[0]
