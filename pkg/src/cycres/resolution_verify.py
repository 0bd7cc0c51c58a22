"""Machine verification of the structural claims on a built complex.

Each checker returns a CheckResult with a witness on failure; full_verify
chains them all into a VerificationReport without aborting early.  The
exactness oracle at the end is deliberately independent of the machinery
that produced the differentials: it assembles every graded piece as an
explicit rational matrix and compares kernel dimensions with ranks.
"""

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .graph_core import WeightedDigraph, is_strongly_complete
from .cyc_complex import (
    CycComplex,
    apply_differential,
    arrow_monomial,
    canonical_partition,
    check_d_squared,
    check_leading_terms,
    minimality_check,
)
from .intlinalg import rank_sparse
from .poly_ring import (
    divide,
    elem_add_term,
    elem_combine,
    elem_scale_term,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    s_vector,
)


@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: object = None
    counters: dict = field(default_factory=dict)
    millis: int = 0


@dataclass
class VerificationReport:
    instance: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.ok for c in self.checks)

    def to_text(self):
        lines = [f"instance: {self.instance}"]
        for c in self.checks:
            extra = ""
            if c.counters:
                extra = " (" + ", ".join(f"{k}={v}" for k, v in sorted(c.counters.items())) + ")"
            wit = "" if c.ok or c.witness is None else f"  witness: {c.witness}"
            lines.append(f"{'PASS' if c.ok else 'FAIL'}  {c.name}{extra} [{c.millis} ms]{wit}")
        lines.append("result: " + ("all checks passed" if self.passed else "FAILURES PRESENT"))
        return "\n".join(lines)

    def to_json_dict(self):
        checks = []
        for c in self.checks:
            rec = {"name": c.name, "status": "pass" if c.ok else "fail", "millis": c.millis}
            if c.witness is not None:
                rec["witness"] = str(c.witness)
            if c.counters:
                rec["counters"] = c.counters
            checks.append(rec)
        return {"instance": self.instance, "checks": checks}


def partition_str(p):
    sep = "" if max(max(b) for b in p) <= 9 else "."
    return "(" + ",".join(sep.join(str(v) for v in b) for b in p) + ")"


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, int((time.perf_counter() - t0) * 1000)


# ---------------------------------------------------------------------------
# degree-0 checks

def _arrow_plus(A, B, Cs, L):
    """Exponents ((sum weights into B) - (sum weights into C))^+ over A."""
    mono = [0] * L.n
    for i in A:
        d = sum(L.a[i - 1][j - 1] for j in B) - sum(L.a[i - 1][j - 1] for j in Cs)
        mono[i - 1] = max(d, 0)
    return tuple(mono)


def s_poly_closed_form(C, D, complex_: CycComplex):
    """The S-polynomial of the two subset binomials, by the set-splitting identity.

    Splits the subsets into E = C&D, F = C-E, G = D-E, V = complement of the
    union, and combines the degree-0 binomials of F and G with explicit
    monomial coefficients.  Entirely bypasses leading-term computations.
    """
    L = complex_.L
    n = complex_.n
    Cset, Dset = set(C), set(D)
    E = sorted(Cset & Dset)
    F = sorted(Cset - Dset)
    G = sorted(Dset - Cset)
    V = sorted(set(range(1, n + 1)) - (Cset | Dset))
    l_cd = mono_mul(mono_mul(_arrow_plus(E, G, F, L), arrow_monomial(F, G, L)),
                    arrow_monomial(V, D, L))
    l_dc = mono_mul(mono_mul(_arrow_plus(E, F, G, L), arrow_monomial(G, F, L)),
                    arrow_monomial(V, C, L))
    out = {}
    if F:
        fF = complex_.diffs[1][complex_.index[1][_subset_partition(F, n)]]
        elem_combine(out, fF, Fraction(1), l_cd)
    if G:
        fG = complex_.diffs[1][complex_.index[1][_subset_partition(G, n)]]
        elem_combine(out, fG, Fraction(-1), l_dc)
    return out, l_cd, l_dc


def _subset_partition(C, n):
    comp = tuple(v for v in range(1, n + 1) if v not in set(C))
    return (tuple(sorted(C)), comp)


def verify_degree0_gb(C: CycComplex) -> CheckResult:
    """Buchberger criterion plus the closed-form S-polynomial identity."""
    def run():
        g0 = C.diffs[1]
        r1 = len(g0)
        pairs = 0
        for i in range(r1):
            for j in range(i + 1, r1):
                ci = C.bases[1][i][0]
                cj = C.bases[1][j][0]
                sv = s_vector(g0[i], g0[j], C.tower, 0)
                if sv is None:
                    return False, f"no S-pair for ({i + 1},{j + 1})", pairs
                s, m_ji, m_ij = sv
                formula, l_cd, l_dc = s_poly_closed_form(ci, cj, C)
                if s != formula:
                    return False, (
                        f"closed form mismatch for C={set(ci)}, D={set(cj)}"
                    ), pairs
                if s:
                    s_lt = C.tower.leading_module_term(s, 0)
                    s_key = C.tower.key(0, s_lt[1], s_lt[2])
                    for mono, piece in ((l_cd, set(ci) - set(cj)), (l_dc, set(cj) - set(ci))):
                        if piece:
                            fP = g0[C.index[1][_subset_partition(sorted(piece), C.n)]]
                            lt = C.tower.leading_module_term(fP, 0)
                            if s_key < C.tower.key(0, mono_mul(mono, lt[1]), lt[2]):
                                return False, (
                                    f"leading bound fails for C={set(ci)}, D={set(cj)}"
                                ), pairs
                _, rem = divide(s, g0, C.tower, 0)
                pairs += 1
                if rem:
                    return False, f"nonzero remainder for C={set(ci)}, D={set(cj)}", pairs
        return True, None, pairs

    (ok, witness, pairs), ms = _timed(run)
    return CheckResult("degree0_groebner", ok, witness, {"pairs": pairs}, ms)


def verify_distinct_images(C: CycComplex) -> CheckResult:
    """Differential images of basis elements are pairwise distinct, per level."""
    def run():
        for k in range(1, C.n):
            seen = {}
            for j, f in enumerate(C.diffs[k]):
                key = tuple(sorted(
                    (idx, tuple(sorted(poly.items()))) for idx, poly in f.items()
                ))
                if key in seen:
                    return False, f"equal images at level {k}: {seen[key] + 1}, {j + 1}"
                seen[key] = j
        return True, None

    (ok, witness), ms = _timed(run)
    return CheckResult("basis_images_distinct", ok, witness, {}, ms)


def _random_poly(ctx, rng, terms=3, max_exp=2):
    poly = {}
    for _ in range(terms):
        mono = tuple(rng.randint(0, max_exp) for _ in range(ctx.n))
        coeff = Fraction(rng.choice([1, -1]) * rng.randint(1, 3))
        if mono in poly:
            continue
        poly[mono] = coeff
    return poly


def verify_colon_stability(C: CycComplex, trials=8, seed=0) -> CheckResult:
    """Multiplying by the last variable never changes ideal membership.

    Checks that no degree-0 leading term involves x_n, that random ideal
    members stay members after multiplication by x_n, and that random
    non-members stay non-members.
    """
    def run():
        g0 = C.diffs[1]
        n = C.n
        for j, lt in enumerate(C.tower.lms[1]):
            if lt[1][n - 1] != 0:
                return False, f"x{n} divides leading term of generator {j + 1}", 0
        rng = random.Random(seed)
        xn = tuple(0 if v != n - 1 else 1 for v in range(n))
        done = 0
        for _ in range(trials):
            member = {}
            for _ in range(rng.randint(1, 3)):
                i = rng.randrange(len(g0))
                mono = tuple(rng.randint(0, 2) for _ in range(n))
                elem_combine(member, g0[i], Fraction(rng.choice([1, -1])), mono)
            for elem in (member, elem_scale_term(member, Fraction(1), xn)):
                _, rem = divide(elem, g0, C.tower, 0)
                if rem:
                    return False, "ideal member with nonzero remainder", done
            hunt = 0
            while True:
                h = {0: _random_poly(C.ctx, rng)}
                if not h[0]:
                    continue
                _, rem = divide(h, g0, C.tower, 0)
                if rem:
                    break
                hunt += 1
                if hunt > 50:
                    return False, "could not sample a non-member", done
            _, rem = divide(elem_scale_term(h, Fraction(1), xn), g0, C.tower, 0)
            if not rem:
                return False, "x_n times a non-member reduced to zero", done
            done += 1
        return True, None, done

    (ok, witness, done), ms = _timed(run)
    return CheckResult("colon_stability", ok, witness, {"trials": done}, ms)


# ---------------------------------------------------------------------------
# module quotients and Schreyer structure

@dataclass
class ModuleQuotientSet:
    level: int
    index: int        # 0-based basis position i
    generators: list  # of (source j, coeff, mono, pruned)

    def retained(self):
        return [(j, c, m) for j, c, m, pruned in self.generators if not pruned]


def basis_members(C: CycComplex, k, i):
    """Positions j of elements with the same leading prefix and a larger k-th block."""
    p = C.bases[k][i]
    prefix = p[: k - 1]
    ik = set(p[k - 1])
    out = []
    for j in range(i):
        q = C.bases[k][j]
        if q[: k - 1] == prefix and set(q[k - 1]) > ik:
            out.append(j)
    return out


def _direct_quotient(C: CycComplex, k, j, i):
    """m = LCM(Lm f_j, Lm f_i) / Lt(f_i) from the stored leading terms."""
    cj, mj, pj = C.tower.lms[k][j]
    ci, mi, pi = C.tower.lms[k][i]
    if pj != pi:
        return None
    lcm = mono_lcm(mj, mi)
    return (Fraction(1) / ci, mono_div(lcm, mi))


def module_quotients(C: CycComplex, k, i) -> ModuleQuotientSet:
    """Generators of the colon ideal of leading terms below position i.

    Computes every nonzero quotient directly from the leading terms,
    checks the closed product formula on same-prefix sources, and marks as
    pruned those whose source does not enlarge the k-th block; a pruned
    generator must be divisible by a retained one.
    """
    p = C.bases[k][i]
    prefix = p[: k - 1]
    ik = set(p[k - 1])
    ik1 = set(p[k])
    members = set(basis_members(C, k, i))
    sign = Fraction((-1) ** (k - 1))
    gens = []
    for j in range(i):
        direct = _direct_quotient(C, k, j, i)
        q = C.bases[k][j]
        same_prefix = q[: k - 1] == prefix
        if not same_prefix:
            if direct is not None:
                raise AssertionError(
                    f"nonzero quotient across different prefixes at level {k}: "
                    f"{j + 1}, {i + 1}"
                )
            continue
        jk, jk1 = set(q[k - 1]), set(q[k])
        expected = (
            sign,
            mono_mul(
                _arrow_plus(sorted(jk & ik), sorted(jk1), sorted(ik1), C.L),
                arrow_monomial(sorted(jk & ik1), sorted(jk1), C.L),
            ),
        )
        if direct != expected:
            raise AssertionError(
                f"closed formula mismatch at level {k}, pair ({j + 1},{i + 1}): "
                f"direct {direct}, formula {expected}"
            )
        gens.append((j, direct[0], direct[1], j not in members))
    mqs = ModuleQuotientSet(k, i, gens)
    retained = mqs.retained()
    for j, coeff, mono, pruned in gens:
        if not pruned:
            continue
        if not any(mono_divides(m, mono) for _, _, m in retained):
            raise AssertionError(
                f"superfluous generator {j + 1} at level {k} not divisible "
                f"by a retained one (target {i + 1})"
            )
    return mqs


def verify_module_quotients(C: CycComplex) -> CheckResult:
    def run():
        count = 0
        for k in range(1, C.n):
            for i in range(1, len(C.bases[k])):
                try:
                    mqs = module_quotients(C, k, i)
                except AssertionError as e:
                    return False, str(e), count
                count += len(mqs.generators)
                p = C.bases[k][i]
                if set(p[k]) == {C.n} and mqs.generators:
                    return False, (
                        f"expected empty quotient set at level {k}, "
                        f"index {i + 1}"
                    ), count
        return True, None, count

    (ok, witness, count), ms = _timed(run)
    return CheckResult("module_quotients", ok, witness, {"generators": count}, ms)


def tau_pair(C: CycComplex, k, e):
    """The two merge partners whose S-vector the boundary of e represents."""
    ei = canonical_partition(e[:k] + (tuple(sorted(e[k] + e[k + 1])),), C.n)
    ej = canonical_partition(
        e[: k - 1] + (tuple(sorted(e[k - 1] + e[k])), e[k + 1]), C.n
    )
    return C.index[k][ei], C.index[k][ej]


def verify_tau_identity(C: CycComplex, k, e) -> tuple:
    """Check that -boundary(e) is a syzygy recording a standard expression.

    Returns (ok, witness).  e is a basis partition with k+2 blocks.
    """
    i, j = tau_pair(C, k, e)
    if j >= i:
        return False, f"pair order violated for {partition_str(e)}"
    fi, fj = C.diffs[k][i], C.diffs[k][j]
    sv = s_vector(fi, fj, C.tower, k - 1)
    if sv is None:
        return False, f"no S-pair behind {partition_str(e)}"
    s, m_ji, m_ij = sv
    de = C.diffs[k + 1][C.index[k + 1][e]]
    sign = Fraction((-1) ** (k - 1))
    expect_ji = (sign, arrow_monomial(e[k], e[k + 1], C.L))
    expect_ij = (sign, arrow_monomial(e[k - 1], e[k], C.L))
    if m_ji != expect_ji or m_ij != expect_ij:
        return False, f"m-coefficients differ at {partition_str(e)}"
    neg = elem_scale_term(de, Fraction(-1), C.ctx.unit())
    if neg.get(i) != {m_ji[1]: m_ji[0]}:
        return False, f"leading component mismatch at {partition_str(e)}"
    if neg.get(j) != {m_ij[1]: -m_ij[0]}:
        return False, f"second component mismatch at {partition_str(e)}"
    # the remaining components must write S as a standard expression
    tail = {}
    for s_idx, poly in de.items():
        if s_idx in (i, j):
            continue
        for mono, coeff in poly.items():
            elem_add_term(tail, s_idx, coeff, mono)
    combo = {}
    for s_idx, poly in tail.items():
        for mono, coeff in poly.items():
            elem_combine(combo, C.diffs[k][s_idx], coeff, mono)
    if combo != s:
        return False, f"tail does not represent the S-vector at {partition_str(e)}"
    if apply_differential(C, k, de):
        return False, f"boundary of boundary nonzero at {partition_str(e)}"
    if s:
        lt = C.tower.leading_module_term(s, k - 1)
        s_key = C.tower.key(k - 1, lt[1], lt[2])
        for s_idx, poly in tail.items():
            glt = C.tower.lms[k][s_idx]
            for mono in poly:
                if s_key < C.tower.key(k - 1, mono_mul(mono, glt[1]), glt[2]):
                    return False, (
                        f"standard-expression bound fails at {partition_str(e)}"
                    )
    return True, None


def verify_tau_identities(C: CycComplex) -> CheckResult:
    def run():
        count = 0
        for k in range(1, C.n - 1):
            for e in C.bases[k + 1]:
                ok, witness = verify_tau_identity(C, k, e)
                if not ok:
                    return False, witness, count
                count += 1
        return True, None, count

    (ok, witness, count), ms = _timed(run)
    return CheckResult("tau_syzygies", ok, witness, {"elements": count}, ms)


def rho_image(C: CycComplex, k, i, j):
    p, q = C.bases[k][i], C.bases[k][j]
    jk = set(q[k - 1])
    ik = set(p[k - 1])
    return p[:k] + (tuple(sorted(jk - ik)), q[k])


def verify_schreyer_coverage(C: CycComplex, k) -> tuple:
    """Retained generators biject with the next level's basis, with matching
    leading components; at the top level every quotient set must be empty."""
    n = C.n
    above = C.bases[k + 1] if k + 1 < n else []
    seen = {}
    total = 0
    for i in range(len(C.bases[k])):
        for j in basis_members(C, k, i):
            h = rho_image(C, k, i, j)
            if h in seen:
                return False, f"rho images collide on {partition_str(h)}", total
            if k + 1 >= n or h not in C.index[k + 1]:
                return False, f"rho image {partition_str(h)} not a basis element", total
            seen[h] = (i, j)
            total += 1
            hi = C.index[k + 1][h]
            lc, lm, lidx = C.tower.lms[k + 1][hi]
            sign = Fraction((-1) ** (k - 1))
            m = _direct_quotient(C, k, j, i)
            if m is None or lidx != i or lm != m[1] or abs(lc) != abs(m[0]) or m[0] != sign:
                return False, (
                    f"leading component of {partition_str(h)} does not match "
                    f"generator ({j + 1},{i + 1})"
                ), total
    if len(above) != total:
        return False, f"generator count {total} != rank {len(above)}", total
    if above and len(seen) != len(above):
        return False, "rho images do not cover the next basis", total
    return True, None, total


def verify_coverage_all(C: CycComplex) -> CheckResult:
    def run():
        grand = 0
        for k in range(1, C.n):
            ok, witness, total = verify_schreyer_coverage(C, k)
            if not ok:
                return False, f"level {k}: {witness}", grand
            grand += total
        return True, None, grand

    (ok, witness, grand), ms = _timed(run)
    return CheckResult("schreyer_coverage", ok, witness, {"generators": grand}, ms)


# ---------------------------------------------------------------------------
# independent exactness oracle

def monomials_of_degree(nu, d):
    """All exponent vectors with the given weighted degree."""
    n = len(nu)
    out = []
    mono = [0] * n

    def rec(i, rem):
        if i == n - 1:
            if rem % nu[i] == 0:
                mono[i] = rem // nu[i]
                out.append(tuple(mono))
                mono[i] = 0
            return
        w = nu[i]
        for e in range(rem // w + 1):
            mono[i] = e
            rec(i + 1, rem - e * w)
        mono[i] = 0

    if d >= 0:
        rec(0, d)
    return out


def graded_piece_rank(C: CycComplex, k, d, mono_cache):
    """Exact rank of the degree-d piece of the k-th differential.

    Returns (rank, number of columns).
    """
    def monos(deg):
        if deg not in mono_cache:
            mono_cache[deg] = monomials_of_degree(C.ctx.nu, deg)
        return mono_cache[deg]

    row_ids = {}
    for p in range(len(C.bases[k - 1])):
        for beta in monos(d - C.shifts[k - 1][p]):
            row_ids[(p, beta)] = len(row_ids)
    rows = [dict() for _ in row_ids]
    ncols = 0
    for j, f in enumerate(C.diffs[k]):
        for alpha in monos(d - C.shifts[k][j]):
            for p, poly in f.items():
                for mono, coeff in poly.items():
                    rid = row_ids[(p, mono_mul(alpha, mono))]
                    rows[rid][ncols] = rows[rid].get(ncols, 0) + int(coeff)
            ncols += 1
    return rank_sparse(rows), ncols


def graded_homology_oracle(C: CycComplex, d_max) -> CheckResult:
    """Vanishing homology on every graded piece up to the degree bound.

    Position 0 compares the rank of the first differential with the count of
    monomials inside the leading-term ideal of the degree-0 basis; higher
    positions compare kernel dimensions with the rank one step up.
    """
    def run():
        n = C.n
        lt_monos = [lt[1] for lt in C.tower.lms[1]]
        degrees = 0
        for d in range(d_max + 1):
            mono_cache = {}
            ranks = {}
            cols = {}
            for k in range(1, n):
                ranks[k], cols[k] = graded_piece_rank(C, k, d, mono_cache)
            ranks[n] = 0
            all_d = monomials_of_degree(C.ctx.nu, d)
            in_lt = sum(
                1 for m in all_d if any(mono_divides(g, m) for g in lt_monos)
            )
            if ranks[1] != in_lt:
                return False, (
                    f"degree {d}: rank {ranks[1]} of the first map, "
                    f"{in_lt} monomials in the leading-term ideal"
                ), degrees
            for k in range(1, n):
                if cols[k] - ranks[k] != ranks[k + 1]:
                    return False, (
                        f"homology at position {k}, degree {d}: "
                        f"kernel {cols[k] - ranks[k]}, image {ranks[k + 1]}"
                    ), degrees
            degrees += 1
        return True, None, degrees

    (ok, witness, degrees), ms = _timed(run)
    return CheckResult("graded_homology", ok, witness, {"degrees": degrees}, ms)


# ---------------------------------------------------------------------------
# driver

def count_monomials(nu, d_top):
    """counts[d] = number of exponent vectors of weighted degree d."""
    counts = [0] * (d_top + 1)
    counts[0] = 1
    for w in nu:
        for d in range(w, d_top + 1):
            counts[d] += counts[d - w]
    return counts


def default_d_max(C: CycComplex, cap=12, max_cols=6000):
    """Degree bound for the exactness oracle: twice the top shift, capped.

    Degrees whose graded pieces would exceed max_cols columns in some
    position are dropped from the default range; an explicit --max-degree
    overrides this guard.
    """
    bound = min(2 * max(C.shifts[C.n - 1]), cap)
    counts = count_monomials(C.ctx.nu, bound)
    safe = -1
    for d in range(bound + 1):
        widest = max(
            sum(counts[d - s] for s in C.shifts[k] if s <= d)
            for k in range(1, C.n)
        )
        if widest > max_cols:
            break
        safe = d
    return max(safe, 0)


def full_verify(C: CycComplex, d_max=None, trials=8, seed=0, instance="") -> VerificationReport:
    """Run every structural check and the exactness oracle; never stops early."""
    if d_max is None:
        d_max = default_d_max(C)
    report = VerificationReport(instance or f"n={C.n}")

    out, ms = _timed(lambda: check_d_squared(C))
    report.checks.append(CheckResult("d_squared", out, None if out else "composition nonzero", {}, ms))

    out, ms = _timed(lambda: check_leading_terms(C))
    report.checks.append(CheckResult("leading_term_formula", out, None if out else "formula mismatch", {}, ms))

    report.checks.append(verify_distinct_images(C))
    report.checks.append(verify_degree0_gb(C))
    report.checks.append(verify_colon_stability(C, trials=trials, seed=seed))
    report.checks.append(verify_module_quotients(C))
    report.checks.append(verify_tau_identities(C))
    report.checks.append(verify_coverage_all(C))

    def run_min():
        minimal, witness = minimality_check(C)
        complete = is_strongly_complete(C.L.digraph())
        if minimal != complete:
            return False, (
                f"minimality flag {minimal} but strongly complete is {complete}"
            )
        return True, (None if minimal else f"non-minimal witness {witness}")
    (ok, wit), ms = _timed(run_min)
    report.checks.append(CheckResult("minimality_vs_completeness", ok, wit, {}, ms))

    report.checks.append(graded_homology_oracle(C, d_max))
    return report


# ---------------------------------------------------------------------------
# random instances for the property suites

def random_icb_digraph(n, rng: random.Random, extra=None, max_weight=3):
    """Random strongly connected digraph: a Hamiltonian cycle plus extras.

    The cycle guarantees strong connectivity; extra arcs (default about n of
    them) exercise non-complete shapes.  Weights are 1..max_weight.
    """
    order = list(range(1, n + 1))
    rng.shuffle(order)
    arcs = {}
    for a, b in zip(order, order[1:] + order[:1]):
        arcs[(a, b)] = rng.randint(1, max_weight)
    if extra is None:
        extra = n
    pairs = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)
             if a != b and (a, b) not in arcs]
    rng.shuffle(pairs)
    for a, b in pairs[:extra]:
        arcs[(a, b)] = rng.randint(1, max_weight)
    return WeightedDigraph(
        n, tuple((a, b, w) for (a, b), w in sorted(arcs.items()))
    )
