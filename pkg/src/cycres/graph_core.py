"""Weighted digraphs, their Laplacians, and block echelon structure.

Vertices are numbered 1..n.  A digraph here always means: finite, weighted,
directed, with no loops, no sources and no sinks.  Its Laplacian has positive
diagonal equal to the weighted out-degree, nonpositive off-diagonal entries,
and zero row sums; such matrices are classified as

    CB   -- the general case,
    ICB  -- additionally irreducible (digraph strongly connected),
    PCB  -- all off-diagonal weights positive (digraph strongly complete).
"""

import json
from dataclasses import dataclass

from .errors import (
    InternalError,
    NotIrreducibleError,
    NotStronglyConnectedError,
    TooSmallError,
    ValidationError,
)


@dataclass(frozen=True)
class WeightedDigraph:
    n: int
    arcs: tuple  # of (source, target, weight), 1-based vertices

    def out_weights(self):
        """n x n array w[i][j] = weight of arc i+1 -> j+1, zero if absent."""
        w = [[0] * self.n for _ in range(self.n)]
        for s, t, wt in self.arcs:
            w[s - 1][t - 1] = wt
        return w


@dataclass(frozen=True)
class CBMatrix:
    """Laplacian-type matrix stored as nonnegative weights.

    a[i][j] for i != j is the arc weight; a[i][i] is the diagonal (weighted
    out-degree).  The signed matrix entry is -a[i][j] off the diagonal.
    cb_class / echelon / perm are filled in by classify() and prepare().
    """

    n: int
    a: tuple  # tuple of tuples, nonnegative ints
    cb_class: str = None
    echelon: tuple = None
    perm: tuple = None

    def __post_init__(self):
        a = self.a
        for i in range(self.n):
            if a[i][i] <= 0:
                raise ValidationError(f"diagonal entry {i + 1} not positive")
            if a[i][i] != sum(a[i][j] for j in range(self.n) if j != i):
                raise ValidationError(f"row {i + 1} sum does not match diagonal")
        for j in range(self.n):
            if all(a[i][j] == 0 for i in range(self.n) if i != j):
                raise ValidationError(f"column {j + 1} has no off-diagonal entry")

    def signed_rows(self):
        """The actual integer matrix: diagonal positive, off-diagonal negated."""
        return [
            [self.a[i][i] if i == j else -self.a[i][j] for j in range(self.n)]
            for i in range(self.n)
        ]

    def digraph(self):
        arcs = tuple(
            (i + 1, j + 1, self.a[i][j])
            for i in range(self.n)
            for j in range(self.n)
            if i != j and self.a[i][j] > 0
        )
        return WeightedDigraph(self.n, arcs)


def validate_digraph(n, arcs):
    if n < 3:
        raise TooSmallError(f"need at least 3 vertices, got {n}")
    seen = set()
    has_out = [False] * (n + 1)
    has_in = [False] * (n + 1)
    for s, t, w in arcs:
        if not (1 <= s <= n and 1 <= t <= n):
            raise ValidationError(f"arc ({s},{t}) out of vertex range 1..{n}")
        if s == t:
            raise ValidationError(f"loop at {s}")
        if not isinstance(w, int) or w <= 0:
            raise ValidationError(f"arc ({s},{t}) has nonpositive weight {w}")
        if (s, t) in seen:
            raise ValidationError(f"duplicate arc ({s},{t})")
        seen.add((s, t))
        has_out[s] = True
        has_in[t] = True
    for v in range(1, n + 1):
        if not has_out[v]:
            raise ValidationError(f"sink at {v} (no outgoing arc)")
        if not has_in[v]:
            raise ValidationError(f"source at {v} (no incoming arc)")
    return WeightedDigraph(n, tuple(arcs))


def digraph_from_matrix(rows):
    """Digraph of a signed Laplacian-type matrix; entry (i,j) = -weight."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValidationError("matrix is not square")
    arcs = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            v = rows[i][j]
            if v > 0:
                raise ValidationError(
                    f"positive off-diagonal entry at ({i + 1},{j + 1})"
                )
            if v != 0:
                arcs.append((i + 1, j + 1, -v))
    g = validate_digraph(n, arcs)
    lap = laplacian(g)
    if lap.signed_rows() != [list(r) for r in rows]:
        raise ValidationError("diagonal does not equal the weighted out-degree")
    return g


def parse_digraph(text):
    """Parse a JSON document: {"matrix": [[..]]} or {"n":., "arcs":[..]}.

    A matrix key takes precedence when both are present.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ValidationError("top-level JSON must be an object")
    if "matrix" in doc:
        return digraph_from_matrix(doc["matrix"])
    if "n" in doc and "arcs" in doc:
        arcs = []
        for rec in doc["arcs"]:
            try:
                arcs.append((rec["from"], rec["to"], rec["w"]))
            except (TypeError, KeyError) as e:
                raise ValidationError(f"bad arc record {rec!r}") from e
        return validate_digraph(doc["n"], arcs)
    raise ValidationError('expected keys "matrix" or "n"+"arcs"')


def laplacian(g: WeightedDigraph) -> CBMatrix:
    w = g.out_weights()
    for i in range(g.n):
        w[i][i] = sum(w[i])
    return CBMatrix(g.n, tuple(tuple(row) for row in w))


def strongly_connected_components(g: WeightedDigraph):
    """Tarjan's algorithm, iterative; components in reverse topological order."""
    n = g.n
    adj = [[] for _ in range(n + 1)]
    for s, t, _ in g.arcs:
        adj[s].append(t)
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = [0]

    def strongconnect(root):
        work = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index[v] = low[v] = counter[0]
                counter[0] += 1
                stack.append(v)
                on_stack.add(v)
            recurse = False
            for i in range(pi, len(adj[v])):
                u = adj[v][i]
                if u not in index:
                    work.append((v, i + 1))
                    work.append((u, 0))
                    recurse = True
                    break
                if u in on_stack:
                    low[v] = min(low[v], index[u])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    on_stack.discard(u)
                    comp.append(u)
                    if u == v:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    for v in range(1, n + 1):
        if v not in index:
            strongconnect(v)
    return comps


def is_strongly_connected(g: WeightedDigraph) -> bool:
    return len(strongly_connected_components(g)) == 1


def is_strongly_complete(g: WeightedDigraph) -> bool:
    return len(g.arcs) == g.n * (g.n - 1)


def classify(L: CBMatrix) -> str:
    """Return "PCB", "ICB" or "CB"."""
    n = L.n
    if all(L.a[i][j] > 0 for i in range(n) for j in range(n) if i != j):
        return "PCB"
    if is_strongly_connected(L.digraph()):
        return "ICB"
    return "CB"


def unweighted_distance(g: WeightedDigraph, omega: int):
    """Directed BFS distances (ignoring weights) from omega to every vertex."""
    n = g.n
    adj = [[] for _ in range(n + 1)]
    for s, t, _ in g.arcs:
        adj[s].append(t)
    dist = [None] * (n + 1)
    dist[omega] = 0
    queue = [omega]
    while queue:
        nxt = []
        for v in queue:
            for u in adj[v]:
                if dist[u] is None:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        queue = nxt
    for v in range(1, n + 1):
        if dist[v] is None:
            raise NotStronglyConnectedError(f"vertex {v} unreachable from {omega}")
    return tuple(dist[1:])


def omega_delta_enumeration(g: WeightedDigraph, omega: int = None):
    """Relabelling that sorts vertices by decreasing distance from omega.

    Returns perm with perm[v-1] = new index of vertex v (1-based); omega
    becomes vertex n, vertices at equal distance keep their original
    relative order.
    """
    n = g.n
    if omega is None:
        omega = n
    if not 1 <= omega <= n:
        raise ValidationError(f"omega {omega} out of range 1..{n}")
    dist = unweighted_distance(g, omega)
    delta = max(dist)
    order = sorted(
        (v for v in range(1, n + 1) if v != omega),
        key=lambda v: (-dist[v - 1], v),
    )
    order.append(omega)
    perm = [0] * n
    for new, old in enumerate(order, start=1):
        perm[old - 1] = new
    return tuple(perm)


def permute_matrix(L: CBMatrix, perm) -> CBMatrix:
    """Apply the same permutation to rows and columns; perm[old-1] = new."""
    n = L.n
    inv = [0] * n
    for old, new in enumerate(perm):
        inv[new - 1] = old
    a = tuple(
        tuple(L.a[inv[i]][inv[j]] for j in range(n)) for i in range(n)
    )
    return CBMatrix(n, a)


def block_echelon_structure(L: CBMatrix):
    """Block sizes (q_1, ..., q_delta) if L is in block echelon form, else None.

    The only candidate blocks are the distance classes from the last vertex
    (farthest class first); the matrix conditions are then checked directly:
    L[I_i, I_j] = 0 for j <= delta-1, i >= j+2, and every column of
    L[I_{j+1}, I_j] nonzero.
    """
    n = L.n
    g = L.digraph()
    try:
        dist = unweighted_distance(g, n)
    except NotStronglyConnectedError:
        return None
    delta = max(dist)
    blocks = []
    pos = 0
    for i in range(1, delta + 1):
        cls = [v for v in range(1, n) if dist[v - 1] == delta + 1 - i]
        if cls != list(range(pos + 1, pos + 1 + len(cls))):
            return None
        blocks.append(cls)
        pos += len(cls)
    if pos != n - 1:
        return None
    blocks.append([n])
    a = L.a
    for j in range(delta - 1):
        for i in range(j + 2, delta + 1):
            for r in blocks[i]:
                for c in blocks[j]:
                    if a[r - 1][c - 1] != 0:
                        return None
    for j in range(delta):
        for c in blocks[j]:
            if all(a[r - 1][c - 1] == 0 for r in blocks[j + 1]):
                return None
    return (delta, tuple(len(b) for b in blocks[:delta]))


def prepare(L: CBMatrix, omega: int = None) -> CBMatrix:
    """Permute an irreducible matrix into block echelon form.

    Returns a copy with cb_class, echelon block sizes and the applied
    permutation recorded.
    """
    cls = classify(L)
    if cls == "CB":
        raise NotIrreducibleError("matrix is reducible")
    perm = omega_delta_enumeration(L.digraph(), omega)
    M = permute_matrix(L, perm)
    structure = block_echelon_structure(M)
    if structure is None:
        raise InternalError("enumeration did not produce echelon form")
    delta, sizes = structure
    return CBMatrix(M.n, M.a, cb_class=cls, echelon=sizes, perm=perm)
