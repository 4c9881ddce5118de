"""Sparse polynomials on matrix coordinates, with group action, gradings,
pullbacks along dual projections, and Vandermonde coefficient extraction.

Variables come in families p, q, r (matrix entries) and v, w (vector
entries).  The symmetric and skew blocks of types B, C, D are stored through
canonical variables only: q[k,l] with k <= l for symmetric (type C) and
k < l for skew (types B, D, diagonal absent); other positions read as +/-
the canonical variable.  Monomials are sorted variable-power tuples; terms
are kept in a fixed graded order so printing is canonical.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chains import ChainSpec, GroupType, dual_projection_instructions, group_membership
from .matrix import Matrix, inverse


class PolyError(ValueError):
    pass


@dataclass(frozen=True)
class PolyContext:
    kind: str  # "gl", "B", "C", "D"
    n: int

    def __post_init__(self):
        if self.kind not in ("gl", "B", "C", "D") or self.n < 1:
            raise PolyError(f"bad polynomial context {self.kind!r}, n={self.n}")

    @property
    def families(self):
        if self.kind == "gl":
            return ("p",)
        if self.kind == "B":
            return ("p", "q", "r", "v", "w")
        return ("p", "q", "r")

    @property
    def ambient(self) -> int:
        if self.kind == "gl":
            return self.n
        if self.kind == "B":
            return 2 * self.n + 1
        return 2 * self.n


def canonical_var(ctx: PolyContext, family: str, i: int, j: int | None = None):
    """Validate and return a canonical variable key."""
    n = ctx.n
    if family not in ctx.families:
        raise PolyError(f"family {family!r} not available in context {ctx.kind}")
    if family in ("v", "w"):
        if j is not None or not (1 <= i <= n):
            raise PolyError(f"bad vector variable {family}[{i}]")
        return (family, i)
    if j is None or not (1 <= i <= n and 1 <= j <= n):
        raise PolyError(f"bad variable {family}[{i},{j}]")
    if family in ("q", "r"):
        if ctx.kind in ("B", "D") and i >= j:
            raise PolyError(f"skew canonical {family} variables need i < j")
        if ctx.kind == "C" and i > j:
            raise PolyError(f"symmetric canonical {family} variables need i <= j")
    return (family, i, j)


def family_entry(ctx: PolyContext, family: str, i: int, j: int):
    """Signed canonical variable for entry (i, j) of a q/r block; [] on the skew diagonal."""
    if family == "p" or ctx.kind == "gl":
        return [(1, canonical_var(ctx, family, i, j))]
    if ctx.kind == "C":
        return [(1, canonical_var(ctx, family, min(i, j), max(i, j)))]
    if i == j:
        return []
    if i < j:
        return [(1, canonical_var(ctx, family, i, j))]
    return [(-1, canonical_var(ctx, family, j, i))]


@dataclass(frozen=True)
class CoordPoly:
    context: PolyContext
    field: object
    terms: tuple  # sorted ((monomial, coeff), ...); monomial = sorted ((var, exp), ...)

    # -- construction ---------------------------------------------------------

    @staticmethod
    def _normalize(ctx, field, d: dict) -> "CoordPoly":
        items = []
        for mono, c in d.items():
            if field.is_zero(c):
                continue
            items.append((tuple(sorted(mono)), c))
        items.sort(key=lambda t: (-sum(e for _, e in t[0]), t[0]))
        return CoordPoly(ctx, field, tuple(items))

    @staticmethod
    def zero(ctx, field) -> "CoordPoly":
        return CoordPoly(ctx, field, ())

    @staticmethod
    def constant(ctx, field, c) -> "CoordPoly":
        return CoordPoly._normalize(ctx, field, {(): field.coerce(c)})

    @staticmethod
    def variable(ctx, field, family, i, j=None) -> "CoordPoly":
        var = canonical_var(ctx, family, i, j)
        return CoordPoly(ctx, field, ((((var, 1),), field.one),))

    # -- ring operations ------------------------------------------------------

    def _dict(self) -> dict:
        return {mono: c for mono, c in self.terms}

    def _chk(self, other):
        if self.context != other.context or self.field != other.field:
            raise PolyError("context or field mismatch")

    def __add__(self, other) -> "CoordPoly":
        other = self._coerce(other)
        self._chk(other)
        f = self.field
        d = self._dict()
        for mono, c in other.terms:
            d[mono] = f.add(d.get(mono, f.zero), c)
        return CoordPoly._normalize(self.context, f, d)

    def __sub__(self, other) -> "CoordPoly":
        return self + (-self._coerce(other))

    def __neg__(self) -> "CoordPoly":
        f = self.field
        return CoordPoly(self.context, f, tuple((m, f.neg(c)) for m, c in self.terms))

    def __mul__(self, other) -> "CoordPoly":
        other = self._coerce(other)
        self._chk(other)
        f = self.field
        d: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                exps: dict = {}
                for var, e in m1 + m2:
                    exps[var] = exps.get(var, 0) + e
                mono = tuple(sorted(exps.items()))
                d[mono] = f.add(d.get(mono, f.zero), f.mul(c1, c2))
        return CoordPoly._normalize(self.context, f, d)

    def _coerce(self, v) -> "CoordPoly":
        if isinstance(v, CoordPoly):
            return v
        return CoordPoly.constant(self.context, self.field, v)

    def scale(self, c) -> "CoordPoly":
        f = self.field
        c = f.coerce(c)
        return CoordPoly._normalize(
            self.context, f, {m: f.mul(c, coef) for m, coef in self.terms})

    def power(self, e: int) -> "CoordPoly":
        out = CoordPoly.constant(self.context, self.field, self.field.one)
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- structure ------------------------------------------------------------

    def variables(self) -> set:
        return {var for mono, _ in self.terms for var, _ in mono}

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e for _, e in m) for m, _ in self.terms)

    def substitute(self, mapping: dict) -> "CoordPoly":
        """Replace variables by polynomials (same context and field)."""
        out = CoordPoly.zero(self.context, self.field)
        for mono, c in self.terms:
            term = CoordPoly.constant(self.context, self.field, c)
            for var, e in mono:
                repl = mapping.get(var)
                if repl is None:
                    repl = CoordPoly(self.context, self.field, ((((var, 1),), self.field.one),))
                term = term * repl.power(e)
            out = out + term
        return out

    def rebase(self, ctx: PolyContext) -> "CoordPoly":
        """Reinterpret in another context (variables must be valid there)."""
        for var in self.variables():
            canonical_var(ctx, *var)
        return CoordPoly(ctx, self.field, self.terms)


# ---------------------------------------------------------------------------
# Structured symbolic matrices and evaluation
# ---------------------------------------------------------------------------

def pos_of_var(ctx: PolyContext, var) -> tuple[int, int]:
    """Ambient (row, col) of the canonical variable in the structured matrix."""
    n = ctx.n
    fam = var[0]
    if ctx.kind == "gl":
        _, i, j = var
        return (i - 1, j - 1)
    if ctx.kind in ("C", "D"):
        _, i, j = var
        if fam == "p":
            return (i - 1, j - 1)
        if fam == "q":
            return (i - 1, n + j - 1)
        return (n + i - 1, j - 1)
    # type B, blocks (n, 1, n)
    if fam == "p":
        return (var[1] - 1, var[2] - 1)
    if fam == "q":
        return (var[1] - 1, n + 1 + var[2] - 1)
    if fam == "r":
        return (n + 1 + var[1] - 1, var[2] - 1)
    if fam == "v":
        return (var[1] - 1, n)
    return (n + 1 + var[1] - 1, n)  # w


def ambient_entry_poly(ctx: PolyContext, field, r: int, c: int) -> CoordPoly:
    """The (r, c) entry of the structured matrix of canonical variables."""
    n = ctx.n

    def combo(pairs):
        out = CoordPoly.zero(ctx, field)
        for sg, var in pairs:
            mono = CoordPoly(ctx, field, ((((var, 1),), field.one),))
            out = out + (mono if sg == 1 else -mono)
        return out

    if ctx.kind == "gl":
        return combo([(1, ("p", r + 1, c + 1))])
    if ctx.kind in ("C", "D"):
        if r < n and c < n:
            return combo([(1, ("p", r + 1, c + 1))])
        if r < n:
            return combo(family_entry(ctx, "q", r + 1, c - n + 1))
        if c < n:
            return combo(family_entry(ctx, "r", r - n + 1, c + 1))
        return -combo([(1, ("p", c - n + 1, r - n + 1))])
    # type B
    if r < n:
        if c < n:
            return combo([(1, ("p", r + 1, c + 1))])
        if c == n:
            return combo([(1, ("v", r + 1))])
        return combo(family_entry(ctx, "q", r + 1, c - n))
    if r == n:
        if c < n:
            return -combo([(1, ("w", c + 1))])
        if c == n:
            return CoordPoly.zero(ctx, field)
        return -combo([(1, ("v", c - n))])
    if c < n:
        return combo(family_entry(ctx, "r", r - n, c + 1))
    if c == n:
        return combo([(1, ("w", r - n))])
    return -combo([(1, ("p", c - n, r - n))])


def symbolic_matrix(ctx: PolyContext, field):
    N = ctx.ambient
    return [[ambient_entry_poly(ctx, field, r, c) for c in range(N)] for r in range(N)]


def _check_point_shapes(ctx: PolyContext, point: dict):
    n = ctx.n
    for fam in ctx.families:
        if fam not in point:
            continue
        M = point[fam]
        want = (n, 1) if fam in ("v", "w") else (n, n)
        if (M.rows, M.cols) != want:
            raise PolyError(f"{fam} block must be {want}")
        if fam in ("q", "r"):
            if ctx.kind == "C" and M != M.transpose():
                raise PolyError(f"{fam} block must be symmetric")
            if ctx.kind in ("B", "D") and not (M + M.transpose()).is_zero():
                raise PolyError(f"{fam} block must be skew")


def evaluate(f: CoordPoly, point: dict):
    """Exact evaluation at matrices {'p': P, 'q': Q, 'r': R, 'v': v, 'w': w}."""
    ctx, fld = f.context, f.field
    _check_point_shapes(ctx, point)
    vals = {}
    for var in f.variables():
        fam = var[0]
        if fam not in point:
            raise PolyError(f"point is missing the {fam!r} block")
        M = point[fam]
        if fam in ("v", "w"):
            vals[var] = M.entry(var[1] - 1, 0)
        else:
            vals[var] = M.entry(var[1] - 1, var[2] - 1)
    acc = fld.zero
    for mono, c in f.terms:
        term = c
        for var, e in mono:
            for _ in range(e):
                term = fld.mul(term, vals[var])
        acc = fld.add(acc, term)
    return acc


# ---------------------------------------------------------------------------
# Group action on polynomials
# ---------------------------------------------------------------------------

def _grid_mul_scalar_left(g: Matrix, grid):
    """(g . grid) for a scalar matrix g and a polynomial grid."""
    f = grid[0][0].field
    ctx = grid[0][0].context
    N = len(grid)
    out = []
    for i in range(N):
        row = []
        for j in range(N):
            acc = CoordPoly.zero(ctx, f)
            for t in range(N):
                c = g.entry(i, t)
                if not f.is_zero(c):
                    acc = acc + grid[t][j].scale(c)
            row.append(acc)
        out.append(row)
    return out


def _grid_mul_scalar_right(grid, g: Matrix):
    f = grid[0][0].field
    ctx = grid[0][0].context
    N = len(grid)
    out = []
    for i in range(N):
        row = []
        for j in range(N):
            acc = CoordPoly.zero(ctx, f)
            for t in range(N):
                c = g.entry(t, j)
                if not f.is_zero(c):
                    acc = acc + grid[i][t].scale(c)
            row.append(acc)
        out.append(row)
    return out


def group_act(f: CoordPoly, g: Matrix) -> CoordPoly:
    """(g . f)(X) = f(g^{-1} X g), re-expressed in canonical variables.

    For contexts B/C/D the conjugator must preserve the form so the
    conjugated matrix stays in the algebra shape.
    """
    ctx = f.context
    if g.rows != ctx.ambient or not g.is_square:
        raise PolyError(f"conjugator must be {ctx.ambient}x{ctx.ambient}")
    if ctx.kind == "gl":
        if not (g.field == f.field):
            raise PolyError("field mismatch")
        gi = inverse(g)
    else:
        gt = GroupType(ctx.kind, ctx.n)
        if not group_membership(gt, g):
            raise PolyError(f"conjugator is not in the type {ctx.kind} group")
        gi = inverse(g)
    X = symbolic_matrix(ctx, f.field)
    Y = _grid_mul_scalar_right(_grid_mul_scalar_left(gi, X), g)
    mapping = {var: Y[pos_of_var(ctx, var)[0]][pos_of_var(ctx, var)[1]]
               for var in f.variables()}
    return f.substitute(mapping)


# ---------------------------------------------------------------------------
# Pullback along a dual projection
# ---------------------------------------------------------------------------

def level_context(chain: ChainSpec, level: int) -> PolyContext:
    if chain.letter == "A":
        return PolyContext("gl", chain.n_at(level))
    return PolyContext(chain.letter, chain.n_at(level))


def pullback_projection(f: CoordPoly, chain: ChainSpec, i: int) -> CoordPoly:
    """Compose a level-i polynomial with the dual projection from level i+1."""
    ctx_lo = level_context(chain, i)
    ctx_hi = level_context(chain, i + 1)
    if f.context != ctx_lo:
        raise PolyError(f"polynomial lives on {f.context}, not level {i} of the chain")
    by_dst: dict = {}
    for sg, src, dst in dual_projection_instructions(chain, i):
        by_dst.setdefault(dst, []).append((sg, src))
    mapping = {}
    for var in f.variables():
        dst = pos_of_var(ctx_lo, var)
        acc = CoordPoly.zero(ctx_hi, f.field)
        for sg, (sr, sc) in by_dst.get(dst, []):
            e = ambient_entry_poly(ctx_hi, f.field, sr, sc)
            acc = acc + (e if sg == 1 else -e)
        mapping[var] = acc
    out = CoordPoly.zero(ctx_hi, f.field)
    for mono, c in f.terms:
        term = CoordPoly.constant(ctx_hi, f.field, c)
        for var, e in mono:
            term = term * mapping[var].power(e)
        out = out + term
    return out


# ---------------------------------------------------------------------------
# Gradings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradingWeights:
    p: int = 1
    q: int = 1
    r: int = 1
    v: int = 1
    w: int = 1

    def of(self, family: str) -> int:
        return getattr(self, family)


GRAD = GradingWeights(p=1, q=2, r=0, v=1, w=0)
DEG = GradingWeights()


def weighted_degree(mono, weights: GradingWeights) -> int:
    return sum(weights.of(var[0]) * e for var, e in mono)


def graded_part(f: CoordPoly, weights: GradingWeights, which="top") -> CoordPoly:
    """Sum of terms of maximal (or exactly given) weighted degree."""
    if f.is_zero():
        return f
    if which == "top":
        k = max(weighted_degree(m, weights) for m, _ in f.terms)
    else:
        k = int(which)
    kept = {m: c for m, c in f.terms if weighted_degree(m, weights) == k}
    return CoordPoly._normalize(f.context, f.field, kept)


# ---------------------------------------------------------------------------
# Vandermonde coefficient extraction
# ---------------------------------------------------------------------------

def vandermonde_coefficients(family_fn, degree_bound: int, sample_points) -> list[CoordPoly]:
    """Recover c_0..c_d with family(lambda) = sum c_j lambda^j from d+1 samples."""
    pts = list(sample_points)
    if len(pts) != degree_bound + 1:
        raise PolyError("need exactly degree_bound + 1 sample points")
    values = [family_fn(lam) for lam in pts]
    fld = values[0].field
    pts = [fld.coerce(lam) for lam in pts]
    if len(set(pts)) != len(pts):
        raise PolyError("sample points must be distinct")
    d = degree_bound
    V = Matrix.from_rows(fld, [[_pow(fld, lam, j) for j in range(d + 1)] for lam in pts])
    Vi = inverse(V)
    out = []
    for j in range(d + 1):
        acc = CoordPoly.zero(values[0].context, fld)
        for i in range(d + 1):
            acc = acc + values[i].scale(Vi.entry(j, i))
        out.append(acc)
    return out


def _pow(fld, x, e):
    acc = fld.one
    for _ in range(e):
        acc = fld.mul(acc, x)
    return acc


# ---------------------------------------------------------------------------
# Off-diagonal support detection
# ---------------------------------------------------------------------------

def off_diagonal_test(f: CoordPoly, m: int | None = None):
    """Witnessing disjoint row / column index sets covering the support, if any.

    The polynomial must involve only p variables; the returned sets satisfy
    |K|, |L| <= m (default floor((n-1)/2)) and K disjoint from L.
    """
    ctx = f.context
    if ctx.kind != "gl":
        raise PolyError("off-diagonal detection applies to gl contexts")
    bound = (ctx.n - 1) // 2
    if m is not None:
        if m > bound:
            return None
        bound = m
    rows, cols = set(), set()
    for var in f.variables():
        if var[0] != "p":
            return None
        rows.add(var[1])
        cols.add(var[2])
    if rows & cols:
        return None
    if len(rows) > bound or len(cols) > bound:
        return None
    return (tuple(sorted(rows)), tuple(sorted(cols)))


# ---------------------------------------------------------------------------
# Text format: "3*p[1,2]*q[2,3] - 1/2*w[4]"
# ---------------------------------------------------------------------------

def poly_format(f: CoordPoly) -> str:
    if f.is_zero():
        return "0"
    fld = f.field
    parts = []
    for mono, c in f.terms:
        cs = fld.format(c)
        neg = cs.startswith("-")
        mag = cs[1:] if neg else cs
        factors = []
        if not mono or mag != "1":
            factors.append(mag)
        for var, e in mono:
            fam = var[0]
            idx = ",".join(str(x) for x in var[1:])
            factors.append(f"{fam}[{idx}]" + (f"^{e}" if e > 1 else ""))
        body = "*".join(factors)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def poly_parse(text: str, ctx: PolyContext, field) -> CoordPoly:
    s = text.strip()
    if s in ("0", ""):
        return CoordPoly.zero(ctx, field)
    s = s.replace(" ", "")
    import re

    chunks = re.findall(r"[+-]?[^+-]+(?:\^\d+)?", s)
    # re-join: exponents never contain signs, so the simple split is safe
    if "".join(chunks) != s:
        raise PolyError(f"cannot parse polynomial {text!r}")
    acc = CoordPoly.zero(ctx, field)
    var_re = re.compile(r"^([pqrvw])\[(\d+)(?:,(\d+))?\](?:\^(\d+))?$")
    for chunk in chunks:
        sign = 1
        if chunk.startswith("+"):
            chunk = chunk[1:]
        elif chunk.startswith("-"):
            sign = -1
            chunk = chunk[1:]
        coeff = field.one
        mono: dict = {}
        for fac in chunk.split("*"):
            m = var_re.match(fac)
            if m:
                fam, i, j, e = m.groups()
                var = canonical_var(ctx, fam, int(i), int(j) if j else None)
                mono[var] = mono.get(var, 0) + (int(e) if e else 1)
            else:
                coeff = field.mul(coeff, field.parse(fac))
        if sign < 0:
            coeff = field.neg(coeff)
        term = CoordPoly._normalize(ctx, field, {tuple(sorted(mono.items())): coeff})
        acc = acc + term
    return acc
