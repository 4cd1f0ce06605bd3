"""Exact arithmetic in GF(q^n) with q = p^k, over a single absolute
representation.

A field context models GF(p^(k*n)) as F_p[x]/(f) for a monic irreducible f
of degree k*n, and views it as the degree-n extension of the base field
GF(q).  Elements are coefficient tuples of length k*n over the prime field
(index i is the coefficient of x^i); equality is plain tuple equality.
Subfields are never represented separately: GF(q^d) is the fixed set of the
d-th power of the q-Frobenius inside the one big field.

Modulus selection is deterministic: the lexicographically least monic
irreducible of the right degree, where polynomials are ordered by the
integer whose base-p digits are their coefficients (constant term least
significant).  The optional ``seed`` skips that many irreducibles in the
same enumeration, so elements are reproducible across runs and platforms.

Contexts are immutable after construction (internal caches only memoize
derived data) and safe to share between workers.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import SizeCapError
from .integers import is_probable_prime, factor_small

Element = tuple  # coefficient vector over F_p, length k*n

ARITH_DEGREE_CAP = 4096     # largest modulus degree make_field will accept
ENUM_CAP = 1 << 20          # largest subfield an operation will enumerate


# ---------------------------------------------------------------------------
# dense polynomials over F_p as int lists (little-endian, no trailing zeros)

def _pnorm(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _pnorm([c % p for c in out])


def _pmod(f, g, p):
    f = [c % p for c in f]
    _pnorm(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    while len(f) - 1 >= dg and f:
        shift = len(f) - 1 - dg
        c = f[-1] * inv_lead % p
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        _pnorm(f)
    return f


def _pgcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        f, g = g, _pmod(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def _ppowmod(f, e, m, p):
    result = [1]
    base = _pmod(f, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _pirreducible(f, p):
    # Rabin's test: x^(p^D) == x mod f, and x^(p^(D/r)) - x coprime to f
    # for every prime r dividing D.
    d = len(f) - 1
    if d < 1:
        return False
    powers = {}
    t = [0, 1]
    for j in range(1, d + 1):
        t = _ppowmod(t, p, f, p)
        powers[j] = t
    if _pnorm([c for c in powers[d]]) != [0, 1] and powers[d] != [0, 1]:
        return False
    for r in {q for q, _ in factor_small(d)} if d > 1 else set():
        diff = list(powers[d // r])
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        _pnorm(diff)
        g = _pgcd(f, diff, p)
        if len(g) != 1:
            return False
    return True


def find_irreducible(p: int, degree: int, index: int = 0) -> tuple:
    """The index-th monic irreducible of the given degree over F_p,
    in lexicographic (integer-encoded) order of the lower coefficients."""
    if degree == 1 and index == 0:
        return (0, 1)  # x itself
    skip = index
    v = 0
    limit = p**degree
    while v < limit:
        coeffs = []
        t = v
        for _ in range(degree):
            coeffs.append(t % p)
            t //= p
        f = coeffs + [1]
        if _pirreducible(f, p):
            if skip == 0:
                return tuple(f)
            skip -= 1
        v += 1
    raise RuntimeError(f"no irreducible of degree {degree} over F_{p} found")  # unreachable


# ---------------------------------------------------------------------------
# matrices over F_p (tuples of row tuples)

def _mat_mul(a, b, p):
    n = len(a)
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt) for row in a)


def _mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _mat_apply(m, v, p):
    return tuple(sum(x * y for x, y in zip(row, v)) % p for row in m)


def _mat_kernel(m, p):
    """Basis of the right kernel of m over F_p, as a list of vectors."""
    n = len(m)
    rows = [list(r) for r in m]
    pivots = {}
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, n):
            if rows[i][c] % p:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                coef = rows[i][c]
                rows[i] = [(x - coef * y) % p for x, y in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
    basis = []
    free = [c for c in range(n) if c not in pivots]
    for fc in free:
        vec = [0] * n
        vec[fc] = 1
        for c, pr in pivots.items():
            vec[c] = (-rows[pr][fc]) % p
        basis.append(tuple(vec))
    return basis


class _GaussSolver:
    """Solve E x = v over F_p for a fixed full-column-rank E, many v."""

    def __init__(self, columns, p):
        # columns: list of length-D vectors (the images of the source basis)
        self.p = p
        self.ncols = len(columns)
        rows = [list(col) + [1 if i == j else 0 for i in range(self.ncols)] for j, col in enumerate(columns)]
        # row-reduce the transpose augmented with identity to express solution
        # directly: work with the matrix whose rows are the columns of E.
        self._rows = rows
        self._reduce()

    def _reduce(self):
        p = self.p
        rows = self._rows
        width = len(rows[0]) - self.ncols
        self.pivot_cols = []
        r = 0
        for c in range(width):
            piv = None
            for i in range(r, len(rows)):
                if rows[i][c] % p:
                    piv = i
                    break
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = pow(rows[r][c], -1, p)
            rows[r] = [x * inv % p for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c]:
                    coef = rows[i][c]
                    rows[i] = [(x - coef * y) % p for x, y in zip(rows[i], rows[r])]
            self.pivot_cols.append(c)
            r += 1
            if r == len(rows):
                break

    def solve(self, v):
        """Return x with E x = v, or None if v is outside the column span."""
        p = self.p
        width = len(self._rows[0]) - self.ncols
        vv = list(v)
        x = [0] * self.ncols
        for r, c in enumerate(self.pivot_cols):
            coef = vv[c] % p
            if coef:
                row = self._rows[r]
                for i in range(width):
                    vv[i] = (vv[i] - coef * row[i]) % p
                for i in range(self.ncols):
                    x[i] = (x[i] + coef * row[width + i]) % p
        if any(c % p for c in vv):
            return None
        return tuple(x)


# ---------------------------------------------------------------------------

class FieldCtx:
    """Immutable context for GF(q^n), q = p^k, over one absolute modulus."""

    __slots__ = ("p", "k", "n", "q", "degree", "modulus", "seed",
                 "_red", "_frob_p_mats", "_frob_q_mats", "_cache")

    def __init__(self, p, k, n, modulus, seed=0):
        self.p = p
        self.k = k
        self.n = n
        self.q = p**k
        self.degree = k * n
        self.modulus = tuple(modulus)
        self.seed = seed
        self._red = self._reduction_rows()
        self._frob_p_mats = {0: _mat_identity(self.degree)}
        self._frob_q_mats = {0: _mat_identity(self.degree)}
        self._frob_p_mats[1] = self._build_frobenius_matrix()
        self._cache = {}

    # -- construction helpers ------------------------------------------------

    def _reduction_rows(self):
        # rows[j] = coefficient vector of x^(D+j) mod modulus, j = 0..D-2
        p, d = self.p, self.degree
        rows = []
        cur = [(-c) % p for c in self.modulus[:d]]
        rows.append(tuple(cur))
        for _ in range(d - 2):
            lead = cur[-1]
            cur = [0] + cur[:-1]
            if lead:
                base = rows[0]
                cur = [(c + lead * b) % p for c, b in zip(cur, base)]
            rows.append(tuple(cur))
        return tuple(rows)

    def _build_frobenius_matrix(self):
        # columns are (x^j)^p = (x^p)^j; matrix maps coefficient vectors of
        # a to those of a^p (F_p-linear since p is the characteristic)
        d = self.degree
        xp = self.pow(self.gen(), self.p) if d > 1 else self.element([0] * d) if d == 0 else None
        if d == 1:
            return _mat_identity(1)
        cols = [self.one()]
        for _ in range(d - 1):
            cols.append(self.mul(cols[-1], xp))
        return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))

    # -- element constructors --------------------------------------------------

    def zero(self) -> Element:
        return (0,) * self.degree

    def one(self) -> Element:
        return (1,) + (0,) * (self.degree - 1)

    def gen(self) -> Element:
        """The class of x (a root of the modulus)."""
        if self.degree == 1:
            # modulus is x + c; the root is -c
            return ((-self.modulus[0]) % self.p,)
        return (0, 1) + (0,) * (self.degree - 2)

    def element(self, coeffs) -> Element:
        v = tuple(c % self.p for c in coeffs)
        if len(v) != self.degree:
            raise ValueError(f"expected {self.degree} coefficients, got {len(v)}")
        return v

    def scalar(self, c: int) -> Element:
        return (c % self.p,) + (0,) * (self.degree - 1)

    def from_index(self, idx: int) -> Element:
        out = []
        for _ in range(self.degree):
            out.append(idx % self.p)
            idx //= self.p
        return tuple(out)

    def to_index(self, a: Element) -> int:
        idx = 0
        for c in reversed(a):
            idx = idx * self.p + c
        return idx

    def elements(self):
        """All field elements in canonical (index) order."""
        size = self.p**self.degree
        if size > ENUM_CAP:
            raise SizeCapError(f"field of size {size} exceeds enumeration cap")
        for idx in range(size):
            yield self.from_index(idx)

    @property
    def order(self) -> int:
        return self.p**self.degree

    # -- arithmetic ------------------------------------------------------------

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p, d = self.p, self.degree
        if d == 1:
            return (a[0] * b[0] % p,)
        t = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        t[i + j] += ai * bj
        red = self._red
        for j in range(2 * d - 2, d - 1, -1):
            c = t[j] % p
            if c:
                row = red[j - d]
                for i in range(d):
                    ri = row[i]
                    if ri:
                        t[i] += c * ri
        return tuple(x % p for x in t[:d])

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        p = self.p
        f = _pnorm(list(a))
        g = list(self.modulus)
        # extended Euclid over F_p[x]
        s0, s1 = [1], []
        while g:
            # divide f by g
            quo = []
            r = list(f)
            dg = len(g) - 1
            inv_lead = pow(g[-1], -1, p)
            while r and len(r) - 1 >= dg:
                shift = len(r) - 1 - dg
                c = r[-1] * inv_lead % p
                while len(quo) < shift + 1:
                    quo.append(0)
                quo[shift] = c
                for i, gi in enumerate(g):
                    r[shift + i] = (r[shift + i] - c * gi) % p
                _pnorm(r)
            s0, s1 = s1, _pnorm([(x - y) % p for x, y in
                                 zip(s0 + [0] * max(0, len(t := _pmul(quo, s1, p))) , t + [0] * len(s0))][: max(len(s0), len(t))] if (t := _pmul(quo, s1, p)) or s0 else [])
            f, g = g, r
        # f is now the gcd (a unit since modulus is irreducible)
        c = pow(f[0], -1, p)
        out = [x * c % p for x in s0]
        out += [0] * (self.degree - len(out))
        return tuple(out[: self.degree])

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_zero(self, a) -> bool:
        return not any(a)

    # -- Frobenius --------------------------------------------------------------

    def frob_p_matrix(self, j: int):
        """Matrix of a -> a^(p^j)."""
        j %= self.degree
        mats = self._frob_p_mats
        if j not in mats:
            best = max(i for i in mats if i <= j)
            m = mats[best]
            for i in range(best, j):
                m = _mat_mul(mats[1], m, self.p)
                mats[i + 1] = m
        return mats[j]

    def frob_q_matrix(self, i: int):
        """Matrix of a -> a^(q^i)."""
        i %= self.n
        mats = self._frob_q_mats
        if i not in mats:
            mats[i] = self.frob_p_matrix((self.k * i) % self.degree)
        return mats[i]

    def frob_q(self, a, i: int = 1) -> Element:
        """a^(q^i) via the precomputed linear map."""
        return _mat_apply(self.frob_q_matrix(i), a, self.p)

    def frob_p(self, a, j: int = 1) -> Element:
        return _mat_apply(self.frob_p_matrix(j % self.degree), a, self.p)


@lru_cache(maxsize=None)
def make_field(p: int, k: int, n: int, seed: int | None = None) -> FieldCtx:
    """Build the context for GF(p^k)^n / GF(p^k), deterministically.

    The modulus is the lexicographically least monic irreducible of degree
    k*n over F_p; a nonzero ``seed`` selects the seed-th next irreducible in
    the same enumeration instead.
    """
    if not is_probable_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    degree = k * n
    if degree > ARITH_DEGREE_CAP:
        raise ValueError(f"modulus degree {degree} exceeds arithmetic cap {ARITH_DEGREE_CAP}")
    modulus = find_irreducible(p, degree, index=seed or 0)
    return FieldCtx(p, k, n, modulus, seed=seed or 0)


# ---------------------------------------------------------------------------
# spec-level operations on contexts

def frobenius(ctx: FieldCtx, a: Element, i: int) -> Element:
    """The i-th q-power Frobenius: a^(q^i)."""
    return ctx.frob_q(a, i)


def trace(ctx: FieldCtx, a: Element, d_from: int, d_to: int) -> Element:
    """Relative trace from GF(q^d_from) down to GF(q^d_to).

    Computes sum of a^(q^(d_to * i)) for i in range(d_from // d_to); the
    result lies in GF(q^d_to) whenever a lies in GF(q^d_from).
    """
    if d_from < 1 or ctx.n % d_from or d_from % d_to:
        raise ValueError(f"need d_to | d_from | n, got d_to={d_to}, d_from={d_from}, n={ctx.n}")
    out = ctx.zero()
    cur = a
    step = d_to
    for _ in range(d_from // d_to):
        out = ctx.add(out, cur)
        cur = ctx.frob_q(cur, step)
    return out


def in_subfield(ctx: FieldCtx, a: Element, d: int) -> bool:
    """True iff a lies in GF(q^d), i.e. a^(q^d) == a."""
    if ctx.n % d:
        raise ValueError(f"{d} does not divide n = {ctx.n}")
    return ctx.frob_q(a, d) == a


def absolute_trace_vector(ctx: FieldCtx, pdeg: int | None = None):
    """Row functional over F_p computing the trace to the prime field.

    ``pdeg`` is the prime-field degree of the subfield being traced from
    (default: the whole field).  The vector is valid on elements of
    GF(p^pdeg); applying it elsewhere is meaningless.
    """
    pdeg = ctx.degree if pdeg is None else pdeg
    key = ("tracevec", pdeg)
    if key not in ctx._cache:
        p, d = ctx.p, ctx.degree
        acc = [[0] * d for _ in range(d)]
        for j in range(pdeg):
            m = ctx.frob_p_matrix(j % d)
            for r in range(d):
                row = m[r]
                arow = acc[r]
                for c in range(d):
                    arow[c] += row[c]
        # trace of y in GF(p^pdeg) is the constant coordinate of sum of
        # p-power conjugates; rows below the first must annihilate such y
        ctx._cache[key] = tuple(c % p for c in acc[0])
    return ctx._cache[key]


def trace_to_prime(ctx: FieldCtx, a: Element, pdeg: int | None = None) -> int:
    """Trace of a down to F_p as an integer residue.

    When tracing from a proper subfield, pass its prime-field degree and
    make sure a actually lies there.
    """
    vec = absolute_trace_vector(ctx, pdeg)
    return sum(x * y for x, y in zip(vec, a)) % ctx.p


def subfield_basis(ctx: FieldCtx, d: int):
    """F_p-basis of the subfield GF(q^d), from the Frobenius fixed space."""
    if ctx.n % d:
        raise ValueError(f"{d} does not divide n = {ctx.n}")
    key = ("sfbasis", d)
    if key not in ctx._cache:
        m = ctx.frob_q_matrix(d)
        delta = tuple(
            tuple((m[i][j] - (1 if i == j else 0)) % ctx.p for j in range(ctx.degree))
            for i in range(ctx.degree)
        )
        basis = _mat_kernel(delta, ctx.p)
        if len(basis) != ctx.k * d:
            raise RuntimeError("subfield dimension mismatch (internal bug)")
        ctx._cache[key] = basis
    return ctx._cache[key]


def subfield_elements(ctx: FieldCtx, d: int):
    """All elements of GF(q^d) inside ctx, sorted by canonical index."""
    size = ctx.q**d
    if size > ENUM_CAP:
        raise SizeCapError(f"subfield of size {size} exceeds enumeration cap")
    key = ("sfelems", d)
    if key not in ctx._cache:
        basis = subfield_basis(ctx, d)
        p = ctx.p
        elems = [ctx.zero()]
        for vec in basis:
            scaled = [tuple(c * t % p for c in vec) for t in range(p)]
            elems = [ctx.add(e, s) for e in elems for s in scaled]
        elems.sort(key=ctx.to_index)
        ctx._cache[key] = elems
    return ctx._cache[key]


class Embedding:
    """A fixed ring embedding GF(p^Ds) -> GF(p^D), Ds | D.

    Determined by the least root (in canonical element order) of the source
    modulus inside the destination field, so repeated runs embed the same
    way.  ``section`` inverts the map on its image.
    """

    def __init__(self, src: FieldCtx, dst: FieldCtx):
        if src.p != dst.p or src.k != dst.k:
            raise ValueError("embedding requires identical (p, k)")
        if dst.n % src.n:
            raise ValueError(f"source degree {src.n} does not divide destination degree {dst.n}")
        self.src = src
        self.dst = dst
        root = self._least_root()
        cols = [dst.one()]
        for _ in range(src.degree - 1):
            cols.append(dst.mul(cols[-1], root))
        self.root = root
        self._cols = cols
        self._solver = _GaussSolver(cols, dst.p)

    def _least_root(self):
        dst, src = self.dst, self.src
        if src.degree == 1:
            return dst.scalar((-src.modulus[0]) % src.p)
        candidates = subfield_elements(dst, src.n * src.k // dst.k) if (src.n * src.k) % dst.k == 0 else None
        if candidates is None:
            # fall back to the prime-field-degree subfield via p-Frobenius
            candidates = _p_subfield_elements(dst, src.degree)
        coeffs = [c % src.p for c in src.modulus]
        roots = []
        for cand in candidates:
            acc = dst.zero()
            for c in reversed(coeffs):
                acc = dst.mul(acc, cand)
                if c:
                    acc = dst.add(acc, dst.scalar(c))
            if not any(acc):
                roots.append(cand)
        if not roots:
            raise RuntimeError("no root of source modulus in destination (internal bug)")
        return min(roots, key=dst.to_index)

    def apply(self, a) -> Element:
        p, d = self.dst.p, self.dst.degree
        out = [0] * d
        for c, col in zip(a, self._cols):
            if c:
                for i in range(d):
                    out[i] += c * col[i]
        return tuple(x % p for x in out)

    def section(self, b) -> Element:
        """Preimage of b under the embedding; raises if b is not in the image."""
        x = self._solver.solve(b)
        if x is None:
            raise ValueError("element is not in the embedded subfield")
        return x


def _p_subfield_elements(ctx: FieldCtx, pdeg: int):
    # elements of GF(p^pdeg) inside ctx (pdeg divides ctx.degree)
    size = ctx.p**pdeg
    if size > ENUM_CAP:
        raise SizeCapError(f"subfield of size {size} exceeds enumeration cap")
    m = ctx.frob_p_matrix(pdeg % ctx.degree) if pdeg != ctx.degree else _mat_identity(ctx.degree)
    delta = tuple(
        tuple((m[i][j] - (1 if i == j else 0)) % ctx.p for j in range(ctx.degree))
        for i in range(ctx.degree)
    )
    basis = _mat_kernel(delta, ctx.p)
    p = ctx.p
    elems = [ctx.zero()]
    for vec in basis:
        scaled = [tuple(c * t % p for c in vec) for t in range(p)]
        elems = [ctx.add(e, s) for e in elems for s in scaled]
    elems.sort(key=ctx.to_index)
    return elems


def get_embedding(src: FieldCtx, dst: FieldCtx) -> Embedding:
    """Cached embedding of src into dst (computed once per pair)."""
    key = ("embed", id(src))
    if key not in dst._cache:
        dst._cache[key] = Embedding(src, dst)
    return dst._cache[key]


def embed(src: FieldCtx, a: Element, dst: FieldCtx) -> Element:
    """Image of a under the fixed embedding src -> dst."""
    return get_embedding(src, dst).apply(a)


def divisors_of(n: int) -> list[int]:
    out = [1]
    for p, e in factor_small(n):
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)
