"""Integral binary quadratic forms of fundamental discriminant D:
reduction (definite and indefinite), proper equivalence, composition,
ambiguous forms of ramified primes, and the full narrow class group.

Form classes under proper (determinant +1) equivalence are the standard
finitely presented model of the narrow class group of Q(sqrt(D)); that
identification is classical and used here without further comment.

For D < 0 only positive definite forms are kept and each class has a
unique reduced representative (|b| <= a <= c, b >= 0 when |b| = a or
a = c). For D > 0 the reduced forms of a class form a cycle under the
rho operator, two reduced forms are properly equivalent iff they lie on
the same cycle, and the canonical representative of a class is the
lexicographic minimum of its cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import NamedTuple

from .errors import ResourceLimitError
from .intkit import factorize

__all__ = [
    "Form",
    "ClassGroup",
    "ambiguous_form",
    "class_group",
    "compose",
    "is_fundamental",
    "principal_form",
    "reduce",
    "reduce_with_transform",
    "reduction_cycle",
]

DEFAULT_MAX_H = 10_000
DEFAULT_MAX_DISC = 10_000_000

_STEP_CAP = 100_000


class Form(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


def is_fundamental(D: int) -> bool:
    """True iff D is a fundamental discriminant (of a quadratic field)."""
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return factorize(D).is_squarefree
    if D % 4 == 0:
        q = D // 4
        return q % 4 in (2, 3) and factorize(q).is_squarefree
    return False


def _require_fundamental(D: int) -> None:
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")


def principal_form(D: int) -> Form:
    _require_fundamental(D)
    if D % 4 == 0:
        return Form(1, 0, -D // 4)
    return Form(1, 1, (1 - D) // 4)


def _check_form(f: Form) -> int:
    D = f.disc
    _require_fundamental(D)
    if not f.is_primitive:
        raise ValueError(f"form {f} is imprimitive")
    if D < 0 and f.a <= 0:
        raise ValueError(f"form {f} is negative definite; only a > 0 is kept for D < 0")
    return D


def _mat_mul(m, n):
    return (
        m[0] * n[0] + m[1] * n[2],
        m[0] * n[1] + m[1] * n[3],
        m[2] * n[0] + m[3] * n[2],
        m[2] * n[1] + m[3] * n[3],
    )


def _reduce_definite(f: Form):
    a, b, c = f
    m = (1, 0, 0, 1)
    for _ in range(_STEP_CAP):
        if b > a or b <= -a:
            # translate: b into (-a, a]
            r = b % (2 * a)
            if r > a:
                r -= 2 * a
            t = (r - b) // (2 * a)
            b, c = b + 2 * a * t, a * t * t + b * t + c
            m = _mat_mul(m, (1, t, 0, 1))
        elif a > c:
            a, b, c = c, -b, a
            m = _mat_mul(m, (0, -1, 1, 0))
        elif b < 0 and b == -a:
            b, c = b + 2 * a, a + b + c  # t = 1 translation
            m = _mat_mul(m, (1, 1, 0, 1))
        elif b < 0 and a == c:
            a, b, c = c, -b, a
            m = _mat_mul(m, (0, -1, 1, 0))
        else:
            return Form(a, b, c), m
    raise ArithmeticError("definite reduction did not terminate (bug)")


def _is_reduced_indef(f: Form, s: int) -> bool:
    # 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b, in exact terms
    return 1 <= f.b <= s and s - f.b + 1 <= 2 * abs(f.a) <= s + f.b


def _rho(f: Form, D: int, s: int):
    """One step of the reduction operator; returns (form, transform)."""
    _, b, c = f
    ac = abs(c)
    if ac <= s:
        # next b is the largest value = -b (mod 2|c|) below sqrt(D)
        r = s - (s + b) % (2 * ac)
    else:
        r = (-b) % (2 * ac)
        if r > ac:
            r -= 2 * ac
    t = (r + b) // (2 * c)
    return Form(c, r, (r * r - D) // (4 * c)), (0, -1, 1, t)


def _reduce_indef(f: Form, D: int):
    s = isqrt(D)
    m = (1, 0, 0, 1)
    for _ in range(_STEP_CAP):
        if _is_reduced_indef(f, s):
            return f, m
        f, step = _rho(f, D, s)
        m = _mat_mul(m, step)
    raise ArithmeticError("indefinite reduction did not terminate (bug)")


def _cycle_from(f: Form, D: int):
    """The rho cycle through a reduced form, starting at f."""
    s = isqrt(D)
    cycle = [f]
    g, _ = _rho(f, D, s)
    for _ in range(_STEP_CAP):
        if g == f:
            return cycle
        if not _is_reduced_indef(g, s):
            raise ArithmeticError(f"rho left the reduced cycle at {g} (bug)")
        cycle.append(g)
        g, _ = _rho(g, D, s)
    raise ArithmeticError("reduction cycle did not close (bug)")


def reduce_with_transform(f: Form) -> tuple[Form, tuple[int, int, int, int]]:
    """Canonical reduced representative plus the SL2(Z) change of variables.

    The returned matrix m = (m11, m12, m21, m22) has determinant +1 and
    substituting it into f recovers the reduced form:
    f(m11*x + m12*y, m21*x + m22*y) = reduced(x, y).
    """
    f = Form(*f)
    D = _check_form(f)
    if D < 0:
        return _reduce_definite(f)
    g, m = _reduce_indef(f, D)
    # walk the cycle to its lexicographic minimum, accumulating transforms
    s = isqrt(D)
    best, best_m = g, m
    h, cur = g, m
    for _ in range(_STEP_CAP):
        h, step = _rho(h, D, s)
        cur = _mat_mul(cur, step)
        if h == g:
            return best, best_m
        if h < best:
            best, best_m = h, cur
    raise ArithmeticError("reduction cycle did not close (bug)")


def reduce(f: Form) -> Form:
    """Canonical reduced representative of the proper equivalence class."""
    return reduce_with_transform(f)[0]


def reduction_cycle(f: Form) -> tuple[Form, ...]:
    """All reduced forms properly equivalent to f.

    For D < 0 this is a single form; for D > 0 it is the full rho cycle,
    rotated to start at the canonical (lexicographically minimal) form.
    """
    f = Form(*f)
    D = _check_form(f)
    if D < 0:
        return (_reduce_definite(f)[0],)
    g, _ = _reduce_indef(f, D)
    cycle = _cycle_from(g, D)
    k = cycle.index(min(cycle))
    return tuple(cycle[k:] + cycle[:k])


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (g, u, v) with g = u*a + v*b, g >= 0
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _compose_raw(f: Form, g: Form, D: int) -> Form:
    # Dirichlet composition; output has the same discriminant, not reduced.
    a1, b1, c1 = f
    a2, b2, _ = g
    s = (b1 + b2) // 2
    d1, u1, v1 = _xgcd(a1, a2)
    d, u2, v2 = _xgcd(d1, s)
    a3 = a1 * a2 // (d * d)
    b3 = (u2 * u1 * a1 * b2 + u2 * v1 * a2 * b1 + v2 * (b1 * b2 + D) // 2) // d
    b3 %= 2 * a3
    c3 = (b3 * b3 - D) // (4 * a3)
    return Form(a3, b3, c3)


def compose(f: Form, g: Form) -> Form:
    """Composition of two primitive forms, returned canonically reduced."""
    f, g = Form(*f), Form(*g)
    D = _check_form(f)
    if _check_form(g) != D:
        raise ValueError(f"discriminant mismatch: {f.disc} vs {g.disc}")
    return reduce(_compose_raw(f, g, D))


def ambiguous_form(p: int, D: int) -> Form:
    """Norm form (p, b, *) of the ramified prime ideal above p.

    b is the smallest value in 0..2p-1 with b = D (mod 2) and
    b^2 = D (mod 4p); the resulting class has order at most 2.
    """
    _require_fundamental(D)
    if D % p != 0:
        raise ValueError(f"{p} is not ramified in discriminant {D}")
    for b in range(2 * p):
        if (b - D) % 2 == 0 and (b * b - D) % (4 * p) == 0:
            return Form(p, b, (b * b - D) // (4 * p))
    raise ArithmeticError(f"no ambiguous form for p={p}, D={D} (bug)")


def _enumerate_definite(D: int) -> list[Form]:
    forms = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2 != 0:
                continue
            num = b * b - D
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c or -b == a):
                continue
            forms.append(Form(a, b, c))
    return sorted(forms)


def _enumerate_indefinite(D: int) -> list[Form]:
    forms = []
    s = isqrt(D)
    for b in range(1, s + 1):
        if (b - D) % 2 != 0:
            continue
        num = b * b - D  # negative: a and c have opposite signs
        lo = (s - b) // 2 + 1
        hi = (s + b) // 2
        for absa in range(lo, hi + 1):
            if num % (4 * absa) != 0:
                continue
            forms.append(Form(absa, b, num // (4 * absa)))
            forms.append(Form(-absa, b, -(num // (4 * absa))))
    return sorted(forms)


@dataclass(frozen=True)
class ClassGroup:
    """Narrow class group of discriminant D, realized by form classes.

    ``reps`` holds one canonical reduced representative per class (for
    D > 0 the lexicographic minimum of the class's cycle). The identity
    index is the class containing the principal form. ``table`` is the
    full composition table on class indices. ``invariant_factors`` are in
    ascending divisibility order (n1 | n2 | ...), with the empty tuple
    for the trivial group.
    """

    D: int
    reps: tuple[Form, ...]
    h_plus: int
    invariant_factors: tuple[int, ...]
    two_torsion_basis: tuple[int, ...]
    identity: int
    table: tuple[tuple[int, ...], ...]
    _index: dict

    def class_index(self, f: Form) -> int:
        """Index of the class of an arbitrary primitive form of disc D."""
        f = Form(*f)
        if f.disc != self.D:
            raise ValueError(f"form {f} has discriminant {f.disc}, expected {self.D}")
        if self.D < 0:
            return self._index[_reduce_definite(f)[0]]
        return self._index[_reduce_indef(f, self.D)[0]]

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        a, b, c = self.reps[i]
        return self.class_index(Form(a, -b, c))

    def pow(self, i: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(i), -n)
        out = self.identity
        base = i
        while n:
            if n & 1:
                out = self.table[out][base]
            base = self.table[base][base]
            n >>= 1
        return out

    def order_of(self, i: int) -> int:
        n = 1
        j = i
        while j != self.identity:
            j = self.table[j][i]
            n += 1
        return n

    def two_torsion(self) -> tuple[int, ...]:
        """Indices of all classes of order at most 2 (identity included)."""
        return tuple(i for i in range(self.h_plus) if self.table[i][i] == self.identity)

    @property
    def two_torsion_rank(self) -> int:
        return sum(1 for n in self.invariant_factors if n % 2 == 0)

    def to_json_dict(self) -> dict:
        return {
            "D": self.D,
            "h_plus": self.h_plus,
            "invariant_factors": list(self.invariant_factors),
            "reps": [[f.a, f.b, f.c] for f in self.reps],
            "two_torsion_basis": list(self.two_torsion_basis),
        }


def _invariant_factors(table, identity, h) -> tuple[int, ...]:
    """Invariant factors of an abelian group given by its full table.

    Per prime p | h, the number of elements killed by p^j determines the
    multiset of p-power elementary divisors; those merge into invariant
    factors largest-first.
    """
    if h == 1:
        return ()
    orders = []
    for i in range(h):
        n, j = 1, i
        while j != identity:
            j = table[j][i]
            n += 1
        orders.append(n)
    per_prime: dict[int, list[int]] = {}
    for p, e in factorize(h).factors:
        counts = []
        for j in range(e + 1):
            pj = p**j
            nj = sum(1 for o in orders if pj % o == 0)
            mj = 0
            while p**mj < nj:
                mj += 1
            if p**mj != nj:
                raise ArithmeticError("element-order counts are not p-power sized (bug)")
            counts.append(mj)
        geq = [counts[j] - counts[j - 1] for j in range(1, e + 1)]  # # divisors with exponent >= j
        exps = []
        for j in range(1, e + 1):
            exactly = geq[j - 1] - (geq[j] if j < e else 0)
            exps.extend([j] * exactly)
        per_prime[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in per_prime.values())
    factors_desc = []
    for i in range(width):
        n = 1
        for p, exps in per_prime.items():
            if i < len(exps):
                n *= p ** exps[i]
        factors_desc.append(n)
    return tuple(reversed(factors_desc))


def _two_torsion_basis(table, identity, h) -> tuple[int, ...]:
    elements = [i for i in range(h) if table[i][i] == identity and i != identity]
    basis = []
    span = {identity}
    for x in elements:
        if x in span:
            continue
        basis.append(x)
        span |= {table[x][s] for s in span}
    return tuple(basis)


def class_group(D: int, *, max_h: int = DEFAULT_MAX_H, max_disc: int = DEFAULT_MAX_DISC) -> ClassGroup:
    """Full narrow class group of a fundamental discriminant.

    Enumerates every reduced form, groups them into classes (cycles when
    D > 0), builds the composition table, and extracts the abelian group
    structure. Raises ResourceLimitError when |D| or the class number
    exceeds the configured bounds.
    """
    _require_fundamental(D)
    if abs(D) > max_disc:
        raise ResourceLimitError(f"|D| = {abs(D)} exceeds the bound {max_disc}")

    index: dict[Form, int] = {}
    classes: list[list[Form]] = []
    if D < 0:
        for f in _enumerate_definite(D):
            index[f] = len(classes)
            classes.append([f])
    else:
        for f in _enumerate_indefinite(D):
            if f in index:
                continue
            cyc = _cycle_from(f, D)
            for g in cyc:
                index[g] = len(classes)
            classes.append(cyc)
    h = len(classes)
    if h > max_h:
        raise ResourceLimitError(f"h+ = {h} exceeds the bound {max_h}")

    # canonical representative = lex-min of the class; reorder classes by it
    canon = sorted(range(h), key=lambda i: min(classes[i]))
    relabel = {old: new for new, old in enumerate(canon)}
    index = {f: relabel[i] for f, i in index.items()}
    reps = tuple(min(classes[i]) for i in canon)

    if D < 0:
        identity = index[_reduce_definite(principal_form(D))[0]]
    else:
        identity = index[_reduce_indef(principal_form(D), D)[0]]

    reducer = (lambda f: _reduce_definite(f)[0]) if D < 0 else (lambda f: _reduce_indef(f, D)[0])
    table = tuple(
        tuple(index[reducer(_compose_raw(fi, fj, D))] for fj in reps) for fi in reps
    )

    factors = _invariant_factors(table, identity, h)
    basis = _two_torsion_basis(table, identity, h)
    if len(basis) != sum(1 for n in factors if n % 2 == 0):
        raise ArithmeticError("2-torsion basis size disagrees with invariant factors (bug)")

    prod = 1
    for n in factors:
        prod *= n
    if prod != h:
        raise ArithmeticError("invariant factors do not multiply to h (bug)")

    return ClassGroup(
        D=D,
        reps=reps,
        h_plus=h,
        invariant_factors=factors,
        two_torsion_basis=basis,
        identity=identity,
        table=table,
        _index=index,
    )
