"""Tests for binary quadratic forms, reduction, composition, and the
narrow class group.

The definite class-number oracle is a from-scratch window enumeration
written here (b-outer loop) sharing no code with the library's a-outer
enumeration; equivalence for indefinite forms is cross-checked through
the change-of-variables matrices that reduction reports.
"""

import random
from math import gcd, isqrt

import pytest

from genuskit.bqf import (
    Form,
    ambiguous_form,
    class_group,
    compose,
    is_fundamental,
    principal_form,
    reduce,
    reduce_with_transform,
    reduction_cycle,
)
from genuskit.errors import ResourceLimitError
from genuskit.intkit import factorize


def fundamental_range(bound):
    return [D for D in range(-bound, bound + 1) if is_fundamental(D)]


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------


def oracle_definite_reduced(D):
    """All reduced positive definite forms of disc D < 0, b-outer scan."""
    out = set()
    b = D % 2
    while b * b <= -D // 3:
        num = b * b - D
        a = max(b, 1)
        while 4 * a * a <= num:
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if gcd(gcd(a, b), c) == 1:
                    out.add((a, b, c))
                    if 0 < b < a < c:
                        out.add((a, -b, c))
            a += 1
        b += 2
    return out


def oracle_indefinite_reduced(D):
    """All reduced indefinite forms by scanning the inequality window."""
    out = set()
    s = isqrt(D)
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        for twoa in range(s - b + 1, s + b + 1):
            if twoa % 2:
                continue
            a = twoa // 2
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            out.add((a, b, c))
            out.add((-a, b, -c))
    return out


# ---------------------------------------------------------------------------
# principal / reduce
# ---------------------------------------------------------------------------


def test_principal_form_examples():
    assert principal_form(-20) == Form(1, 0, 5)
    assert principal_form(5) == Form(1, 1, -1)
    assert principal_form(12) == Form(1, 0, -3)


def test_principal_rejects_nonfundamental():
    for D in (0, 1, 4, -4 * 4, 25, -27, 18):
        with pytest.raises(ValueError):
            principal_form(D)


def test_reduce_examples():
    assert reduce(Form(5, 0, 1)) == Form(1, 0, 5)
    assert reduce(Form(2, 2, 3)) == Form(2, 2, 3)
    cyc = reduction_cycle(Form(1, 0, -3))
    assert Form(1, 2, -2) in cyc and Form(-2, 2, 1) in cyc
    assert set(cyc) <= oracle_indefinite_reduced(12)


def test_reduce_rejects_imprimitive():
    with pytest.raises(ValueError):
        reduce(Form(2, 0, 10))  # gcd 2, disc -80


def test_reduce_idempotent_and_disc_preserved():
    rng = random.Random(5)
    for D in (-20, -84, -71, 12, 60, 229):
        for _ in range(20):
            f = _random_form(rng, D)
            g = reduce(f)
            assert g.disc == D
            assert reduce(g) == g


def _random_form(rng, D):
    # random primitive form of disc D via a random SL2 transform of principal
    f = principal_form(D)
    for _ in range(6):
        t = rng.randint(-3, 3)
        a, b, c = f
        if rng.random() < 0.5:
            f = Form(a, b + 2 * a * t, a * t * t + b * t + c)
        else:
            f = Form(c, -b, a)
    return f


def test_reduce_transform_is_proper_equivalence():
    rng = random.Random(11)
    for D in (-20, -84, -163, 12, 60, 316):
        for _ in range(15):
            f = _random_form(rng, D)
            g, (m11, m12, m21, m22) = reduce_with_transform(f)
            assert m11 * m22 - m12 * m21 == 1
            for x in range(-4, 5):
                for y in range(-4, 5):
                    u, v = m11 * x + m12 * y, m21 * x + m22 * y
                    assert f.a * u * u + f.b * u * v + f.c * v * v == g.a * x * x + g.b * x * y + g.c * y * y


def test_reduce_preserves_represented_integers_definite():
    # exact sound box: f(x,y) <= N needs |x|,|y| <= sqrt(4*N*max(a,c)/|D|)+1
    def represented(f, N=100):
        bound = isqrt(4 * N * max(abs(f.a), abs(f.c)) // abs(f.disc)) + 2
        vals = set()
        for x in range(-bound, bound + 1):
            for y in range(-bound, bound + 1):
                v = f.a * x * x + f.b * x * y + f.c * y * y
                if abs(v) <= N:
                    vals.add(v)
        return vals

    rng = random.Random(3)
    for D in (-20, -84, -56):
        for _ in range(8):
            f = _random_form(rng, D)
            assert represented(f) == represented(reduce(f))


# ---------------------------------------------------------------------------
# compose
# ---------------------------------------------------------------------------


def test_compose_identity_law():
    cg = class_group(-20)
    e = principal_form(-20)
    for f in cg.reps:
        assert compose(e, f) == reduce(f)


def test_compose_square_of_ambiguous():
    assert compose(Form(2, 2, 3), Form(2, 2, 3)) == Form(1, 0, 5)


def test_compose_example_disc_84():
    # brute-force composition table over the 4 reduced forms of disc -84
    reps = [Form(1, 0, 21), Form(2, 2, 11), Form(3, 0, 7), Form(5, 4, 5)]
    assert {tuple(f) for f in reps} == oracle_definite_reduced(-84)
    table = {(f, g): compose(f, g) for f in reps for g in reps}
    assert table[(Form(2, 2, 11), Form(3, 0, 7))] == Form(5, 4, 5)
    # closure and the Klein four-group structure
    for (f, g), h in table.items():
        assert h in reps
        assert table[(g, f)] == h
    for f in reps:
        assert table[(f, f)] == Form(1, 0, 21)


def test_compose_associative_commutative():
    rng = random.Random(17)
    for D in (-84, -120, 12, 60):
        cg = class_group(D)
        for _ in range(25):
            f, g, h = (rng.choice(cg.reps) for _ in range(3))
            assert compose(f, g) == compose(g, f)
            assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_compose_rejects_mismatched_disc():
    with pytest.raises(ValueError):
        compose(Form(1, 0, 5), Form(1, 0, 3))


# ---------------------------------------------------------------------------
# class groups
# ---------------------------------------------------------------------------


def test_class_group_minus_20():
    cg = class_group(-20)
    assert cg.h_plus == 2
    assert cg.reps == (Form(1, 0, 5), Form(2, 2, 3))
    assert cg.invariant_factors == (2,)


def test_class_group_minus_84():
    cg = class_group(-84)
    assert cg.h_plus == 4
    assert cg.invariant_factors == (2, 2)
    assert set(map(tuple, cg.reps)) == oracle_definite_reduced(-84)


def test_class_group_disc_12():
    cg = class_group(12)
    assert cg.h_plus == 2
    assert cg.invariant_factors == (2,)


def test_class_group_real_spot_values():
    # h+(8) = 1 (norm -1 unit exists), h+(60) = 4 = twice the wide h = 2
    assert class_group(8).h_plus == 1
    assert class_group(40).h_plus == 2
    cg = class_group(60)
    assert cg.h_plus == 4 and cg.invariant_factors == (2, 2)


def test_class_group_cyclic_structure():
    # h(-39) = 4 cyclic; h(-47) = 5
    assert class_group(-39).invariant_factors == (4,)
    assert class_group(-47).invariant_factors == (5,)
    assert class_group(-87).invariant_factors == (6,)


def test_definite_class_numbers_against_oracle():
    for D in fundamental_range(2000):
        if D >= 0:
            continue
        forms = oracle_definite_reduced(D)
        cg = class_group(D)
        assert cg.h_plus == len(forms), D
        assert set(map(tuple, cg.reps)) == forms, D


def test_indefinite_reduced_forms_match_oracle():
    for D in fundamental_range(500):
        if D <= 0:
            continue
        cycles = set()
        reported = set()
        cg = class_group(D)
        for f in cg.reps:
            reported |= set(map(tuple, reduction_cycle(f)))
        assert reported == oracle_indefinite_reduced(D), D


def test_group_axioms_on_table():
    for D in (-84, -104, 60, 145):
        cg = class_group(D)
        h = cg.h_plus
        e = cg.identity
        for i in range(h):
            assert cg.table[e][i] == i
            assert cg.table[i][cg.inv(i)] == e
        for i in range(h):
            for j in range(h):
                assert cg.table[i][j] == cg.table[j][i]


def test_two_torsion_count_is_genus_rank():
    # number of order <= 2 classes equals 2^(r-1), r = #primes dividing D
    for D in fundamental_range(2000):
        cg = class_group(D)
        r = len(factorize(D).primes)
        assert len(cg.two_torsion()) == 1 << (r - 1), D
        assert cg.two_torsion_rank == r - 1, D
        squares = {cg.table[i][i] for i in range(cg.h_plus)}
        # squares form the image of squaring; its size is h / 2^(r-1)
        assert len(squares) * (1 << (r - 1)) == cg.h_plus, D


# ---------------------------------------------------------------------------
# ambiguous forms
# ---------------------------------------------------------------------------


def test_ambiguous_form_examples():
    assert ambiguous_form(2, -20) == Form(2, 2, 3)
    assert ambiguous_form(5, -20) == Form(5, 0, 1)
    assert ambiguous_form(3, 12) == Form(3, 0, -1)


def test_ambiguous_form_rejects_unramified():
    with pytest.raises(ValueError):
        ambiguous_form(3, -20)


def test_ambiguous_forms_have_order_two():
    for D in fundamental_range(2000):
        for p in factorize(D).primes:
            f = ambiguous_form(p, D)
            assert f.disc == D, (p, D)
            assert f.a == p
            assert compose(f, f) == reduce(principal_form(D)), (p, D)


# ---------------------------------------------------------------------------
# resource bounds
# ---------------------------------------------------------------------------


def test_resource_bounds():
    with pytest.raises(ResourceLimitError):
        class_group(-84, max_h=3)
    with pytest.raises(ResourceLimitError):
        class_group(-20, max_disc=10)
