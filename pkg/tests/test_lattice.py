"""Joins and meets: windows, threshold relations, families A and C."""

import itertools
import random

import pytest

from afweak.closure import WindowSet, close
from afweak.errors import NotAnOrder, TooLarge, TypeMismatch
from afweak.fan import (
    build_biclosed,
    classify,
    enumerate_faces,
    face_from_blocks,
    parahoric,
    phi_prime_from_blocks,
    triple_of_element,
)
from afweak.lattice import (
    FiniteOrderWindow,
    check_order,
    embed_c,
    finite_group,
    finite_inversions,
    iota,
    join_A,
    join_C,
    join_finite,
    join_window,
    meet_A,
    meet_C,
    meet_window,
    pi,
    relation_from_pairs,
    restrict_c,
    sigma,
    sigma_relation,
    threshold_closure,
    try_join,
)
from afweak.orders import periodic_order, precedes
from afweak.perms import (
    identity,
    multiply,
    reflection,
    simple_reflections,
)
from afweak.roots import AffineType, canonical_root, finite_class, negate_class, root_window

A2 = AffineType("A", 2)
A3 = AffineType("A", 3)
A4 = AffineType("A", 4)
A5 = AffineType("A", 5)
C1 = AffineType("C", 1)
C2 = AffineType("C", 2)
D2 = AffineType("D", 2)


def _word(typ, *letters):
    gens = simple_reflections(typ)
    w = identity(typ)
    for s in letters:
        w = multiply(w, gens[s])
    return w


def _rand_triple(typ, rng, max_len=3):
    faces = enumerate_faces(typ)
    face = faces[rng.randrange(len(faces))]
    decomp = parahoric(face)
    phi = frozenset(i for i in decomp.ids() if rng.random() < 0.4)
    wmap = {}
    for c in decomp.components:
        gens = simple_reflections(c.ctype)
        u = identity(c.ctype)
        for _ in range(rng.randrange(max_len + 1)):
            u = multiply(u, gens[rng.randrange(len(gens))])
        wmap[c.id] = u
    return build_biclosed(face, phi, wmap)


# ----------------------------------------------------------------- windows


def test_join_window_examples():
    got = join_window([{(1, 2)}, {(2, 3)}], 1, 3)
    assert got.inversions() == {(1, 2), (1, 3), (2, 3)}
    ident = join_window([set()], 1, 4)
    assert ident.listing == (1, 2, 3, 4)
    atoms = [{(i, i + 1)} for i in range(1, 4)]
    full = join_window(atoms, 1, 4)
    # derived oracle: scan all 24 orders of four letters
    def inv_of(p):
        pos = {v: k for k, v in enumerate(p)}
        return frozenset(
            (i, j) for i in range(1, 5) for j in range(i + 1, 5) if pos[i] > pos[j]
        )

    orders = {inv_of(p) for p in itertools.permutations(range(1, 5))}
    ups = [o for o in orders if all(frozenset(a) <= o for a in atoms)]
    least = min(ups, key=len)
    assert all(least <= o for o in ups)
    assert full.inversions() == least
    assert full.listing == (4, 3, 2, 1)


def test_join_window_identity_neutral():
    x = FiniteOrderWindow(1, 4, (2, 1, 4, 3))
    assert join_window([x, FiniteOrderWindow(1, 4, (1, 2, 3, 4))]) == x


def test_meet_window():
    x = FiniteOrderWindow(1, 3, (3, 2, 1))
    y = FiniteOrderWindow(1, 3, (2, 3, 1))
    m = meet_window([x, y])
    assert m.inversions() == x.inversions() & y.inversions()


# ------------------------------------------------------- threshold algebra


def test_relation_shapes_of_a_genuine_order():
    f = face_from_blocks(A4, [{1, 3}, {0, 2}])
    t = build_biclosed(f, phi_prime_from_blocks(f, [1]), {})
    rel = iota(t)
    shapes = {rel.full_shape(a, b) for a in range(4) for b in range(4) if a != b}
    assert shapes <= {"Empty", "All", "AtMost", "AtLeast"}
    # complementarity: exactly one of (a,b,d), (b,a,-d) holds
    rng = random.Random(0)
    for _ in range(300):
        x, y = rng.randrange(-20, 20), rng.randrange(-20, 20)
        if x == y:
            continue
        assert rel.succeeds(x, y) != rel.succeeds(y, x)
    # diagonal never contains zero: succeeds(x, x) is undefined but the
    # encoded order never relates x to itself through translation
    assert not rel.succeeds(0, 4) or rel.succeeds(0, 4) in (True, False)


def test_threshold_closure_reproduces_the_join_order():
    s = simple_reflections(A4)
    t1 = triple_of_element(multiply(s[0], s[1]))
    t2 = triple_of_element(multiply(s[2], s[3]))
    closed = threshold_closure(iota(t1).union(iota(t2)))
    check_order(closed)
    f = face_from_blocks(A4, [{1, 3}, {0, 2}])
    o = periodic_order(f, reversed_blocks=[1])
    rng = random.Random(1)
    for _ in range(400):
        x, y = rng.randrange(-15, 15), rng.randrange(-15, 15)
        if x == y:
            continue
        assert closed.succeeds(x, y) == precedes(o, y, x)


def test_threshold_closure_is_transitive_and_idempotent():
    rng = random.Random(2)
    for _ in range(10):
        t1, t2 = _rand_triple(A4, rng, 2), _rand_triple(A4, rng, 2)
        u = iota(t1).union(iota(t2))
        c = threshold_closure(u)
        assert threshold_closure(c).V == c.V
        check_order(c)


def test_check_order_flags_non_orders():
    # an inversion that factors through two non-inversions
    bad = relation_from_pairs(2, [canonical_root(A2, 0, 3)])
    with pytest.raises(NotAnOrder):
        check_order(bad)


def test_pi_iota_identity():
    rng = random.Random(3)
    for typ in (A3, A4):
        for _ in range(50):
            t = _rand_triple(typ, rng)
            assert pi(iota(t), typ) == t
    # p = iota(pi(.)) is idempotent and monotone on closures
    for _ in range(20):
        t1, t2 = _rand_triple(A4, rng, 2), _rand_triple(A4, rng, 2)
        c = threshold_closure(iota(t1).union(iota(t2)))
        p1 = iota(pi(c, A4))
        assert iota(pi(p1, A4)).V == p1.V


def test_join_A_worked_example():
    s = simple_reflections(A4)
    t1 = triple_of_element(multiply(s[0], s[1]))
    t2 = triple_of_element(multiply(s[2], s[3]))
    j = join_A([t1, t2])
    f = face_from_blocks(A4, [{1, 3}, {0, 2}])
    assert j == build_biclosed(f, phi_prime_from_blocks(f, [1]), {})
    assert j.face.one_indexed_blocks() == ((1, 3), (2, 4))


def test_join_A_small_identities():
    rng = random.Random(4)
    bot = join_A([], A4)
    top = meet_A([], A4)
    for _ in range(15):
        x = _rand_triple(A4, rng)
        assert join_A([x, x]) == x
        assert meet_A([x, x]) == x
        assert join_A([x, bot]) == x
        assert meet_A([x, top]) == x
    g = simple_reflections(A2)
    jj = join_A([triple_of_element(g[0]), triple_of_element(g[1])])
    assert jj.window(6).members == frozenset(root_window(A2, 6))


def test_join_meet_are_lattice_operations():
    rng = random.Random(5)
    for typ in (A3, A4):
        for _ in range(20):
            x, y = _rand_triple(typ, rng), _rand_triple(typ, rng)
            j = join_A([x, y])
            m = meet_A([x, y])
            for r in root_window(typ, 6):
                assert j.member(r) >= max(x.member(r), y.member(r)) or (
                    not (x.member(r) or y.member(r))
                )
                if x.member(r) or y.member(r):
                    assert j.member(r)
                if m.member(r):
                    assert x.member(r) and y.member(r)
            # absorption
            assert meet_A([j, x]) == x
            assert join_A([m, x]) == x


def test_sigma_involution_and_fixed_points():
    rng = random.Random(6)
    for _ in range(30):
        t = _rand_triple(A5, rng, 2)
        assert sigma(sigma(t)) == t
    # sigma at the threshold level agrees with negation of the order
    for _ in range(10):
        t = _rand_triple(A5, rng, 2)
        rel = iota(t)
        srel = sigma_relation(rel)
        for _ in range(100):
            x, y = rng.randrange(-12, 12), rng.randrange(-12, 12)
            if x == y:
                continue
            assert srel.succeeds(x, y) == rel.succeeds(-y, -x)


def test_sigma_commutes_with_join_and_meet():
    rng = random.Random(7)
    for _ in range(20):
        x, y = _rand_triple(A5, rng, 2), _rand_triple(A5, rng, 2)
        assert sigma(join_A([x, y])) == join_A([sigma(x), sigma(y)])
        assert sigma(meet_A([x, y])) == meet_A([sigma(x), sigma(y)])


def test_embed_restrict_c():
    rng = random.Random(8)
    for _ in range(25):
        t = _rand_triple(C2, rng, 2)
        e = embed_c(t)
        assert sigma(e) == e
        assert restrict_c(e, C2) == t


def test_join_C_basics():
    g = simple_reflections(C1)
    j = join_C([triple_of_element(g[0]), triple_of_element(g[1])])
    assert j.window(6).members == frozenset(root_window(C1, 6))
    rng = random.Random(9)
    for _ in range(10):
        x = _rand_triple(C2, rng, 2)
        assert join_C([x, x]) == x
        assert join_C([x, join_C([], C2)]) == x


def test_join_C_matches_windowed_oracle():
    rng = random.Random(10)
    checked = 0
    for _ in range(30):
        x, y = _rand_triple(C2, rng, 2), _rand_triple(C2, rng, 2)
        j = join_C([x, y])
        h = 5
        union = frozenset(
            r for r in root_window(C2, 2 * h) if x.member(r) or y.member(r)
        )
        big = close(WindowSet(C2, 2 * h, union))
        small = close(
            WindowSet(C2, h, frozenset(r for r in union if r.height <= h))
        )
        if frozenset(r for r in big.members if r.height <= h) != small.members:
            continue
        assert classify(big) == j
        checked += 1
    assert checked >= 25


def test_meet_C():
    rng = random.Random(11)
    for _ in range(10):
        x, y = _rand_triple(C2, rng, 2), _rand_triple(C2, rng, 2)
        m = meet_C([x, y])
        for r in root_window(C2, 5):
            if m.member(r):
                assert x.member(r) and y.member(r)
        assert join_C([m, x]) == x


# ------------------------------------------------------------ finite joins


def test_finite_group_sizes():
    assert len(finite_group("B", 3)) == 48
    assert len(finite_group("D", 3)) == 24
    assert len(finite_group("A", 2)) == 6
    with pytest.raises(TooLarge):
        finite_group("B", 5)


def test_join_finite_displayed_values():
    u, w = (6, 2, 4, 3, 5, 1), (3, 6, 5, 2, 1, 4)
    assert join_finite("B", 3, u, w) == (6, 5, 4, 3, 2, 1)
    assert join_finite("D", 3, u, w) == (6, 5, 3, 4, 2, 1)
    e = (1, 2, 3, 4, 5, 6)
    assert join_finite("B", 3, u, e) == u
    assert join_finite("D", 3, u, e) == u


def test_finite_remark_non_comparability():
    # 653421 is not above 624351 in the B order, but is in the D order
    u, v = (6, 2, 4, 3, 5, 1), (6, 5, 3, 4, 2, 1)
    assert not finite_inversions("B", 3, u) <= finite_inversions("B", 3, v)
    assert finite_inversions("D", 3, u) <= finite_inversions("D", 3, v)


def test_join_finite_is_least_upper_bound():
    rng = random.Random(12)
    for fam in ("B", "D"):
        group = finite_group(fam, 2)
        for _ in range(15):
            u, w = rng.choice(group), rng.choice(group)
            j = join_finite(fam, 2, u, w)
            nj = finite_inversions(fam, 2, j)
            assert nj >= finite_inversions(fam, 2, u)
            assert nj >= finite_inversions(fam, 2, w)
            for g in group:
                ng = finite_inversions(fam, 2, g)
                if ng >= finite_inversions(fam, 2, u) and ng >= finite_inversions(
                    fam, 2, w
                ):
                    assert nj <= ng


# ----------------------------------------------------------------- try_join


def test_try_join_d2_example():
    tu = triple_of_element(reflection(D2, 1, 2))
    tv = triple_of_element(reflection(D2, 2, 6))
    res = try_join([tu, tv], 6)
    assert res.ok
    win = res.triple.window(6).members
    g12 = finite_class(canonical_root(D2, 1, 2))
    keep = {g12, negate_class(g12)}
    for r in root_window(D2, 6):
        assert (r in win) == (finite_class(r) in keep)


def test_try_join_identities_and_bounds():
    rng = random.Random(13)
    tu = triple_of_element(reflection(D2, 1, 2))
    assert try_join([tu, tu], 5).triple == tu
    B2 = AffineType("B", 2)
    for _ in range(8):
        x = _rand_triple(B2, rng, 2)
        y = _rand_triple(B2, rng, 2)
        res = try_join([x, y], 5)
        if res.ok:
            for r in root_window(B2, 5):
                if x.member(r) or y.member(r):
                    assert res.triple.member(r)


def test_try_join_agrees_with_finite_parabolic():
    # inside the finite D2 = A1 x A1 parabolic both engines agree
    tu = triple_of_element(reflection(D2, 1, 2))
    tv = triple_of_element(reflection(D2, 1, 3))
    res = try_join([tu, tv], 5)
    assert res.ok
    # the two reflections live in orthogonal factors: the join is the
    # union, which is N of their product
    both = triple_of_element(
        multiply(reflection(D2, 1, 2), reflection(D2, 1, 3))
    )
    assert res.triple == both


def test_try_join_type_guard():
    tu = triple_of_element(reflection(D2, 1, 2))
    tv = triple_of_element(reflection(C2, 1, 2))
    with pytest.raises(TypeMismatch):
        try_join([tu, tv], 4)
