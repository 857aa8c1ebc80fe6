"""Coxeter-fan faces, parahoric decompositions, and biclosed triples.

A face of the finite Coxeter fan is an ordered set partition (plain for
family A, signed for B/C, type-D signed for D).  Its parahoric subgroup
decomposes into affine components; a biclosed set is described exactly by
a face F, a union of components Phi' and one component element each, with
membership decided by the sign of the face functional on a root and, on
the zero part, by Phi'-membership xored with the component inversions.

The face functional is never realized in coordinates: its sign on
e~_j - e~_i is the difference of the block indices of the residues.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import (
    ComponentMismatch,
    NotBiclosed,
    TooLarge,
    TypeMismatch,
    UnpairedPhiPrime,
    UnstableWindow,
)
from .perms import (
    AffinePermutation,
    identity,
    inversions,
    invert,
    max_displacement,
    multiply,
    reflection,
    root_action,
    simple_reflections,
    elements_up_to_length,
)
from .roots import (
    AffineType,
    Root,
    canonical_root,
    class_chain,
    finite_class,
    negate_class,
    root_window,
    signed_residue,
    vector_to_root,
)
from . import closure as _closure


# ---------------------------------------------------------------------------
# faces


@dataclass(frozen=True)
class FanFace:
    """An ordered set partition naming a face of the finite Coxeter fan.

    Family A partitions the residues {0, ..., M-1}; the signed families
    partition {0, +-1, ..., +-n} (B/C, central block holds 0) resp.
    {+-1, ..., +-n} (D, central block self-negated and possibly empty).
    Blocks are listed in increasing order of the face functional.
    """

    type: AffineType
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        typ = self.type
        blocks = self.blocks
        if typ.family == "A":
            ground = set(range(typ.modulus))
            if any(not b for b in blocks):
                raise ValueError("empty block")
        else:
            ground = set(range(-typ.n, typ.n + 1))
            if typ.family == "D":
                ground.discard(0)
            if len(blocks) % 2 == 0:
                raise ValueError("signed faces need an odd block sequence")
            mid = len(blocks) // 2
            for k, b in enumerate(blocks):
                if frozenset(-v for v in b) != blocks[len(blocks) - 1 - k]:
                    raise ValueError("blocks are not negation-symmetric")
                if not b and k != mid:
                    raise ValueError("empty non-central block")
            if typ.family in ("B", "C") and 0 not in blocks[mid]:
                raise ValueError("central block must contain 0")
            if typ.family == "D" and not blocks[mid]:
                if len(blocks) < 3 or len(blocks[mid + 1]) < 2:
                    raise ValueError(
                        "an empty central block needs an adjacent block of size >= 2"
                    )
        seen: set[int] = set()
        for b in blocks:
            if b & seen:
                raise ValueError("blocks overlap")
            seen |= b
        if seen != ground:
            raise ValueError("blocks do not partition the ground set")

    def residue(self, x: int) -> int:
        if self.type.family == "A":
            return x % self.type.modulus
        return signed_residue(self.type, x)

    @property
    def block_of(self) -> dict[int, int]:
        return _block_of(self)

    def pairing_sign(self, r: Root) -> int:
        """Sign of <f, r> for f in the relative interior of the face."""
        bo = self.block_of
        d = bo[self.residue(r.j)] - bo[self.residue(r.i)]
        return (d > 0) - (d < 0)

    def one_indexed_blocks(self) -> tuple[tuple[int, ...], ...]:
        """Blocks with family-A residue 0 printed as M (one-indexed labels)."""
        if self.type.family != "A":
            return tuple(tuple(sorted(b)) for b in self.blocks)
        m = self.type.modulus
        return tuple(tuple(sorted(v if v else m for v in b)) for b in self.blocks)

    def __repr__(self):
        inner = ["{" + ",".join(map(str, sorted(b))) + "}" for b in self.blocks]
        return f"FanFace({self.type.family}{self.type.n}:({','.join(inner)}))"


@lru_cache(maxsize=4096)
def _block_of(face: FanFace) -> dict[int, int]:
    out = {}
    for k, b in enumerate(face.blocks):
        for v in b:
            out[v] = k
    return out


def face_from_blocks(typ: AffineType, blocks) -> FanFace:
    return FanFace(typ, tuple(frozenset(b) for b in blocks))


def origin_face(typ: AffineType) -> FanFace:
    if typ.family == "A":
        return FanFace(typ, (frozenset(range(typ.modulus)),))
    ground = set(range(-typ.n, typ.n + 1))
    if typ.family == "D":
        ground.discard(0)
    return FanFace(typ, (frozenset(ground),))


def dominant_chamber(typ: AffineType) -> FanFace:
    if typ.family == "A":
        m = typ.modulus
        order = list(range(1, m)) + [0]
        return FanFace(typ, tuple(frozenset({v}) for v in order))
    n = typ.n
    if typ.family in ("B", "C"):
        order = [{v} for v in range(-n, n + 1)]
    else:
        order = [{v} for v in range(-n, -1)] + [{-1, 1}] + [{v} for v in range(2, n + 1)]
    return FanFace(typ, tuple(frozenset(b) for b in order))


def _ordered_set_partitions(items: tuple):
    """All ordered set partitions of items (classic block-count recursion)."""
    items = tuple(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for tail in _ordered_set_partitions(rest):
        for k, b in enumerate(tail):
            yield tail[:k] + (b | {first},) + tail[k + 1:]
        for k in range(len(tail) + 1):
            yield tail[:k] + (frozenset({first}),) + tail[k:]


def enumerate_faces(typ: AffineType) -> tuple[FanFace, ...]:
    """All faces of the finite Coxeter fan, each exactly once."""
    if typ.n > 6:
        raise TooLarge("face enumeration is guarded at n <= 6")
    out = []
    if typ.family == "A":
        for blocks in _ordered_set_partitions(tuple(range(typ.modulus))):
            out.append(FanFace(typ, blocks))
        out.sort(key=lambda f: f.one_indexed_blocks())
        return tuple(out)
    n = typ.n
    values = tuple(range(1, n + 1))
    for central_size in range(n + 1):
        for central in itertools.combinations(values, central_size):
            rest = [v for v in values if v not in central]
            for signs in itertools.product((1, -1), repeat=len(rest)):
                signed = tuple(s * v for s, v in zip(signs, rest))
                for parts in _ordered_set_partitions(signed):
                    if typ.family == "D":
                        mid = frozenset(v for c in central for v in (c, -c))
                        if not mid and (not parts or len(parts[0]) < 2):
                            continue
                    else:
                        mid = frozenset(
                            {0} | {v for c in central for v in (c, -c)}
                        )
                    neg = tuple(
                        frozenset(-v for v in b) for b in reversed(parts)
                    )
                    out.append(FanFace(typ, neg + (mid,) + parts))
    out.sort(key=lambda f: tuple(sorted(map(sorted, f.blocks))) + (len(f.blocks),))
    return tuple(dict.fromkeys(out))


# ---------------------------------------------------------------------------
# parahoric components


@dataclass(frozen=True)
class Component:
    """One indecomposable factor of a parahoric subgroup.

    ``kind`` selects the relabeling:  "ablock" components are the
    A-family factors over the integers whose residue lies in one block;
    "central" components sit over the self-negated central block; a
    "splitA1" is one of the two A~1 factors of a split central D~2.
    """

    id: str
    ctype: AffineType
    kind: str
    reps: tuple[int, ...]  # ablock/central: sorted period representatives
    gamma: tuple[int, ...] = ()  # splitA1: positive finite direction
    parent: AffineType = None

    # -- the order isomorphism rho between the global and local ground sets

    def rho(self, x: int) -> int:
        m = self.parent.modulus
        if self.kind == "central":
            mm = self.ctype.modulus
            s = x % m
            if s == 0:
                return (x // m) * mm
            t = self.reps.index(s) + 1
            return t + ((x - s) // m) * mm
        lm = self.ctype.modulus
        s = x % m
        t = self.reps.index(s)
        return t + ((x - s) // m) * lm

    def rho_inv(self, y: int) -> int:
        m = self.parent.modulus
        if self.kind == "central":
            mm = self.ctype.modulus
            s = y % mm
            if s == 0:
                return (y // mm) * m
            return self.reps[s - 1] + ((y - s) // mm) * m
        lm = self.ctype.modulus
        s = y % lm
        return self.reps[s] + ((y - s) // lm) * m

    def covers_residue(self, sres: int) -> bool:
        if self.kind == "splitA1":
            raise AssertionError("use class membership for splitA1")
        if self.kind == "central" and sres == 0:
            return True
        m = self.parent.modulus
        return sres % m in self.reps

    def to_local(self, r: Root) -> Root:
        if self.kind == "splitA1":
            vec = r.vector()
            fin, k = vec[:-1], vec[-1]
            if fin == self.gamma:
                return canonical_root(self.ctype, 1, 2 + 2 * k)
            if fin == tuple(-c for c in self.gamma):
                return canonical_root(self.ctype, 0, 2 * k - 1)
            raise ComponentMismatch(f"{r} is not in component {self.id}")
        m = self.parent.modulus
        i, j = r.i, r.j
        if i % m not in self.reps and (self.kind != "central" or i % m != 0):
            i, j = -r.j, -r.i  # mirror representatives live in the block
        return canonical_root(self.ctype, self.rho(i), self.rho(j))

    def to_global(self, r: Root) -> Root:
        if self.kind == "splitA1":
            if r.i % 2 == 1:
                k = (r.j - 2) // 2
                vec = self.gamma + (k,)
            else:
                k = (r.j - 1) // 2
                vec = tuple(-c for c in self.gamma) + (k + 1,)
            sign, out = vector_to_root(self.parent, vec)
            assert sign == 1
            return out
        return canonical_root(self.parent, self.rho_inv(r.i), self.rho_inv(r.j))

    def local_simple_pairs(self) -> tuple[tuple[int, int], ...]:
        from .perms import _simple_pairs

        return _simple_pairs(self.ctype)

    def global_simple_roots(self) -> tuple[Root, ...]:
        out = []
        for i, j in self.local_simple_pairs():
            out.append(self.to_global(canonical_root(self.ctype, i, j)))
        return tuple(out)


@dataclass(frozen=True)
class ParahoricDecomposition:
    face: FanFace
    components: tuple[Component, ...]

    def by_id(self, cid: str) -> Component:
        for c in self.components:
            if c.id == cid:
                return c
        raise ComponentMismatch(f"no component {cid!r}")

    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)

    def component_of_root(self, r: Root) -> Component | None:
        """The component containing a root of Phi_F (sign zero), else None."""
        face = self.face
        if face.pairing_sign(r) != 0:
            return None
        ri = face.residue(r.i)
        pos = face.block_of[ri]
        if face.type.family == "A":
            cid = f"blk{pos}"
        else:
            mid = len(face.blocks) // 2
            if pos != mid:
                cid = f"blk{mid + abs(pos - mid)}"
            else:
                splits = [c for c in self.components if c.kind == "splitA1"]
                if splits:
                    fin = finite_class(r)
                    for c in splits:
                        gk = finite_class_of_vector(c.gamma)
                        if fin in (gk, negate_class(gk)):
                            return c
                    raise AssertionError("split component not found")
                cid = "ctr"
        for c in self.components:
            if c.id == cid:
                return c
        raise AssertionError(f"no component for {r} (singleton block?)")


def finite_class_of_vector(fin: tuple[int, ...]) -> tuple[int, ...]:
    from math import gcd

    g = 0
    for c in fin:
        g = gcd(g, abs(c))
    return tuple(c // g for c in fin)


@lru_cache(maxsize=4096)
def parahoric(face: FanFace) -> ParahoricDecomposition:
    """Components of Phi_F with their types and relabeling maps.

    Trivial factors (A~ over singletons, the trivial central ranks) are
    omitted; a central D~2 splits into its two A~1 factors so that Phi'
    can select exactly one of them.
    """
    typ = face.type
    m = typ.modulus
    comps: list[Component] = []
    if typ.family == "A":
        for k, b in enumerate(face.blocks):
            if len(b) >= 2:
                comps.append(
                    Component(
                        id=f"blk{k}",
                        ctype=AffineType("A", len(b)),
                        kind="ablock",
                        reps=tuple(sorted(v % m for v in b)),
                        parent=typ,
                    )
                )
        return ParahoricDecomposition(face, tuple(comps))
    mid = len(face.blocks) // 2
    for k in range(mid + 1, len(face.blocks)):
        b = face.blocks[k]
        if len(b) >= 2:
            comps.append(
                Component(
                    id=f"blk{k}",
                    ctype=AffineType("A", len(b)),
                    kind="ablock",
                    reps=tuple(sorted(v % m for v in b)),
                    parent=typ,
                )
            )
    central = face.blocks[mid]
    nonzero = sorted(v % m for v in central if v != 0)
    if typ.family in ("B", "C"):
        c = (len(central) - 1) // 2
        if c >= 1:
            comps.append(
                Component(
                    id="ctr",
                    ctype=AffineType(typ.family, c),
                    kind="central",
                    reps=tuple(nonzero),
                    parent=typ,
                )
            )
    else:
        c = len(central) // 2
        if c == 2:
            z1, z2 = sorted(v for v in central if 0 < v <= typ.n)
            same = [0] * typ.n
            same[z2 - 1], same[z1 - 1] = 1, -1
            mixed = [0] * typ.n
            mixed[z2 - 1], mixed[z1 - 1] = 1, 1
            for tag, fin in ((f"{z1},{z2}", same), (f"{z1},{-z2}", mixed)):
                comps.append(
                    Component(
                        id=f"ctrA1:{tag}",
                        ctype=AffineType("A", 2),
                        kind="splitA1",
                        reps=(),
                        gamma=tuple(fin),
                        parent=typ,
                    )
                )
        elif c >= 3:
            comps.append(
                Component(
                    id="ctr",
                    ctype=AffineType("D", c),
                    kind="central",
                    reps=tuple(nonzero),
                    parent=typ,
                )
            )
    return ParahoricDecomposition(face, tuple(comps))


def phi_prime_from_blocks(face: FanFace, positions) -> frozenset[str]:
    """Translate block positions into component ids, enforcing +- pairing."""
    decomp = parahoric(face)
    positions = set(positions)
    if face.type.family == "A":
        ids = {f"blk{k}" for k in positions}
    else:
        mid = len(face.blocks) // 2
        ids = set()
        for k in positions:
            if k == mid:
                ids.update(c.id for c in decomp.components
                           if c.kind in ("central", "splitA1"))
                continue
            partner = 2 * mid - k
            if partner not in positions:
                raise UnpairedPhiPrime(
                    f"block {k} selected without its negative {partner}"
                )
            ids.add(f"blk{max(k, partner)}")
    known = set(decomp.ids())
    if not ids <= known:
        raise ComponentMismatch(f"unknown components {sorted(ids - known)}")
    return frozenset(ids)


# ---------------------------------------------------------------------------
# biclosed triples


@dataclass(frozen=True)
class BiclosedTriple:
    """The canonical description (F, Phi', w) of a biclosed set."""

    face: FanFace
    phi_prime: frozenset[str]
    w: tuple[tuple[str, AffinePermutation], ...]  # sorted by component id
    inv_global: frozenset[Root] = field(compare=False)

    @property
    def type(self) -> AffineType:
        return self.face.type

    def w_map(self) -> dict[str, AffinePermutation]:
        return dict(self.w)

    def component_w(self, cid: str) -> AffinePermutation:
        for k, v in self.w:
            if k == cid:
                return v
        return identity(parahoric(self.face).by_id(cid).ctype)

    def member(self, r: Root) -> bool:
        return membership(self, r)

    def window(self, h: int) -> _closure.WindowSet:
        roots = frozenset(r for r in root_window(self.type, h) if self.member(r))
        return _closure.WindowSet(self.type, h, roots)

    def __repr__(self):
        ws = {k: list(v.window) for k, v in self.w}
        return (
            f"BiclosedTriple(face={self.face!r}, phi_prime={sorted(self.phi_prime)},"
            f" w={ws})"
        )


def build_biclosed(face: FanFace, phi_prime, w=None) -> BiclosedTriple:
    """Assemble and validate a triple; w maps component ids to elements.

    Missing components default to the identity; identity components are
    normalized away so triples compare canonically.
    """
    decomp = parahoric(face)
    phi = frozenset(phi_prime)
    unknown = phi - set(decomp.ids())
    if unknown:
        raise ComponentMismatch(f"phi_prime names unknown components {sorted(unknown)}")
    w = dict(w or {})
    unknown = set(w) - set(decomp.ids())
    if unknown:
        raise ComponentMismatch(f"w names unknown components {sorted(unknown)}")
    items = []
    global_inv: set[Root] = set()
    for comp in decomp.components:
        u = w.get(comp.id)
        if u is None:
            continue
        if u.type != comp.ctype:
            raise ComponentMismatch(
                f"component {comp.id} expects type {comp.ctype}, got {u.type}"
            )
        if u == identity(comp.ctype):
            continue
        items.append((comp.id, u))
        for loc in inversions(u):
            global_inv.add(comp.to_global(loc))
    items.sort(key=lambda kv: kv[0])
    return BiclosedTriple(face, phi, tuple(items), frozenset(global_inv))


def membership(t: BiclosedTriple, r: Root) -> bool:
    """Exact membership of a root in the biclosed set of a triple."""
    if r.type != t.type:
        raise TypeMismatch("root and triple types differ")
    sign = t.face.pairing_sign(r)
    if sign:
        return sign < 0
    decomp = parahoric(t.face)
    comp = decomp.component_of_root(r)
    return (comp.id in t.phi_prime) != (r in t.inv_global)


def triple_of_element(w: AffinePermutation) -> BiclosedTriple:
    """The triple (origin, empty, w) of a finite inversion set N(w)."""
    face = origin_face(w.type)
    wmap = _recover_w(parahoric(face), set(inversions(w)))
    return build_biclosed(face, frozenset(), wmap)


def global_element(face: FanFace, w_map) -> AffinePermutation:
    """Realize a family of component elements as one global permutation."""
    decomp = parahoric(face)
    typ = face.type
    out = identity(typ)
    for cid, u in sorted(dict(w_map).items()):
        comp = decomp.by_id(cid)
        word = _local_word(u)
        gens = [reflection(typ, r.i, r.j) for r in comp.global_simple_roots()]
        for s in word:
            out = multiply(out, gens[s])
    return out


def _local_word(u: AffinePermutation) -> list[int]:
    """A reduced word for u, as indices into its simple reflections."""
    gens = simple_reflections(u.type)
    simple_roots = [
        canonical_root(u.type, i, j) for i, j in _simple_pairs_of(u.type)
    ]
    word = []
    cur = u
    while cur != identity(u.type):
        inv = inversions(cur)
        s = next(k for k, a in enumerate(simple_roots) if a in inv)
        word.append(s)
        cur = multiply(gens[s], cur)
    return word


def _simple_pairs_of(typ: AffineType):
    from .perms import _simple_pairs

    return _simple_pairs(typ)


def _recover_w(decomp: ParahoricDecomposition, x: set[Root]):
    """Peel a finite Phi_F-inversion set into component elements.

    Repeatedly strips a simple root of W_F from x, transforming the rest
    by the corresponding reflection; the letters assemble left-to-right
    into the component words.
    """
    typ = decomp.face.type
    simples = []
    for comp in decomp.components:
        for k, root in enumerate(comp.global_simple_roots()):
            simples.append((comp, k, root, reflection(typ, root.i, root.j)))
    words: dict[str, list[int]] = {}
    x = set(x)
    guard = len(x) + 1
    while x:
        guard -= 1
        if guard < 0:
            raise NotBiclosed("the zero part is not a parahoric inversion set")
        hit = next((s for s in simples if s[2] in x), None)
        if hit is None:
            raise NotBiclosed("the zero part is not a parahoric inversion set")
        comp, k, root, refl = hit
        x.remove(root)
        nxt = set()
        for r in x:
            sign, img = root_action(refl, r)
            if sign != 1:
                raise NotBiclosed("inversion peel left the positive system")
            nxt.add(img)
        x = nxt
        words.setdefault(comp.id, []).append(k)
    out = {}
    for comp in decomp.components:
        if comp.id not in words:
            continue
        gens = simple_reflections(comp.ctype)
        u = identity(comp.ctype)
        for s in words[comp.id]:
            u = multiply(u, gens[s])
        out[comp.id] = u
    return out


# ---------------------------------------------------------------------------
# classification


def classify(s, h: int | None = None) -> BiclosedTriple:
    """The unique triple agreeing with the input on its window.

    Accepts a WindowSet (stability-checked through b_infinity) or a
    PeriodicOrder (delegated to its exact inversion set).
    """
    if not isinstance(s, _closure.WindowSet):
        from .orders import PeriodicOrder, inversion_set

        if isinstance(s, PeriodicOrder):
            return inversion_set(s)
        raise TypeError("classify expects a WindowSet or PeriodicOrder")
    cert = _closure.is_biclosed(s)
    if not cert.ok:
        raise NotBiclosed(
            f"window trace violates the {cert.violated} condition", cert
        )
    bits, stable = _closure.b_infinity(s)
    if not stable:
        raise UnstableWindow("b_infinity unstable; enlarge the window")
    member = lambda r: r in s.members
    t = _classify_from_bits(s.type, dict.fromkeys(bits, True), member, s.H)
    for r in root_window(s.type, s.H):
        if t.member(r) != (r in s.members):
            raise UnstableWindow(
                "classification does not round-trip; enlarge the window"
            )
    return t


def _classify_from_bits(typ, true_bits, member, h) -> BiclosedTriple:
    bits = {k: k in true_bits and true_bits[k] for k in _all_keys(typ)}
    face, phi = _face_from_bits(typ, bits)
    base = build_biclosed(face, phi, {})
    x = set()
    for r in root_window(typ, h):
        if member(r) != base.member(r):
            if face.pairing_sign(r) != 0:
                raise UnstableWindow(
                    "membership mismatch off the zero part; enlarge the window"
                )
            x.add(r)
    wmap = _recover_w(parahoric(face), x)
    return build_biclosed(face, phi, wmap)


@lru_cache(maxsize=32)
def _all_keys(typ: AffineType):
    from .roots import all_class_keys

    return all_class_keys(typ)


@lru_cache(maxsize=32)
def _key_vectors(typ: AffineType):
    """class key of the direction e_b - e_a for ground residues a, b."""
    out = {}
    if typ.family == "A":
        ground = list(range(typ.modulus))
        for a in ground:
            for b in ground:
                if a == b:
                    continue
                fin = [0] * typ.n
                fin[b] += 1
                fin[a] -= 1
                out[(a, b)] = finite_class_of_vector(tuple(fin))
        return out
    ground = [v for v in range(-typ.n, typ.n + 1) if v != 0]
    for a in ground:
        for b in ground:
            if a == b:
                continue
            if a == -b and typ.family == "D":
                continue
            fin = [0] * typ.n
            if b > 0:
                fin[b - 1] += 1
            else:
                fin[-b - 1] -= 1
            if a > 0:
                fin[a - 1] -= 1
            else:
                fin[-a - 1] += 1
            key = finite_class_of_vector(tuple(fin))
            if key in _all_keys(typ):
                out[(a, b)] = key
    return out


def _face_from_bits(typ: AffineType, bits) -> tuple[FanFace, frozenset[str]]:
    """Rebuild (F, Phi') from the asymptotic class membership bits."""
    keyvec = _key_vectors(typ)
    if typ.family == "A":
        ground = list(range(typ.modulus))
    else:
        ground = [v for v in range(-typ.n, typ.n + 1) if v != 0]
    # union-find over "functional is equal" pairs
    parent = {v: v for v in ground}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    after = []  # (a, b) meaning f_a > f_b
    for (a, b), key in keyvec.items():
        if a > b and (b, a) in keyvec:
            continue
        in_ab = bits[key]
        in_ba = bits[keyvec[(b, a)]]
        if in_ab == in_ba:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        elif in_ab:
            after.append((a, b))
        else:
            after.append((b, a))
    blocks: dict[int, set[int]] = {}
    for v in ground:
        blocks.setdefault(find(v), set()).add(v)
    order_above: dict[frozenset, set[frozenset]] = {}
    fsets = {rep: frozenset(b) for rep, b in blocks.items()}
    for a, b in after:
        fa, fb = fsets[find(a)], fsets[find(b)]
        if fa == fb:
            raise NotBiclosed("inconsistent asymptotic data (strict inside a block)")
        order_above.setdefault(fa, set()).add(fb)
    blist = sorted(set(fsets.values()), key=lambda s: sorted(s))
    # sort bottom-to-top by the number of blocks transitively below each
    # one; direct comparisons can miss +-singleton pairs (family D), which
    # only acquire their order through intermediate blocks
    below = {x: set(order_above.get(x, ())) for x in blist}
    changed = True
    while changed:
        changed = False
        for x in blist:
            grow = set().union(*(below[y] for y in below[x])) if below[x] else set()
            if not grow <= below[x]:
                below[x] |= grow
                changed = True
    blist.sort(key=lambda x: len(below[x]))
    for i in range(len(blist)):
        for j in range(i + 1, len(blist)):
            if blist[j] in below[blist[i]]:
                raise NotBiclosed("asymptotic block order is not total")
    if typ.family == "A":
        try:
            face = FanFace(typ, tuple(blist))
        except ValueError as e:
            raise NotBiclosed(f"asymptotic data gives no face: {e}") from e
        return face, _phi_from_bits(face, bits)
    # signed families: locate/insert the central block
    self_neg = [b for b in blist if frozenset(-v for v in b) == b]
    if len(self_neg) > 1:
        raise NotBiclosed("several self-negated blocks")
    if self_neg:
        mid = blist.index(self_neg[0])
        if typ.family in ("B", "C"):
            blist[mid] = frozenset(self_neg[0] | {0})
    else:
        if len(blist) % 2:
            raise NotBiclosed("odd block count without a self-negated block")
        mid = len(blist) // 2
        lower, upper = blist[mid - 1], blist[mid]
        if typ.family == "D" and len(upper) == 1:
            v = next(iter(upper))
            if lower != frozenset({-v}):
                raise NotBiclosed("unmergeable middle blocks")
            blist[mid - 1: mid + 1] = [frozenset({v, -v})]
            mid = mid - 1
        elif typ.family == "D":
            blist[mid:mid] = [frozenset()]
        else:
            blist[mid:mid] = [frozenset({0})]
    try:
        face = FanFace(typ, tuple(blist))
    except ValueError as e:
        raise NotBiclosed(f"asymptotic data gives no face: {e}") from e
    return face, _phi_from_bits(face, bits)


def _phi_from_bits(face: FanFace, bits) -> frozenset[str]:
    """Phi' components are those whose classes are asymptotically full."""
    decomp = parahoric(face)
    phi = set()
    for comp in decomp.components:
        keys = _component_class_keys(comp)
        values = {bits[k] for k in keys}
        if len(values) != 1:
            raise NotBiclosed(
                f"component {comp.id} is asymptotically inconsistent"
            )
        if values == {True}:
            phi.add(comp.id)
    return frozenset(phi)


def _component_class_keys(comp: Component):
    keys = set()
    for loc in root_window(comp.ctype, 1):
        keys.add(finite_class(comp.to_global(loc)))
    keys |= {negate_class(k) for k in set(keys)}
    return keys


# ---------------------------------------------------------------------------
# the W-action


def classify_oracle(typ: AffineType, member, settle: int) -> BiclosedTriple:
    """Classify an exact membership oracle whose asymptotic class
    behavior has settled by the given height."""
    h = settle + 4
    bits = {}
    for key in _all_keys(typ):
        chain = class_chain(typ, key, h)
        vals = {member(r) for r in chain if r.height >= settle}
        assert len(vals) == 1, "asymptotic membership did not settle"
        bits[key] = vals.pop()
    for _ in range(4):
        try:
            out = _classify_from_bits(typ, bits, member, h)
        except UnstableWindow:
            h *= 2
            continue
        if all(out.member(r) == member(r) for r in root_window(typ, h)):
            return out
        h *= 2
    raise UnstableWindow("oracle classification did not stabilize")


def act(v: AffinePermutation, t: BiclosedTriple) -> BiclosedTriple:
    """The biclosed-set action: the triple of the set w.B with
    D(w.B) = w D(B), computed exactly."""
    if v.type != t.type:
        raise TypeMismatch("action type mismatch")
    vinv = invert(v)

    def member(r: Root) -> bool:
        sign, img = root_action(vinv, r)
        return t.member(img) if sign == 1 else not t.member(img)

    inv_heights = [r.height for r in t.inv_global] or [0]
    settle = max(inv_heights) + 2 * max_displacement(v) + 4
    return classify_oracle(t.type, member, settle)


# ---------------------------------------------------------------------------
# path components / poset fragments


@dataclass(frozen=True)
class PosetFragment:
    """A finite chunk of the extended weak order with its cover relation."""

    labels: tuple[str, ...]
    covers: tuple[tuple[int, int], ...]  # (lower, upper) index pairs
    node_sizes: tuple[int, ...]


def path_component_poset(face: FanFace, phi_prime, bound: int,
                         node_guard: int = 20000) -> PosetFragment:
    """Biclosed sets commensurable with B(F, Phi') truncated to component
    lengths <= bound, with covers the single-root containments."""
    decomp = parahoric(face)
    phi = phi_prime_from_ids(decomp, phi_prime)
    per_comp = []
    for comp in decomp.components:
        elems = sorted(
            elements_up_to_length(comp.ctype, bound).items(),
            key=lambda kv: (kv[1], kv[0].window),
        )
        per_comp.append((comp, elems))
    total = 1
    for _, elems in per_comp:
        total *= len(elems)
    if total > node_guard:
        raise TooLarge(f"{total} nodes exceed the guard {node_guard}")
    nodes = []
    for combo in itertools.product(*(range(len(e)) for _, e in per_comp)):
        invs = []
        size = 0
        label_parts = []
        for (comp, elems), k in zip(per_comp, combo):
            u, lu = elems[k]
            inv = inversions(u)
            reversed_ = comp.id in phi
            size += -len(inv) if reversed_ else len(inv)
            invs.append((inv, reversed_))
            if lu:
                label_parts.append(f"{comp.id}:{list(u.window)}")
        nodes.append((size, tuple(invs), " ".join(label_parts) or "e"))
    nodes.sort(key=lambda n: (n[0], n[2]))
    covers = []
    for a, (sa, ia, _) in enumerate(nodes):
        for b, (sb, ib, _) in enumerate(nodes):
            if sb != sa + 1:
                continue
            if all(
                (xa <= xb if not rev else xb <= xa)
                for (xa, rev), (xb, _) in zip(ia, ib)
            ):
                covers.append((a, b))
    base_size = min((n[0] for n in nodes), default=0)
    return PosetFragment(
        labels=tuple(n[2] for n in nodes),
        covers=tuple(sorted(covers)),
        node_sizes=tuple(n[0] - base_size for n in nodes),
    )


def phi_prime_from_ids(decomp: ParahoricDecomposition, phi_prime) -> frozenset[str]:
    phi = frozenset(phi_prime)
    unknown = phi - set(decomp.ids())
    if unknown:
        raise ComponentMismatch(f"unknown components {sorted(unknown)}")
    return phi


def face_poset(typ: AffineType):
    """All faces with the closure partial order (via covector dominance)."""
    faces = enumerate_faces(typ)
    signs = []
    finite = _finite_positive_directions(typ)
    for f in faces:
        bo = f.block_of
        row = []
        for a, b in finite:
            d = bo[b] - bo[a]
            row.append((d > 0) - (d < 0))
        signs.append(tuple(row))

    def leq(x, y):  # x is a face of y's closure
        return all(sx == 0 or sx == sy for sx, sy in zip(signs[x], signs[y]))

    return faces, leq


def _finite_positive_directions(typ: AffineType):
    """Ground residue pairs (a, b) naming the finite positive roots."""
    out = []
    seen = set()
    for key in _all_keys(typ):
        nk = negate_class(key)
        if nk in seen:
            continue
        seen.add(key)
        if typ.family == "A":
            a = next(r for r, c in enumerate(key) if c == -1)
            b = next(r for r, c in enumerate(key) if c == 1)
        else:
            sup = [(v + 1, c) for v, c in enumerate(key) if c]
            if len(sup) == 1:
                v, c = sup[0]
                a, b = (-v, v) if c > 0 else (v, -v)
            else:
                (v1, c1), (v2, c2) = sup
                a = v1 if c1 == -1 else -v1
                b = v2 if c2 == 1 else -v2
        out.append((a, b))
    return sorted(out)
