"""Finite groupoids given by explicit composition tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class InvalidGroupoid(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroupoid:
    """``comp[(g, f)]`` is ``g . f``; it is present iff ``tgt[f] == src[g]``."""

    name: str
    objects: int
    src: tuple[int, ...]
    tgt: tuple[int, ...]
    comp: dict
    ident: tuple[int, ...]
    inverse: tuple[int, ...]

    @property
    def morphisms(self) -> int:
        return len(self.src)

    def hom(self, a: int, b: int) -> list[int]:
        return [f for f in range(self.morphisms) if self.src[f] == a and self.tgt[f] == b]

    def validate(self) -> "FiniteGroupoid":
        n, objs = self.morphisms, range(self.objects)
        if len(self.tgt) != n or len(self.inverse) != n or len(self.ident) != self.objects:
            raise InvalidGroupoid(f"{self.name}: table sizes disagree")
        if any(not 0 <= o < self.objects for o in self.src + self.tgt):
            raise InvalidGroupoid(f"{self.name}: endpoint out of range")
        for g, f in itertools.product(range(n), repeat=2):
            composable = self.tgt[f] == self.src[g]
            if composable != ((g, f) in self.comp):
                raise InvalidGroupoid(f"{self.name}: composite of {g} after {f} wrongly {'missing' if composable else 'present'}")
            if composable:
                h = self.comp[(g, f)]
                if (self.src[h], self.tgt[h]) != (self.src[f], self.tgt[g]):
                    raise InvalidGroupoid(f"{self.name}: {g}.{f} has the wrong endpoints")
        for a in objs:
            i = self.ident[a]
            if (self.src[i], self.tgt[i]) != (a, a):
                raise InvalidGroupoid(f"{self.name}: identity of {a} is not a loop on {a}")
        for f in range(n):
            if self.comp[(self.ident[self.tgt[f]], f)] != f or self.comp[(f, self.ident[self.src[f]])] != f:
                raise InvalidGroupoid(f"{self.name}: unit law fails at {f}")
            g = self.inverse[f]
            if self.comp.get((g, f)) != self.ident[self.src[f]] or self.comp.get((f, g)) != self.ident[self.tgt[f]]:
                raise InvalidGroupoid(f"{self.name}: {g} is not inverse to {f}")
        for h, g, f in itertools.product(range(n), repeat=3):
            if (g, f) in self.comp and (h, g) in self.comp:
                if self.comp[(h, self.comp[(g, f)])] != self.comp[(self.comp[(h, g)], f)]:
                    raise InvalidGroupoid(f"{self.name}: associativity fails at {h}, {g}, {f}")
        return self


# ---------------------------------------------------------------------------
# groups and connected groupoids
# ---------------------------------------------------------------------------


def cyclic(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def klein() -> list[list[int]]:
    return [[i ^ j for j in range(4)] for i in range(4)]


def symmetric3() -> list[list[int]]:
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    # row p, column q: p after q
    return [[idx[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]


GROUPS = {
    "Z1": cyclic(1), "Z2": cyclic(2), "Z3": cyclic(3), "Z4": cyclic(4),
    "Z2xZ2": klein(), "Z5": cyclic(5), "Z6": cyclic(6), "S3": symmetric3(),
}


def _group_identity(table) -> int:
    return next(e for e in range(len(table)) if all(table[e][x] == x for x in range(len(table))))


def from_components(name: str, components: list[tuple[int, list[list[int]]]]) -> FiniteGroupoid:
    """Disjoint union of connected groupoids, each ``k`` objects with vertex group ``H``.

    Within a component the morphism ``(b, a, h): a -> b`` composes as
    ``(c, b, h2) . (b, a, h1) = (c, a, h2 h1)``.
    """
    labels = []  # (component, target, source, group element)
    offsets = []
    base = 0
    for ci, (k, table) in enumerate(components):
        offsets.append(base)
        for b, a, h in itertools.product(range(k), range(k), range(len(table))):
            labels.append((ci, base + b, base + a, h))
        base += k
    index = {lab: i for i, lab in enumerate(labels)}
    src = tuple(lab[2] for lab in labels)
    tgt = tuple(lab[1] for lab in labels)
    comp = {}
    for (cg, bg, ag, hg), (cf, bf, af, hf) in itertools.product(labels, repeat=2):
        if ag == bf:
            table = components[cg][1]
            comp[(index[(cg, bg, ag, hg)], index[(cf, bf, af, hf)])] = index[(cg, bg, af, table[hg][hf])]
    ident, inverse = [], [0] * len(labels)
    for ci, (k, table) in enumerate(components):
        e = _group_identity(table)
        for a in range(k):
            ident.append(index[(ci, offsets[ci] + a, offsets[ci] + a, e)])
    for (ci, b, a, h), i in index.items():
        table = components[ci][1]
        hinv = next(x for x in range(len(table)) if table[x][h] == _group_identity(table))
        inverse[i] = index[(ci, a, b, hinv)]
    return FiniteGroupoid(name, base, src, tgt, comp, tuple(ident), tuple(inverse)).validate()


def all_small_groupoids(max_objects: int = 3, max_morphisms: int = 6) -> list[FiniteGroupoid]:
    """Every groupoid up to isomorphism within the bounds, the empty one included.

    A groupoid is a disjoint union of connected ones, and a connected one
    with ``k`` objects and vertex group ``H`` has ``k*k*|H|`` morphisms.
    """
    kinds = [(k, g) for k in range(1, max_objects + 1) for g in GROUPS
             if k * k * len(GROUPS[g]) <= max_morphisms]
    out = []

    def grow(start, objs, mors, chosen):
        name = "+".join(f"{g}" if k == 1 else f"{g}^{k}" for k, g in chosen) or "empty"
        out.append(from_components(name, [(k, GROUPS[g]) for k, g in chosen]))
        for i in range(start, len(kinds)):
            k, g = kinds[i]
            if objs + k <= max_objects and mors + k * k * len(GROUPS[g]) <= max_morphisms:
                grow(i, objs + k, mors + k * k * len(GROUPS[g]), chosen + [(k, g)])

    grow(0, 0, 0, [])
    return out


# ---------------------------------------------------------------------------
# functors G -> Set, i.e. groupoid actions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupoidAction:
    """A functor ``F: G -> Set`` on pairwise disjoint sets.

    ``fibre[x]`` is the object whose set contains element ``x``;
    ``act[f]`` maps elements of ``F(src f)`` to ``F(tgt f)``.
    """

    groupoid: FiniteGroupoid
    fibre: tuple[int, ...]
    act: tuple[dict, ...]

    @property
    def size(self) -> int:
        return len(self.fibre)

    def validate(self) -> "GroupoidAction":
        g = self.groupoid
        for f in range(g.morphisms):
            dom = {x for x in range(self.size) if self.fibre[x] == g.src[f]}
            m = self.act[f]
            if set(m) != dom or any(self.fibre[y] != g.tgt[f] for y in m.values()):
                raise InvalidGroupoid(f"action of morphism {f} has the wrong domain or codomain")
        for a in range(g.objects):
            if any(self.act[g.ident[a]][x] != x for x in self.act[g.ident[a]]):
                raise InvalidGroupoid("identities must act trivially")
        for (h, f), hf in g.comp.items():
            for x, y in self.act[f].items():
                if self.act[h][y] != self.act[hf][x]:
                    raise InvalidGroupoid("action is not functorial")
        return self


def representable_action(g: FiniteGroupoid, base: int) -> GroupoidAction:
    """``F = hom(base, -)`` acting by post-composition."""
    elems = [m for m in range(g.morphisms) if g.src[m] == base]
    pos = {m: i for i, m in enumerate(elems)}
    fibre = tuple(g.tgt[m] for m in elems)
    act = tuple({pos[m]: pos[g.comp[(f, m)]] for m in elems if g.tgt[m] == g.src[f]}
                for f in range(g.morphisms))
    return GroupoidAction(g, fibre, act).validate()


def trivial_action(g: FiniteGroupoid) -> GroupoidAction:
    """One point over every object; every morphism acts by the unique map."""
    act = tuple({g.src[f]: g.tgt[f]} for f in range(g.morphisms))
    return GroupoidAction(g, tuple(range(g.objects)), act).validate()


def sum_actions(*actions: GroupoidAction) -> GroupoidAction:
    g = actions[0].groupoid
    fibre, act = [], [dict() for _ in range(g.morphisms)]
    for a in actions:
        off = len(fibre)
        fibre.extend(a.fibre)
        for f in range(g.morphisms):
            act[f].update({off + x: off + y for x, y in a.act[f].items()})
    return GroupoidAction(g, tuple(fibre), tuple(act)).validate()
