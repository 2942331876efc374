"""Plain-text grid format for groupoids, monoids, algebras and chains.

A file holds blocks.  Each block starts with ``<kind> <name>``, ends with
``end``, and ``#`` starts a comment.  Grids list one row per line; an entry
is ``.`` (nothing), an index, or several indices joined by ``|``.

    groupoid Z2            monoid and             chain pfn-correct-2
    objects 1              carrier 2              sizes 0 1 2
    src 0 0                unit 1                 apex 2
    tgt 0 0                mult                   e0
    ident 0                0 0                    e1 0
    inverse 0 1            0 1                    q0 .
    comp                   end                    q1 0 .
    0 1                                           p0 . .
    1 0                    algebra a1             ...
    end                    monoid and             end
                           carrier 2
                           action
                           0 .
                           1 0|1
                           end

In ``comp`` the entry in row ``g``, column ``f`` is ``g . f``.  In
``mult`` it is the set of products of ``x`` (row) and ``y`` (column), in
``action`` the set ``x . b``.  Chain maps are tables: entry ``k`` is the
image of element ``k``.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..pinj import PartialFunction
from .chains import ChainData
from .groupoid import FiniteGroupoid, InvalidGroupoid, all_small_groupoids
from .monoid import RelAlgebra, RelMonoid, Relation


class CorpusError(ValueError):
    pass


def corpus_dir() -> Path:
    return Path(str(resources.files("pio") / "corpus"))


def _cell(s: str) -> set[int]:
    return set() if s == "." else {int(x) for x in s.split("|")}


def _fmt(cell) -> str:
    if cell is None or cell == set():
        return "."
    if isinstance(cell, int):
        return str(cell)
    return "|".join(str(x) for x in sorted(cell))


def _ints(words) -> tuple[int, ...]:
    return tuple(int(w) for w in words)


def parse_blocks(text: str) -> list[tuple[str, str, dict, list[list[str]]]]:
    """Split into ``(kind, name, fields, grid rows)``."""
    blocks, cur = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if cur is None:
            if len(words) != 2 or words[0] not in ("groupoid", "monoid", "algebra", "chain"):
                raise CorpusError(f"line {lineno}: expected a block header, got {line!r}")
            cur = (words[0], words[1], {}, [])
            grid = None
            continue
        if words == ["end"]:
            blocks.append(cur)
            cur = None
            continue
        if words[0] in ("comp", "mult", "action") and len(words) == 1:
            cur[2]["grid"] = words[0]
            grid = cur[3]
            continue
        if grid is not None:
            grid.append(words)
        else:
            cur[2][words[0]] = words[1:]
    if cur is not None:
        raise CorpusError(f"block {cur[1]!r} is missing 'end'")
    return blocks


def load(text: str) -> dict[str, object]:
    out: dict[str, object] = {}
    for kind, name, fields, grid in parse_blocks(text):
        try:
            if kind == "groupoid":
                src, tgt = _ints(fields["src"]), _ints(fields["tgt"])
                comp = {}
                for g, row in enumerate(grid):
                    for f, cell in enumerate(row):
                        if cell != ".":
                            comp[(g, f)] = int(cell)
                out[name] = FiniteGroupoid(name, int(fields["objects"][0]), src, tgt, comp,
                                           _ints(fields["ident"]), _ints(fields["inverse"])).validate()
            elif kind == "monoid":
                n = int(fields["carrier"][0])
                pairs = [(x * n + y, z) for x, row in enumerate(grid) for y, c in enumerate(row) for z in _cell(c)]
                unit = _cell("|".join(fields.get("unit", [])) or ".")
                out[name] = RelMonoid(name, n, Relation.from_pairs(n * n, n, pairs),
                                      Relation.from_pairs(1, n, [(0, u) for u in unit]))
            elif kind == "algebra":
                m = out[fields["monoid"][0]]
                a = int(fields["carrier"][0])
                pairs = [(x * m.carrier + b, y) for x, row in enumerate(grid) for b, c in enumerate(row) for y in _cell(c)]
                out[name] = RelAlgebra(name, m, a, Relation.from_pairs(a * m.carrier, a, pairs))
            else:
                sizes = _ints(fields["sizes"])
                apex = int(fields["apex"][0])

                def table(key, dom, cod):
                    cells = fields.get(key, [])
                    return PartialFunction(dom, cod, tuple(None if c == "." else int(c) for c in cells))
                N = len(sizes)
                e = tuple(table(f"e{n}", sizes[n], sizes[n + 1]) for n in range(N - 1))
                q = tuple(table(f"q{n}", sizes[n + 1], sizes[n]) for n in range(N - 1))
                p = tuple(table(f"p{n}", apex, sizes[n]) for n in range(N))
                i = tuple(table(f"i{n}", sizes[n], apex) for n in range(N))
                out[name] = ChainData(name, sizes, e, q, apex, p, i)
        except (KeyError, IndexError, InvalidGroupoid) as exc:
            raise CorpusError(f"{kind} {name}: {exc}") from exc
    return out


def dump_groupoid(g: FiniteGroupoid) -> str:
    n = g.morphisms
    lines = [f"groupoid {g.name}", f"objects {g.objects}",
             "src " + " ".join(map(str, g.src)), "tgt " + " ".join(map(str, g.tgt)),
             "ident " + " ".join(map(str, g.ident)), "inverse " + " ".join(map(str, g.inverse)), "comp"]
    lines += [" ".join(_fmt(g.comp.get((r, c))) for c in range(n)) for r in range(n)]
    return "\n".join(lines + ["end", ""])


def dump_monoid(m: RelMonoid) -> str:
    n = m.carrier
    lines = [f"monoid {m.name}", f"carrier {n}", "unit " + _fmt(m.unit.image(0)), "mult"]
    lines += [" ".join(_fmt(m.mult.image(x * n + y)) for y in range(n)) for x in range(n)]
    return "\n".join(lines + ["end", ""])


def dump_algebra(a: RelAlgebra) -> str:
    b = a.monoid.carrier
    lines = [f"algebra {a.name}", f"monoid {a.monoid.name}", f"carrier {a.carrier}", "action"]
    lines += [" ".join(_fmt(a.action.image(x * b + k)) for k in range(b)) for x in range(a.carrier)]
    return "\n".join(lines + ["end", ""])


def dump_chain(c: ChainData) -> str:
    def row(key, f):
        return " ".join([key] + [_fmt(y) for y in f.table])
    lines = [f"chain {c.name}", "sizes " + " ".join(map(str, c.sizes)), f"apex {c.apex}"]
    lines += [row(f"e{n}", f) for n, f in enumerate(c.e)]
    lines += [row(f"q{n}", f) for n, f in enumerate(c.q)]
    lines += [row(f"p{n}", f) for n, f in enumerate(c.p)]
    lines += [row(f"i{n}", f) for n, f in enumerate(c.i)]
    return "\n".join(lines + ["end", ""])


def load_file(name: str) -> dict[str, object]:
    return load((corpus_dir() / "lab" / name).read_text())


def groupoid_corpus() -> list[FiniteGroupoid]:
    return list(load_file("groupoids.grid").values())


def generated_files() -> dict[str, str]:
    """Contents of the lab corpus as produced by the generators."""
    from .chains import pfn_chain
    from .monoid import AND_MONOID, search_em_not_fem

    header = "# generated by pio.finrel.corpus.generated_files; do not edit by hand\n"
    groupoids = header + "\n".join(dump_groupoid(g) for g in all_small_groupoids())
    pinned = search_em_not_fem()
    pinned_monoid = RelMonoid("em-search-monoid", pinned.monoid.carrier, pinned.monoid.mult, pinned.monoid.unit)
    pinned = RelAlgebra("em-not-fem", pinned_monoid, pinned.carrier, pinned.action)
    monoids = header + "\n".join([dump_monoid(AND_MONOID), dump_monoid(pinned_monoid), dump_algebra(pinned)])
    chains = header + "\n".join(dump_chain(pfn_chain(6, s)) for s in ("correct", "min"))
    return {"groupoids.grid": groupoids, "monoids.grid": monoids, "chains.grid": chains}


def regenerate(target: Path | None = None) -> None:
    target = target or corpus_dir() / "lab"
    target.mkdir(parents=True, exist_ok=True)
    for name, text in generated_files().items():
        (target / name).write_text(text)


if __name__ == "__main__":
    regenerate()
