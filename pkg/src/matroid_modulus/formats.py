"""Text formats for matroids, fixtures and the seeded random generator.

Formats (``#`` starts a comment, blank lines are ignored):

graph
    one edge per line: ``u v label``
linear
    one matrix row per line of rationals (``1``, ``-2``, ``3/4``); an optional
    ``labels: c1 c2 ...`` line names the columns
uniform
    ``uniform k n`` or ``k n``
bases
    one base per line, labels separated by commas or whitespace

A leading ``# format: NAME`` line selects the format when none is given.
"""
from __future__ import annotations

import random
import re
from fractions import Fraction
from pathlib import Path

from .errors import CapExceeded, MatroidError, ParseError
from .matroid import CAPS, ExplicitBases, Graphic, Linear, Matroid, Uniform

FORMATS = ("graph", "linear", "uniform", "bases")
_DIRECTIVE = re.compile(r"#\s*format\s*:\s*(\w+)")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def sniff_format(text: str) -> str | None:
    for raw in text.splitlines():
        hit = _DIRECTIVE.match(raw.strip())
        if hit:
            return hit.group(1)
        if raw.strip() and not raw.lstrip().startswith("#"):
            return None
    return None


def parse_graph(text: str) -> Graphic:
    edges = []
    for no, line in _lines(text):
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'u v label', got {line!r}", no)
        u, v, label = parts
        if u == v:
            raise ParseError(f"self-loop {label!r} makes the matroid have a loop", no)
        edges.append((u, v, label))
    if not edges:
        raise ParseError("no edges")
    try:
        return Graphic(edges)
    except MatroidError as exc:
        raise ParseError(str(exc)) from None


def parse_linear(text: str) -> Linear:
    rows, labels = [], None
    for no, line in _lines(text):
        if line.lower().startswith("labels"):
            labels = line.split(":", 1)[-1].split() if ":" in line else line.split()[1:]
            continue
        try:
            rows.append([Fraction(tok) for tok in line.replace(",", " ").split()])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational in {line!r}", no) from None
    try:
        return Linear(rows, labels)
    except MatroidError as exc:
        raise ParseError(str(exc)) from None


def parse_uniform(text: str) -> Uniform:
    items = list(_lines(text))
    if len(items) != 1:
        raise ParseError("uniform input is a single line 'uniform k n'")
    no, line = items[0]
    parts = line.split()
    if parts[0].lower() == "uniform":
        parts = parts[1:]
    try:
        k, n = (int(t) for t in parts)
    except ValueError:
        raise ParseError(f"expected 'uniform k n', got {line!r}", no) from None
    try:
        return Uniform(k, n)
    except MatroidError as exc:
        raise ParseError(str(exc), no) from None


def parse_bases(text: str) -> ExplicitBases:
    bases = []
    for no, line in _lines(text):
        bases.append([tok for tok in re.split(r"[,\s]+", line) if tok])
    if not bases:
        raise ParseError("no bases")
    try:
        return ExplicitBases(bases)
    except MatroidError as exc:
        raise ParseError(str(exc)) from None


_PARSERS = {"graph": parse_graph, "linear": parse_linear, "uniform": parse_uniform, "bases": parse_bases}


def parse(text: str, fmt: str | None = None) -> Matroid:
    fmt = fmt or sniff_format(text) or "graph"
    if fmt not in _PARSERS:
        raise ParseError(f"unknown format {fmt!r}")
    m = _PARSERS[fmt](text)
    if m.n > CAPS.max_elements:
        raise CapExceeded("subsets", CAPS.subsets, 1 << m.n)
    return m


def load(path: str | Path, fmt: str | None = None) -> Matroid:
    return parse(Path(path).read_text(), fmt)


# ---------------------------------------------------------------------------
# fixtures


def triangle_pendant() -> Graphic:
    """Triangle a, b, c with a pendant edge d."""
    return Graphic([(1, 2, "a"), (2, 3, "b"), (1, 3, "c"), (3, 4, "d")])


def u12() -> Uniform:
    return Uniform(1, 2)


def k4() -> Graphic:
    pairs = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    return Graphic([(u, v, f"e{i}") for i, (u, v) in enumerate(pairs, start=1)])


def path3() -> Graphic:
    return Graphic([(1, 2, "e1"), (2, 3, "e2"), (3, 4, "e3")])


FIXTURES = {"TP": triangle_pendant, "U12": u12, "K4": k4, "PATH3": path3}


# ---------------------------------------------------------------------------
# seeded random instances


def random_graph_edges(seed: int, size: int) -> list[tuple[int, int, str]]:
    """Connected multigraph with ``size`` edges: random tree plus random extra edges."""
    if size < 1:
        raise MatroidError("size must be positive")
    rng = random.Random(seed)
    nv = rng.randint(2, size + 1)
    pairs = [(rng.randrange(v), v) for v in range(1, nv)]
    while len(pairs) < size:
        u, v = rng.sample(range(nv), 2)
        pairs.append((min(u, v), max(u, v)))
    rng.shuffle(pairs)
    return [(u, v, f"e{i}") for i, (u, v) in enumerate(pairs, start=1)]


def random_linear_rows(seed: int, size: int) -> list[list[int]]:
    """Random small-integer matrix with ``size`` nonzero columns."""
    if size < 1:
        raise MatroidError("size must be positive")
    rng = random.Random(seed)
    nrows = rng.randint(1, max(1, size - 1))
    cols = []
    while len(cols) < size:
        col = [rng.randint(-2, 2) for _ in range(nrows)]
        if any(col):
            cols.append(col)
    return [[col[i] for col in cols] for i in range(nrows)]


def random_instance_text(seed: int, family: str = "graphic", size: int = 6) -> str:
    if size > CAPS.max_elements:
        raise CapExceeded("subsets", CAPS.subsets, 1 << size)
    if family == "graphic":
        body = [f"{u} {v} {lab}" for u, v, lab in random_graph_edges(seed, size)]
        return "\n".join(["# format: graph", f"# seed={seed} size={size}", *body]) + "\n"
    if family == "linear":
        rows = random_linear_rows(seed, size)
        labels = "labels: " + " ".join(f"c{i}" for i in range(1, size + 1))
        body = [" ".join(str(v) for v in row) for row in rows]
        return "\n".join(["# format: linear", f"# seed={seed} size={size}", labels, *body]) + "\n"
    raise MatroidError(f"unknown family {family!r}")


def random_suite(count: int = 50, max_edges: int = 8, base_seed: int = 0) -> list[tuple[int, Graphic]]:
    """The seeded random graphic suite: (seed, matroid) pairs with 3..max_edges edges."""
    out = []
    for k in range(count):
        seed = base_seed + k
        size = 3 + seed % (max_edges - 2)
        out.append((seed, Graphic(random_graph_edges(seed, size))))
    return out
