"""Plain-text matrix lists for the ``cbnorm`` and ``haagerup`` commands.

A file is a sequence of ``[section]`` headers, each followed by matrices.
Matrix rows are whitespace-separated entries in Python ``complex`` syntax
(``1``, ``-0.5``, ``2+1j``); consecutive matrices are separated by a blank
line. ``#`` starts a comment. Instead of a matrix list a space section may be
a single shorthand line: ``matrices <h> <k>`` (all of ``M_{h,k}``) or
``column <d>``.

Map file (``cbnorm``)::

    [domain]        basis of the domain operator space
    [codomain]      optional, defaults to the domain
    [images]        image of each domain basis element, in order

Tensor file (``haagerup``)::

    [left]          basis of X
    [right]         basis of Y
    [terms]         x1, y1, x2, y2, ... so that u = sum x_k (x) y_k
    [terms i j]     the same for entry (i, j) of a matrix-level tensor

Example: the transpose on ``M_2``::

    [domain]
    matrices 2 2

    [images]
    1 0
    0 0

    0 0
    1 0

    0 1
    0 0

    0 0
    0 1
"""

import re

import numpy as np

from .opspace import CbLinearMap, ConcreteOpSpace

__all__ = ["MatrixFileError", "parse_sections", "read_map", "read_tensor", "parse_map", "parse_tensor"]


class MatrixFileError(ValueError):
    pass


_HEADER = re.compile(r"^\[([^\]]+)\]$")


def parse_sections(text):
    """``{name: [lines]}`` keeping blank lines, which separate matrices."""
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        m = _HEADER.match(line)
        if m:
            current = " ".join(m.group(1).split())
            if current in sections:
                raise MatrixFileError(f"line {lineno}: duplicate section [{current}]")
            sections[current] = []
        elif current is None:
            if line:
                raise MatrixFileError(f"line {lineno}: content before the first section")
        else:
            sections[current].append(line)
    return sections


def _matrices(lines, where):
    mats, rows = [], []

    def flush():
        if rows:
            if len({len(r) for r in rows}) != 1:
                raise MatrixFileError(f"[{where}]: ragged matrix")
            mats.append(np.array(rows, dtype=complex))
            rows.clear()

    for line in lines:
        if not line:
            flush()
            continue
        try:
            rows.append([complex(tok) for tok in line.split()])
        except ValueError:
            raise MatrixFileError(f"[{where}]: bad entry in {line!r}") from None
    flush()
    return mats


def _space(sections, name):
    lines = [ln for ln in sections[name] if ln]
    if len(lines) == 1 and lines[0].split()[0] in ("matrices", "column"):
        words = lines[0].split()
        try:
            args = [int(w) for w in words[1:]]
            if words[0] == "column":
                return ConcreteOpSpace.column(*args)
            return ConcreteOpSpace.matrices(*args)
        except (TypeError, ValueError) as exc:
            raise MatrixFileError(f"[{name}]: {exc}") from None
    mats = _matrices(sections[name], name)
    if not mats or len({m.shape for m in mats}) != 1:
        raise MatrixFileError(f"[{name}]: need one or more matrices of equal shape")
    try:
        return ConcreteOpSpace(np.array(mats))
    except ValueError as exc:
        raise MatrixFileError(f"[{name}]: {exc}") from None


def _require(sections, *names):
    for name in names:
        if name not in sections:
            raise MatrixFileError(f"missing section [{name}]")


def _coords(space, mat, where):
    try:
        return space.coordinates(mat)
    except ValueError as exc:
        raise MatrixFileError(f"[{where}]: {exc}") from None


def parse_map(text):
    sections = parse_sections(text)
    _require(sections, "domain", "images")
    domain = _space(sections, "domain")
    codomain = _space(sections, "codomain") if "codomain" in sections else domain
    images = _matrices(sections["images"], "images")
    if len(images) != domain.dim:
        raise MatrixFileError(f"[images]: expected {domain.dim} matrices, got {len(images)}")
    cols = [_coords(codomain, m, "images") for m in images]
    return CbLinearMap(domain, codomain, np.array(cols).T)


def parse_tensor(text):
    """``(u, left, right)`` with ``u`` of shape ``(n, n, dim X, dim Y)``."""
    sections = parse_sections(text)
    _require(sections, "left", "right")
    left, right = _space(sections, "left"), _space(sections, "right")
    entries = {}
    for name in sections:
        words = name.split()
        if words[0] != "terms":
            continue
        try:
            idx = (0, 0) if len(words) == 1 else (int(words[1]), int(words[2]))
        except (IndexError, ValueError):
            raise MatrixFileError(f"bad section name [{name}]") from None
        if len(words) > 3 or min(idx) < 0:
            raise MatrixFileError(f"bad section name [{name}]")
        if idx in entries:
            raise MatrixFileError(f"entry {idx} given twice")
        entries[idx] = (name, _matrices(sections[name], name))
    if not entries:
        raise MatrixFileError("missing section [terms]")
    n = 1 + max(max(i, j) for i, j in entries)
    u = np.zeros((n, n, left.dim, right.dim), dtype=complex)
    for (i, j), (name, mats) in entries.items():
        if len(mats) % 2:
            raise MatrixFileError(f"[{name}]: terms come in x, y pairs")
        for xm, ym in zip(mats[::2], mats[1::2]):
            u[i, j] += np.outer(_coords(left, xm, name), _coords(right, ym, name))
    return u, left, right


def read_map(path):
    with open(path) as fh:
        return parse_map(fh.read())


def read_tensor(path):
    with open(path) as fh:
        return parse_tensor(fh.read())
