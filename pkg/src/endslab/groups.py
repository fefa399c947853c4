"""Exact element algebra for the built-in finitely generated group families.

Every family exposes the same oracle interface: identity, multiply, invert and
an injective canonical key. Elements are plain hashable Python values whose
shape is family specific; all arithmetic lands back in canonical form, so two
equal group elements always compare and hash equal. Word length is never
stored on elements: distances come exclusively from breadth-first exploration.

Canonical element forms:

* ``trivial``          -- the integer 0
* ``cyclic_finite(m)`` -- residue in ``range(m)``
* ``z``                -- plain integer
* ``z_pow(k)``         -- tuple of ``k`` integers
* ``free(k)``          -- freely reduced tuple of nonzero letters, letter
                          ``+i``/``-i`` meaning the i-th generator / inverse
* ``dihedral_inf``     -- pair ``(p, f)`` for the normal form ``(st)^p s^f``
* ``z_cross_cyclic(m)``-- pair ``(n, c)`` with ``c`` a residue mod m
* ``lamplighter(m)``   -- triple ``(cursor, base, mask)``: the lamp map sends
                          ``base + i`` to digit i of ``mask`` written base m,
                          with the lowest digit nonzero (``(c, 0, 0)`` when no
                          lamp is lit)
* ``product``          -- pair of factor elements
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable, Optional

from .errors import InvalidParameter

Element = Any

FAMILIES = (
    "trivial",
    "cyclic_finite",
    "z",
    "z_pow",
    "free",
    "dihedral_inf",
    "z_cross_cyclic",
    "lamplighter",
    "product",
)

# Nested products beyond this depth blow up element size without adding
# interesting test geometry.
MAX_PRODUCT_DEPTH = 3


@dataclass(frozen=True)
class GroupSpec:
    """Declarative description of one group family instance."""

    family: str
    m: Optional[int] = None
    k: Optional[int] = None
    left: Optional["GroupSpec"] = None
    right: Optional["GroupSpec"] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameter(f"unknown family {self.family!r}")
        if self.family in ("cyclic_finite", "lamplighter"):
            if not _is_int(self.m) or self.m < 2:
                raise InvalidParameter(f"{self.family} requires integer m >= 2, got {self.m!r}")
        elif self.family == "z_cross_cyclic":
            if not _is_int(self.m) or self.m < 2:
                raise InvalidParameter(f"z_cross_cyclic requires integer m >= 2, got {self.m!r}")
        elif self.family in ("z_pow", "free"):
            if not _is_int(self.k) or self.k < 1:
                raise InvalidParameter(f"{self.family} requires integer k >= 1, got {self.k!r}")
        elif self.family == "product":
            if not isinstance(self.left, GroupSpec) or not isinstance(self.right, GroupSpec):
                raise InvalidParameter("product requires left and right sub-specs")
            if self.depth() > MAX_PRODUCT_DEPTH:
                raise InvalidParameter(f"product nesting depth > {MAX_PRODUCT_DEPTH}")

    def depth(self) -> int:
        if self.family != "product":
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def label(self) -> str:
        if self.family == "cyclic_finite":
            return f"cyclic_finite({self.m})"
        if self.family == "z_pow":
            return f"z_pow({self.k})"
        if self.family == "free":
            return f"free({self.k})"
        if self.family == "z_cross_cyclic":
            return f"z_cross_cyclic({self.m})"
        if self.family == "lamplighter":
            return f"lamplighter({self.m})"
        if self.family == "product":
            return f"product({self.left.label()}, {self.right.label()})"
        return self.family

    def to_dict(self) -> dict:
        d: dict = {"family": self.family}
        if self.m is not None:
            d["m"] = self.m
        if self.k is not None:
            d["k"] = self.k
        if self.family == "product":
            d["left"] = self.left.to_dict()
            d["right"] = self.right.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GroupSpec":
        if not isinstance(d, dict) or "family" not in d:
            raise InvalidParameter(f"group spec must be an object with a 'family' key, got {d!r}")
        family = d["family"]
        if family == "product":
            return cls(
                family,
                left=cls.from_dict(d.get("left")),
                right=cls.from_dict(d.get("right")),
            )
        return cls(family, m=d.get("m"), k=d.get("k"))


def parse_group_spec(text_or_dict) -> GroupSpec:
    """Parse a spec from a JSON string or an already-decoded dict."""
    if isinstance(text_or_dict, GroupSpec):
        return text_or_dict
    if isinstance(text_or_dict, str):
        try:
            decoded = json.loads(text_or_dict)
        except json.JSONDecodeError as exc:
            raise InvalidParameter(f"invalid group spec JSON: {exc}") from exc
        return GroupSpec.from_dict(decoded)
    return GroupSpec.from_dict(text_or_dict)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


class GroupOracle:
    """Uniform interface over one group family.

    Oracles are immutable after construction and all operations are pure, so a
    single oracle can be shared freely between threads and cached tables.
    """

    spec: GroupSpec
    generators: tuple          # inversion closed, identity excluded
    axis_word: Optional[tuple] # generator sequence spelling a geodesic axis

    #: None for infinite groups, the group order otherwise.
    order: Optional[int] = None

    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def invert(self, g: Element) -> Element:
        raise NotImplementedError

    def key_str(self, g: Element) -> str:
        """Injective, deterministic ASCII form of a canonical element."""
        raise NotImplementedError

    def canonical_key(self, g: Element) -> bytes:
        return self.key_str(g).encode("ascii")

    def element_packer(self, radius: int) -> Optional[Callable[[Element], int]]:
        """Optional injective element -> int encoding, valid inside the ball
        of the given radius. Used to shrink visited sets during exploration."""
        return None

    def lattice_steps(self, radius: int):
        """For pure translation lattices: ``(packed identity, neighbor deltas)``
        so exploration can run on packed integers alone. None otherwise."""
        return None

    def label(self) -> str:
        return self.spec.label()

    def __repr__(self):
        return f"<GroupOracle {self.label()}>"


class _TrivialOracle(GroupOracle):
    order = 1

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.generators = ()
        self.axis_word = None

    def identity(self):
        return 0

    def multiply(self, g, h):
        return 0

    def invert(self, g):
        return 0

    def key_str(self, g):
        return "e"


class _CyclicOracle(GroupOracle):
    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.m = spec.m
        self.order = spec.m
        self.generators = tuple(dict.fromkeys((1 % self.m, (-1) % self.m)))
        self.axis_word = None

    def identity(self):
        return 0

    def multiply(self, g, h):
        return (g + h) % self.m

    def invert(self, g):
        return (-g) % self.m

    def key_str(self, g):
        return str(g)

    def element_packer(self, radius):
        return lambda g: g


class _ZOracle(GroupOracle):
    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.generators = (1, -1)
        self.axis_word = (1,)

    def identity(self):
        return 0

    def multiply(self, g, h):
        return g + h

    def invert(self, g):
        return -g

    def key_str(self, g):
        return str(g)

    def element_packer(self, radius):
        return lambda g: g

    def lattice_steps(self, radius):
        return 0, (1, -1)


class _ZPowOracle(GroupOracle):
    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.k = spec.k
        gens = []
        for i in range(self.k):
            e = [0] * self.k
            e[i] = 1
            gens.append(tuple(e))
            e[i] = -1
            gens.append(tuple(e))
        self.generators = tuple(gens)
        self.axis_word = (self.generators[0],)

    def identity(self):
        return (0,) * self.k

    def multiply(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def invert(self, g):
        return tuple(-a for a in g)

    def key_str(self, g):
        return ",".join(str(a) for a in g)

    def element_packer(self, radius):
        base = 2 * radius + 3
        off = radius + 1
        k = self.k

        def pack(g, base=base, off=off, k=k):
            v = 0
            for a in g:
                v = v * base + (a + off)
            return v

        return pack

    def lattice_steps(self, radius):
        base = 2 * radius + 3
        off = radius + 1
        ident = 0
        for _ in range(self.k):
            ident = ident * base + off
        deltas = []
        for i in range(self.k):  # same order as self.generators
            weight = base ** (self.k - 1 - i)
            deltas.append(weight)
            deltas.append(-weight)
        return ident, tuple(deltas)


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class _FreeOracle(GroupOracle):
    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.k = spec.k
        gens = []
        for i in range(1, self.k + 1):
            gens.append((i,))
            gens.append((-i,))
        self.generators = tuple(gens)
        self.axis_word = ((1,),)

    def identity(self):
        return ()

    def multiply(self, g, h):
        w = list(g)
        for letter in h:
            if w and w[-1] == -letter:
                w.pop()
            else:
                w.append(letter)
        return tuple(w)

    def invert(self, g):
        return tuple(-a for a in reversed(g))

    def key_str(self, g):
        if not g:
            return "e"
        if self.k <= 26:
            return "".join(
                _LETTERS[a - 1] if a > 0 else _LETTERS[-a - 1].upper() for a in g
            )
        return ".".join(str(a) for a in g)


class _DihedralOracle(GroupOracle):
    """Infinite dihedral group on two involutions s, t.

    Element (p, f) stands for (st)^p s^f; with r = st the usual relations
    give (p1,f1)(p2,f2) = (p1 + (-1)^f1 p2, f1 xor f2).
    """

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.generators = ((0, 1), (-1, 1))  # s, t
        self.axis_word = ((0, 1), (-1, 1))   # alternating word st

    def identity(self):
        return (0, 0)

    def multiply(self, g, h):
        p1, f1 = g
        p2, f2 = h
        return (p1 - p2 if f1 else p1 + p2, f1 ^ f2)

    def invert(self, g):
        p, f = g
        return (p, 1) if f else (-p, 0)

    def key_str(self, g):
        p, f = g
        return f"{p}s" if f else str(p)

    def element_packer(self, radius):
        return lambda g: 2 * g[0] + g[1]


class _ZCrossCyclicOracle(GroupOracle):
    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.m = spec.m
        self.generators = tuple(
            dict.fromkeys(((1, 0), (-1, 0), (0, 1 % self.m), (0, (-1) % self.m)))
        )
        self.axis_word = ((1, 0),)

    def identity(self):
        return (0, 0)

    def multiply(self, g, h):
        return (g[0] + h[0], (g[1] + h[1]) % self.m)

    def invert(self, g):
        return (-g[0], (-g[1]) % self.m)

    def key_str(self, g):
        return f"{g[0]},{g[1]}"

    def element_packer(self, radius):
        m = self.m
        return lambda g: g[0] * m + g[1]


class _LamplighterOracle(GroupOracle):
    """Wreath product (Z/m) wr Z with cursor shift t and lamp increment a.

    The lamp map is stored as (cursor, base, mask): digit i of mask, written
    base m, is the lamp value at position base + i, and the lowest digit is
    nonzero. Multiplication follows the wreath rule: the right factor's lamps
    are shifted by the left factor's cursor before adding pointwise mod m.
    """

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.m = spec.m
        a_inv = (0, 0, self.m - 1)
        self.generators = tuple(dict.fromkeys(((1, 0, 0), (-1, 0, 0), (0, 0, 1), a_inv)))
        self.axis_word = ((1, 0, 0),)

    def identity(self):
        return (0, 0, 0)

    def _normalize(self, base: int, mask: int):
        if mask == 0:
            return 0, 0
        m = self.m
        if m == 2:
            shift = (mask & -mask).bit_length() - 1
            if shift:
                return base + shift, mask >> shift
            return base, mask
        while mask % m == 0:
            mask //= m
            base += 1
        return base, mask

    def _add_masks(self, m1: int, m2: int) -> int:
        m = self.m
        if m == 2:
            return m1 ^ m2
        out = 0
        mult = 1
        while m1 or m2:
            out += ((m1 % m + m2 % m) % m) * mult
            mult *= m
            m1 //= m
            m2 //= m
        return out

    def multiply(self, g, h):
        c1, b1, k1 = g
        c2, b2, k2 = h
        cursor = c1 + c2
        if k2 == 0:
            return (cursor, b1, k1)
        nb2 = b2 + c1
        if k1 == 0:
            return (cursor, nb2, k2)
        base = b1 if b1 < nb2 else nb2
        m = self.m
        if m == 2:
            merged = (k1 << (b1 - base)) ^ (k2 << (nb2 - base))
        else:
            merged = self._add_masks(k1 * m ** (b1 - base), k2 * m ** (nb2 - base))
        base, merged = self._normalize(base, merged)
        return (cursor, base, merged)

    def invert(self, g):
        c, b, mask = g
        if mask == 0:
            return (-c, 0, 0)
        m = self.m
        if m != 2:
            out = 0
            mult = 1
            rest = mask
            while rest:
                out += ((-rest % m) % m) * mult
                mult *= m
                rest //= m
            mask = out
        return (-c, b - c, mask)

    def key_str(self, g):
        c, b, mask = g
        return f"{c};{b};{mask:x}"

    def element_packer(self, radius):
        span = 2 * radius + 3
        off = radius + 1

        def pack(g, span=span, off=off):
            c, b, mask = g
            return (mask * span + (b + off)) * span + (c + off)

        return pack


class _ProductOracle(GroupOracle):
    def __init__(self, spec: GroupSpec, left: GroupOracle, right: GroupOracle):
        self.spec = spec
        self.left = left
        self.right = right
        el, er = left.identity(), right.identity()
        gens = [(g, er) for g in left.generators]
        gens += [(el, h) for h in right.generators]
        self.generators = tuple(gens)
        self.axis_word = None
        if left.order is not None and right.order is not None:
            self.order = left.order * right.order

    def identity(self):
        return (self.left.identity(), self.right.identity())

    def multiply(self, g, h):
        return (self.left.multiply(g[0], h[0]), self.right.multiply(g[1], h[1]))

    def invert(self, g):
        return (self.left.invert(g[0]), self.right.invert(g[1]))

    def key_str(self, g):
        return f"({self.left.key_str(g[0])})x({self.right.key_str(g[1])})"


_ORACLES = {
    "trivial": _TrivialOracle,
    "cyclic_finite": _CyclicOracle,
    "z": _ZOracle,
    "z_pow": _ZPowOracle,
    "free": _FreeOracle,
    "dihedral_inf": _DihedralOracle,
    "z_cross_cyclic": _ZCrossCyclicOracle,
    "lamplighter": _LamplighterOracle,
}


def make_group(spec) -> GroupOracle:
    """Build the oracle for a spec, with the standard generating sets.

    All numeric output of the toolkit (sphere sizes, depth values, ends
    counts) is relative to these fixed generating sets; reports record them.
    """
    spec = parse_group_spec(spec)
    if spec.family == "product":
        return _ProductOracle(spec, make_group(spec.left), make_group(spec.right))
    return _ORACLES[spec.family](spec)


def generator_words(oracle: GroupOracle) -> list[str]:
    """Key strings of the generators, in their fixed order (for reports)."""
    return [oracle.key_str(g) for g in oracle.generators]


def random_element(oracle: GroupOracle, rng, max_letters: int = 8) -> Element:
    """Product of up to ``max_letters`` random generators (tests and spot checks)."""
    g = oracle.identity()
    if not oracle.generators:
        return g
    for _ in range(rng.randrange(max_letters + 1)):
        g = oracle.multiply(g, rng.choice(oracle.generators))
    return g
