"""Splitting-type combinatorics for normal bundles of lines.

A splitting type for ambient dimension n and hypersurface degree d is a
weakly increasing integer vector (a_1, ..., a_{n-2}) with every entry at
most 1 and entry sum n - d - 1. The expected codimension of the stratum
with that type, the twisted section counts, the specialization partial
order and its Hasse diagram all live here; everything is pure
combinatorics on immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

from .errors import DomainError


@dataclass(frozen=True)
class SplittingType:
    entries: tuple
    n: int
    d: int

    def __post_init__(self):
        e = tuple(self.entries)
        object.__setattr__(self, "entries", e)
        if self.n < 3:
            raise DomainError("ambient dimension must be at least 3")
        if self.d < 1:
            raise DomainError("degree must be at least 1")
        if len(e) != self.n - 2:
            raise DomainError(f"type must have {self.n - 2} entries, got {len(e)}")
        if any(a > b for a, b in zip(e, e[1:])):
            raise DomainError(f"entries {e} are not weakly increasing")
        if e and e[-1] > 1:
            raise DomainError("entries must be at most 1")
        if e and e[0] < 2 - self.d:
            raise DomainError(f"entries must be at least {2 - self.d}")
        if sum(e) != self.n - self.d - 1:
            raise DomainError(
                f"entries must sum to {self.n - self.d - 1}, got {sum(e)}")

    @property
    def expected_codim(self) -> int:
        """h^1 of the endomorphism bundle: sum of max(a_j - a_i - 1, 0)."""
        e = self.entries
        return sum(max(e[j] - e[i] - 1, 0)
                   for i in range(len(e)) for j in range(i + 1, len(e)))

    @property
    def is_balanced(self) -> bool:
        return not self.entries or self.entries[-1] - self.entries[0] <= 1

    def twisted_sections(self, i: int) -> int:
        """h^0 of the bundle twisted by i: sum of max(0, a_j + i + 1)."""
        if i < -1:
            raise DomainError("twist must be at least -1")
        return sum(max(0, a + i + 1) for a in self.entries)

    def expected_rank(self, i: int) -> int:
        return (i + 2) * (self.n - 1) - self.twisted_sections(i)

    def partial_sums(self):
        return tuple(accumulate(self.entries))

    def specializes_to(self, other: "SplittingType") -> bool:
        """Whether self lies in the closure of other (self <= other)."""
        if (self.n, self.d) != (other.n, other.d):
            raise DomainError("types live on different (n, d)")
        return all(s <= o for s, o in zip(self.partial_sums(), other.partial_sums()))

    def __le__(self, other):
        return self.specializes_to(other)

    def __lt__(self, other):
        return self != other and self.specializes_to(other)

    def __ge__(self, other):
        return other.specializes_to(self)

    def __gt__(self, other):
        return self != other and other.specializes_to(self)

    def label(self) -> str:
        return "(" + ",".join(str(a) for a in self.entries) + ")"

    def to_json(self):
        return {"entries": list(self.entries), "n": self.n, "d": self.d,
                "u": self.expected_codim}

    def __repr__(self):
        return f"SplittingType({self.label()}, n={self.n}, d={self.d})"


def parse_type(text: str, n: int, d: int) -> SplittingType:
    text = text.strip().lstrip("(").rstrip(")")
    entries = tuple(int(t) for t in text.split(",") if t.strip() != "")
    return SplittingType(entries, n, d)


def enumerate_types(n: int, d: int):
    """All admissible splitting types for (n, d), most generic first.

    Sorted by descending partial-sum vectors, the natural linear extension
    of the specialization order: the balanced type comes first and every
    type precedes the types it specializes to... more precisely follows
    everything whose closure contains it.
    """
    if n < 3:
        raise DomainError("ambient dimension must be at least 3")
    if d < 1:
        raise DomainError("degree must be at least 1")
    length = n - 2
    total = n - d - 1
    lo = 2 - d
    out = []

    def rec(prefix, remaining, minimum):
        slots = length - len(prefix)
        if slots == 0:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        for a in range(max(minimum, remaining - (slots - 1) * 1), min(1, remaining - (slots - 1) * lo) + 1):
            prefix.append(a)
            rec(prefix, remaining - a, a)
            prefix.pop()

    rec([], total, lo)
    types = [SplittingType(e, n, d) for e in out]
    types.sort(key=lambda t: t.partial_sums(), reverse=True)
    return types


@dataclass(frozen=True)
class StratumExpectation:
    codim: int
    exp_dim: int
    generically_empty: bool
    dim_bound_all_smooth: int | None
    bound_shape: str | None

    def to_json(self):
        return {"codim": self.codim, "exp_dim": self.exp_dim,
                "generically_empty": self.generically_empty,
                "dim_bound_all_smooth": self.dim_bound_all_smooth,
                "bound_shape": self.bound_shape}


def expected_dimension(t: SplittingType) -> StratumExpectation:
    """Expected codimension and dimension, plus the unconditional bounds.

    Two special shapes carry dimension bounds valid for every smooth
    hypersurface: the most unbalanced type (2-d, 1, ..., 1) is bounded by
    n-3 for d >= 3, and types with exactly two non-one entries, both
    nonpositive, are bounded by n-1 for d >= 4.
    """
    u = t.expected_codim
    ambient = 2 * t.n - t.d - 3
    e = t.entries
    bound = None
    shape = None
    if t.d >= 3 and e == (2 - t.d,) + (1,) * (t.n - 3):
        bound, shape = t.n - 3, "most-unbalanced"
    elif (t.d >= 4 and len(e) >= 2 and e[2:] == (1,) * (t.n - 4)
          and e[0] <= 0 and e[1] <= 0):
        bound, shape = t.n - 1, "two-nonpositive"
    return StratumExpectation(
        codim=u,
        exp_dim=ambient - u,
        generically_empty=u > ambient,
        dim_bound_all_smooth=bound,
        bound_shape=shape,
    )


@dataclass(frozen=True)
class StrataPoset:
    nodes: tuple          # SplittingType, in linear-extension order
    covers: tuple         # (lower, upper) pairs, transitive reduction
    codims: tuple         # expected codimension per node

    def covers_of(self, t: SplittingType):
        """Types covered by t, i.e. lower ends of cover pairs into t."""
        return [lo for lo, up in self.covers if up == t]

    def to_json(self):
        return {
            "nodes": [t.to_json() for t in self.nodes],
            "covers": [[lo.label(), up.label()] for lo, up in self.covers],
        }


def poset(n: int, d: int) -> StrataPoset:
    """Specialization poset with covering relations.

    The transitive reduction is computed by the direct double loop; type
    sets are tiny so no better asymptotics are needed.
    """
    nodes = enumerate_types(n, d)
    less = {}
    for a in nodes:
        less[a] = {b for b in nodes if a != b and a.specializes_to(b)}
    covers = []
    for a in nodes:
        for b in less[a]:
            if not any(b in less[z] for z in less[a] if z != b):
                covers.append((a, b))
    covers.sort(key=lambda p: (p[0].partial_sums(), p[1].partial_sums()), reverse=True)
    return StrataPoset(
        nodes=tuple(nodes),
        covers=tuple(covers),
        codims=tuple(t.expected_codim for t in nodes),
    )


def hasse_dot(p: StrataPoset) -> str:
    """DOT rendering: one node per type labeled with its codimension,
    one arrow per covering relation pointing toward the more generic type."""
    lines = ["digraph strata {"]
    for t in p.nodes:
        lines.append(f'  "{t.label()}" [label="{t.label()} | u={t.expected_codim}"];')
    for lo, up in p.covers:
        lines.append(f'  "{lo.label()}" -> "{up.label()}";')
    lines.append("}")
    return "\n".join(lines)
