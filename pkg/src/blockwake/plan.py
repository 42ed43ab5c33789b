"""Search-structure names, block expansion on a circular arrangement, and
recombination schedules.

A structure name such as ``B5-O2`` describes active blocks of 5 positions that
overlap their successor by 2; ``B6,8,6-O5`` cycles through several block
sizes; a leading ``T-`` truncates the cycle by dropping its closing block.
Positions live on a circular list, so a block running past the tail re-enters
from the head.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    NonTerminatingStructureError,
    PlanError,
    StructureParseError,
    StructureValidationError,
)

FORWARD = "forward"
REVERSE = "reverse"
RECOMBINATION_KINDS = ("none", "A", "B")

# Offset tables for ten-position rings: the first varying element of each
# sweep cycle, per recombination type.  Reused periodically past ten cycles.
_RING10_OFFSETS = {
    "A": (0, 9, 5, 4, 7, 6, 2, 1, 3, 8),
    "B": (0, 5, 7, 2, 9, 4, 8, 3, 6, 1),
}


@dataclass(frozen=True)
class StructureSpec:
    """Parsed structure name: block sizes and overlaps, cycled during expansion."""

    sizes: tuple[int, ...]
    overlaps: tuple[int, ...]
    truncated: bool = False

    def __post_init__(self):
        if not self.sizes or not self.overlaps:
            raise StructureValidationError("sizes and overlaps must be non-empty")
        if any(s < 1 for s in self.sizes):
            raise StructureValidationError(f"every block size must be >= 1: {self.sizes}")
        if any(o < 0 for o in self.overlaps):
            raise StructureValidationError(f"overlaps cannot be negative: {self.overlaps}")
        biggest = max(self.sizes)
        for o in self.overlaps:
            if o >= biggest:
                raise StructureValidationError(
                    f"overlap {o} is not smaller than any block size in {self.sizes}"
                )


@dataclass(frozen=True)
class Block:
    """Positions (indices into the run's parameter ordering) varied together."""

    members: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.members)) != len(self.members):
            raise PlanError(f"block members must be distinct: {self.members}")

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Cycle:
    start_offset: int
    verse: str
    blocks: tuple[Block, ...]


@dataclass(frozen=True)
class SweepPlan:
    """A structure expanded over a recombination schedule into concrete blocks."""

    name: str
    structure: StructureSpec
    m: int
    cycles: tuple[Cycle, ...]
    recombination: str
    canonical_offsets: bool = True

    @property
    def blocks(self) -> list[Block]:
        return [b for cyc in self.cycles for b in cyc.blocks]

    @property
    def n_blocks(self) -> int:
        return sum(len(cyc.blocks) for cyc in self.cycles)

    @property
    def label(self) -> str:
        return f"{self.name}_c{len(self.cycles)}_{self.recombination}"


def parse_structure_name(name: str) -> StructureSpec:
    """Parse ``["T-"] "B" int ("," int)* "-O" int ("," int)*``."""
    text = name
    pos = 0

    def fail(msg: str):
        raise StructureParseError(msg, text, pos)

    def scan_int() -> int:
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if pos == start:
            fail("expected an integer")
        return int(text[start:pos])

    def scan_int_list() -> tuple[int, ...]:
        nonlocal pos
        out = [scan_int()]
        while pos < len(text) and text[pos] == ",":
            pos += 1
            out.append(scan_int())
        return tuple(out)

    truncated = False
    if text.startswith("T-"):
        truncated = True
        pos = 2
    if pos >= len(text) or text[pos] != "B":
        fail("expected 'B'")
    pos += 1
    sizes = scan_int_list()
    if not text.startswith("-O", pos):
        fail("expected '-O'")
    pos += 2
    overlaps = scan_int_list()
    if pos != len(text):
        fail("unexpected trailing text")
    return StructureSpec(sizes=sizes, overlaps=overlaps, truncated=truncated)


def render_structure_name(spec: StructureSpec) -> str:
    """Inverse of :func:`parse_structure_name` (canonical form)."""
    prefix = "T-" if spec.truncated else ""
    sizes = ",".join(str(s) for s in spec.sizes)
    overlaps = ",".join(str(o) for o in spec.overlaps)
    return f"{prefix}B{sizes}-O{overlaps}"


def expand_cycle(
    spec: StructureSpec,
    m: int,
    start_offset: int = 0,
    verse: str = FORWARD,
) -> list[Block]:
    """Expand one sweep cycle into concrete blocks.

    Blocks start at ``start_offset`` and each advances by (size - overlap)
    positions in the given verse, wrapping circularly.  The cycle is the
    minimal block prefix in which every position has appeared at least once;
    a truncated structure then drops the final block of that prefix.
    """
    if verse not in (FORWARD, REVERSE):
        raise PlanError(f"unknown verse {verse!r}")
    if m < max(spec.sizes):
        raise PlanError(
            f"arrangement of {m} positions is smaller than block size {max(spec.sizes)}"
        )
    direction = 1 if verse == FORWARD else -1
    start = start_offset % m
    blocks: list[Block] = []
    covered: set[int] = set()
    j = 0
    while True:
        size = spec.sizes[j % len(spec.sizes)]
        members = tuple(sorted((start + direction * t) % m for t in range(size)))
        blocks.append(Block(members))
        covered.update(members)
        if len(covered) == m:
            break
        overlap = spec.overlaps[j % len(spec.overlaps)]
        next_size = spec.sizes[(j + 1) % len(spec.sizes)]
        if overlap >= size or overlap >= next_size:
            raise StructureValidationError(
                f"overlap {overlap} not smaller than adjacent block sizes "
                f"({size}, {next_size})"
            )
        step = size - overlap
        if step <= 0:
            raise NonTerminatingStructureError(
                f"advance step {step} cannot complete coverage"
            )
        if len(blocks) > m:
            # each accepted step is >= 1, so coverage grows every block
            raise NonTerminatingStructureError(
                f"no coverage after {len(blocks)} blocks on {m} positions"
            )
        start = (start + direction * step) % m
        j += 1
    if spec.truncated:
        blocks = blocks[:-1]
        if not blocks:
            raise PlanError(
                "truncation removed the only block of the cycle; "
                "structure is empty"
            )
    return blocks


def _greedy_gap_offsets(m: int, n_cycles: int) -> list[int]:
    """Farthest-unvisited-midpoint offsets for rings other than ten positions.

    Greedy rule: keep the set of offsets already used; the next offset is the
    lower midpoint of the interior of the largest circular gap between used
    offsets (first such gap in ascending order on ties).  Once all positions
    are used the list repeats.  This is a best-effort reading, not the exact
    built-in ten-position tables.
    """
    if m == 1:
        return [0] * n_cycles
    used = [0]
    while len(used) < min(m, n_cycles):
        ordered = sorted(used)
        best_len = -1
        best_mid = 0
        for i, u in enumerate(ordered):
            nxt = ordered[(i + 1) % len(ordered)]
            gap_len = (nxt - u - 1) % m
            if gap_len > best_len:
                best_len = gap_len
                best_mid = (u + 1 + (gap_len - 1) // 2) % m
        if best_len <= 0:
            break
        used.append(best_mid)
    return [used[i % len(used)] for i in range(n_cycles)]


def build_recombination_schedule(
    kind: str, m: int, n_cycles: int
) -> list[tuple[int, str]]:
    """Per-cycle (start_offset, verse) pairs.

    ``none`` repeats (0, forward).  Kinds ``A`` and ``B`` alternate the
    traversal verse starting forward and pick cycle start offsets: exact
    built-in tables for ten-position rings, the greedy farthest-midpoint rule
    otherwise (see :func:`is_canonical_schedule`).
    """
    if kind not in RECOMBINATION_KINDS:
        raise PlanError(f"unknown recombination kind {kind!r}")
    if n_cycles < 1:
        raise PlanError("a plan needs at least one cycle")
    if kind == "none":
        return [(0, FORWARD)] * n_cycles
    if m == 10:
        table = _RING10_OFFSETS[kind]
        offsets = [table[i % len(table)] for i in range(n_cycles)]
    else:
        offsets = _greedy_gap_offsets(m, n_cycles)
    return [
        (off, FORWARD if i % 2 == 0 else REVERSE) for i, off in enumerate(offsets)
    ]


def is_canonical_schedule(kind: str, m: int) -> bool:
    """True when the offsets come from a built-in table rather than the
    generic heuristic."""
    return kind == "none" or m == 10


def assemble_plan(
    spec_or_name: StructureSpec | str,
    m: int,
    n_cycles: int = 1,
    kind: str = "none",
) -> SweepPlan:
    """Compose cycle expansion over a recombination schedule."""
    if isinstance(spec_or_name, str):
        spec = parse_structure_name(spec_or_name)
    else:
        spec = spec_or_name
    schedule = build_recombination_schedule(kind, m, n_cycles)
    cycles = []
    for offset, verse in schedule:
        blocks = expand_cycle(spec, m, start_offset=offset, verse=verse)
        cycles.append(Cycle(start_offset=offset, verse=verse, blocks=tuple(blocks)))
    return SweepPlan(
        name=render_structure_name(spec),
        structure=spec,
        m=m,
        cycles=tuple(cycles),
        recombination=kind,
        canonical_offsets=is_canonical_schedule(kind, m),
    )


def plan_to_dict(plan: SweepPlan) -> dict:
    """JSON-ready view: {name, m, cycles:[{offset, verse, blocks:[[int]]}]}."""
    return {
        "name": plan.name,
        "m": plan.m,
        "cycles": [
            {
                "offset": cyc.start_offset,
                "verse": cyc.verse,
                "blocks": [list(b.members) for b in cyc.blocks],
            }
            for cyc in plan.cycles
        ],
    }
