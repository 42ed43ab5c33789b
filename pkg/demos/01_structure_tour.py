"""Tour of search-structure names, block expansion, and recombination.

A structure name compactly describes how a circular arrangement of parameter
positions is carved into overlapping active blocks:

    B5-O2      blocks of 5 positions, each overlapping the next by 2
    B6,8,6-O5  block sizes cycle 6, 8, 6; every overlap is 5
    B4-O3,1,3  blocks of 4; overlaps cycle 3, 1, 3
    T-B4-O1    like B4-O1 but the cycle's closing block is dropped

Run:  python3 demos/01_structure_tour.py
"""

from blockwake import (
    assemble_plan,
    build_recombination_schedule,
    expand_cycle,
    parse_structure_name,
    render_structure_name,
)

M = 10


def diagram(members, m=M):
    return "".join("#" if i in members else "." for i in range(m))


def show(name):
    spec = parse_structure_name(name)
    blocks = expand_cycle(spec, M)
    print(f"{name:12s} sizes={list(spec.sizes)} overlaps={list(spec.overlaps)}"
          f"{'  (truncated)' if spec.truncated else ''}")
    for b in blocks:
        print(f"    {diagram(b.members)}")


print("=== one cycle of a few structures on a 10-position ring ===")
for name in ["B5-O0", "B5-O4", "B2-O1", "B6,8,6-O5", "T-B5-O3"]:
    show(name)
    print()

print("=== parse / render round-trip ===")
for name in ["B7-O6", "B4-O3,1,3", "T-B3-O1"]:
    spec = parse_structure_name(name)
    print(f"  {name}  ->  {spec}  ->  {render_structure_name(spec)}")
print()

print("=== recombination schedules (offset, verse) per cycle ===")
for kind in ["none", "A", "B"]:
    schedule = build_recombination_schedule(kind, M, 10)
    offsets = [o for o, _ in schedule]
    verses = "".join(v[0].upper() for _, v in schedule)
    print(f"  kind {kind:4s}: offsets {offsets}  verses {verses}")
print()

print("=== the same structure, recombined: block boundaries drift ===")
plan = assemble_plan("B5-O0", M, 4, "B")
for ci, cycle in enumerate(plan.cycles, start=1):
    print(f"  cycle {ci} (offset {cycle.start_offset}, {cycle.verse}):")
    for b in cycle.blocks:
        print(f"    {diagram(b.members)}")
