"""Column decomposition of the interface: blobs, defects, pairing, gluing.

A column is the full vertical preimage of one base-torus cell.  Interface
plaquettes are assigned to columns (vertical plaquettes go with the
frustrated cube they bound), their connected components within a column are
blobs, and vertical runs of frustrated cubes attached to the interface,
extended to pure end-cubes, are defects.  Problematic defects carry no
energy cost on their own and are glued in pairs by a slab rotation followed
by a slab reflection.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .interface import InterfaceData, cube_order_counts, extract_interface, plaquette_edges
from .lattice import SpinConfig, circular_distance, total_energy

BLOB_SIGNS = {"h-": -1, "h+": +1, "h-+": 0, "v": 0}


class GrammarError(RuntimeError):
    """A blob or defect sequence violates the structural rules."""

    def __init__(self, rule, detail=""):
        self.rule = rule
        super().__init__(f"{rule}: {detail}" if detail else rule)


class GluingError(RuntimeError):
    """The gluing transformation cannot be applied to this pair."""


@dataclass
class Blob:
    column: tuple
    plaquettes: tuple
    kind: str
    z_min: int
    z_max: int

    @property
    def sign(self) -> int:
        return BLOB_SIGNS[self.kind]


@dataclass
class DefectRecord:
    column: tuple
    z_lo: int                    # lowest cube of the extended defect
    z_hi: int                    # highest cube
    bottom_end: str              # "ordered" | "disordered" | "boundary"
    top_end: str
    h_planes: dict               # plane z -> 4-tuple of ordered flags
    v_levels: dict               # level z -> 4-tuple of ordered flags
    m: int                       # frustrated cube count
    blobs: list
    sign: int = 0
    sign_overflow: bool = False  # raw blob-sign sum left {-1, 0, 1}
    classification: str = ""
    end_types: dict = field(default_factory=dict)   # "b"/"t" -> (a,b,c,d) or None

    @property
    def n_cubes(self) -> int:
        return self.z_hi - self.z_lo + 1

    @property
    def slab(self) -> tuple:
        """Site slab [a, b] of the smallest slab containing the defect."""
        return self.z_lo, self.z_hi + 1


def _cell_corners(x, y, n):
    return ((x, y), ((x + 1) % n, y), ((x + 1) % n, (y + 1) % n), (x, (y + 1) % n))


def plane_plaquette_spins(config: SpinConfig, column, z):
    """Spins on the column's plaquette at plane z, in cyclic corner order."""
    x, y = column
    return tuple(int(config.spins[z, cx, cy])
                 for cx, cy in _cell_corners(x, y, config.spec.n))


def plaquette_type(spins, q: int):
    """(a,b,c,d) cyclic differences of an ordered plaquette, values in {-1,0,1}."""
    diffs = []
    for i in range(4):
        d = (spins[i] - spins[(i + 1) % 4]) % q
        if d == 0:
            diffs.append(0)
        elif d == 1:
            diffs.append(1)
        elif d == q - 1:
            diffs.append(-1)
        else:
            return None
    return tuple(diffs)


def dominant_value(spins, q: int) -> int:
    """A spin within circular distance 1 of all four plaquette spins."""
    for s in spins:
        if all(circular_distance(s, t, q) <= 1 for t in spins):
            return int(s)
    raise GrammarError("dominant-value", f"no dominant value for {spins}; plaquette not ordered")


def assign_to_columns(b: frozenset, config: SpinConfig, counts=None):
    """Partition interface plaquettes into columns.

    Returns (assignment, flagged): assignment maps cell -> sorted plaquette
    list; flagged lists vertical plaquettes where neither side matched the
    frustrated-vs-pure-disordered convention (geometric tie-break applied).
    """
    n = config.spec.n
    if counts is None:
        counts = cube_order_counts(config)
    l = config.spec.l

    def cube_state(x, y, z):
        if z < 0:
            return "pure-d"
        if z > l:
            return "pure-o"
        c = counts[z, x, y]
        return "pure-d" if c == 0 else ("pure-o" if c == 12 else "frustrated")

    assignment = {}
    flagged = []
    for p in sorted(b):
        kind, x, y, z = p
        if kind == "h":
            cell = (x, y)
        else:
            if kind == "yz":
                c1, c2 = ((x - 1) % n, y), (x, y)
            else:
                c1, c2 = (x, (y - 1) % n), (x, y)
            s1, s2 = cube_state(c1[0], c1[1], z), cube_state(c2[0], c2[1], z)
            if s1 == "frustrated" and s2 == "pure-d":
                cell = c1
            elif s2 == "frustrated" and s1 == "pure-d":
                cell = c2
            else:
                cell = min(c1, c2)
                flagged.append(p)
        assignment.setdefault(cell, []).append(p)
    for cell in assignment:
        assignment[cell].sort(key=lambda p: (p[3], p[0], p[1], p[2]))
    return assignment, flagged


def _z_extent(p):
    kind, x, y, z = p
    return (z, z) if kind == "h" else (z, z + 1)


def blobs_and_signs(column, plaquettes, config: SpinConfig, counts=None) -> list[Blob]:
    """Connected components of the column's plaquettes, typed and validated."""
    n = config.spec.n
    l = config.spec.l
    if counts is None:
        counts = cube_order_counts(config)
    plaq = set(plaquettes)
    index = {}
    for p in plaq:
        for e in plaquette_edges(p, n):
            index.setdefault(e, []).append(p)
    comps = []
    seen = set()
    for start in sorted(plaq):
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for e in plaquette_edges(p, n):
                for q2 in index[e]:
                    if q2 not in seen:
                        seen.add(q2)
                        comp.add(q2)
                        queue.append(q2)
        comps.append(comp)

    blobs = []
    for comp in comps:
        extents = [_z_extent(p) for p in comp]
        z_min = min(e[0] for e in extents)
        z_max = max(e[1] for e in extents)
        horiz = sorted(p for p in comp if p[0] == "h")
        if not horiz:
            kind = "v"
        elif len(horiz) == 1:
            p = horiz[0]
            z = p[3]
            at_bottom, at_top = z == z_min, z == z_max
            if at_bottom and at_top:
                below = counts[z - 1, p[1], p[2]] if z - 1 >= 0 else 0
                above = counts[z, p[1], p[2]] if z <= l else 12
                if below == 0:
                    kind = "h-"
                elif above == 0:
                    kind = "h+"
                else:
                    raise GrammarError("single-plaquette-type",
                                       f"no pure disordered cube beside {p}")
            elif at_bottom:
                kind = "h-"
            elif at_top:
                kind = "h+"
            else:
                raise GrammarError("horizontal-not-extremal", str(p))
        elif len(horiz) == 2:
            zs = sorted(p[3] for p in horiz)
            if zs[0] != z_min or zs[1] != z_max:
                raise GrammarError("h-+-not-delimiting", str(sorted(comp)))
            kind = "h-+"
        else:
            raise GrammarError("too-many-horizontals", str(sorted(comp)))
        blobs.append(Blob(column, tuple(sorted(comp)), kind, z_min, z_max))

    blobs.sort(key=lambda b: (b.z_min, b.z_max))
    signed = [b for b in blobs if b.sign != 0]
    if not signed:
        raise GrammarError("no-signed-blob", f"column {column}")
    if signed[0].sign != -1:
        raise GrammarError("first-sign-not-minus", f"column {column}")
    if signed[-1].sign != -1:
        raise GrammarError("last-sign-not-minus", f"column {column}")
    for a, b2 in zip(signed, signed[1:]):
        if a.sign == b2.sign:
            raise GrammarError("signs-not-alternating", f"column {column}")
    for i, b2 in enumerate(blobs):
        if b2.kind == "v":
            nxt = next((x for x in blobs[i + 1:] if x.sign != 0), None)
            if nxt is not None and nxt.kind != "h+":
                raise GrammarError("v-not-followed-by-h+", f"column {column}")
    return blobs


def all_column_defects(config: SpinConfig, idata: InterfaceData = None):
    """Defect records for every column, sharing the interface extraction."""
    if idata is None:
        idata = extract_interface(config)
    counts = cube_order_counts(config)
    assignment, flagged = assign_to_columns(idata.interface, config, counts)
    records = {column: extract_and_extend_defects(config, column, idata, counts, assignment)
               for column in sorted(assignment)}
    return records, flagged


def extract_and_extend_defects(config: SpinConfig, column, idata: InterfaceData = None,
                               counts=None, assignment=None) -> list[DefectRecord]:
    """Defects of one column: frustrated runs attached to B, extended, merged."""
    if idata is None:
        idata = extract_interface(config)
    if counts is None:
        counts = cube_order_counts(config)
    spec = config.spec
    n, l, q = spec.n, spec.l, spec.q
    x, y = column

    def faces_of_cube(cx, cy, cz):
        return (("h", cx, cy, cz), ("h", cx, cy, cz + 1),
                ("xz", cx, cy, cz), ("xz", cx, (cy + 1) % n, cz),
                ("yz", cx, cy, cz), ("yz", (cx + 1) % n, cy, cz))

    attached = [z for z in range(l + 1)
                if idata.frustrated[z, x, y]
                and any(f in idata.interface for f in faces_of_cube(x, y, z))]
    runs = []
    for z in attached:
        if runs and z == runs[-1][1] + 1:
            runs[-1][1] = z
        else:
            runs.append([z, z])

    if assignment is None:
        assignment, _ = assign_to_columns(idata.interface, config, counts)
    blobs = blobs_and_signs(column, assignment.get(column, []), config, counts)

    extended = []
    for z0, z1 in runs:
        lo, hi = z0, z1
        while lo - 1 >= 0 and 0 < counts[lo - 1, x, y] < 12:
            lo -= 1
        bottom = "boundary" if (lo == 0 and 0 < counts[0, x, y] < 12) else None
        if bottom is None:
            lo = lo - 1
            bottom = "ordered" if counts[lo, x, y] == 12 else "disordered"
        while hi + 1 <= l and 0 < counts[hi + 1, x, y] < 12:
            hi += 1
        top = "boundary" if (hi == l and 0 < counts[l, x, y] < 12) else None
        if top is None:
            hi = hi + 1
            top = "ordered" if counts[hi, x, y] == 12 else "disordered"
        extended.append([lo, hi, bottom, top])

    merged = []
    for seg in sorted(extended):
        if merged and seg[0] <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], seg[1])
            merged[-1][3] = seg[3]
        else:
            merged.append(list(seg))

    def bond_tuple_h(z):
        sp = plane_plaquette_spins(config, column, z)
        return tuple(circular_distance(sp[i], sp[(i + 1) % 4], q) <= 1 for i in range(4))

    def bond_tuple_v(z):
        out = []
        for cx, cy in _cell_corners(x, y, n):
            out.append(circular_distance(int(config.spins[z, cx, cy]),
                                         int(config.spins[z + 1, cx, cy]), q) <= 1)
        return tuple(out)

    records = []
    for lo, hi, bottom, top in merged:
        h_planes = {z: bond_tuple_h(z) for z in range(lo, hi + 2)}
        v_levels = {z: bond_tuple_v(z) for z in range(lo, hi + 1)}
        m = sum(1 for z in range(lo, hi + 1) if 0 < counts[z, x, y] < 12)
        rec = DefectRecord(column, lo, hi, bottom, top, h_planes, v_levels, m, [])
        end_types = {}
        for key, z in (("b", lo), ("t", hi + 1)):
            sp = plane_plaquette_spins(config, column, z)
            end_types[key] = plaquette_type(sp, q)
        rec.end_types = end_types
        records.append(rec)

    for blob in blobs:
        p = blob.plaquettes[0]
        if p[0] == "h":
            host_z = p[3] if (p[3] <= l and 0 < counts[p[3], x, y] < 12) else p[3] - 1
        else:
            host_z = p[3]
        host = next((r for r in records if r.z_lo <= host_z <= r.z_hi), None)
        if host is None:
            raise GrammarError("blob-outside-defects", f"{blob} column {column}")
        host.blobs.append(blob)

    if len(records) > len(blobs):
        raise GrammarError("defect-count-exceeds-blob-count", f"column {column}")

    for rec in records:
        raw = sum(b.sign for b in rec.blobs)
        rec.sign = max(-1, min(1, raw))
        rec.sign_overflow = raw != rec.sign
        rec.classification = classify_defect(rec)
    return records


def classify_defect(rec: DefectRecord) -> str:
    """problematic / e-problematic / non-problematic, per the bond pattern."""
    boundary = "boundary" in (rec.bottom_end, rec.top_end)

    if not boundary:
        end_cubes = (rec.z_lo, rec.z_hi)
        inner_ok = True
        for z, bonds in rec.h_planes.items():
            # plane z belongs to cubes z-1 and z; exempt if either is an end cube
            if (z - 1) in end_cubes or z in end_cubes:
                continue
            if any(bonds):
                inner_ok = False
        for z, bonds in rec.v_levels.items():
            if z in end_cubes:
                continue
            if any(bonds):
                inner_ok = False
        ordered_end = (rec.bottom_end == "ordered") or (rec.top_end == "ordered")
        if inner_ok and ordered_end:
            assert rec.n_cubes in (3, 5), f"problematic defect with {rec.n_cubes} cubes"
            pure = sum(1 for e in (rec.bottom_end, rec.top_end) if e != "boundary")
            pure += max(0, rec.n_cubes - 2 - rec.m)
            assert pure in (2, 3), f"problematic defect with {pure} pure cubes"
            return "problematic"
        return "non-problematic"

    if rec.bottom_end == "boundary" and rec.z_lo == 0 and rec.top_end == "ordered":
        if rec.m in (1, 2) and rec.n_cubes == rec.m + 1:
            bottom_v = rec.v_levels[0]
            if sum(1 for b in bottom_v if not b) >= 3:
                if len(rec.blobs) == 1 and len(rec.blobs[0].plaquettes) == 1:
                    p = rec.blobs[0].plaquettes[0]
                    if p[0] == "h" and p[3] == 0:
                        assert rec.sign == -1, "e-problematic defect must have sign -"
                        return "e-problematic"
    return "non-problematic"


@dataclass
class Pairing:
    pairs: list          # (low_record, high_record, both_problematic)
    unpaired: object     # the middle signed defect, or None


def pair_defects(signed: list, neutral: list) -> Pairing:
    """Pair defects per the gluing bookkeeping.

    signed: G_1..G_{2k-1} ascending, alternating signs starting and ending
    with minus; neutral: H_1..H_l.  Pairs (G_i, G_{2k-i}), (H_1, H_2), ...;
    an odd leftover H_l pairs with G_k, otherwise G_k stays unpaired.
    """
    if len(signed) % 2 == 0 or not signed:
        raise GrammarError("signed-count-not-odd", f"{len(signed)} signed defects")
    for a, b in zip(signed, signed[1:]):
        if a.sign == b.sign or a.sign == 0 or b.sign == 0:
            raise GrammarError("signs-not-alternating", "signed defect list")
    if signed[0].sign != -1 or signed[-1].sign != -1:
        raise GrammarError("boundary-signs-not-minus", "signed defect list")

    def problematic(rec):
        return rec.classification in ("problematic", "e-problematic")

    k = (len(signed) + 1) // 2
    pairs = []
    for i in range(k - 1):
        a, b = signed[i], signed[-1 - i]
        assert a.sign == b.sign, "paired signed defects must have equal signs"
        pairs.append((a, b, problematic(a) and problematic(b)))
    for i in range(0, len(neutral) - 1, 2):
        a, b = neutral[i], neutral[i + 1]
        pairs.append((a, b, problematic(a) and problematic(b)))
    middle = signed[k - 1]
    unpaired = None
    if len(neutral) % 2 == 1:
        pairs.append((neutral[-1], middle, problematic(neutral[-1]) and problematic(middle)))
    else:
        unpaired = middle
    return Pairing(pairs, unpaired)


@dataclass
class GluingInfo:
    slab_lo: int
    slab_hi: int
    rotation: int
    reflect_lo: int
    reflect_hi: int
    reflect_sum: int     # z -> reflect_sum - z within the reflection slab


def _check_slab(lo, hi, l):
    if not (1 <= lo <= hi <= l):
        raise GluingError(f"slab [{lo}, {hi}] leaves the free layers [1, {l}]")


def glue_pair(config: SpinConfig, pair) -> tuple[SpinConfig, int, GluingInfo]:
    """Glue a problematic pair: slab rotation, then slab reflection.

    Returns (new config, H(old) - H(new), info needed to invert).  The
    rotation shifts the slab so the lower defect's top boundary plaquette
    acquires the dominant value of the upper one's; the reflection folds the
    slab through its middle plane, which must be integral.
    """
    low, high = pair[0], pair[1]
    spec = config.spec
    q = spec.q
    for rec in (low, high):
        if rec.classification not in ("problematic", "e-problematic"):
            raise GluingError(f"defect {rec.column} [{rec.z_lo},{rec.z_hi}] is {rec.classification}")
    if high.classification == "e-problematic":
        raise GluingError("upper defect of a glued pair cannot be e-problematic")

    top_low = plane_plaquette_spins(config, low.column, low.z_hi + 1)
    top_high = plane_plaquette_spins(config, high.column, high.z_hi + 1)
    s_high = dominant_value(top_high, q)
    s_low = dominant_value(top_low, q)
    rotation = (s_high - s_low) % q

    a_low, a_high = low.z_lo, high.z_lo
    if low.classification == "e-problematic":
        slab_lo, slab_hi = 1, a_high
        if (1 + a_high) % 2 != 0:
            raise GluingError(f"half-integral reflection plane: 1 + {a_high} odd")
        reflect_lo, reflect_hi = 1, a_high + 2
        reflect_sum = a_high + 3
    else:
        slab_lo, slab_hi = a_low + 2, a_high
        if (a_low + a_high) % 2 != 0:
            raise GluingError(f"half-integral reflection plane: {a_low} + {a_high} odd")
        reflect_lo, reflect_hi = slab_lo, slab_hi
        reflect_sum = a_low + a_high + 2
    if slab_hi < slab_lo:
        raise GluingError(f"empty gluing slab [{slab_lo}, {slab_hi}]")
    _check_slab(slab_lo, slab_hi, spec.l)
    _check_slab(reflect_lo, reflect_hi, spec.l)

    info = GluingInfo(slab_lo, slab_hi, rotation, reflect_lo, reflect_hi, reflect_sum)
    new = config.copy()
    new.spins[slab_lo:slab_hi + 1] = (new.spins[slab_lo:slab_hi + 1] + rotation) % q
    new.spins[reflect_lo:reflect_hi + 1] = new.spins[reflect_hi:reflect_lo - 1:-1]
    delta = total_energy(config) - total_energy(new)
    return new, delta, info


def glue_inverse(config: SpinConfig, info: GluingInfo) -> SpinConfig:
    """Explicit inverse of glue_pair: reflect back, then rotate back."""
    q = config.spec.q
    out = config.copy()
    out.spins[info.reflect_lo:info.reflect_hi + 1] = \
        out.spins[info.reflect_hi:info.reflect_lo - 1:-1]
    out.spins[info.slab_lo:info.slab_hi + 1] = \
        (out.spins[info.slab_lo:info.slab_hi + 1] - info.rotation) % q
    return out
