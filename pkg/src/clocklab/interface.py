"""Interface extraction: frustrated cubes, separating components, heights.

Cubes are indexed by their lower corner (x, y, z), z in [0, L]; each owns 12
bonds.  Two cubes are bond-connected when they share at least one bond
(6 face + 12 edge neighbors).  Separation tests and the disordered-region
construction run on an augmented grid with a virtual pure-disordered layer
below z=0 and a virtual pure-ordered layer above z=L, which also makes the
bottom faces of boundary-attached defects part of the interface.

Plaquettes are tuples (kind, x, y, z): ('h', x, y, z) is the horizontal
square [x,x+1]x[y,y+1]x{z}; ('xz', x, y, z) spans [x,x+1]x{y}x[z,z+1];
('yz', x, y, z) spans {x}x[y,y+1]x[z,z+1].
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .lattice import LatticeSpec, SpinConfig, classify_bonds


class ExtractionError(RuntimeError):
    """The interface pipeline hit a state the definitions exclude."""


@dataclass
class FrustrationComponent:
    cubes: frozenset
    kind: str  # "interface3d" | "contour"


@dataclass
class HeightField:
    heights: np.ndarray          # (n, n), -1 encodes infinite height
    regular: np.ndarray          # (n, n) bool
    rigidity: frozenset          # cells of the largest rigid component
    components: list             # all rigid components (frozensets of cells)


@dataclass
class InterfaceData:
    frustrated: np.ndarray       # (l+1, n, n) bool
    cube_components: list        # FrustrationComponent list
    interface_cubes: np.ndarray  # union of interface3d components
    disordered_cubes: np.ndarray # augmented (l+3, n, n) bool, includes virtual layers
    boundary_plaquettes: frozenset
    components: list             # separating components of the 2D boundary
    interface: frozenset         # union of the separating components: B


# 6 face + 12 edge neighbor offsets (cubes sharing at least one bond)
_BOND_NEIGHBORS = [(dx, dy, dz)
                   for dx in (-1, 0, 1) for dy in (-1, 0, 1) for dz in (-1, 0, 1)
                   if (dx, dy, dz) != (0, 0, 0) and abs(dx) + abs(dy) + abs(dz) <= 2]


def cube_order_counts(config: SpinConfig) -> np.ndarray:
    """Number of ordered bonds (0..12) per elementary cube."""
    bf = classify_bonds(config)
    hx, hy, vz = bf.hx.astype(np.int8), bf.hy.astype(np.int8), bf.vz.astype(np.int8)
    hx_r = np.roll(hx, -1, axis=2)   # x-bond on the far y side
    hy_r = np.roll(hy, -1, axis=1)   # y-bond on the far x side
    c = (hx[:-1] + hx_r[:-1] + hx[1:] + hx_r[1:] +
         hy[:-1] + hy_r[:-1] + hy[1:] + hy_r[1:])
    v = vz + np.roll(vz, -1, axis=1) + np.roll(vz, -1, axis=2) \
        + np.roll(np.roll(vz, -1, axis=1), -1, axis=2)
    return (c + v).astype(np.int8)


def frustrated_cubes(config: SpinConfig) -> np.ndarray:
    """Mask of cubes having both ordered and disordered bonds."""
    counts = cube_order_counts(config)
    return (counts > 0) & (counts < 12)


def cube_set(mask: np.ndarray) -> frozenset:
    return frozenset((int(x), int(y), int(z)) for z, x, y in zip(*np.nonzero(mask)))


def _as_mask(cubes, spec: LatticeSpec) -> np.ndarray:
    if isinstance(cubes, np.ndarray):
        return cubes.astype(bool)
    mask = np.zeros((spec.l + 1, spec.n, spec.n), dtype=bool)
    for x, y, z in cubes:
        mask[z, x, y] = True
    return mask


def _separates(component_mask: np.ndarray, spec: LatticeSpec) -> bool:
    """True iff removing these cubes disconnects the bottom from the top.

    Face-adjacent flood fill from the virtual bottom layer; the component
    blocks only its own cubes.
    """
    n, l = spec.n, spec.l
    open_mask = np.ones((l + 3, n, n), dtype=bool)
    open_mask[1:l + 2] = ~component_mask
    reach = np.zeros_like(open_mask)
    reach[0] = True
    while True:
        grow = reach.copy()
        grow |= np.roll(reach, 1, axis=1) | np.roll(reach, -1, axis=1)
        grow |= np.roll(reach, 1, axis=2) | np.roll(reach, -1, axis=2)
        grow[1:] |= reach[:-1]
        grow[:-1] |= reach[1:]
        grow &= open_mask
        if (grow == reach).all():
            break
        reach = grow
    return not reach[l + 2].any()


def decompose_components(cubes, spec: LatticeSpec) -> list[FrustrationComponent]:
    """Split cubes into bond-connected components and classify each one."""
    mask = _as_mask(cubes, spec)
    n, l = spec.n, spec.l
    seen = np.zeros_like(mask)
    out = []
    for z0, x0, y0 in zip(*np.nonzero(mask)):
        if seen[z0, x0, y0]:
            continue
        comp = np.zeros_like(mask)
        queue = deque([(int(x0), int(y0), int(z0))])
        seen[z0, x0, y0] = comp[z0, x0, y0] = True
        while queue:
            x, y, z = queue.popleft()
            for dx, dy, dz in _BOND_NEIGHBORS:
                nz = z + dz
                if not (0 <= nz <= l):
                    continue
                nx, ny = (x + dx) % n, (y + dy) % n
                if mask[nz, nx, ny] and not seen[nz, nx, ny]:
                    seen[nz, nx, ny] = comp[nz, nx, ny] = True
                    queue.append((nx, ny, nz))
        kind = "interface3d" if _separates(comp, spec) else "contour"
        out.append(FrustrationComponent(cube_set(comp), kind))
    return out


def _complement_components(i_mask: np.ndarray, spec: LatticeSpec):
    """Face-connected components of the augmented complement of I."""
    n, l = spec.n, spec.l
    open_mask = np.ones((l + 3, n, n), dtype=bool)
    open_mask[1:l + 2] = ~i_mask
    label = np.full(open_mask.shape, -1, dtype=np.int32)
    comps = []
    for zi0, x0, y0 in zip(*np.nonzero(open_mask)):
        if label[zi0, x0, y0] >= 0:
            continue
        cid = len(comps)
        cells = []
        queue = deque([(int(x0), int(y0), int(zi0))])
        label[zi0, x0, y0] = cid
        while queue:
            x, y, zi = queue.popleft()
            cells.append((x, y, zi))
            for nx, ny, nzi in ((x + 1, y, zi), (x - 1, y, zi), (x, y + 1, zi),
                                (x, y - 1, zi), (x, y, zi + 1), (x, y, zi - 1)):
                if not (0 <= nzi <= l + 2):
                    continue
                nx, ny = nx % n, ny % n
                if open_mask[nzi, nx, ny] and label[nzi, nx, ny] < 0:
                    label[nzi, nx, ny] = cid
                    queue.append((nx, ny, nzi))
        comps.append(cells)
    return label, comps


def _component_phase(cells, label_id, i_mask, counts, spec: LatticeSpec) -> str:
    """Phase of a complement component from its inner boundary pure cubes."""
    n, l = spec.n, spec.l
    kinds = set()
    for x, y, zi in cells:
        if zi == 0:
            kinds.add("disordered")
            continue
        if zi == l + 2:
            kinds.add("ordered")
            continue
        z = zi - 1
        touches = False
        for nx, ny, nz in ((x + 1, y, z), (x - 1, y, z), (x, y + 1, z),
                           (x, y - 1, z), (x, y, z + 1), (x, y, z - 1)):
            if 0 <= nz <= l and i_mask[nz, nx % n, ny % n]:
                touches = True
                break
        if touches:
            c = counts[z, x, y]
            if c == 0:
                kinds.add("disordered")
            elif c == 12:
                kinds.add("ordered")
            else:
                raise ExtractionError("frustrated cube face-adjacent to the 3D interface")
    if len(kinds) != 1:
        raise ExtractionError(f"ambiguous phase for complement component: {kinds}")
    return kinds.pop()


def plaquette_edges(p, n: int):
    """The four lattice bonds bounding a plaquette."""
    kind, x, y, z = p
    if kind == "h":
        return (("x", x, y, z), ("x", x, (y + 1) % n, z),
                ("y", x, y, z), ("y", (x + 1) % n, y, z))
    if kind == "xz":
        return (("x", x, y, z), ("x", x, y, z + 1),
                ("z", x, y, z), ("z", (x + 1) % n, y, z))
    return (("y", x, y, z), ("y", x, y, z + 1),
            ("z", x, y, z), ("z", x, (y + 1) % n, z))


def plaquette_vertices(p, n: int):
    kind, x, y, z = p
    if kind == "h":
        return ((x, y, z), ((x + 1) % n, y, z), (x, (y + 1) % n, z),
                ((x + 1) % n, (y + 1) % n, z))
    if kind == "xz":
        return ((x, y, z), ((x + 1) % n, y, z), (x, y, z + 1), ((x + 1) % n, y, z + 1))
    return ((x, y, z), (x, (y + 1) % n, z), (x, y, z + 1), (x, (y + 1) % n, z + 1))


def _plaquette_components(plaquettes, n: int, by="edge"):
    """Group plaquettes by shared edge or shared vertex."""
    key_fn = plaquette_edges if by == "edge" else plaquette_vertices
    index = {}
    for p in plaquettes:
        for k in key_fn(p, n):
            index.setdefault(k, []).append(p)
    seen = set()
    comps = []
    for start in sorted(plaquettes):
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for k in key_fn(p, n):
                for q in index[k]:
                    if q not in seen:
                        seen.add(q)
                        comp.add(q)
                        queue.append(q)
        comps.append(frozenset(comp))
    return comps


def _surface_separates(surface: frozenset, spec: LatticeSpec) -> bool:
    """Flood cubes (augmented) without crossing the surface's plaquettes."""
    n, l = spec.n, spec.l
    seen = np.zeros((l + 3, n, n), dtype=bool)
    seen[0] = True
    queue = deque((int(x), int(y), 0) for x in range(n) for y in range(n))
    while queue:
        x, y, zi = queue.popleft()
        z = zi - 1
        moves = (
            ((x + 1) % n, y, zi, ("yz", (x + 1) % n, y, z)),
            ((x - 1) % n, y, zi, ("yz", x, y, z)),
            (x, (y + 1) % n, zi, ("xz", x, (y + 1) % n, z)),
            (x, (y - 1) % n, zi, ("xz", x, y, z)),
            (x, y, zi + 1, ("h", x, y, z + 1)),
            (x, y, zi - 1, ("h", x, y, z)),
        )
        for nx, ny, nzi, face in moves:
            if not (0 <= nzi <= l + 2) or seen[nzi, nx, ny] or face in surface:
                continue
            seen[nzi, nx, ny] = True
            queue.append((nx, ny, nzi))
    return not seen[l + 2].any()


def extract_interface(config: SpinConfig) -> InterfaceData:
    """Build the 2D interface separating the disordered region from above."""
    spec = config.spec
    n, l = spec.n, spec.l
    counts = cube_order_counts(config)
    frustrated = (counts > 0) & (counts < 12)
    comps = decompose_components(frustrated, spec)
    i_mask = np.zeros_like(frustrated)
    for c in comps:
        if c.kind == "interface3d":
            for x, y, z in c.cubes:
                i_mask[z, x, y] = True
    if not i_mask.any():
        raise ExtractionError("no 3D interface found; order-disorder boundary required")

    label, cells_by_comp = _complement_components(i_mask, spec)
    d_mask = np.zeros((l + 3, n, n), dtype=bool)
    for cid, cells in enumerate(cells_by_comp):
        if _component_phase(cells, cid, i_mask, counts, spec) == "disordered":
            for x, y, zi in cells:
                d_mask[zi, x, y] = True

    i_aug = np.zeros((l + 3, n, n), dtype=bool)
    i_aug[1:l + 2] = i_mask
    boundary = set()
    lower_d = d_mask[:-1] & i_aug[1:]
    lower_i = i_aug[:-1] & d_mask[1:]
    for zi, x, y in zip(*np.nonzero(lower_d | lower_i)):
        boundary.add(("h", int(x), int(y), int(zi)))
    for z in range(l + 1):
        d_r, i_r = d_mask[z + 1], i_aug[z + 1]
        for x, y in zip(*np.nonzero((d_r & np.roll(i_r, 1, axis=0)) |
                                    (i_r & np.roll(d_r, 1, axis=0)))):
            boundary.add(("yz", int(x), int(y), z))
        for x, y in zip(*np.nonzero((d_r & np.roll(i_r, 1, axis=1)) |
                                    (i_r & np.roll(d_r, 1, axis=1)))):
            boundary.add(("xz", int(x), int(y), z))

    separating = [c for c in _plaquette_components(boundary, n, by="edge")
                  if _surface_separates(c, spec)]
    if not separating:
        raise ExtractionError("boundary of the disordered region has no separating component")
    b = frozenset().union(*separating)
    return InterfaceData(frustrated, comps, i_mask, d_mask, frozenset(boundary),
                         separating, b)


def weight(plaquettes) -> int:
    """w(D) = |D| - |Pi(D)|; vertical plaquettes project to zero area."""
    plaquettes = set(plaquettes)
    cells = {(x, y) for kind, x, y, z in plaquettes if kind == "h"}
    return len(plaquettes) - len(cells)


def ceilings_walls_heights(b: frozenset, spec: LatticeSpec):
    """Ceilings, walls and the height field of an admissible interface."""
    n = spec.n
    column = {}
    for p in b:
        if p[0] == "h":
            column.setdefault((p[1], p[2]), []).append(p[3])
    heights = np.full((n, n), -1, dtype=np.int32)
    for (x, y), zs in column.items():
        if len(zs) == 1:
            heights[x, y] = zs[0]
    regular = heights >= 0

    # vertical plaquettes block rigidity adjacency across the edge they project to
    block_x = np.zeros((n, n), dtype=bool)   # edge between (x,y) and (x+1,y): ('yz', x+1, y, *)
    block_y = np.zeros((n, n), dtype=bool)   # edge between (x,y) and (x,y+1): ('xz', x, y+1, *)
    for kind, x, y, z in b:
        if kind == "yz":
            block_x[(x - 1) % n, y] = True
        elif kind == "xz":
            block_y[x, (y - 1) % n] = True

    def cell_components(require_open_edges: bool):
        seen = np.zeros((n, n), dtype=bool)
        comps = []
        for x0 in range(n):
            for y0 in range(n):
                if not regular[x0, y0] or seen[x0, y0]:
                    continue
                comp = []
                queue = deque([(x0, y0)])
                seen[x0, y0] = True
                while queue:
                    x, y = queue.popleft()
                    comp.append((x, y))
                    steps = (((x + 1) % n, y, block_x[x, y]),
                             ((x - 1) % n, y, block_x[(x - 1) % n, y]),
                             (x, (y + 1) % n, block_y[x, y]),
                             (x, (y - 1) % n, block_y[x, (y - 1) % n]))
                    for nx, ny, blocked in steps:
                        if seen[nx, ny] or not regular[nx, ny]:
                            continue
                        if heights[nx, ny] != heights[x, y]:
                            continue
                        if require_open_edges and blocked:
                            continue
                        seen[nx, ny] = True
                        queue.append((nx, ny))
                comps.append(frozenset(comp))
        return comps

    ceilings = [frozenset(("h", x, y, int(heights[x, y])) for x, y in comp)
                for comp in cell_components(require_open_edges=False)]
    rigid_comps = cell_components(require_open_edges=True)
    rigid_comps.sort(key=lambda c: (-len(c), sorted(c)[0]))
    rigidity = rigid_comps[0] if rigid_comps else frozenset()

    ceiling_plaquettes = frozenset().union(*ceilings) if ceilings else frozenset()
    wall_plaquettes = b - ceiling_plaquettes
    walls = _plaquette_components(wall_plaquettes, n, by="vertex")
    hf = HeightField(heights, regular, rigidity, rigid_comps)
    return ceilings, walls, hf


def is_winding(wall: frozenset, spec: LatticeSpec) -> bool:
    """True iff the wall's projection carries a noncontractible torus loop."""
    n = spec.n
    edges = set()
    for kind, x, y, z in wall:
        if kind == "h":
            edges.add(("x", x, y))
            edges.add(("x", x, (y + 1) % n))
            edges.add(("y", x, y))
            edges.add(("y", (x + 1) % n, y))
        elif kind == "xz":
            edges.add(("x", x, y))
        else:
            edges.add(("y", x, y))
    adj = {}
    for kind, x, y in edges:
        u, step = (x, y), (1, 0) if kind == "x" else (0, 1)
        v = ((x + step[0]) % n, (y + step[1]) % n)
        adj.setdefault(u, []).append((v, step))
        adj.setdefault(v, []).append((u, (-step[0], -step[1])))
    lift = {}
    for start in sorted(adj):
        if start in lift:
            continue
        lift[start] = (0, 0)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v, (dx, dy) in adj[u]:
                cand = (lift[u][0] + dx, lift[u][1] + dy)
                if v not in lift:
                    lift[v] = cand
                    queue.append(v)
                elif lift[v] != cand:
                    # closing a cycle with nonzero displacement: winding loop
                    return True
    return False
