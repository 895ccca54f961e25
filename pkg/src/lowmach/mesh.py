"""Structured tetrahedral box meshes and their face-centred dual FV mesh.

The primal mesh subdivides a box into ``N`` cells per direction, each cell
split into six tetrahedra (Kuhn split around the main diagonal).  The dual
finite-volume mesh places one node at the barycenter of every primal face;
the control volume of a node is the union of the one or two sub-tetrahedra
obtained by coning its face from the barycenters of the adjacent elements.
Interfaces between two control volumes are the triangles spanned by an
element barycenter and the edge shared by the two faces, which makes the
vertex-based pressure quadrature exact for piecewise linear fields.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, TopologyError

# local faces of a tetrahedron; face k is opposite local vertex k
_LOCAL_FACES = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))

# the six axis permutations of the Kuhn split, in a fixed order
_KUHN_PERMS = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


@dataclass(frozen=True)
class TetMesh:
    """Primal tetrahedral mesh of an axis-aligned box.

    Attributes
    ----------
    vertices : (nv, 3) float array of vertex coordinates [m].
    tets : (nel, 4) int array of vertex indices, positively oriented.
    faces : (nf, 3) int array of vertex indices (sorted per face).
    face_tets : (nf, 2) int array of adjacent element indices; the second
        entry is -1 for boundary faces.
    tet_faces : (nel, 4) int array; entry k is the face opposite vertex k.
    face_boundary : (nf,) bool array.
    """

    vertices: np.ndarray
    tets: np.ndarray
    faces: np.ndarray
    face_tets: np.ndarray
    tet_faces: np.ndarray
    face_boundary: np.ndarray

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_tets(self) -> int:
        return len(self.tets)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def tet_volumes(self) -> np.ndarray:
        """Signed volumes of all elements (positive by construction)."""
        v = self.vertices[self.tets]
        e = v[:, 1:] - v[:, :1]
        return np.einsum("ij,ij->i", e[:, 0], np.cross(e[:, 1], e[:, 2])) / 6.0


def build_box_tet_mesh(n: int, box=((0.0, 1.0), (0.0, 1.0), (0.0, 1.0))) -> TetMesh:
    """Subdivide a box into ``n**3`` cubes of six tetrahedra each.

    Numbering is deterministic: vertices run x-fastest, cells likewise, and
    the six tetrahedra of a cell follow a fixed permutation order, so two
    builds with equal inputs are bit-identical.
    """
    if n < 1:
        raise ValueError(f"subdivision count must be >= 1, got {n}")
    box = np.asarray(box, dtype=float)
    if box.shape != (3, 2) or np.any(box[:, 1] <= box[:, 0]):
        raise ValueError("box must be three non-degenerate extents (lo, hi)")

    axes = [np.linspace(box[d, 0], box[d, 1], n + 1) for d in range(3)]
    # vertex index (i, j, k) -> i + (n+1)*(j + (n+1)*k), x-fastest
    xs, ys, zs = np.meshgrid(*axes, indexing="ij")
    vertices = np.stack(
        [xs.transpose(2, 1, 0).ravel(), ys.transpose(2, 1, 0).ravel(), zs.transpose(2, 1, 0).ravel()],
        axis=1,
    )

    def vid(i, j, k):
        return i + (n + 1) * (j + (n + 1) * k)

    tets = []
    for kz in range(n):
        for jy in range(n):
            for ix in range(n):
                corner = np.array([ix, jy, kz])
                for perm in _KUHN_PERMS:
                    idx = [corner.copy()]
                    for ax in perm:
                        nxt = idx[-1].copy()
                        nxt[ax] += 1
                        idx.append(nxt)
                    tet = [vid(*p) for p in idx]
                    tets.append(tet)
    tets = np.asarray(tets, dtype=np.int64)

    # enforce positive orientation deterministically
    v = vertices[tets]
    e = v[:, 1:] - v[:, :1]
    vol6 = np.einsum("ij,ij->i", e[:, 0], np.cross(e[:, 1], e[:, 2]))
    flip = vol6 < 0
    tets[flip, 2], tets[flip, 3] = tets[flip, 3].copy(), tets[flip, 2].copy()

    # face table in first-encounter order
    face_ids: dict[tuple[int, int, int], int] = {}
    faces = []
    face_tets = []
    tet_faces = np.empty((len(tets), 4), dtype=np.int64)
    for t, tet in enumerate(tets):
        for k, loc in enumerate(_LOCAL_FACES):
            tri = tuple(sorted(int(tet[i]) for i in loc))
            fid = face_ids.get(tri)
            if fid is None:
                fid = len(faces)
                face_ids[tri] = fid
                faces.append(tri)
                face_tets.append([t, -1])
            else:
                if face_tets[fid][1] != -1:
                    raise TopologyError(f"face {tri} adjacent to more than two elements")
                face_tets[fid][1] = t
            tet_faces[t, k] = fid
    faces = np.asarray(faces, dtype=np.int64)
    face_tets = np.asarray(face_tets, dtype=np.int64)
    face_boundary = face_tets[:, 1] < 0

    return TetMesh(
        vertices=vertices,
        tets=tets,
        faces=faces,
        face_tets=face_tets,
        tet_faces=tet_faces,
        face_boundary=face_boundary,
    )


def _p1_gradient_matrix(coords: np.ndarray) -> np.ndarray:
    """(4, 3) matrix G with grad(p1 interpolant) = G.T @ nodal_values."""
    m = coords[1:] - coords[0]
    det = np.linalg.det(m)
    if abs(det) < 1e-300:
        raise GeometryError("degenerate tetrahedron in gradient setup")
    minv = np.linalg.inv(m)
    g = np.empty((4, 3))
    g[1:] = minv.T
    g[0] = -g[1:].sum(axis=0)
    return g


@dataclass(frozen=True)
class DualMesh:
    """Face-type dual finite-volume mesh with all geometric coefficients.

    One FV node per primal face. Interfaces are stored once per unordered
    neighbor pair ``(i, j)`` with the area vector ``eta`` oriented from
    ``C_i`` towards ``C_j``.  All arrays are immutable after construction
    and safe to share between threads.
    """

    mesh: TetMesh
    nodes: np.ndarray  # (n, 3) face barycenters
    node_boundary: np.ndarray  # (n,) bool
    cell_vol: np.ndarray  # (n,)
    cell_surf: np.ndarray  # (n,)
    cell_len: np.ndarray  # (n,)  |C_i| / S(C_i)
    # interface tables, one row per unordered pair
    if_i: np.ndarray  # (m,) node index i
    if_j: np.ndarray  # (m,) node index j
    if_eta: np.ndarray  # (m, 3) area vector, oriented i -> j
    if_area: np.ndarray  # (m,)
    if_center: np.ndarray  # (m, 3) interface barycenter N_ij
    if_d: np.ndarray  # (m,) orthogonal node-to-plane distance (same both sides)
    if_subvol: np.ndarray  # (m,) |C_ij| = d * area / 3
    if_len: np.ndarray  # (m,) min(L_i, L_j)
    if_elem: np.ndarray  # (m,) element containing the interface
    if_elem_left: np.ndarray  # (m,) element adjacent through node i's face
    if_elem_right: np.ndarray  # (m,) element adjacent through node j's face
    if_quad_verts: np.ndarray  # (m, 4) vertex ids (V1, V2 edge; V3 face-i; V4 face-j)
    # element tables
    elem_vol: np.ndarray  # (nel,)
    elem_bary: np.ndarray  # (nel, 3)
    grad_verts: np.ndarray  # (nel, 4, 3) P1 gradients w.r.t. element vertices
    grad_nodes: np.ndarray  # (nel, 4, 3) P1 gradients w.r.t. the 4 face nodes
    node_elems: np.ndarray  # (n, 2) adjacent elements (second = first on boundary)
    # boundary face tables (aligned lists of boundary nodes)
    bnd_nodes: np.ndarray  # (nb,) node ids
    bnd_normal: np.ndarray  # (nb, 3) outward unit normal
    bnd_area: np.ndarray  # (nb,)
    vertex_vol: np.ndarray  # (nv,) lumped vertex volumes sum |T|/4

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_interfaces(self) -> int:
        return len(self.if_i)


def build_dual_mesh(mesh: TetMesh) -> DualMesh:
    """Construct the dual mesh and every coefficient the schemes need."""
    verts = mesh.vertices
    tets = mesh.tets
    nf = mesh.n_faces
    nel = mesh.n_tets

    nodes = verts[mesh.faces].mean(axis=1)
    node_boundary = mesh.face_boundary.copy()

    elem_bary = verts[tets].mean(axis=1)
    elem_vol = mesh.tet_volumes()
    if np.any(elem_vol <= 0):
        raise GeometryError("element with non-positive volume")

    cell_vol = np.zeros(nf)
    cell_surf = np.zeros(nf)
    # each cone contributes |T|/4 to the face's control volume
    np.add.at(cell_vol, mesh.tet_faces.ravel(), np.repeat(elem_vol / 4.0, 4))

    rows_i, rows_j = [], []
    eta_list, area_list, ctr_list, d_list = [], [], [], []
    elem_list, eleft_list, eright_list, quad_list = [], [], [], []

    for t in range(nel):
        tet = tets[t]
        b = elem_bary[t]
        fids = mesh.tet_faces[t]
        for a in range(4):
            for c in range(a + 1, 4):
                fi, fj = int(fids[a]), int(fids[c])
                # shared edge of faces a and c: local vertices except {a, c}
                edge = [k for k in range(4) if k not in (a, c)]
                v1, v2 = verts[tet[edge[0]]], verts[tet[edge[1]]]
                av = 0.5 * np.cross(v1 - b, v2 - b)
                area = float(np.linalg.norm(av))
                if area <= 0.0:
                    raise GeometryError(f"degenerate interface in element {t}")
                if np.dot(av, nodes[fj] - nodes[fi]) < 0.0:
                    av = -av
                nhat = av / area
                d = abs(float(np.dot(nodes[fi] - b, nhat)))
                rows_i.append(fi)
                rows_j.append(fj)
                eta_list.append(av)
                area_list.append(area)
                ctr_list.append((b + v1 + v2) / 3.0)
                d_list.append(d)
                elem_list.append(t)
                ta, tb = mesh.face_tets[fi]
                eleft_list.append(int(tb) if int(ta) == t else int(ta))
                ta, tb = mesh.face_tets[fj]
                eright_list.append(int(tb) if int(ta) == t else int(ta))
                # V3 = vertex of face i off the edge (= local vertex c), V4 likewise
                quad_list.append(
                    (int(tet[edge[0]]), int(tet[edge[1]]), int(tet[c]), int(tet[a]))
                )
                cell_surf[fi] += area
                cell_surf[fj] += area

    if_i = np.asarray(rows_i, dtype=np.int64)
    if_j = np.asarray(rows_j, dtype=np.int64)
    if_eta = np.asarray(eta_list)
    if_area = np.asarray(area_list)
    if_center = np.asarray(ctr_list)
    if_d = np.asarray(d_list)
    if_elem = np.asarray(elem_list, dtype=np.int64)
    if_elem_left = np.asarray(eleft_list, dtype=np.int64)
    if_elem_right = np.asarray(eright_list, dtype=np.int64)
    if_quad_verts = np.asarray(quad_list, dtype=np.int64)

    # boundary fallback: missing neighbor element -> the containing element
    if_elem_left = np.where(if_elem_left < 0, if_elem, if_elem_left)
    if_elem_right = np.where(if_elem_right < 0, if_elem, if_elem_right)

    # boundary faces contribute their own area to the cell surface
    bnd_nodes = np.nonzero(mesh.face_boundary)[0].astype(np.int64)
    bnd_area = np.empty(len(bnd_nodes))
    bnd_normal = np.empty((len(bnd_nodes), 3))
    for k, f in enumerate(bnd_nodes):
        tri = verts[mesh.faces[f]]
        av = 0.5 * np.cross(tri[1] - tri[0], tri[2] - tri[0])
        area = float(np.linalg.norm(av))
        t = int(mesh.face_tets[f, 0])
        if np.dot(av, nodes[f] - elem_bary[t]) < 0.0:
            av = -av
        bnd_area[k] = area
        bnd_normal[k] = av / area
        cell_surf[f] += area

    neighbor_count = np.zeros(nf, dtype=np.int64)
    np.add.at(neighbor_count, if_i, 1)
    np.add.at(neighbor_count, if_j, 1)
    expected = np.where(node_boundary, 3, 6)
    if not np.array_equal(neighbor_count, expected):
        bad = int(np.nonzero(neighbor_count != expected)[0][0])
        raise TopologyError(
            f"node {bad} has {neighbor_count[bad]} neighbors, expected {expected[bad]}"
        )

    cell_len = cell_vol / cell_surf
    if_len = np.minimum(cell_len[if_i], cell_len[if_j])

    grad_verts = np.empty((nel, 4, 3))
    grad_nodes = np.empty((nel, 4, 3))
    for t in range(nel):
        grad_verts[t] = _p1_gradient_matrix(verts[tets[t]])
        grad_nodes[t] = _p1_gradient_matrix(nodes[mesh.tet_faces[t]])

    node_elems = np.empty((nf, 2), dtype=np.int64)
    node_elems[:, 0] = mesh.face_tets[:, 0]
    node_elems[:, 1] = np.where(mesh.face_tets[:, 1] < 0, mesh.face_tets[:, 0], mesh.face_tets[:, 1])

    vertex_vol = np.zeros(mesh.n_vertices)
    np.add.at(vertex_vol, tets.ravel(), np.repeat(elem_vol / 4.0, 4))

    return DualMesh(
        mesh=mesh,
        nodes=nodes,
        node_boundary=node_boundary,
        cell_vol=cell_vol,
        cell_surf=cell_surf,
        cell_len=cell_len,
        if_i=if_i,
        if_j=if_j,
        if_eta=if_eta,
        if_area=if_area,
        if_center=if_center,
        if_d=if_d,
        if_subvol=if_d * if_area / 3.0,
        if_len=if_len,
        if_elem=if_elem,
        if_elem_left=if_elem_left,
        if_elem_right=if_elem_right,
        if_quad_verts=if_quad_verts,
        elem_vol=elem_vol,
        elem_bary=elem_bary,
        grad_verts=grad_verts,
        grad_nodes=grad_nodes,
        node_elems=node_elems,
        bnd_nodes=bnd_nodes,
        bnd_normal=bnd_normal,
        bnd_area=bnd_area,
        vertex_vol=vertex_vol,
    )


def p1_gradient(dual: DualMesh, nodal_values: np.ndarray, aux_tet: int) -> np.ndarray:
    """Exact gradient of the linear interpolant of 4 FV-node values.

    ``aux_tet`` is an element index; the auxiliary tetrahedron is spanned by
    the barycenters of that element's four faces.
    """
    vals = np.asarray(nodal_values, dtype=float)[dual.mesh.tet_faces[aux_tet]]
    return vals @ dual.grad_nodes[aux_tet]


def node_gradients(dual: DualMesh, nodal_values: np.ndarray) -> np.ndarray:
    """P1 gradients of a node field on every auxiliary tetrahedron, (nel, 3)."""
    vals = np.asarray(nodal_values, dtype=float)[dual.mesh.tet_faces]
    return np.einsum("ek,ekd->ed", vals, dual.grad_nodes)


def vertex_gradients(dual: DualMesh, vertex_values: np.ndarray) -> np.ndarray:
    """P1 gradients of a vertex field on every element, (nel, 3)."""
    vals = np.asarray(vertex_values, dtype=float)[dual.mesh.tets]
    return np.einsum("ek,ekd->ed", vals, dual.grad_verts)


def dump_mesh(mesh: TetMesh, path) -> None:
    """Write a plain-text dump with VERTICES / TETRAHEDRA / FACES sections."""
    with open(path, "w") as fh:
        fh.write(f"VERTICES {mesh.n_vertices}\n")
        for v in mesh.vertices:
            fh.write(f"{v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
        fh.write(f"TETRAHEDRA {mesh.n_tets}\n")
        for t in mesh.tets:
            fh.write(f"{t[0]} {t[1]} {t[2]} {t[3]}\n")
        fh.write(f"FACES {mesh.n_faces}\n")
        for f, (ta, tb) in zip(mesh.faces, mesh.face_tets):
            fh.write(f"{f[0]} {f[1]} {f[2]} {ta} {tb}\n")
