"""Exact polytope computations over rational arithmetic.

A polytope is handed around in H-form, a list of halfspaces (a, b) meaning
a.u <= b with Fraction coefficients.  Vertices come from solving the d-subsets
of the bounding hyperplanes, volume from coning a triangulated boundary over
an interior point, so every number stays a Fraction end to end.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

Point = tuple[Fraction, ...]
Halfspace = tuple[tuple[Fraction, ...], Fraction]


def dot(a, u) -> Fraction:
    return sum((x * y for x, y in zip(a, u)), Fraction(0))


def solve_square(rows, rhs):
    """Solve the square rational system rows*x = rhs.

    Returns the unique solution or None when the matrix is singular.
    """
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k]), None)
        if pivot is None:
            return None
        a[k], a[pivot] = a[pivot], a[k]
        pk = a[k][k]
        a[k] = [x / pk for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return tuple(a[i][n] for i in range(n))


def matrix_rank(rows) -> int:
    """Rank of a rational matrix by Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    col = 0
    while rank < len(a) and col < ncols:
        pivot = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if pivot is None:
            col += 1
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        pk = a[rank][col]
        a[rank] = [x / pk for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        col += 1
    return rank


def affine_rank(points) -> int:
    """Dimension of the affine hull of the given points (-1 when empty)."""
    pts = list(points)
    if not pts:
        return -1
    base = pts[0]
    return matrix_rank([[x - y for x, y in zip(p, base)] for p in pts[1:]])


def det_fraction(rows) -> Fraction:
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / a[k][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


def enumerate_vertices(halfspaces: list[Halfspace], dim: int) -> list[Point]:
    """All vertices of the (assumed bounded) polytope {u : a.u <= b}.

    Every vertex lies on some dim of the bounding hyperplanes, so solve all
    dim-subsets and keep the feasible solutions.  Returned sorted, deduped.
    """
    seen = set()
    for subset in itertools.combinations(range(len(halfspaces)), dim):
        rows = [halfspaces[i][0] for i in subset]
        rhs = [halfspaces[i][1] for i in subset]
        sol = solve_square(rows, rhs)
        if sol is None:
            continue
        if all(dot(a, sol) <= b for a, b in halfspaces):
            seen.add(sol)
    return sorted(seen)


def _proper_faces(vertices: list[Point], halfspaces: list[Halfspace], dim: int):
    """Facets of the face with the given vertex set and dimension, each as a
    sorted vertex list.  A facet is cut out by one more halfspace going tight."""
    out = {}
    for a, b in halfspaces:
        tight = [v for v in vertices if dot(a, v) == b]
        if len(tight) == len(vertices) or len(tight) < dim:
            continue
        if affine_rank(tight) == dim - 1:
            out[frozenset(tight)] = sorted(tight)
    return [out[k] for k in sorted(out, key=sorted)]


def _triangulate_face(vertices: list[Point], halfspaces: list[Halfspace], dim: int):
    """Split a dim-face into dim-simplices (lists of dim+1 vertices) by coning
    from its lexicographically smallest vertex over the facets avoiding it."""
    if dim <= 0 or len(vertices) == dim + 1:
        return [tuple(vertices)]
    apex = vertices[0]
    simplices = []
    for facet in _proper_faces(vertices, halfspaces, dim):
        if apex in facet:
            continue
        for s in _triangulate_face(facet, halfspaces, dim - 1):
            simplices.append((apex,) + s)
    return simplices


def polytope_volume(halfspaces: list[Halfspace], dim: int) -> Fraction:
    """Euclidean volume of a bounded polytope given in H-form.

    Triangulates the boundary and sums the simplex cones over the vertex
    centroid; exact because every determinant is rational.  Degenerate
    (lower-dimensional or empty) input yields 0.
    """
    vertices = enumerate_vertices(halfspaces, dim)
    if affine_rank(vertices) < dim:
        return Fraction(0)
    k = Fraction(1, len(vertices))
    centroid = tuple(sum((v[i] for v in vertices), Fraction(0)) * k for i in range(dim))
    total = Fraction(0)
    for facet in _proper_faces(vertices, halfspaces, dim):
        for simplex in _triangulate_face(facet, halfspaces, dim - 1):
            rows = [[x - z for x, z in zip(v, centroid)] for v in simplex]
            total += abs(det_fraction(rows))
    fact = 1
    for i in range(2, dim + 1):
        fact *= i
    return total / fact
