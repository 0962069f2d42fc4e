"""Pure-Python graph kernels.

All kernels work on a compact integer encoding of one graph:

* nodes are numbered ``0..n-1`` (terminals first, in surface order),
* ``indptr``/``indices`` is a CSR adjacency list over the filtered edges,
* ``positions[i]`` is the 1-based surface position of node ``i`` when it is
  a terminal and ``0`` otherwise.

The compiled module ``_ckernels`` implements the same functions with the
same results; ``tiger2.kernels`` picks one at import time.
"""


def reachable_positions(indptr, indices, positions, start):
    """Sorted surface positions of all terminals reachable from ``start``."""
    n = len(positions)
    seen = bytearray(n)
    seen[start] = 1
    stack = [start]
    found = []
    while stack:
        u = stack.pop()
        if positions[u]:
            found.append(positions[u])
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if not seen[v]:
                seen[v] = 1
                stack.append(v)
    found.sort()
    return found


def discontinuous_nodes(indptr, indices, positions):
    """Indices of nodes whose reachable terminals do not form an interval."""
    n = len(positions)
    stamp = [-1] * n
    out = []
    stack = []
    for s in range(n):
        stamp[s] = s
        stack.append(s)
        lo = n + 1
        hi = 0
        count = 0
        while stack:
            u = stack.pop()
            p = positions[u]
            if p:
                count += 1
                if p < lo:
                    lo = p
                if p > hi:
                    hi = p
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if stamp[v] != s:
                    stamp[v] = s
                    stack.append(v)
        if count and hi - lo + 1 != count:
            out.append(s)
    return out


def find_cycles(indptr, indices):
    """One cycle per DFS back edge, as lists of node indices.

    The search visits roots in index order and successors in CSR order, so
    the result is deterministic. An empty result means the relation is
    acyclic.
    """
    n = len(indptr) - 1
    color = bytearray(n)  # 0 unseen, 1 on the current path, 2 finished
    depth = [0] * n
    cycles = []
    for root in range(n):
        if color[root]:
            continue
        path = [root]
        cursor = [indptr[root]]
        color[root] = 1
        depth[root] = 0
        while path:
            u = path[-1]
            k = cursor[-1]
            if k < indptr[u + 1]:
                cursor[-1] = k + 1
                v = indices[k]
                if color[v] == 0:
                    color[v] = 1
                    depth[v] = len(path)
                    path.append(v)
                    cursor.append(indptr[v])
                elif color[v] == 1:
                    cycles.append(path[depth[v]:])
            else:
                color[u] = 2
                path.pop()
                cursor.pop()
    return cycles
