# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; see ``_pykernels`` for the encoding."""

from cpython.mem cimport PyMem_Malloc, PyMem_Free


def reachable_positions(const long long[:] indptr, const long long[:] indices,
                        const long long[:] positions, Py_ssize_t start):
    cdef Py_ssize_t n = positions.shape[0]
    cdef Py_ssize_t top = 0, u, v, k
    cdef char *seen = <char *> PyMem_Malloc(n + 1)
    cdef Py_ssize_t *stack = <Py_ssize_t *> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    if seen == NULL or stack == NULL:
        PyMem_Free(seen)
        PyMem_Free(stack)
        raise MemoryError()
    found = []
    try:
        for u in range(n):
            seen[u] = 0
        seen[start] = 1
        stack[0] = start
        top = 1
        while top:
            top -= 1
            u = stack[top]
            if positions[u]:
                found.append(positions[u])
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if not seen[v]:
                    seen[v] = 1
                    stack[top] = v
                    top += 1
    finally:
        PyMem_Free(seen)
        PyMem_Free(stack)
    found.sort()
    return found


def discontinuous_nodes(const long long[:] indptr, const long long[:] indices,
                        const long long[:] positions):
    cdef Py_ssize_t n = positions.shape[0]
    cdef Py_ssize_t s, u, v, k, top
    cdef long long p, lo, hi, count
    cdef Py_ssize_t *stamp = <Py_ssize_t *> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *stack = <Py_ssize_t *> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    if stamp == NULL or stack == NULL:
        PyMem_Free(stamp)
        PyMem_Free(stack)
        raise MemoryError()
    out = []
    try:
        for u in range(n):
            stamp[u] = -1
        for s in range(n):
            stamp[s] = s
            stack[0] = s
            top = 1
            lo = n + 1
            hi = 0
            count = 0
            while top:
                top -= 1
                u = stack[top]
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
                        stack[top] = v
                        top += 1
            if count and hi - lo + 1 != count:
                out.append(s)
    finally:
        PyMem_Free(stamp)
        PyMem_Free(stack)
    return out


def find_cycles(const long long[:] indptr, const long long[:] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t root, u, v, k, top, i
    cdef char *color = <char *> PyMem_Malloc(n + 1)
    cdef Py_ssize_t *depth = <Py_ssize_t *> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *path = <Py_ssize_t *> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *cursor = <Py_ssize_t *> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    if color == NULL or depth == NULL or path == NULL or cursor == NULL:
        PyMem_Free(color)
        PyMem_Free(depth)
        PyMem_Free(path)
        PyMem_Free(cursor)
        raise MemoryError()
    cycles = []
    try:
        for u in range(n):
            color[u] = 0
        for root in range(n):
            if color[root]:
                continue
            color[root] = 1
            depth[root] = 0
            path[0] = root
            cursor[0] = indptr[root]
            top = 1
            while top:
                u = path[top - 1]
                k = cursor[top - 1]
                if k < indptr[u + 1]:
                    cursor[top - 1] = k + 1
                    v = indices[k]
                    if color[v] == 0:
                        color[v] = 1
                        depth[v] = top
                        path[top] = v
                        cursor[top] = indptr[v]
                        top += 1
                    elif color[v] == 1:
                        cycles.append([path[i] for i in range(depth[v], top)])
                else:
                    color[u] = 2
                    top -= 1
    finally:
        PyMem_Free(color)
        PyMem_Free(depth)
        PyMem_Free(path)
        PyMem_Free(cursor)
    return cycles
