# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled local-moving kernel for Louvain community detection.

Mirror of ``_louvain_pure.one_level``: identical arithmetic in identical
order, so compiled and pure runs produce bit-identical partitions. Keep the
two in sync.
"""

from libc.stdlib cimport free, malloc

KERNEL = "compiled"


cdef double _q(double[::1] in_c, double[::1] tot_c, double two_m, Py_ssize_t n):
    cdef double q = 0.0
    cdef double t
    cdef Py_ssize_t c
    for c in range(n):
        t = tot_c[c] / two_m
        q += in_c[c] / two_m - t * t
    return q


def one_level(long long[::1] indptr, long long[::1] indices, double[::1] weights,
              double[::1] loops, double[::1] degrees, double two_m,
              long long[::1] comm, long long[::1] order,
              double[::1] in_c, double[::1] tot_c):
    """One Louvain level: sweep nodes in ``order`` until no move improves Q.

    See the pure kernel for the contract; ``comm``, ``in_c`` and ``tot_c``
    are updated in place and (total moves, Q history) is returned.
    """
    cdef Py_ssize_t n = comm.shape[0]
    cdef double *w_buf = <double *>malloc(n * sizeof(double))
    cdef long long *stamp = <long long *>malloc(n * sizeof(long long))
    cdef long long *touched = <long long *>malloc(n * sizeof(long long))
    if w_buf == NULL or stamp == NULL or touched == NULL:
        free(w_buf); free(stamp); free(touched)
        raise MemoryError()

    cdef Py_ssize_t i, e, idx
    cdef long long v, c, c_old, best_c, n_touched
    cdef long long visit = 0
    cdef double k_v, w_old, w_best, gain, best_gain
    cdef long long moves, total_moves = 0
    q_history = []

    for i in range(n):
        stamp[i] = -1

    q_history.append(_q(in_c, tot_c, two_m, n))
    while True:
        moves = 0
        for idx in range(n):
            v = order[idx]
            visit += 1
            c_old = comm[v]
            k_v = degrees[v]
            # Weights toward each neighboring community, recorded in order of
            # first appearance along the CSR row (matches the pure kernel's
            # dict insertion order).
            n_touched = 0
            for e in range(indptr[v], indptr[v + 1]):
                c = comm[indices[e]]
                if stamp[c] == visit:
                    w_buf[c] += weights[e]
                else:
                    stamp[c] = visit
                    w_buf[c] = weights[e]
                    touched[n_touched] = c
                    n_touched += 1
            w_old = w_buf[c_old] if stamp[c_old] == visit else 0.0
            tot_c[c_old] -= k_v
            in_c[c_old] -= 2.0 * w_old + loops[v]
            best_c = c_old
            best_gain = w_old - k_v * tot_c[c_old] / two_m
            for i in range(n_touched):
                c = touched[i]
                if c == c_old:
                    continue
                gain = w_buf[c] - k_v * tot_c[c] / two_m
                if gain > best_gain:
                    best_gain = gain
                    best_c = c
            w_best = w_buf[best_c] if stamp[best_c] == visit else 0.0
            tot_c[best_c] += k_v
            in_c[best_c] += 2.0 * w_best + loops[v]
            comm[v] = best_c
            if best_c != c_old:
                moves += 1
        q_history.append(_q(in_c, tot_c, two_m, n))
        total_moves += moves
        if moves == 0:
            break

    free(w_buf); free(stamp); free(touched)
    return total_moves, q_history
