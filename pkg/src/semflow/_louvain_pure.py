"""Pure-Python local-moving kernel for Louvain community detection.

Fallback for the compiled extension in ``_louvain_core.pyx``; both implement
the exact same arithmetic in the exact same order, so they produce
bit-identical partitions. Keep the two in sync.

Graph convention (adjacency-matrix form): ``loops[i]`` is the diagonal entry
A_ii of node i, ``degrees[i] = loops[i] + sum of incident edge weights``, and
``two_m = sum(degrees)``. Modularity of the running community state is
``sum_c in_c/two_m - (tot_c/two_m)^2``.
"""

from __future__ import annotations

__all__ = ["one_level"]

KERNEL = "pure"


def _q(in_c, tot_c, two_m, n):
    q = 0.0
    for c in range(n):
        t = tot_c[c] / two_m
        q += in_c[c] / two_m - t * t
    return q


def one_level(indptr, indices, weights, loops, degrees, two_m, comm, order, in_c, tot_c):
    """One Louvain level: sweep nodes in ``order`` until no move improves Q.

    ``comm``, ``in_c`` and ``tot_c`` are updated in place. Returns
    (total moves, Q history) where the history holds Q before the first sweep
    and after every sweep. A node moves only on a strictly positive gain, so
    every sweep is non-decreasing in Q and the loop terminates.
    """
    indptr = indptr.tolist()
    indices = indices.tolist()
    weights = weights.tolist()
    loops_l = loops.tolist()
    degrees_l = degrees.tolist()
    comm_l = comm.tolist()
    order_l = order.tolist()
    in_l = in_c.tolist()
    tot_l = tot_c.tolist()

    n = len(comm_l)
    q_history = [_q(in_l, tot_l, two_m, n)]
    total_moves = 0
    while True:
        moves = 0
        for v in order_l:
            c_old = comm_l[v]
            k_v = degrees_l[v]
            # Weights toward each neighboring community, keyed in order of
            # first appearance along the CSR row (determinism).
            w_vc = {}
            for e in range(indptr[v], indptr[v + 1]):
                c = comm_l[indices[e]]
                if c in w_vc:
                    w_vc[c] += weights[e]
                else:
                    w_vc[c] = weights[e]
            w_old = w_vc.get(c_old, 0.0)
            tot_l[c_old] -= k_v
            in_l[c_old] -= 2.0 * w_old + loops_l[v]
            best_c = c_old
            best_gain = w_old - k_v * tot_l[c_old] / two_m
            for c, w in w_vc.items():
                if c == c_old:
                    continue
                gain = w - k_v * tot_l[c] / two_m
                if gain > best_gain:
                    best_gain = gain
                    best_c = c
            w_best = w_vc.get(best_c, 0.0)
            tot_l[best_c] += k_v
            in_l[best_c] += 2.0 * w_best + loops_l[v]
            comm_l[v] = best_c
            if best_c != c_old:
                moves += 1
        q_history.append(_q(in_l, tot_l, two_m, n))
        total_moves += moves
        if moves == 0:
            break

    comm[:] = comm_l
    in_c[:] = in_l
    tot_c[:] = tot_l
    return total_moves, q_history
