"""Hot numeric kernels: squared-distance matrices and the transport simplex.

Every kernel here is written so that it compiles under ``numba.njit`` and
also runs unchanged as plain Python. ``_accel.USE_NUMBA`` picks the path.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

# arc states
STATE_TREE = 0
STATE_LOWER = 1

# status codes returned by network_simplex
OPTIMAL = 0
MAX_ITER_REACHED = 1
UNBOUNDED = 2
INFEASIBLE = 3

# in the pure-Python path, block pricing is vectorized with numpy
_VECTOR_PRICING = not USE_NUMBA


@njit(cache=True)
def sqdist_matrix(x, y):
    """Dense matrix of squared Euclidean distances between rows of x and y."""
    n, d = x.shape
    m = y.shape[0]
    out = np.empty((n, m))
    for i in range(n):
        for j in range(m):
            s = 0.0
            for k in range(d):
                t = x[i, k] - y[j, k]
                s += t * t
            out[i, j] = s
    return out


if not USE_NUMBA:

    def sqdist_matrix(x, y):  # noqa: F811
        diff = x[:, None, :] - y[None, :, :]
        return np.einsum("ijk,ijk->ij", diff, diff)


@njit(cache=True, nogil=True)
def network_simplex(cost, supply_a, supply_b, max_iter):
    """Exact transportation simplex on the complete bipartite graph.

    Follows the primal network simplex with an artificial root, a strongly
    feasible spanning tree (Cunningham's leaving-arc rule) and block-search
    pricing. Costs are rescaled to max 1 internally.

    Parameters
    ----------
    cost : (n1, n2) float64 array, nonnegative
    supply_a : (n1,) float64, nonnegative source masses
    supply_b : (n2,) float64, nonnegative sink masses, same total as supply_a
    max_iter : int, pivot budget

    Returns
    -------
    flow : (n1, n2) float64 array
    status : int, one of OPTIMAL, MAX_ITER_REACHED, UNBOUNDED, INFEASIBLE
    n_pivots : int
    """
    n1, n2 = cost.shape
    n_nodes = n1 + n2
    root = n_nodes
    n_arcs = n1 * n2
    all_arcs = n_arcs + n_nodes

    scale = 0.0
    for i in range(n1):
        for j in range(n2):
            if cost[i, j] > scale:
                scale = cost[i, j]
    if scale <= 0.0:
        scale = 1.0

    src = np.empty(all_arcs, dtype=np.int64)
    tgt = np.empty(all_arcs, dtype=np.int64)
    arc_cost = np.empty(all_arcs)
    flow = np.zeros(all_arcs)
    state = np.empty(all_arcs, dtype=np.int8)
    for i in range(n1):
        for j in range(n2):
            e = i * n2 + j
            src[e] = i
            tgt[e] = n1 + j
            arc_cost[e] = cost[i, j] / scale
            state[e] = STATE_LOWER

    art_cost = 2.0 * n_nodes
    tol = 1e-14 * art_cost

    parent = np.empty(n_nodes + 1, dtype=np.int64)
    pred = np.empty(n_nodes + 1, dtype=np.int64)
    fwd = np.zeros(n_nodes + 1, dtype=np.bool_)
    depth = np.zeros(n_nodes + 1, dtype=np.int64)
    pi = np.zeros(n_nodes + 1)
    first_child = np.full(n_nodes + 1, -1, dtype=np.int64)
    next_sib = np.full(n_nodes + 1, -1, dtype=np.int64)
    prev_sib = np.full(n_nodes + 1, -1, dtype=np.int64)
    stack = np.empty(n_nodes + 1, dtype=np.int64)

    parent[root] = -1
    pred[root] = -1
    for u in range(n_nodes):
        e = n_arcs + u
        sup = supply_a[u] if u < n1 else -supply_b[u - n1]
        parent[u] = root
        pred[u] = e
        depth[u] = 1
        state[e] = STATE_TREE
        if sup >= 0.0:
            fwd[u] = True
            pi[u] = 0.0
            src[e] = u
            tgt[e] = root
            flow[e] = sup
            arc_cost[e] = 0.0
        else:
            fwd[u] = False
            pi[u] = art_cost
            src[e] = root
            tgt[e] = u
            flow[e] = -sup
            arc_cost[e] = art_cost
        # push u onto the child list of the root
        next_sib[u] = first_child[root]
        if first_child[root] != -1:
            prev_sib[first_child[root]] = u
        first_child[root] = u

    block = int(np.sqrt(n_arcs))
    if block < 10:
        block = 10
    n_blocks = (n_arcs + block - 1) // block

    next_arc = 0
    status = MAX_ITER_REACHED
    n_pivots = 0
    while n_pivots < max_iter:
        # --- pricing: scan blocks cyclically, stop at first improving block
        in_arc = -1
        min_c = 0.0
        start = next_arc
        for _ in range(n_blocks + 1):
            stop = start + block
            if stop > n_arcs:
                stop = n_arcs
            if _VECTOR_PRICING:
                seg = np.arange(start, stop)
                rc = arc_cost[seg] + pi[src[seg]] - pi[tgt[seg]]
                rc = np.where(state[seg] == STATE_LOWER, rc, 0.0)
                k = int(np.argmin(rc))
                if rc[k] < min_c:
                    min_c = rc[k]
                    in_arc = start + k
            else:
                for e in range(start, stop):
                    if state[e] == STATE_LOWER:
                        c = arc_cost[e] + pi[src[e]] - pi[tgt[e]]
                        if c < min_c:
                            min_c = c
                            in_arc = e
            start = stop if stop < n_arcs else 0
            if min_c < -tol:
                break
        if not (min_c < -tol):
            status = OPTIMAL
            break
        next_arc = start

        # --- apex of the cycle
        u = src[in_arc]
        v = tgt[in_arc]
        while u != v:
            if depth[u] > depth[v]:
                u = parent[u]
            elif depth[v] > depth[u]:
                v = parent[v]
            else:
                u = parent[u]
                v = parent[v]
        join = u

        # --- leaving arc: last blocking arc along the cycle orientation
        first = src[in_arc]
        second = tgt[in_arc]
        delta = np.inf
        u_out = -1
        result = 0
        u = first
        while u != join:
            if fwd[u]:
                d = flow[pred[u]]
                if d < delta:
                    delta = d
                    u_out = u
                    result = 1
            u = parent[u]
        u = second
        while u != join:
            if not fwd[u]:
                d = flow[pred[u]]
                if d <= delta:
                    delta = d
                    u_out = u
                    result = 2
            u = parent[u]
        if result == 0:
            status = UNBOUNDED
            break
        if result == 1:
            u_in = first
            v_in = second
        else:
            u_in = second
            v_in = first

        # --- augment
        if delta > 0.0:
            flow[in_arc] += delta
            u = src[in_arc]
            while u != join:
                if fwd[u]:
                    flow[pred[u]] -= delta
                else:
                    flow[pred[u]] += delta
                u = parent[u]
            u = tgt[in_arc]
            while u != join:
                if fwd[u]:
                    flow[pred[u]] += delta
                else:
                    flow[pred[u]] -= delta
                u = parent[u]
        out_arc = pred[u_out]
        state[in_arc] = STATE_TREE
        state[out_arc] = STATE_LOWER
        flow[out_arc] = 0.0

        if fwd[u_in]:
            sigma = pi[v_in] - pi[u_in] - arc_cost[in_arc]
        else:
            sigma = pi[v_in] - pi[u_in] + arc_cost[in_arc]

        # --- re-hang the cut subtree from u_in, reversing the stem u_in..u_out
        prev_node = v_in
        prev_arc = in_arc
        prev_fwd = src[in_arc] == u_in
        node = u_in
        while True:
            old_parent = parent[node]
            old_arc = pred[node]
            old_fwd = fwd[node]
            # unlink node from old_parent's children
            ps = prev_sib[node]
            ns = next_sib[node]
            if ps != -1:
                next_sib[ps] = ns
            else:
                first_child[old_parent] = ns
            if ns != -1:
                prev_sib[ns] = ps
            # link under its new parent
            parent[node] = prev_node
            pred[node] = prev_arc
            fwd[node] = prev_fwd
            prev_sib[node] = -1
            next_sib[node] = first_child[prev_node]
            if first_child[prev_node] != -1:
                prev_sib[first_child[prev_node]] = node
            first_child[prev_node] = node
            if node == u_out:
                break
            prev_node = node
            prev_arc = old_arc
            prev_fwd = not old_fwd
            node = old_parent

        # --- potentials and depths over the moved subtree
        stack[0] = u_in
        sp = 1
        while sp > 0:
            sp -= 1
            w = stack[sp]
            pi[w] += sigma
            depth[w] = depth[parent[w]] + 1
            ch = first_child[w]
            while ch != -1:
                stack[sp] = ch
                sp += 1
                ch = next_sib[ch]

        n_pivots += 1

    if status == OPTIMAL:
        mass = 0.0
        for u in range(n_nodes):
            mass += flow[n_arcs + u]
        total = 0.0
        for i in range(n1):
            total += supply_a[i]
        if mass > 1e-9 * (total + 1.0):
            status = INFEASIBLE

    out = np.empty((n1, n2))
    for i in range(n1):
        for j in range(n2):
            f = flow[i * n2 + j]
            out[i, j] = f if f > 0.0 else 0.0
    return out, status, n_pivots
