"""The annealing sweep kernel, written once and compiled on demand.

:func:`sweep` is deliberately plain: flat arrays, integer indexing and
arithmetic only, so the exact same function object can run interpreted (the
``numpy`` backend) or under ``numba.njit`` (the default backend) and produce
bit-identical trajectories.  To keep the two backends exactly reproducible,
the kernel contains no transcendental functions: the Metropolis test
``u < exp(-d / T)`` is evaluated as ``log(u) * T < -d`` with the logarithms
precomputed by the driver in numpy, leaving only multiplications and
comparisons (identically rounded everywhere) inside the kernel.

Per-move randomness is pre-drawn by the driver: a visit order (a permutation
of the unfrozen flat cell indices), a proposal bit per visit (each cell has
exactly two alternative labels: ``(a + 1 + bit) % 3``), and a log-uniform
acceptance threshold per visit.

The energy model must match :mod:`trifluid.gridmin.energy` exactly; the
driver recomputes the full energy from scratch after every sweep, so any
mismatch between this kernel's deltas and the global evaluation shows up
immediately as a non-monotone greedy trace.
"""

from __future__ import annotations


def sweep(
    labels,  # (H*W,) uint8, mutated in place
    domain,  # (H*W,) bool
    width,  # int
    height,  # int
    order,  # (n,) int64 flat indices of cells to visit, unfrozen only
    props,  # (n,) int64 proposal bits in {0, 1}
    log_unifs,  # (n,) float64 precomputed log of uniform(0,1) draws
    temperature,  # float; 0 means greedy (accept strict decreases only)
    sig,  # (3,3) float64 symmetric tension matrix, zero diagonal
    betas,  # (3,) float64 wetting coefficients
    rhos,  # (3,) float64 densities
    g,  # float gravity strength
    bedge,  # (H*W,) float64 boundary edge length per cell
    ycells,  # (H,) float64 cell-center y per row
    cell_area,  # float h*h
    penalty_c,  # float volume penalty coefficient
    counts,  # (3,) int64 per-fluid unfrozen cell counts, mutated in place
    targets,  # (3,) int64 per-fluid target counts
    use_volume,  # bool: include the volume penalty term
    offs,  # (K,2) int64 direction offsets (dx, dy)
    wts,  # (K,) float64 per-offset length weights, already times h
    log_delta,  # (n,) float64 out: proposed delta per visit (if log_moves)
    log_accept,  # (n,) uint8 out: 1 if accepted (if log_moves)
    log_moves,  # bool: fill the two arrays above
):
    """Run one sweep; returns (accepted_count, accumulated_energy_delta)."""
    n = order.shape[0]
    num_offsets = offs.shape[0]
    accepted = 0
    delta_sum = 0.0
    for i in range(n):
        cell = order[i]
        x = cell % width
        y = cell // width
        a = labels[cell]
        b = (a + 1 + props[i]) % 3

        d = 0.0
        for k in range(num_offsets):
            dx = offs[k, 0]
            dy = offs[k, 1]
            for s in range(2):
                if s == 1:
                    dx = -dx
                    dy = -dy
                nx = x + dx
                ny = y + dy
                if nx < 0 or nx >= width or ny < 0 or ny >= height:
                    continue
                ncell = ny * width + nx
                if not domain[ncell]:
                    continue
                nl = labels[ncell]
                d += wts[k] * (sig[b, nl] - sig[a, nl])

        d += (betas[b] - betas[a]) * bedge[cell]
        d += (rhos[b] - rhos[a]) * g * cell_area * ycells[y]
        if use_volume:
            before = abs(counts[a] - targets[a]) + abs(counts[b] - targets[b])
            after = abs(counts[a] - 1 - targets[a]) + abs(counts[b] + 1 - targets[b])
            d += penalty_c * cell_area * (after - before)

        if temperature > 0.0:
            accept = d <= 0.0 or log_unifs[i] * temperature < -d
        else:
            accept = d < 0.0

        if accept:
            labels[cell] = b
            counts[a] -= 1
            counts[b] += 1
            accepted += 1
            delta_sum += d
        if log_moves:
            log_delta[i] = d
            log_accept[i] = 1 if accept else 0
    return accepted, delta_sum
