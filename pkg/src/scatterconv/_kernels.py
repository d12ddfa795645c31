"""Compiled inner loops for the streaming engine.

Kept in one place so the arithmetic order is auditable: per input sample
the products x * ir[i] are added slot by slot in increasing tap order,
exactly like the whole-signal scatter in core.py.  That shared order is
what makes streamed and batch outputs bit-identical, so nothing here may
reassociate or fuse the float ops (numba's default strict FP semantics).
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def scatter_block(ring, ir, block, out, read_index, live, threshold):
    """Process one block of input samples through the residue ring.

    ring        circular residue buffer, len(ring) >= len(ir)
    ir          active impulse response
    block       input samples
    out         output array, same length as block
    read_index  slot the next output sample is read from
    live        number of schedule slots possibly holding residue
    threshold   inputs with |x| <= threshold scatter nothing

    Returns the updated (read_index, live).
    """
    cap = ring.shape[0]
    nh = ir.shape[0]
    ri = read_index
    for n in range(block.shape[0]):
        x = block[n]
        if abs(x) > threshold:
            head = cap - ri
            if nh <= head:
                for i in range(nh):
                    ring[ri + i] += x * ir[i]
            else:
                for i in range(head):
                    ring[ri + i] += x * ir[i]
                for i in range(nh - head):
                    ring[i] += x * ir[head + i]
            if live < nh:
                live = nh
        out[n] = ring[ri]
        ring[ri] = 0.0
        ri += 1
        if ri == cap:
            ri = 0
        if live > 0:
            live -= 1
    return ri, live


def warm_up():
    """Trigger JIT compilation so timed runs never include it."""
    ring = np.zeros(4)
    out = np.empty(2)
    scatter_block(ring, np.ones(3), np.zeros(2), out, 0, 0, 0.0)
