"""Pure-Python subsumption search; the fallback for :mod:`ckaclose._csubsume`.

Posets are encoded as parallel sequences ``labels[i]`` (small ints) and
``preds[i]`` (bitmask of strict predecessors of event ``i``).  Events of the
source poset must be numbered in a topological order.
"""


def find_subsumption(src_labels, src_preds, dst_labels, dst_preds):
    """Find an order- and label-preserving bijection from ``src`` onto ``dst``.

    Returns ``h`` as a list (``h[i]`` is the image of source event ``i``) or
    ``None``.  Source predecessors always precede the event, so checking the
    images of already-placed predecessors is enough.
    """
    n = len(src_labels)
    if n != len(dst_labels):
        return None
    if sorted(src_labels) != sorted(dst_labels):
        return None

    src_succ = [0] * n
    dst_succ = [0] * n
    for i in range(n):
        m = src_preds[i]
        while m:
            low = m & -m
            src_succ[low.bit_length() - 1] += 1
            m ^= low
        m = dst_preds[i]
        while m:
            low = m & -m
            dst_succ[low.bit_length() - 1] += 1
            m ^= low
    src_npred = [bin(p).count("1") for p in src_preds]
    dst_npred = [bin(p).count("1") for p in dst_preds]

    cands = []
    for i in range(n):
        row = [
            j
            for j in range(n)
            if dst_labels[j] == src_labels[i]
            and dst_npred[j] >= src_npred[i]
            and dst_succ[j] >= src_succ[i]
        ]
        if not row:
            return None
        cands.append(row)

    h = [-1] * n
    pos = [0] * n
    used = 0
    i = 0
    while i >= 0:
        if i == n:
            return h
        if h[i] >= 0:
            used &= ~(1 << h[i])
            h[i] = -1
        need = 0
        m = src_preds[i]
        while m:
            low = m & -m
            need |= 1 << h[low.bit_length() - 1]
            m ^= low
        row = cands[i]
        k = pos[i]
        while k < len(row):
            j = row[k]
            k += 1
            if not (used >> j) & 1 and dst_preds[j] & need == need:
                h[i] = j
                used |= 1 << j
                break
        pos[i] = k
        if h[i] >= 0:
            i += 1
            if i < n:
                pos[i] = 0
        else:
            pos[i] = 0
            i -= 1
    return None
