"""Hot numeric kernels: compensated prefix sums, discrete maximal operators,
and interval-family scans.

Every kernel is written once as a plain Python-over-numpy loop function and
compiled with numba when available.  The uncompiled functions are kept as a
pure-numpy fallback so results are bit-identical in both modes; selection is
controlled by the WEIGHTLAB_NUMBA environment variable ("0" disables the JIT
path).  benchmarks/bench_kernels.py times the two paths against each other.

Interval conventions used throughout:

* A function on the circle is a step density: sample i is the constant value
  on the cell [2*pi*i/G, 2*pi*(i+1)/G).
* Intervals are runs of 1..G consecutive cells, wrapping allowed.  Wrapped
  intervals are realised on a doubled sample array, so every cyclic interval
  appears as a chord (u, v) of the doubled prefix-sum graph with v - u <= G.
  Both the naive and the fast maximal operator take maxima over the same
  doubled chord family, which makes their outputs equal as floats, not just
  up to rounding.
* The mean of a multi-cell interval is (S[v] - S[u]) / (v - u) with S the
  compensated prefix array; single cells use the sample value itself.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_ENV_VAR = "WEIGHTLAB_NUMBA"


def _numba_requested() -> bool:
    return os.environ.get(NUMBA_ENV_VAR, "1").strip().lower() not in ("0", "false", "no")


# ---------------------------------------------------------------------------
# Kernel bodies (single source of truth; compiled below when numba is active).
# ---------------------------------------------------------------------------


def _neumaier_prefix(values):
    """Compensated (Neumaier) running prefix sums; prefix[0] = 0."""
    n = values.shape[0]
    out = np.empty(n + 1)
    out[0] = 0.0
    s = 0.0
    c = 0.0
    for i in range(n):
        v = values[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i + 1] = s + c
    return out


def _neumaier_total(values):
    n = values.shape[0]
    s = 0.0
    c = 0.0
    for i in range(n):
        v = values[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def _maximal_naive(values, S):
    """Exhaustive discrete uncentered maximal function.

    values: G nonneg samples; S: compensated prefix over the doubled array
    (length 2G+1).  Returns (M, arg_start, arg_len) with the per-point best
    interval under the tie order (largest mean, shortest, leftmost cyclic
    start).
    """
    G = values.shape[0]
    n = 2 * G
    M = np.empty(G)
    arg_start = np.empty(G, np.int64)
    arg_len = np.empty(G, np.int64)
    for i in range(G):
        M[i] = values[i]
        arg_start[i] = i
        arg_len[i] = 1
    # Monotone deque over interval starts, one sweep per length.
    dq = np.empty(n, np.int64)
    for L in range(2, G + 1):
        head = 0
        tail = 0  # dq[head:tail]
        amax = n - L
        for p in range(n):
            a_new = p
            if a_new <= amax:
                m_new = (S[a_new + L] - S[a_new]) / L
                while tail > head:
                    a_back = dq[tail - 1]
                    if (S[a_back + L] - S[a_back]) / L < m_new:
                        tail -= 1
                    else:
                        break
                dq[tail] = a_new
                tail += 1
            while tail > head and dq[head] < p - L + 1:
                head += 1
            if tail > head:
                a = dq[head]
                m = (S[a + L] - S[a]) / L
                i = p if p < G else p - G
                cyc = a if a < G else a - G
                if m > M[i] or (
                    m == M[i]
                    and (L < arg_len[i] or (L == arg_len[i] and cyc < arg_start[i]))
                ):
                    M[i] = m
                    arg_start[i] = cyc
                    arg_len[i] = L
    return M, arg_start, arg_len


def _hull_peak_upper(S, hull, start, count, xq, yq):
    """Max slope from (xq, yq) leftward-below to an upper convex chain.

    hull[start:start+count] holds x-indices ascending; the slope sequence
    toward a query left of the chain is unimodal, so a binary search finds
    the peak.  Ties resolve to the smaller x (shortest chord).
    """
    lo = start
    hi = start + count - 1
    while lo < hi:
        mid = (lo + hi) // 2
        x1 = hull[mid]
        x2 = hull[mid + 1]
        s1 = (S[x1] - yq) / (x1 - xq)
        s2 = (S[x2] - yq) / (x2 - xq)
        if s1 < s2:
            lo = mid + 1
        else:
            hi = mid
    x = hull[lo]
    return (S[x] - yq) / (x - xq), x


def _hull_peak_lower(S, hull, start, count, xq, yq):
    """Max slope from a lower convex chain up to the query (xq, yq) on its
    right.  Ties walk right so the shortest chord wins."""
    lo = start
    hi = start + count - 1
    while lo < hi:
        mid = (lo + hi) // 2
        x1 = hull[mid]
        x2 = hull[mid + 1]
        s1 = (yq - S[x1]) / (xq - x1)
        s2 = (yq - S[x2]) / (xq - x2)
        if s1 <= s2:
            lo = mid + 1
        else:
            hi = mid
    x = hull[lo]
    return (yq - S[x]) / (xq - x), x


def _maximal_fast(values, S):
    """Hull-tangent maximal function; same chord family as _maximal_naive.

    Level-by-level divide and conquer on the doubled cell range: chords of
    length >= 2 are scored at the unique block whose midpoint they cross, by
    combining a right-directed scan (tangents from each left prefix point to
    the upper hull of the succeeding points) with the mirrored left-directed
    scan; singleton chords seed the result.  The span cap v - u <= G is kept
    exact by growing each hull lazily so it always holds exactly the points
    admissible for the current query.  Cost O(G log^2 G).

    Hull pruning drops points collinear with their neighbours; chords tied
    in real arithmetic can round a few ulps of the prefix scale apart, so
    on inputs with exact ties the selected mean may sit marginally under
    the exhaustive scan's.
    """
    G = values.shape[0]
    n = 2 * G
    M = np.empty(n)
    arg_u = np.empty(n, np.int64)
    arg_v = np.empty(n, np.int64)
    for p in range(n):
        M[p] = values[p % G]
        arg_u[p] = p
        arg_v[p] = p + 1
    hull = np.empty(n + 2, np.int64)
    seg = 2
    while seg // 2 < n:
        for lo in range(0, n, seg):
            mid = lo + seg // 2
            hi = lo + seg
            if hi > n:
                hi = n
            if mid >= hi:
                continue
            # Left scan: strips p in [lo, mid); chords (p, v), mid < v <=
            # min(hi, p + G).  Upper hull over v grows rightward with p.
            hcount = 0
            nextv = mid + 1
            run = -np.inf
            run_u = -1
            run_v = -1
            for p in range(lo, mid):
                bound = p + G
                if bound > hi:
                    bound = hi
                while nextv <= bound:
                    v = nextv
                    while hcount >= 2:
                        x1 = hull[hcount - 2]
                        x2 = hull[hcount - 1]
                        if (x2 - x1) * (S[v] - S[x1]) >= (v - x1) * (S[x2] - S[x1]):
                            hcount -= 1
                        else:
                            break
                    hull[hcount] = v
                    hcount += 1
                    nextv += 1
                if hcount > 0:
                    slope, xv = _hull_peak_upper(S, hull, 0, hcount, p, S[p])
                    if slope > run or (
                        slope == run
                        and (
                            xv - p < run_v - run_u
                            or (xv - p == run_v - run_u and p % G < run_u % G)
                        )
                    ):
                        run = slope
                        run_u = p
                        run_v = xv
                if run_u >= 0:
                    span = run_v - run_u
                    cyc = run_u % G
                    if run > M[p] or (
                        run == M[p]
                        and (
                            span < arg_v[p] - arg_u[p]
                            or (span == arg_v[p] - arg_u[p] and cyc < arg_u[p] % G)
                        )
                    ):
                        M[p] = run
                        arg_u[p] = run_u
                        arg_v[p] = run_v
            # Right scan: strips p in [mid, hi); chords (u, p + 1) with
            # max(lo, p + 1 - G) <= u < mid.  Lower hull over u grows
            # leftward as p decreases, stored from the top of the buffer.
            head = n + 2
            tail = n + 2
            nextu = mid - 1
            run = -np.inf
            run_u = -1
            run_v = -1
            for p in range(hi - 1, mid - 1, -1):
                v = p + 1
                low = v - G
                if low < lo:
                    low = lo
                while nextu >= low:
                    u = nextu
                    while tail - head >= 2:
                        x1 = hull[head]
                        x2 = hull[head + 1]
                        if (S[x1] - S[u]) * (x2 - u) >= (S[x2] - S[u]) * (x1 - u):
                            head += 1
                        else:
                            break
                    head -= 1
                    hull[head] = u
                    nextu -= 1
                if tail - head > 0:
                    slope, xu = _hull_peak_lower(S, hull, head, tail - head, v, S[v])
                    if slope > run or (
                        slope == run
                        and (
                            v - xu < run_v - run_u
                            or (v - xu == run_v - run_u and xu % G < run_u % G)
                        )
                    ):
                        run = slope
                        run_u = xu
                        run_v = v
                if run_u >= 0:
                    span = run_v - run_u
                    cyc = run_u % G
                    if run > M[p] or (
                        run == M[p]
                        and (
                            span < arg_v[p] - arg_u[p]
                            or (span == arg_v[p] - arg_u[p] and cyc < arg_u[p] % G)
                        )
                    ):
                        M[p] = run
                        arg_u[p] = run_u
                        arg_v[p] = run_v
        seg *= 2
    # Merge the two copies of each cell.
    out = np.empty(G)
    out_start = np.empty(G, np.int64)
    out_len = np.empty(G, np.int64)
    for i in range(G):
        m1 = M[i]
        m2 = M[i + G]
        l1 = arg_v[i] - arg_u[i]
        l2 = arg_v[i + G] - arg_u[i + G]
        c1 = arg_u[i] % G
        c2 = arg_u[i + G] % G
        if m2 > m1 or (m2 == m1 and (l2 < l1 or (l2 == l1 and c2 < c1))):
            out[i] = m2
            out_start[i] = c2
            out_len[i] = l2
        else:
            out[i] = m1
            out_start[i] = c1
            out_len[i] = l1
    return out, out_start, out_len


def _ap_scan_all(S1, S2, G, pm1):
    """sup over wrapped intervals of mean(w) * mean(dual)^pm1.

    S1, S2: doubled compensated prefixes of w and w^(-1/(p-1)); lengths
    1..G-1 (full-circle arcs excluded).  pm1 == 1 avoids pow in the loop.
    """
    best = 0.0
    if pm1 == 1.0:
        for L in range(1, G):
            for a in range(G):
                v = ((S1[a + L] - S1[a]) / L) * ((S2[a + L] - S2[a]) / L)
                if v > best:
                    best = v
    else:
        for L in range(1, G):
            for a in range(G):
                v = ((S1[a + L] - S1[a]) / L) * ((S2[a + L] - S2[a]) / L) ** pm1
                if v > best:
                    best = v
    return best


def _ap_scan_triadic(S1, S2, G, pm1, kmax):
    best = 0.0
    block = G
    for _k in range(kmax):
        block = block // 3
        count = G // block
        for j in range(count):
            a = j * block
            v = ((S1[a + block] - S1[a]) / block) * (
                (S2[a + block] - S2[a]) / block
            ) ** pm1
            if v > best:
                best = v
    return best


def _rh_scan_all(S1, S2, G, inv_q):
    """sup over wrapped intervals of mean(w^(1+d))^(1/(1+d)) / mean(w)."""
    best = 0.0
    for L in range(1, G):
        for a in range(G):
            m1 = (S1[a + L] - S1[a]) / L
            if m1 <= 0.0:
                continue
            m2 = (S2[a + L] - S2[a]) / L
            v = m2**inv_q / m1
            if v > best:
                best = v
    return best


def _rh_scan_triadic(S1, S2, G, inv_q, kmax):
    best = 0.0
    block = G
    for _k in range(kmax):
        block = block // 3
        count = G // block
        for j in range(count):
            a = j * block
            m1 = (S1[a + block] - S1[a]) / block
            if m1 <= 0.0:
                continue
            m2 = (S2[a + block] - S2[a]) / block
            v = m2**inv_q / m1
            if v > best:
                best = v
    return best


def _adjacent_ratio_scan(S, G, block):
    """Max over adjacent wrapped blocks of the two-sided mass ratio."""
    best = 1.0
    count = G // block
    for j in range(count):
        a = j * block
        b = a + block
        m1 = S[b] - S[a]
        if b + block <= G:
            m2 = S[b + block] - S[b]
        else:
            m2 = (S[G] - S[b]) + (S[block] - S[0])
        if m1 == 0.0 and m2 == 0.0:
            continue
        if m1 <= 0.0 or m2 <= 0.0:
            return np.inf
        r = m1 / m2
        if r < 1.0:
            r = 1.0 / r
        if r > best:
            best = r
    return best


def _bmo_scan_all(values, S, sorted_vals, ranks, G):
    """sup over wrapped intervals (lengths 1..G-1) of mean |f - mean_I f|.

    Fenwick trees over doubled value ranks hold (count, sum) of the samples
    currently inside the interval; each extension costs O(log G).
    """
    n = 2 * G
    size = n + 1
    cnt = np.zeros(size, np.int64)
    sm = np.zeros(size)
    best = 0.0
    for a in range(G):
        for i in range(1, size):
            cnt[i] = 0
            sm[i] = 0.0
        for b in range(a, a + G - 1):
            r = ranks[b] + 1
            while r < size:
                cnt[r] += 1
                sm[r] += values[b % G]
                r += r & (-r)
            L = b - a + 1
            c = (S[b + 1] - S[a]) / L
            # rightmost sorted position with value <= c
            lo = 0
            hi = n
            while lo < hi:
                mid = (lo + hi) // 2
                if sorted_vals[mid] <= c:
                    lo = mid + 1
                else:
                    hi = mid
            nle = 0
            sle = 0.0
            r = lo
            while r > 0:
                nle += cnt[r]
                sle += sm[r]
                r -= r & (-r)
            tot = S[b + 1] - S[a]
            osc = (c * nle - sle) + ((tot - sle) - c * (L - nle))
            osc /= L
            if osc > best:
                best = osc
    return best


def _bmo_scan_triadic(values, S, G, kmax):
    best = 0.0
    block = G
    for _k in range(kmax):
        block = block // 3
        count = G // block
        for j in range(count):
            a = j * block
            c = (S[a + block] - S[a]) / block
            acc = 0.0
            comp = 0.0
            for i in range(a, a + block):
                v = abs(values[i] - c)
                t = acc + v
                if abs(acc) >= abs(v):
                    comp += (acc - t) + v
                else:
                    comp += (v - t) + acc
                acc = t
            osc = (acc + comp) / block
            if osc > best:
                best = osc
    return best


def _chord_arc_scan(px, py, s, total, pi_idx, pj_idx):
    """Max over index pairs of min(arc, total-arc) / chord."""
    best = 0.0
    for k in range(pi_idx.shape[0]):
        i = pi_idx[k]
        j = pj_idx[k]
        arc = s[j] - s[i]
        if arc < 0.0:
            arc = -arc
        rest = total - arc
        if rest < arc:
            arc = rest
        dx = px[j] - px[i]
        dy = py[j] - py[i]
        chord = np.sqrt(dx * dx + dy * dy)
        if chord > 0.0:
            v = arc / chord
            if v > best:
                best = v
    return best


_KERNEL_BODIES = {
    "neumaier_prefix": _neumaier_prefix,
    "neumaier_total": _neumaier_total,
    "maximal_naive": _maximal_naive,
    "maximal_fast": _maximal_fast,
    "ap_scan_all": _ap_scan_all,
    "ap_scan_triadic": _ap_scan_triadic,
    "rh_scan_all": _rh_scan_all,
    "rh_scan_triadic": _rh_scan_triadic,
    "adjacent_ratio_scan": _adjacent_ratio_scan,
    "bmo_scan_all": _bmo_scan_all,
    "bmo_scan_triadic": _bmo_scan_triadic,
    "chord_arc_scan": _chord_arc_scan,
}

PYTHON_KERNELS = dict(_KERNEL_BODIES)
NUMBA_KERNELS = None
USING_NUMBA = False

if _numba_requested():
    try:
        from numba import njit

        _hull_peak_upper_jit = njit(cache=True)(_hull_peak_upper)
        _hull_peak_lower_jit = njit(cache=True)(_hull_peak_lower)

        def _compile(name, fn):
            if name == "maximal_fast":
                # rebind the hull helpers to their compiled versions
                src_globals = dict(fn.__globals__)
                src_globals["_hull_peak_upper"] = _hull_peak_upper_jit
                src_globals["_hull_peak_lower"] = _hull_peak_lower_jit
                import types

                fn = types.FunctionType(
                    fn.__code__, src_globals, fn.__name__, fn.__defaults__
                )
            return njit(cache=True)(fn)

        NUMBA_KERNELS = {
            name: _compile(name, fn) for name, fn in _KERNEL_BODIES.items()
        }
        USING_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba
        NUMBA_KERNELS = None
        USING_NUMBA = False

_ACTIVE = NUMBA_KERNELS if USING_NUMBA else PYTHON_KERNELS

neumaier_prefix = _ACTIVE["neumaier_prefix"]
neumaier_total = _ACTIVE["neumaier_total"]
maximal_naive_kernel = _ACTIVE["maximal_naive"]
maximal_fast_kernel = _ACTIVE["maximal_fast"]
ap_scan_all = _ACTIVE["ap_scan_all"]
ap_scan_triadic = _ACTIVE["ap_scan_triadic"]
rh_scan_all = _ACTIVE["rh_scan_all"]
rh_scan_triadic = _ACTIVE["rh_scan_triadic"]
adjacent_ratio_scan = _ACTIVE["adjacent_ratio_scan"]
bmo_scan_all = _ACTIVE["bmo_scan_all"]
bmo_scan_triadic = _ACTIVE["bmo_scan_triadic"]
chord_arc_scan = _ACTIVE["chord_arc_scan"]


def doubled_prefix(values: np.ndarray) -> np.ndarray:
    """Compensated prefix over two concatenated periods (length 2G+1)."""
    return neumaier_prefix(np.concatenate((values, values)))
