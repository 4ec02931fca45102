# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled replication kernel.

Mirrors ``efron_dual._fallback`` operation for operation so both produce
bit-identical floats.  Orientation signs use static floating-point
filters only; when a filter cannot certify a sign (or a degenerate
configuration turns up) the replication is flagged and the caller redoes
it with the exact pure-Python code.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, sqrt, cos, sin, pow, fabs
from libc.stdlib cimport malloc, free
from libc.stdint cimport uint64_t, int64_t, uint8_t

cnp.import_array()

NAME = "cython"

cdef extern from *:
    """
    #include <stdint.h>
    static inline void efd_philox4x64(const uint64_t *ctr, uint64_t k0, uint64_t k1, uint64_t *out)
    {
        uint64_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
        int r;
        for (r = 0; r < 10; r++) {
            unsigned __int128 p0, p1;
            uint64_t n0, n2;
            if (r) {
                k0 += 0x9E3779B97F4A7C15ULL;
                k1 += 0xBB67AE8584CAA73BULL;
            }
            p0 = (unsigned __int128)0xD2E7470EE14C6C93ULL * c0;
            p1 = (unsigned __int128)0xCA5A826395121157ULL * c2;
            n0 = (uint64_t)(p1 >> 64) ^ c1 ^ k0;
            n2 = (uint64_t)(p0 >> 64) ^ c3 ^ k1;
            c0 = n0;
            c1 = (uint64_t)p1;
            c2 = n2;
            c3 = (uint64_t)p0;
        }
        out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
    }
    """
    void efd_philox4x64(const uint64_t *ctr, uint64_t k0, uint64_t k1, uint64_t *out) nogil

cdef enum:
    INTERVAL = 0
    CUBE = 1
    SIMPLEX = 2
    BALL = 3
    POLYGON = 4

cdef double EPS = 1.1102230246251565e-16          # 2**-53
cdef double CCW_BOUND = (3.0 + 16.0 * EPS) * EPS
cdef double O3D_BOUND = (7.0 + 56.0 * EPS) * EPS
cdef double TWO_PI = 6.283185307179586
cdef double INV53 = 1.1102230246251565e-16
cdef double INV52 = 2.220446049250313e-16


cdef inline double unit(uint64_t w) noexcept nogil:
    return <double>(w >> 11) * INV53


cdef inline double unit_open(uint64_t w) noexcept nogil:
    return (<double>(w >> 12) + 0.5) * INV52


cdef void fill_words(uint64_t seed, uint64_t rep, int nwords, uint64_t *out) noexcept nogil:
    cdef uint64_t ctr[4]
    cdef uint64_t blk[4]
    cdef int b, i, w = 0
    ctr[1] = 0
    ctr[2] = 0
    ctr[3] = 0
    b = 0
    while w < nwords:
        ctr[0] = <uint64_t>(b + 1)
        efd_philox4x64(ctr, seed, rep, blk)
        for i in range(4):
            if w < nwords:
                out[w] = blk[i]
                w += 1
        b += 1


cdef int words_per_point(int code, int dim) noexcept nogil:
    if code == INTERVAL or code == CUBE or code == BALL:
        return dim
    if code == SIMPLEX:
        return dim + 1
    return 3


cdef void make_points(int code, const double *prm, int dim, int npts,
                      const uint64_t *wd, double *pts) noexcept nogil:
    cdef int p, c, i, w = 0, nv, m, tri
    cdef double lo, side, s, acc, r, rho, th, z, ph, sz, t, a, b, total
    cdef double e[4]
    cdef const double *vx
    cdef const double *cum
    if code == INTERVAL or code == CUBE:
        lo = prm[0]
        side = prm[1]
        for p in range(npts):
            for c in range(dim):
                pts[p * dim + c] = lo + side * unit(wd[w + c])
            w += dim
    elif code == SIMPLEX:
        nv = dim + 1
        for p in range(npts):
            for i in range(nv):
                e[i] = -log(unit_open(wd[w + i]))
            w += nv
            s = 0.0
            for i in range(nv):
                s += e[i]
            for c in range(dim):
                acc = 0.0
                for i in range(nv):
                    acc += (e[i] / s) * prm[i * dim + c]
                pts[p * dim + c] = acc
    elif code == BALL:
        r = prm[0]
        for p in range(npts):
            if dim == 1:
                pts[p] = r * (2.0 * unit(wd[w]) - 1.0)
            elif dim == 2:
                rho = r * sqrt(unit(wd[w]))
                th = TWO_PI * unit(wd[w + 1])
                pts[2 * p] = rho * cos(th)
                pts[2 * p + 1] = rho * sin(th)
            else:
                z = 2.0 * unit(wd[w]) - 1.0
                ph = TWO_PI * unit(wd[w + 1])
                sz = 1.0 - z * z
                if sz < 0.0:
                    sz = 0.0
                sz = sqrt(sz)
                rho = r * pow(unit_open(wd[w + 2]), 1.0 / 3.0)
                pts[3 * p] = rho * sz * cos(ph)
                pts[3 * p + 1] = rho * sz * sin(ph)
                pts[3 * p + 2] = rho * z
            w += dim
    else:
        m = <int>prm[0]
        vx = prm + 1
        cum = prm + 1 + 2 * m
        total = cum[m - 3]
        for p in range(npts):
            t = unit(wd[w]) * total
            tri = m - 3
            for i in range(m - 2):
                if t < cum[i]:
                    tri = i
                    break
            a = unit(wd[w + 1])
            b = unit(wd[w + 2])
            if a + b > 1.0:
                a = 1.0 - a
                b = 1.0 - b
            pts[2 * p] = vx[0] + a * (vx[2 * (tri + 1)] - vx[0]) + b * (vx[2 * (tri + 2)] - vx[0])
            pts[2 * p + 1] = vx[1] + a * (vx[2 * (tri + 1) + 1] - vx[1]) + b * (vx[2 * (tri + 2) + 1] - vx[1])
            w += 3


# ------------------------------------------------------------------ predicates
# Return +1/-1 when the sign is certified, 0 when it is not.

cdef inline int orient2d(double ax, double ay, double bx, double by,
                         double cx, double cy) noexcept nogil:
    cdef double detleft = (ax - cx) * (by - cy)
    cdef double detright = (ay - cy) * (bx - cx)
    cdef double det = detleft - detright
    cdef double bound = CCW_BOUND * (fabs(detleft) + fabs(detright))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return 0


cdef inline double det3(const double *a, const double *b, const double *c,
                        const double *d, double *perm) noexcept nogil:
    cdef double adx = a[0] - d[0], ady = a[1] - d[1], adz = a[2] - d[2]
    cdef double bdx = b[0] - d[0], bdy = b[1] - d[1], bdz = b[2] - d[2]
    cdef double cdx = c[0] - d[0], cdy = c[1] - d[1], cdz = c[2] - d[2]
    cdef double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy
    cdef double cdxady = cdx * ady, adxcdy = adx * cdy
    cdef double adxbdy = adx * bdy, bdxady = bdx * ady
    perm[0] = ((fabs(bdxcdy) + fabs(cdxbdy)) * fabs(adz)
               + (fabs(cdxady) + fabs(adxcdy)) * fabs(bdz)
               + (fabs(adxbdy) + fabs(bdxady)) * fabs(cdz))
    return adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady)


cdef inline int orient3d(const double *a, const double *b, const double *c,
                         const double *d) noexcept nogil:
    cdef double perm
    cdef double det = det3(a, b, c, d, &perm)
    cdef double bound = O3D_BOUND * perm
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return 0


# ------------------------------------------------------------------ hulls
# Each returns 0 on success, 1 when the replication must be redone exactly.
# mark[i] is set to 1 for every vertex i < m.

cdef int hull1(const double *x, int m, double *vol, int *count, uint8_t *mark) noexcept nogil:
    cdef int i, lo = 0, hi = 0
    for i in range(m):
        mark[i] = 0
    for i in range(1, m):
        if x[i] < x[lo]:
            lo = i
        if x[i] > x[hi]:
            hi = i
    vol[0] = x[hi] - x[lo]
    mark[lo] = 1
    mark[hi] = 1
    count[0] = 1 if lo == hi else 2
    return 0


cdef inline bint lex_less(const double *p, int i, int j) noexcept nogil:
    # strict (x, y) order; ties keep the original order in a stable sort
    if p[2 * i] != p[2 * j]:
        return p[2 * i] < p[2 * j]
    return p[2 * i + 1] < p[2 * j + 1]


cdef void sort2(const double *p, int m, int *idx, int *tmp) noexcept nogil:
    """Stable sort of idx[0:m] by (x, y): insertion runs, then bottom-up merges."""
    cdef int i, j, v, lo, mid, hi, a, b, k, width
    cdef int RUN = 16
    lo = 0
    while lo < m:
        hi = lo + RUN if lo + RUN < m else m
        for i in range(lo + 1, hi):
            v = idx[i]
            j = i - 1
            while j >= lo and lex_less(p, v, idx[j]):
                idx[j + 1] = idx[j]
                j -= 1
            idx[j + 1] = v
        lo += RUN
    width = RUN
    while width < m:
        lo = 0
        while lo < m:
            mid = lo + width if lo + width < m else m
            hi = lo + 2 * width if lo + 2 * width < m else m
            a = lo
            b = mid
            k = lo
            while a < mid and b < hi:
                if lex_less(p, idx[b], idx[a]):
                    tmp[k] = idx[b]
                    b += 1
                else:
                    tmp[k] = idx[a]
                    a += 1
                k += 1
            while a < mid:
                tmp[k] = idx[a]
                a += 1
                k += 1
            while b < hi:
                tmp[k] = idx[b]
                b += 1
                k += 1
            lo += 2 * width
        for i in range(m):
            idx[i] = tmp[i]
        width *= 2


cdef int hull2(const double *p, int m, double *vol, int *count, uint8_t *mark,
               int *iw) noexcept nogil:
    # iw needs 4*m + 4 ints
    cdef int *idx = iw
    cdef int *tmp = iw + m
    cdef int *uniq = iw + 2 * m
    cdef int *hull = iw + 3 * m
    cdef int i, nu, h, start, o, q, t
    cdef double x0, y0, acc
    for i in range(m):
        mark[i] = 0
        idx[i] = i
    sort2(p, m, idx, tmp)
    nu = 0
    for i in range(m):
        q = idx[i]
        if nu == 0 or p[2 * uniq[nu - 1]] != p[2 * q] or p[2 * uniq[nu - 1] + 1] != p[2 * q + 1]:
            uniq[nu] = q
            nu += 1
    if nu <= 2:
        for i in range(nu):
            mark[uniq[i]] = 1
        vol[0] = 0.0
        count[0] = nu
        return 0
    h = 0
    for i in range(nu):
        q = uniq[i]
        while h >= 2:
            o = orient2d(p[2 * hull[h - 2]], p[2 * hull[h - 2] + 1],
                         p[2 * hull[h - 1]], p[2 * hull[h - 1] + 1],
                         p[2 * q], p[2 * q + 1])
            if o == 0:
                return 1
            if o > 0:
                break
            h -= 1
        hull[h] = q
        h += 1
    h -= 1
    start = h
    for i in range(nu - 1, -1, -1):
        q = uniq[i]
        while h - start >= 2:
            o = orient2d(p[2 * hull[h - 2]], p[2 * hull[h - 2] + 1],
                         p[2 * hull[h - 1]], p[2 * hull[h - 1] + 1],
                         p[2 * q], p[2 * q + 1])
            if o == 0:
                return 1
            if o > 0:
                break
            h -= 1
        hull[h] = q
        h += 1
    h -= 1
    x0 = p[2 * hull[0]]
    y0 = p[2 * hull[0] + 1]
    acc = 0.0
    for i in range(1, h - 1):
        acc += ((p[2 * hull[i]] - x0) * (p[2 * hull[i + 1] + 1] - y0)
                - (p[2 * hull[i] + 1] - y0) * (p[2 * hull[i + 1]] - x0))
    vol[0] = 0.5 * acc
    for i in range(h):
        mark[hull[i]] = 1
    count[0] = h
    return 0


cdef int hull3(const double *P, int m, double *vol, int *count, uint8_t *mark,
               int *iw, int cap) noexcept nogil:
    # iw holds two face buffers of 3*cap ints, plus cap visibility flags
    # and 6*cap ints of edge scratch.
    cdef int *faces = iw
    cdef int *nxt = iw + 3 * cap
    cdef int *vis = iw + 6 * cap
    cdef int *edges = iw + 7 * cap          # visible edges (pairs)
    cdef int nf, p, f, o, nv, ne, nk, nn, i, j, e0, e1, a, b, c, g, found
    cdef int s
    cdef const double *q
    cdef double perm, acc
    cdef int ea[3]
    cdef int eb[3]
    for i in range(m):
        mark[i] = 0
    vol[0] = 0.0
    if m == 1:
        mark[0] = 1
        count[0] = 1
        return 0
    if P[3] == P[0] and P[4] == P[1] and P[5] == P[2]:
        return 1
    if m == 2:
        mark[0] = 1
        mark[1] = 1
        count[0] = 2
        return 0
    # non-collinearity of the first three points must be certified
    if (orient2d(P[0], P[1], P[3], P[4], P[6], P[7]) == 0
            and orient2d(P[1], P[2], P[4], P[5], P[7], P[8]) == 0
            and orient2d(P[2], P[0], P[5], P[3], P[8], P[6]) == 0):
        return 1
    if m == 3:
        mark[0] = 1
        mark[1] = 1
        mark[2] = 1
        count[0] = 3
        return 0
    s = orient3d(P, P + 3, P + 6, P + 9)
    if s == 0:
        return 1
    if s > 0:
        faces[0] = 0; faces[1] = 1; faces[2] = 2
        faces[3] = 1; faces[4] = 0; faces[5] = 3
        faces[6] = 0; faces[7] = 2; faces[8] = 3
        faces[9] = 2; faces[10] = 1; faces[11] = 3
    else:
        faces[0] = 1; faces[1] = 0; faces[2] = 2
        faces[3] = 0; faces[4] = 1; faces[5] = 3
        faces[6] = 2; faces[7] = 0; faces[8] = 3
        faces[9] = 1; faces[10] = 2; faces[11] = 3
    nf = 4
    for p in range(4, m):
        q = P + 3 * p
        nv = 0
        for f in range(nf):
            o = orient3d(P + 3 * faces[3 * f], P + 3 * faces[3 * f + 1], P + 3 * faces[3 * f + 2], q)
            if o == 0:
                return 1
            vis[f] = 1 if o < 0 else 0
            nv += vis[f]
        if nv == 0:
            continue
        ne = 0
        for f in range(nf):
            if vis[f]:
                a = faces[3 * f]
                b = faces[3 * f + 1]
                c = faces[3 * f + 2]
                edges[2 * ne] = a; edges[2 * ne + 1] = b; ne += 1
                edges[2 * ne] = b; edges[2 * ne + 1] = c; ne += 1
                edges[2 * ne] = c; edges[2 * ne + 1] = a; ne += 1
        nk = 0
        for f in range(nf):
            if not vis[f]:
                nxt[3 * nk] = faces[3 * f]
                nxt[3 * nk + 1] = faces[3 * f + 1]
                nxt[3 * nk + 2] = faces[3 * f + 2]
                nk += 1
        nn = nk
        for f in range(nf):
            if not vis[f]:
                continue
            ea[0] = faces[3 * f]; eb[0] = faces[3 * f + 1]
            ea[1] = faces[3 * f + 1]; eb[1] = faces[3 * f + 2]
            ea[2] = faces[3 * f + 2]; eb[2] = faces[3 * f]
            for i in range(3):
                e0 = ea[i]
                e1 = eb[i]
                found = 0
                for j in range(ne):
                    if edges[2 * j] == e1 and edges[2 * j + 1] == e0:
                        found = 1
                        break
                if not found:
                    if nn >= cap:
                        return 1
                    nxt[3 * nn] = e0
                    nxt[3 * nn + 1] = e1
                    nxt[3 * nn + 2] = p
                    nn += 1
        # new faces around p: unique horizon starts, certified convex seams
        for i in range(nk, nn):
            found = 0
            g = -1
            for j in range(nk, nn):
                if nxt[3 * j] == nxt[3 * i]:
                    found += 1
                if nxt[3 * j] == nxt[3 * i + 1]:
                    g = j
            if found != 1 or g < 0:
                return 1
            if orient3d(P + 3 * nxt[3 * i], P + 3 * nxt[3 * i + 1], q, P + 3 * nxt[3 * g + 1]) <= 0:
                return 1
        for i in range(3 * nn):
            faces[i] = nxt[i]
        nf = nn
    acc = 0.0
    for f in range(nf):
        acc += det3(P + 3 * faces[3 * f], P + 3 * faces[3 * f + 1], P + 3 * faces[3 * f + 2], P, &perm)
    vol[0] = acc / 6.0
    c = 0
    for f in range(3 * nf):
        mark[faces[f]] = 1
    for i in range(m):
        c += mark[i]
    count[0] = c
    return 0


cdef int hull_any(const double *pts, int dim, int m, double *vol, int *count,
                  uint8_t *mark, int *iw, int cap) noexcept nogil:
    if dim == 1:
        return hull1(pts, m, vol, count, mark)
    if dim == 2:
        return hull2(pts, m, vol, count, mark, iw)
    return hull3(pts, m, vol, count, mark, iw, cap)


cdef inline int face_cap(int npts) noexcept nogil:
    return 6 * npts + 16


cdef inline int iwork_size(int npts) noexcept nogil:
    return 4 * npts + 4 + 13 * face_cap(npts)


# ------------------------------------------------------------------ Python API

def philox_block(counter, key):
    """One Philox4x64-10 block; used to check against numpy's generator."""
    cdef uint64_t ctr[4]
    cdef uint64_t out[4]
    cdef int i
    for i in range(4):
        ctr[i] = <uint64_t>int(counter[i])
    efd_philox4x64(ctr, <uint64_t>int(key[0]), <uint64_t>int(key[1]), out)
    return [int(out[i]) for i in range(4)]


def sample_points(int code, params, int dim, int npts, uint64_t seed, uint64_t rep):
    cdef double[::1] prm = np.ascontiguousarray(params, dtype=np.float64)
    cdef int nwords = words_per_point(code, dim) * npts
    cdef cnp.ndarray[uint64_t, ndim=1] wd = np.empty(nwords, dtype=np.uint64)
    cdef cnp.ndarray[double, ndim=2] pts = np.empty((npts, dim), dtype=np.float64)
    fill_words(seed, rep, nwords, <uint64_t *>wd.data)
    make_points(code, &prm[0], dim, npts, <uint64_t *>wd.data, <double *>pts.data)
    return pts


def hull_points(points):
    """``(volume, vertex_count, vertex_mask, flag)``; ``flag == 1`` means undecided."""
    cdef cnp.ndarray[double, ndim=2] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef int m = P.shape[0]
    cdef int dim = P.shape[1]
    cdef int cap = face_cap(m)
    cdef cnp.ndarray[uint8_t, ndim=1] mark = np.zeros(m, dtype=np.uint8)
    cdef int *iw = <int *>malloc(iwork_size(m) * sizeof(int))
    cdef double vol = 0.0
    cdef int count = 0, flag
    if iw == NULL:
        raise MemoryError
    try:
        flag = hull_any(<double *>P.data, dim, m, &vol, &count, <uint8_t *>mark.data, iw, cap)
    finally:
        free(iw)
    return vol, count, mark, flag


def simulate(int code, params, int dim, int npts, prefixes, uint64_t seed, int64_t r0, int64_t r1):
    """Compiled twin of ``_fallback.simulate``; see there for the contract."""
    cdef double[::1] prm = np.ascontiguousarray(params, dtype=np.float64)
    cdef int64_t[::1] pre = np.ascontiguousarray(prefixes, dtype=np.int64)
    cdef int npre = pre.shape[0]
    cdef int64_t nrep = r1 - r0
    cdef cnp.ndarray[double, ndim=2] vols = np.zeros((nrep, npre), dtype=np.float64)
    cdef cnp.ndarray[int64_t, ndim=2] counts = np.zeros((nrep, npre), dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] lead = np.zeros(nrep, dtype=np.int64)
    cdef cnp.ndarray[uint8_t, ndim=1] flags = np.zeros(nrep, dtype=np.uint8)
    cdef double *vp = <double *>vols.data
    cdef int64_t *cp = <int64_t *>counts.data
    cdef int64_t *lp = <int64_t *>lead.data
    cdef uint8_t *fp = <uint8_t *>flags.data
    cdef const double *pp = &prm[0]
    cdef const int64_t *prp = &pre[0]
    cdef int nwords = words_per_point(code, dim) * npts
    cdef int cap = face_cap(npts)
    cdef uint64_t *wd = <uint64_t *>malloc(nwords * sizeof(uint64_t))
    cdef double *pts = <double *>malloc(npts * dim * sizeof(double))
    cdef uint8_t *mark = <uint8_t *>malloc(npts * sizeof(uint8_t))
    cdef uint8_t *fullmark = <uint8_t *>malloc(npts * sizeof(uint8_t))
    cdef int *iw = <int *>malloc(iwork_size(npts) * sizeof(int))
    cdef int64_t r, row
    cdef int col, m, cnt, bad, t, have_full
    cdef double vol
    if wd == NULL or pts == NULL or mark == NULL or fullmark == NULL or iw == NULL:
        free(wd); free(pts); free(mark); free(fullmark); free(iw)
        raise MemoryError
    with nogil:
        for row in range(nrep):
            r = r0 + row
            fill_words(seed, <uint64_t>r, nwords, wd)
            make_points(code, pp, dim, npts, wd, pts)
            bad = 0
            have_full = 0
            for col in range(npre):
                m = <int>prp[col]
                if hull_any(pts, dim, m, &vol, &cnt, mark, iw, cap):
                    bad = 1
                    break
                vp[row * npre + col] = vol
                cp[row * npre + col] = cnt
                if m == npts:
                    have_full = 1
                    for t in range(npts):
                        fullmark[t] = mark[t]
            if not bad and not have_full:
                if hull_any(pts, dim, npts, &vol, &cnt, fullmark, iw, cap):
                    bad = 1
            if bad:
                fp[row] = 1
                continue
            t = 0
            while t < npts and fullmark[t]:
                t += 1
            lp[row] = t
    free(wd); free(pts); free(mark); free(fullmark); free(iw)
    return vols, counts, lead, flags
