# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: quaternion matrix product and one-sided Jacobi sweeps."""

import numpy as np
from libc.math cimport sqrt, fabs


def qmatmul(const double[:, :, ::1] a, const double[:, :, ::1] b):
    cdef Py_ssize_t m = a.shape[0], k = a.shape[1], n = b.shape[1]
    cdef Py_ssize_t i, j, t
    cdef double a0, a1, a2, a3, b0, b1, b2, b3
    cdef double s0, s1, s2, s3
    out = np.zeros((m, n, 4), dtype=np.float64)
    cdef double[:, :, ::1] o = out
    if b.shape[0] != k:
        raise ValueError("inner dimensions differ")
    with nogil:
        for i in range(m):
            for j in range(n):
                s0 = 0.0
                s1 = 0.0
                s2 = 0.0
                s3 = 0.0
                for t in range(k):
                    a0 = a[i, t, 0]
                    a1 = a[i, t, 1]
                    a2 = a[i, t, 2]
                    a3 = a[i, t, 3]
                    b0 = b[t, j, 0]
                    b1 = b[t, j, 1]
                    b2 = b[t, j, 2]
                    b3 = b[t, j, 3]
                    s0 += a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3
                    s1 += a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2
                    s2 += a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1
                    s3 += a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0
                o[i, j, 0] = s0
                o[i, j, 1] = s1
                o[i, j, 2] = s2
                o[i, j, 3] = s3
    return out


cdef void _rotate(double* wr, double* wi, Py_ssize_t ld, Py_ssize_t rows, Py_ssize_t p, Py_ssize_t q,
                  double c, double s, double pr, double pi) noexcept nogil:
    # col_p <- c col_p - s conj(ph) col_q ; col_q <- s ph col_p + c col_q
    cdef Py_ssize_t i
    cdef double apr, api, aqr, aqi
    cdef double* xr = wr + p * ld
    cdef double* xi = wi + p * ld
    cdef double* yr = wr + q * ld
    cdef double* yi = wi + q * ld
    for i in range(rows):
        apr = xr[i]
        api = xi[i]
        aqr = yr[i]
        aqi = yi[i]
        xr[i] = c * apr - s * (pr * aqr + pi * aqi)
        xi[i] = c * api - s * (pr * aqi - pi * aqr)
        yr[i] = s * (pr * apr - pi * api) + c * aqr
        yi[i] = s * (pr * api + pi * apr) + c * aqi


def jacobi_sweeps(double[::1, :] wr, double[::1, :] wi, double[::1, :] vr, double[::1, :] vi,
                  int max_sweeps, double tol):
    """One-sided Jacobi on the columns of ``wr + i wi``, accumulating into ``vr + i vi``.

    All four arrays are Fortran-ordered and updated in place.  Returns the
    number of sweeps used, or -1 when ``max_sweeps`` ran out.
    """
    cdef Py_ssize_t m = wr.shape[0], n = wr.shape[1], p, q, i
    cdef double alpha, beta, gr, gi, g, zeta, t, c, s
    cdef double* pwr = &wr[0, 0]
    cdef double* pwi = &wi[0, 0]
    cdef double* pvr = &vr[0, 0]
    cdef double* pvi = &vi[0, 0]
    cdef double* xr
    cdef double* xi
    cdef double* yr
    cdef double* yi
    cdef int sweep, used = -1
    cdef bint rotated
    with nogil:
        for sweep in range(max_sweeps):
            rotated = False
            for p in range(n - 1):
                xr = pwr + p * m
                xi = pwi + p * m
                for q in range(p + 1, n):
                    yr = pwr + q * m
                    yi = pwi + q * m
                    alpha = 0.0
                    beta = 0.0
                    gr = 0.0
                    gi = 0.0
                    for i in range(m):
                        alpha = alpha + xr[i] * xr[i] + xi[i] * xi[i]
                        beta = beta + yr[i] * yr[i] + yi[i] * yi[i]
                        gr = gr + xr[i] * yr[i] + xi[i] * yi[i]
                        gi = gi + xr[i] * yi[i] - xi[i] * yr[i]
                    g = sqrt(gr * gr + gi * gi)
                    if g == 0.0 or g <= tol * sqrt(alpha) * sqrt(beta):
                        continue
                    rotated = True
                    zeta = (beta - alpha) / (2.0 * g)
                    if fabs(zeta) > 1e150:
                        t = 0.5 / zeta
                    elif zeta >= 0.0:
                        t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                    else:
                        t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = c * t
                    _rotate(pwr, pwi, m, m, p, q, c, s, gr / g, gi / g)
                    _rotate(pvr, pvi, n, n, p, q, c, s, gr / g, gi / g)
            if not rotated:
                used = sweep + 1
                break
    return used


cdef inline void _qrot(double* x, double* y, Py_ssize_t rows, double c, double s,
                       double u0, double u1, double u2, double u3) noexcept nogil:
    # x <- c x - s y conj(u) ; y <- s x u + c y   (right multiplication by scalars)
    cdef Py_ssize_t i
    cdef double a0, a1, a2, a3, b0, b1, b2, b3
    cdef double p0, p1, p2, p3, r0, r1, r2, r3
    for i in range(rows):
        a0 = x[4 * i]
        a1 = x[4 * i + 1]
        a2 = x[4 * i + 2]
        a3 = x[4 * i + 3]
        b0 = y[4 * i]
        b1 = y[4 * i + 1]
        b2 = y[4 * i + 2]
        b3 = y[4 * i + 3]
        # p = b * conj(u)
        p0 = b0 * u0 + b1 * u1 + b2 * u2 + b3 * u3
        p1 = -b0 * u1 + b1 * u0 - b2 * u3 + b3 * u2
        p2 = -b0 * u2 + b1 * u3 + b2 * u0 - b3 * u1
        p3 = -b0 * u3 - b1 * u2 + b2 * u1 + b3 * u0
        # r = a * u
        r0 = a0 * u0 - a1 * u1 - a2 * u2 - a3 * u3
        r1 = a0 * u1 + a1 * u0 + a2 * u3 - a3 * u2
        r2 = a0 * u2 - a1 * u3 + a2 * u0 + a3 * u1
        r3 = a0 * u3 + a1 * u2 - a2 * u1 + a3 * u0
        x[4 * i] = c * a0 - s * p0
        x[4 * i + 1] = c * a1 - s * p1
        x[4 * i + 2] = c * a2 - s * p2
        x[4 * i + 3] = c * a3 - s * p3
        y[4 * i] = s * r0 + c * b0
        y[4 * i + 1] = s * r1 + c * b1
        y[4 * i + 2] = s * r2 + c * b2
        y[4 * i + 3] = s * r3 + c * b3


def qjacobi_sweeps(double[:, :, ::1] w, double[:, :, ::1] v, int max_sweeps, double tol):
    """One-sided Jacobi over quaternion columns.

    ``w[p]`` is column ``p`` of the working matrix (``rows x 4`` doubles) and
    ``v[p]`` column ``p`` of the accumulated right factor.  Returns the
    number of sweeps used, or -1 when ``max_sweeps`` ran out.
    """
    cdef Py_ssize_t n = w.shape[0], m = w.shape[1], p, q, i
    cdef double alpha, beta, g0, g1, g2, g3, g, zeta, t, c, s
    cdef double a0, a1, a2, a3, b0, b1, b2, b3
    cdef double* pw = &w[0, 0, 0] if n > 0 and m > 0 else NULL
    cdef double* pv = &v[0, 0, 0] if n > 0 else NULL
    cdef double* x
    cdef double* y
    cdef int sweep, used = -1
    cdef bint rotated
    if n < 2 or m == 0:
        return 1
    with nogil:
        for sweep in range(max_sweeps):
            rotated = False
            for p in range(n - 1):
                x = pw + 4 * m * p
                for q in range(p + 1, n):
                    y = pw + 4 * m * q
                    alpha = 0.0
                    beta = 0.0
                    g0 = 0.0
                    g1 = 0.0
                    g2 = 0.0
                    g3 = 0.0
                    for i in range(m):
                        a0 = x[4 * i]
                        a1 = x[4 * i + 1]
                        a2 = x[4 * i + 2]
                        a3 = x[4 * i + 3]
                        b0 = y[4 * i]
                        b1 = y[4 * i + 1]
                        b2 = y[4 * i + 2]
                        b3 = y[4 * i + 3]
                        alpha = alpha + a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3
                        beta = beta + b0 * b0 + b1 * b1 + b2 * b2 + b3 * b3
                        # conj(a) * b
                        g0 = g0 + a0 * b0 + a1 * b1 + a2 * b2 + a3 * b3
                        g1 = g1 + a0 * b1 - a1 * b0 - a2 * b3 + a3 * b2
                        g2 = g2 + a0 * b2 + a1 * b3 - a2 * b0 - a3 * b1
                        g3 = g3 + a0 * b3 - a1 * b2 + a2 * b1 - a3 * b0
                    g = sqrt(g0 * g0 + g1 * g1 + g2 * g2 + g3 * g3)
                    if g == 0.0 or g <= tol * sqrt(alpha) * sqrt(beta):
                        continue
                    rotated = True
                    zeta = (beta - alpha) / (2.0 * g)
                    if fabs(zeta) > 1e150:
                        t = 0.5 / zeta
                    elif zeta >= 0.0:
                        t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                    else:
                        t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = c * t
                    _qrot(x, y, m, c, s, g0 / g, g1 / g, g2 / g, g3 / g)
                    _qrot(pv + 4 * n * p, pv + 4 * n * q, n, c, s, g0 / g, g1 / g, g2 / g, g3 / g)
            if not rotated:
                used = sweep + 1
                break
    return used
