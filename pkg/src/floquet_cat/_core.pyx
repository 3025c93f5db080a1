# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the numpy kernels in floquet_cat.kernels.

Dense linear algebra goes through BLAS (zgemv/zgemm); the modulated sparse
terms are applied as COO scatter loops with the e^{i nu t} coefficient
evaluated in C. Semantics must match kernels.py exactly.
"""

import numpy as np

from libc.math cimport cos, sin
from scipy.linalg.cython_blas cimport zgemm, zgemv

ctypedef double complex cplx


cdef void _mat_vec(cplx* a, cplx* x, cplx* y, int n, cplx alpha, cplx beta) noexcept nogil:
    # y = alpha * A_C @ x + beta * y for a C-ordered square matrix A
    cdef char trans = b'T'
    cdef int one = 1
    zgemv(&trans, &n, &n, &alpha, a, &n, x, &one, &beta, y, &one)


cdef void _mm(cplx* a, cplx* b, cplx* c, int n, cplx alpha, cplx beta) noexcept nogil:
    # C_C = alpha * A_C @ B_C + beta * C_C  (swap operands for Fortran BLAS)
    cdef char nt = b'N'
    zgemm(&nt, &nt, &n, &n, &n, &alpha, b, &n, a, &n, &beta, c, &n)


cdef void _mm_abdag(cplx* y, cplx* z, cplx* c, int n, cplx alpha, cplx beta) noexcept nogil:
    # C_C = alpha * Y_C @ Z_C^H + beta * C_C
    cdef char ct = b'C'
    cdef char nt = b'N'
    zgemm(&ct, &nt, &n, &n, &n, &alpha, z, &n, y, &n, &beta, c, &n)


cdef void _apply(const cplx[:, ::1] h0,
                 const int[::1] rows, const int[::1] cols, const cplx[::1] vals,
                 const long[::1] offsets, const cplx[::1] zs, const double[::1] nus,
                 double t, cplx alpha, const cplx[::1] x, cplx[::1] y) noexcept nogil:
    cdef int n = x.shape[0]
    cdef int nterms = zs.shape[0]
    cdef int k, i
    cdef long p
    cdef cplx coef
    cdef cplx zero = 0
    if h0.shape[0] == n:
        _mat_vec(<cplx*> &h0[0, 0], <cplx*> &x[0], &y[0], n, alpha, zero)
    else:
        for i in range(n):
            y[i] = 0
    for k in range(nterms):
        coef = alpha * zs[k] * (cos(nus[k] * t) + 1j * sin(nus[k] * t))
        for p in range(offsets[k], offsets[k + 1]):
            y[rows[p]] = y[rows[p]] + coef * vals[p] * x[cols[p]]


def ham_apply(h0, rows, cols, vals, offsets, zs, nus, double t, x, y):
    """y[:] = H(t) @ x."""
    cdef const cplx[:, ::1] h0v = h0
    cdef const int[::1] rv = rows
    cdef const int[::1] cv = cols
    cdef const cplx[::1] vv = vals
    cdef const long[::1] ov = offsets
    cdef const cplx[::1] zv = zs
    cdef const double[::1] nv = nus
    cdef const cplx[::1] xv = x
    cdef cplx[::1] yv = y
    cdef cplx one = 1
    with nogil:
        _apply(h0v, rv, cv, vv, ov, zv, nv, t, one, xv, yv)


def rk4_propagate(h0, rows, cols, vals, offsets, zs, nus, psi,
                  double t0, double dt, long nsteps):
    """In-place classical RK4 for d psi/dt = -i H(t) psi."""
    cdef const cplx[:, ::1] h0v = h0
    cdef const int[::1] rv = rows
    cdef const int[::1] cv = cols
    cdef const cplx[::1] vv = vals
    cdef const long[::1] ov = offsets
    cdef const cplx[::1] zv = zs
    cdef const double[::1] nv = nus
    cdef cplx[::1] y = psi
    cdef int n = y.shape[0]
    k1_a = np.empty(n, dtype=np.complex128)
    k2_a = np.empty(n, dtype=np.complex128)
    k3_a = np.empty(n, dtype=np.complex128)
    k4_a = np.empty(n, dtype=np.complex128)
    tmp_a = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] k1 = k1_a, k2 = k2_a, k3 = k3_a, k4 = k4_a, tmp = tmp_a
    cdef cplx minus_i = -1j
    cdef double t
    cdef long step
    cdef int i
    with nogil:
        for step in range(nsteps):
            t = t0 + step * dt
            _apply(h0v, rv, cv, vv, ov, zv, nv, t, minus_i, y, k1)
            for i in range(n):
                tmp[i] = y[i] + 0.5 * dt * k1[i]
            _apply(h0v, rv, cv, vv, ov, zv, nv, t + 0.5 * dt, minus_i, tmp, k2)
            for i in range(n):
                tmp[i] = y[i] + 0.5 * dt * k2[i]
            _apply(h0v, rv, cv, vv, ov, zv, nv, t + 0.5 * dt, minus_i, tmp, k3)
            for i in range(n):
                tmp[i] = y[i] + dt * k3[i]
            _apply(h0v, rv, cv, vv, ov, zv, nv, t + dt, minus_i, tmp, k4)
            for i in range(n):
                y[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


def lindblad_rhs(d0, drift_mats, drift_zs, drift_nus, c0, c1, c1_active, ch_freqs,
                 double t, rho, out):
    """out[:] = D(t) rho + rho D(t)^dag + sum_j c_j(t) rho c_j(t)^dag."""
    cdef const cplx[:, ::1] d0v = d0
    cdef const cplx[:, :, ::1] dmv = drift_mats
    cdef const cplx[::1] dzv = drift_zs
    cdef const double[::1] dnv = drift_nus
    cdef const cplx[:, :, ::1] c0v = c0
    cdef const cplx[:, :, ::1] c1v = c1
    cdef const unsigned char[::1] actv = c1_active
    cdef const double[::1] cfv = ch_freqs
    cdef const cplx[:, ::1] rv = rho
    cdef cplx[:, ::1] outv = out
    cdef int n = rho.shape[0]
    d_a = np.empty((n, n), dtype=np.complex128)
    cw_a = np.empty((n, n), dtype=np.complex128)
    x_a = np.empty((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] d = d_a
    cdef cplx[:, ::1] cw = cw_a
    cdef cplx[:, ::1] xw = x_a
    cdef int kd = dzv.shape[0]
    cdef int nch = c0v.shape[0]
    cdef int k, i, j
    cdef cplx coef
    cdef cplx one = 1, zero = 0
    with nogil:
        # assemble the drift
        for i in range(n):
            for j in range(n):
                d[i, j] = d0v[i, j]
        for k in range(kd):
            coef = dzv[k] * (cos(dnv[k] * t) + 1j * sin(dnv[k] * t))
            for i in range(n):
                for j in range(n):
                    d[i, j] = d[i, j] + coef * dmv[k, i, j]
        _mm(&d[0, 0], <cplx*> &rv[0, 0], &outv[0, 0], n, one, zero)
        _mm_abdag(<cplx*> &rv[0, 0], &d[0, 0], &outv[0, 0], n, one, one)
        # jump terms
        for k in range(nch):
            if actv[k]:
                coef = cos(cfv[k] * t) + 1j * sin(cfv[k] * t)
                for i in range(n):
                    for j in range(n):
                        cw[i, j] = c0v[k, i, j] + coef * c1v[k, i, j]
            else:
                for i in range(n):
                    for j in range(n):
                        cw[i, j] = c0v[k, i, j]
            _mm(&cw[0, 0], <cplx*> &rv[0, 0], &xw[0, 0], n, one, zero)
            _mm_abdag(&xw[0, 0], &cw[0, 0], &outv[0, 0], n, one, one)
