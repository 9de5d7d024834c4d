# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) kernel for i dpsi/dt = H(t) psi.

Twin of _rk_fallback.rk45_propagate: identical tableau and step controller.
H(t) = H0 + f1(t) V1 + f2(t) V2 with real symmetric parts; the state is
split into real and imaginary components so each stage costs six dgemv calls
instead of full complex arithmetic.
"""

from libc.math cimport exp, sqrt, fabs, isfinite, fmin, fmax, pow

import numpy as np
cimport numpy as cnp
from scipy.linalg.cython_blas cimport dgemv

cnp.import_array()

cdef int ENV_CONST = 0
cdef int ENV_GAUSSIAN = 1

cdef double[7] C_NODES = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0]
cdef double[7][6] A_COEF = [
    [0, 0, 0, 0, 0, 0],
    [1.0 / 5.0, 0, 0, 0, 0, 0],
    [3.0 / 40.0, 9.0 / 40.0, 0, 0, 0, 0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0, 0, 0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0, 0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0, 0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
     11.0 / 84.0],
]
cdef double[7] B5 = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0,
                     -2187.0 / 6784.0, 11.0 / 84.0, 0.0]
cdef double[7] B4 = [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0,
                     -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0]


cdef inline void _envelope(int env_kind, double p1, double p2, double t,
                           double* f1, double* f2) noexcept:
    cdef double x1, x2
    if env_kind == ENV_CONST:
        f1[0] = p1
        f2[0] = p2
    else:
        x1 = (t - p2) / p1
        x2 = (t + p2) / p1
        f1[0] = exp(-x1 * x1)
        f2[0] = exp(-x2 * x2)


cdef void _apply_h(int n, double* h0, double* v1, double* v2,
                   double f1, double f2, double* x, double* out) noexcept:
    # out = (H0 + f1 V1 + f2 V2) x; matrices are symmetric so the
    # row/column-major distinction in dgemv is immaterial.
    cdef char trans = b'N'
    cdef int inc = 1
    cdef double one = 1.0, zero = 0.0
    dgemv(&trans, &n, &n, &one, h0, &n, x, &inc, &zero, out, &inc)
    if f1 != 0.0:
        dgemv(&trans, &n, &n, &f1, v1, &n, x, &inc, &one, out, &inc)
    if f2 != 0.0:
        dgemv(&trans, &n, &n, &f2, v2, &n, x, &inc, &one, out, &inc)


cdef inline void _deriv(int n, double* h0, double* v1, double* v2,
                        int env_kind, double p1, double p2, double t,
                        double* u, double* v, double* kre, double* kim,
                        double* work) noexcept:
    # psi = u + i v; dpsi/dt = -i H psi  =>  du/dt = H v, dv/dt = -H u
    cdef double f1, f2
    cdef int i
    _envelope(env_kind, p1, p2, t, &f1, &f2)
    _apply_h(n, h0, v1, v2, f1, f2, v, kre)
    _apply_h(n, h0, v1, v2, f1, f2, u, work)
    for i in range(n):
        kim[i] = -work[i]


def rk45_propagate(cnp.ndarray[double, ndim=2, mode="c"] h0,
                   cnp.ndarray[double, ndim=2, mode="c"] v1,
                   cnp.ndarray[double, ndim=2, mode="c"] v2,
                   psi, double t0, double t1, int env_kind,
                   double p1, double p2, double rtol, double atol,
                   double max_step):
    """Propagate psi from t0 to t1.  Returns (psi_final, n_accepted, status)."""
    cdef int n = h0.shape[0]
    psi_c = np.ascontiguousarray(psi, dtype=complex)
    cdef cnp.ndarray[double, ndim=1] u = np.ascontiguousarray(psi_c.real)
    cdef cnp.ndarray[double, ndim=1] v = np.ascontiguousarray(psi_c.imag)
    cdef double duration = t1 - t0
    if duration <= 0:
        return psi_c.copy(), 0, 0

    cdef cnp.ndarray[double, ndim=2] kre = np.empty((7, n))
    cdef cnp.ndarray[double, ndim=2] kim = np.empty((7, n))
    cdef cnp.ndarray[double, ndim=1] yire = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] yiim = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] y5re = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] y5im = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] work = np.empty(n)

    cdef double t = t0
    cdef double h = fmin(max_step, 1e-2 * duration)
    cdef long n_accepted = 0
    cdef int status = 0
    cdef int i, j, stage
    cdef double a, b, e, acc_re, acc_im, ere, eim, sc, ynorm, y5norm
    cdef double err, factor, f1, f2

    _deriv(n, &h0[0, 0], &v1[0, 0], &v2[0, 0], env_kind, p1, p2, t,
           &u[0], &v[0], &kre[0, 0], &kim[0, 0], &work[0])

    while t < t1 - 1e-12 * duration:
        h = fmin(h, t1 - t)
        for stage in range(1, 7):
            for i in range(n):
                acc_re = u[i]
                acc_im = v[i]
                for j in range(stage):
                    a = A_COEF[stage][j]
                    if a != 0.0:
                        acc_re += h * a * kre[j, i]
                        acc_im += h * a * kim[j, i]
                yire[i] = acc_re
                yiim[i] = acc_im
            _deriv(n, &h0[0, 0], &v1[0, 0], &v2[0, 0], env_kind, p1, p2,
                   t + C_NODES[stage] * h, &yire[0], &yiim[0],
                   &kre[stage, 0], &kim[stage, 0], &work[0])
        # 5th-order solution and embedded error estimate
        err = 0.0
        for i in range(n):
            acc_re = u[i]
            acc_im = v[i]
            ere = 0.0
            eim = 0.0
            for j in range(7):
                b = B5[j]
                if b != 0.0:
                    acc_re += h * b * kre[j, i]
                    acc_im += h * b * kim[j, i]
                e = B5[j] - B4[j]
                if e != 0.0:
                    ere += h * e * kre[j, i]
                    eim += h * e * kim[j, i]
            y5re[i] = acc_re
            y5im[i] = acc_im
            ynorm = sqrt(u[i] * u[i] + v[i] * v[i])
            y5norm = sqrt(acc_re * acc_re + acc_im * acc_im)
            sc = atol + rtol * fmax(ynorm, y5norm)
            err += (ere * ere + eim * eim) / (sc * sc)
        err = sqrt(err / n)
        if not isfinite(err):
            status = 1
            break
        if err <= 1.0:
            t += h
            for i in range(n):
                u[i] = y5re[i]
                v[i] = y5im[i]
                kre[0, i] = kre[6, i]
                kim[0, i] = kim[6, i]
            n_accepted += 1
        if err == 0.0:
            factor = 5.0
        else:
            factor = fmin(5.0, fmax(0.2, 0.9 * pow(err, -0.2)))
        h = fmin(h * factor, max_step)
        if h < 1e-14 * duration:
            status = 2
            break

    out = u + 1j * v
    return out, int(n_accepted), status
