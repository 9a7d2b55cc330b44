# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels for the penalty search.

Same contracts as _fallback: expm_skew and pair_stats on small C-contiguous
complex128 matrices.  Products are plain loops (faster than BLAS dispatch at
these sizes); eigenvalues come from LAPACK zheevd.  Inputs are trusted, the
search layer validates.
"""

import numpy as np

from libc.stdlib cimport free, malloc
from libc.math cimport cos, sin, sqrt
from scipy.linalg.cython_lapack cimport zheevd

cdef double complex I = 1j


cdef void _mm(int n, double complex* a, double complex* b, double complex* c) noexcept nogil:
    cdef int i, j, k
    cdef double complex acc
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = acc + a[i * n + k] * b[k * n + j]
            c[i * n + j] = acc


cdef void _mmh(int n, double complex* a, double complex* b, double complex* c) noexcept nogil:
    # c = a^H @ b
    cdef int i, j, k
    cdef double complex acc
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = acc + a[k * n + i].conjugate() * b[k * n + j]
            c[i * n + j] = acc


cdef double _fdiff(int n, double complex* a, double complex* b) noexcept nogil:
    cdef int i
    cdef double acc = 0.0
    cdef double complex z
    for i in range(n * n):
        z = a[i] - b[i]
        acc += z.real * z.real + z.imag * z.imag
    return sqrt(acc)


cdef int _eigvals_hermitian(int n, double complex* h, double* w) noexcept nogil:
    # Eigenvalues only.  The row-major buffer reads as the conjugate matrix
    # in LAPACK's column-major convention, which shares the same spectrum.
    cdef char jobz = b'N'
    cdef char uplo = b'L'
    cdef int info = 0, lda = n
    cdef int lwork = n + 1
    cdef int lrwork = n if n > 1 else 1
    cdef int liwork = 1
    cdef double complex* work = <double complex*> malloc(lwork * sizeof(double complex))
    cdef double* rwork = <double*> malloc(lrwork * sizeof(double))
    cdef int* iwork = <int*> malloc(liwork * sizeof(int))
    if work == NULL or rwork == NULL or iwork == NULL:
        info = -1000
    else:
        zheevd(&jobz, &uplo, &n, h, &lda, w, work, &lwork, rwork, &lrwork, iwork, &liwork, &info)
    free(work)
    free(rwork)
    free(iwork)
    return info


def expm_skew(double complex[:, ::1] k):
    """exp(k) for skew-Hermitian k, via the spectral decomposition of i*k."""
    cdef int n = k.shape[0]
    if k.shape[1] != n:
        raise ValueError("generator must be square")
    out = np.empty((n, n), dtype=np.complex128)
    if n == 0:
        return out
    cdef double complex[:, ::1] o = out
    cdef double complex* a = <double complex*> malloc(n * n * sizeof(double complex))
    cdef double* w = <double*> malloc(n * sizeof(double))
    cdef double complex* phase = <double complex*> malloc(n * sizeof(double complex))
    cdef char jobz = b'V'
    cdef char uplo = b'L'
    cdef int info = 0, lda = n, i, j, r
    cdef int lwork = 2 * n + n * n
    cdef int lrwork = 1 + 5 * n + 2 * n * n
    cdef int liwork = 3 + 5 * n
    cdef double complex* work = <double complex*> malloc(lwork * sizeof(double complex))
    cdef double* rwork = <double*> malloc(lrwork * sizeof(double))
    cdef int* iwork = <int*> malloc(liwork * sizeof(int))
    cdef double complex acc
    try:
        if a == NULL or w == NULL or phase == NULL or work == NULL or rwork == NULL or iwork == NULL:
            raise MemoryError()
        for i in range(n):
            for j in range(n):
                a[i * n + j] = I * k[i, j]
        # LAPACK reads the buffer column-major, i.e. the conjugate of i*k;
        # its eigenvector columns land in our rows conjugated.
        zheevd(&jobz, &uplo, &n, a, &lda, w, work, &lwork, rwork, &lrwork, iwork, &liwork, &info)
        if info != 0:
            raise RuntimeError(f"zheevd failed with info={info}")
        for r in range(n):
            phase[r] = cos(w[r]) - I * sin(w[r])
        for i in range(n):
            for j in range(n):
                acc = 0
                for r in range(n):
                    acc = acc + phase[r] * a[r * n + i].conjugate() * a[r * n + j]
                o[i, j] = acc
    finally:
        free(a)
        free(w)
        free(phase)
        free(work)
        free(rwork)
        free(iwork)
    return out


def pair_stats(double complex[:, ::1] p1, double complex[:, ::1] u1,
               double complex[:, ::1] p2, double complex[:, ::1] u2):
    """Order-effect magnitude and the four repeatability residuals."""
    cdef int n = p1.shape[0]
    if (p1.shape[1] != n or u1.shape[0] != n or u1.shape[1] != n
            or p2.shape[0] != n or p2.shape[1] != n
            or u2.shape[0] != n or u2.shape[1] != n):
        raise ValueError("all four matrices must be square with equal dimension")
    if n == 0:
        return 0.0, 0.0, 0.0, 0.0, 0.0
    cdef double complex* buf = <double complex*> malloc(6 * n * n * sizeof(double complex))
    cdef double* w = <double*> malloc(n * sizeof(double))
    if buf == NULL or w == NULL:
        free(buf)
        free(w)
        raise MemoryError()
    cdef double complex* m1 = buf
    cdef double complex* m2 = buf + n * n
    cdef double complex* t1 = buf + 2 * n * n
    cdef double complex* t2 = buf + 3 * n * n
    cdef double complex* c1 = buf + 4 * n * n
    cdef double complex* c2 = buf + 5 * n * n
    cdef double r_aa_a, r_aa_b, r_aba, r_bab, mag
    cdef int i, j, info
    cdef double complex z
    try:
        _mm(n, &u1[0, 0], &p1[0, 0], m1)
        _mm(n, &u2[0, 0], &p2[0, 0], m2)

        _mm(n, &p1[0, 0], m1, t1)
        r_aa_a = _fdiff(n, t1, m1)
        _mm(n, &p2[0, 0], m2, t1)
        r_aa_b = _fdiff(n, t1, m2)

        _mm(n, &p2[0, 0], m1, t1)
        _mm(n, &u2[0, 0], t1, t2)   # t2 = U2 P2 M1
        _mm(n, &p1[0, 0], t2, t1)
        r_aba = _fdiff(n, t1, t2)

        _mm(n, &p1[0, 0], m2, t1)
        _mm(n, &u1[0, 0], t1, t2)   # t2 = U1 P1 M2
        _mm(n, &p2[0, 0], t2, t1)
        r_bab = _fdiff(n, t1, t2)

        _mm(n, &p2[0, 0], m1, t1)
        _mmh(n, m1, t1, c1)         # c1 = M1^H P2 M1
        _mm(n, &p1[0, 0], m2, t1)
        _mmh(n, m2, t1, c2)         # c2 = M2^H P1 M2
        for i in range(n * n):
            c1[i] = c1[i] - c2[i]
        for i in range(n):
            for j in range(n):
                z = (c1[i * n + j] + c1[j * n + i].conjugate()) * 0.5
                t1[i * n + j] = z
        info = _eigvals_hermitian(n, t1, w)
        if info != 0:
            raise RuntimeError(f"zheevd failed with info={info}")
        mag = 0.0
        for i in range(n):
            if w[i] > mag:
                mag = w[i]
            if -w[i] > mag:
                mag = -w[i]
    finally:
        free(buf)
        free(w)
    return mag, r_aa_a, r_aa_b, r_aba, r_bab
