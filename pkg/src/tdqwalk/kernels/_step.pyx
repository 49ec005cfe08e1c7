# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled shift-and-coin kernel.

Complex entries are read through their ``double[2]`` layout so the products
are plain real arithmetic, evaluated in the same order as numpy's.

The far tails of the wave function decay below the normal double range and
subnormal arithmetic is ~100x slower, so the loop runs with flush-to-zero
and denormals-are-zero set (x86 only), restoring the caller's mode after.
"""

cdef extern from *:
    """
    #if defined(__x86_64__) || defined(__SSE2__)
    #include <xmmintrin.h>
    static unsigned int tdq_ftz_on(void) {
        unsigned int old = _mm_getcsr();
        _mm_setcsr(old | 0x8040u);
        return old;
    }
    static void tdq_ftz_restore(unsigned int old) { _mm_setcsr(old); }
    #else
    static unsigned int tdq_ftz_on(void) { return 0u; }
    static void tdq_ftz_restore(unsigned int old) { (void)old; }
    #endif
    """
    unsigned int tdq_ftz_on() noexcept nogil
    void tdq_ftz_restore(unsigned int old) noexcept nogil

cdef inline void _cmul_add(double ar, double ai, const double* x,
                           double br, double bi, const double* y,
                           double* out) noexcept nogil:
    cdef double pr = ar * x[0] - ai * x[1]
    cdef double pi = ar * x[1] + ai * x[0]
    cdef double qr = br * y[0] - bi * y[1]
    cdef double qi = br * y[1] + bi * y[0]
    out[0] = pr + qr
    out[1] = pi + qi


def advance(double complex[::1] src_p, double complex[::1] src_m,
            double complex[::1] dst_p, double complex[::1] dst_m,
            Py_ssize_t lo, Py_ssize_t hi,
            double complex u_pp, double complex u_pm,
            double complex u_mp, double complex u_mm):
    """Write sites ``lo, lo+2, ..., hi`` of the next state into ``dst``.

    ``dst_p[i] = u_pp*src_p[i-1] + u_pm*src_m[i-1]`` and
    ``dst_m[i] = u_mp*src_p[i+1] + u_mm*src_m[i+1]``.
    """
    cdef Py_ssize_t n = src_p.shape[0]
    if (src_m.shape[0] != n or dst_p.shape[0] != n or dst_m.shape[0] != n):
        raise ValueError("buffers must share one length")
    if lo < 1 or hi > n - 2 or (hi - lo) % 2 != 0:
        raise IndexError(f"site window [{lo}, {hi}] does not fit buffers of length {n}")
    if n == 0:
        return
    cdef const double* sp = <const double*> &src_p[0]
    cdef const double* sm = <const double*> &src_m[0]
    cdef double* dp = <double*> &dst_p[0]
    cdef double* dm = <double*> &dst_m[0]
    cdef double a_r = u_pp.real, a_i = u_pp.imag
    cdef double b_r = u_pm.real, b_i = u_pm.imag
    cdef double c_r = u_mp.real, c_i = u_mp.imag
    cdef double d_r = u_mm.real, d_i = u_mm.imag
    cdef Py_ssize_t i
    cdef unsigned int mode
    with nogil:
        mode = tdq_ftz_on()
        i = lo
        while i <= hi:
            _cmul_add(a_r, a_i, sp + 2 * (i - 1), b_r, b_i, sm + 2 * (i - 1), dp + 2 * i)
            _cmul_add(c_r, c_i, sp + 2 * (i + 1), d_r, d_i, sm + 2 * (i + 1), dm + 2 * i)
            i += 2
        tdq_ftz_restore(mode)


def norm_sq(double complex[::1] p, double complex[::1] m, Py_ssize_t lo, Py_ssize_t hi):
    """Sum of ``|p|^2 + |m|^2`` over ``lo..hi`` inclusive."""
    cdef double acc = 0.0
    cdef Py_ssize_t i
    if lo < 0 or hi >= p.shape[0] or m.shape[0] != p.shape[0]:
        raise IndexError("window outside buffers")
    with nogil:
        for i in range(lo, hi + 1):
            acc += p[i].real * p[i].real + p[i].imag * p[i].imag
            acc += m[i].real * m[i].real + m[i].imag * m[i].imag
    return acc
