"""Dense tensor-assembly kernels shared by the base geometry and the oracle.

Every kernel exists twice: an explicit-loop version compiled with numba, and
a numpy/einsum version.  ``TANBUNDLE_NUMBA=0`` in the environment selects the
numpy path; otherwise numba is used whenever it imports.  Both paths agree to
rounding (see tests/test_kernels.py) and ``benchmarks/bench_kernels.py``
compares their speed.

Index layout used throughout the package:

* ``gamma[k, i, j]``          Christoffel symbol with upper index ``k``.
* ``dgamma[a, k, i, j]``      partial derivative of ``gamma[k, i, j]`` along ``a``.
* ``riem[i, j, k, l]``        component ``l`` of ``R(d_i, d_j) d_k``.
* ``nabla_riem[a, i, j, k, l]`` component ``l`` of ``(nabla_a R)(d_i, d_j) d_k``.
"""
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("TANBUNDLE_NUMBA", "1") != "0"


# ---------------------------------------------------------------- numpy path

def christoffel_np(ginv, dg):
    # dg[c, a, b] = d_c g_ab
    lowered = 0.5 * (
        np.einsum("ijl->lij", dg)  # d_i g_jl
        + np.einsum("jil->lij", dg)  # d_j g_il
        - dg  # d_l g_ij
    )
    return np.einsum("kl,lij->kij", ginv, lowered)


def riemann_np(gamma, dgamma):
    term = np.einsum("iljk->ijkl", dgamma)
    term = term - np.einsum("jlik->ijkl", dgamma)
    term = term + np.einsum("mjk,lim->ijkl", gamma, gamma)
    term = term - np.einsum("mik,ljm->ijkl", gamma, gamma)
    return term


def nabla_riemann_np(riem, driem, gamma):
    out = driem.copy()
    out += np.einsum("lam,ijkm->aijkl", gamma, riem)
    out -= np.einsum("mai,mjkl->aijkl", gamma, riem)
    out -= np.einsum("maj,imkl->aijkl", gamma, riem)
    out -= np.einsum("mak,ijml->aijkl", gamma, riem)
    return out


def scalar_np(riem, ginv):
    ricci = np.einsum("ijki->jk", riem)
    return float(np.einsum("jk,jk->", ginv, ricci))


def induced_metric_np(g, gamma, y, a):
    m = g.shape[0]
    shift = np.einsum("kij,j->ki", gamma, y)
    gy = g @ y
    vert = a * (g + np.outer(gy, gy))
    out = np.empty((2 * m, 2 * m))
    vm = vert @ shift
    out[:m, :m] = g + shift.T @ vm
    out[:m, m:] = vm.T
    out[m:, :m] = vm
    out[m:, m:] = vert
    return out


def cyclic_sum_np(d_form):
    # d_form[a, b, c] = d_a w_bc
    return d_form + np.transpose(d_form, (2, 0, 1)) + np.transpose(d_form, (1, 2, 0))


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def christoffel_nb(ginv, dg):
        n = ginv.shape[0]
        low = np.empty((n, n, n))
        for l in range(n):
            for i in range(n):
                for j in range(n):
                    low[l, i, j] = 0.5 * (dg[i, j, l] + dg[j, i, l] - dg[l, i, j])
        out = np.zeros((n, n, n))
        for k in range(n):
            for l in range(n):
                c = ginv[k, l]
                for i in range(n):
                    for j in range(n):
                        out[k, i, j] += c * low[l, i, j]
        return out

    @njit(cache=True)
    def riemann_nb(gamma, dgamma):
        n = gamma.shape[0]
        out = np.empty((n, n, n, n))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        s = dgamma[i, l, j, k] - dgamma[j, l, i, k]
                        for m in range(n):
                            s += gamma[m, j, k] * gamma[l, i, m] - gamma[m, i, k] * gamma[l, j, m]
                        out[i, j, k, l] = s
        return out

    @njit(cache=True)
    def nabla_riemann_nb(riem, driem, gamma):
        n = gamma.shape[0]
        out = np.empty((n, n, n, n, n))
        for a in range(n):
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        for l in range(n):
                            s = driem[a, i, j, k, l]
                            for m in range(n):
                                s += gamma[l, a, m] * riem[i, j, k, m]
                                s -= gamma[m, a, i] * riem[m, j, k, l]
                                s -= gamma[m, a, j] * riem[i, m, k, l]
                                s -= gamma[m, a, k] * riem[i, j, m, l]
                            out[a, i, j, k, l] = s
        return out

    @njit(cache=True)
    def scalar_nb(riem, ginv):
        n = ginv.shape[0]
        s = 0.0
        for j in range(n):
            for k in range(n):
                ric = 0.0
                for i in range(n):
                    ric += riem[i, j, k, i]
                s += ginv[j, k] * ric
        return s

    @njit(cache=True)
    def induced_metric_nb(g, gamma, y, a):
        m = g.shape[0]
        shift = np.zeros((m, m))
        for k in range(m):
            for i in range(m):
                for j in range(m):
                    shift[k, i] += gamma[k, i, j] * y[j]
        gy = np.zeros(m)
        for i in range(m):
            for j in range(m):
                gy[i] += g[i, j] * y[j]
        vert = np.empty((m, m))
        for i in range(m):
            for j in range(m):
                vert[i, j] = a * (g[i, j] + gy[i] * gy[j])
        vm = np.zeros((m, m))
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    vm[i, j] += vert[i, k] * shift[k, j]
        out = np.empty((2 * m, 2 * m))
        for i in range(m):
            for j in range(m):
                s = g[i, j]
                for k in range(m):
                    s += shift[k, i] * vm[k, j]
                out[i, j] = s
                out[i, m + j] = vm[j, i]
                out[m + i, j] = vm[i, j]
                out[m + i, m + j] = vert[i, j]
        return out

    @njit(cache=True)
    def cyclic_sum_nb(d_form):
        n = d_form.shape[0]
        out = np.empty((n, n, n))
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    out[a, b, c] = d_form[a, b, c] + d_form[b, c, a] + d_form[c, a, b]
        return out


def _pick(name):
    if USE_NUMBA:
        return globals()[name + "_nb"]
    return globals()[name + "_np"]


christoffel = _pick("christoffel")
riemann = _pick("riemann")
nabla_riemann = _pick("nabla_riemann")
scalar = _pick("scalar")
induced_metric = _pick("induced_metric")
cyclic_sum = _pick("cyclic_sum")

BACKEND = "numba" if USE_NUMBA else "numpy"
