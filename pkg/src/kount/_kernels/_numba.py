"""numba @njit kernels; mirrors :mod:`kount._kernels._numpy`."""
import math
import warnings

import numba
import numpy as np
from numba import njit, prange

warnings.filterwarnings("ignore", message="The TBB threading layer")
# skip probing an outdated TBB; omp or workqueue are fine for these loops
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


def configure_threads(cap: int) -> None:
    numba.set_num_threads(max(1, min(cap, numba.config.NUMBA_NUM_THREADS)))


@njit(cache=True)
def jacobi_eigh(A, tol, max_sweeps):
    n = A.shape[0]
    a = A.copy()
    V = np.eye(n)
    frob = math.sqrt(np.sum(a * a))
    sweeps = 0
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        if math.sqrt(off) <= tol * frob:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i]
    return w, V, sweeps


@njit(cache=True)
def _inv_mod(a, p):
    # Fermat: p prime
    r = 1
    b = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@njit(cache=True)
def charpoly_mod_p(A, p):
    n = A.shape[0]
    H = A.copy()
    for j in range(n - 2):
        piv = -1
        for i in range(j + 1, n):
            if H[i, j] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != j + 1:
            for k in range(n):
                tmp = H[piv, k]
                H[piv, k] = H[j + 1, k]
                H[j + 1, k] = tmp
            for k in range(n):
                tmp = H[k, piv]
                H[k, piv] = H[k, j + 1]
                H[k, j + 1] = tmp
        inv = _inv_mod(H[j + 1, j], p)
        for r in range(j + 2, n):
            if H[r, j] == 0:
                continue
            u = H[r, j] * inv % p
            for k in range(n):
                H[r, k] = (H[r, k] - u * H[j + 1, k]) % p
            for k in range(n):
                H[k, j + 1] = (H[k, j + 1] + u * H[k, r]) % p
    # P[m] = det(xI - H[:m, :m]), ascending coefficients
    P = np.zeros((n + 1, n + 1), dtype=np.int64)
    P[0, 0] = 1
    for m in range(1, n + 1):
        h = H[m - 1, m - 1]
        for k in range(m + 1):
            v = -h * P[m - 1, k] % p
            if k > 0:
                v += P[m - 1, k - 1]
            P[m, k] = v % p
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = prod * H[i, i - 1] % p
            coef = H[i - 1, m - 1] * prod % p
            if coef == 0:
                continue
            for k in range(i):
                P[m, k] = (P[m, k] - coef * P[i - 1, k]) % p
    return P[n].copy()


@njit(cache=True, parallel=True)
def charpoly_mod_many(residues, primes):
    k = primes.shape[0]
    n = residues.shape[1]
    out = np.zeros((k, n + 1), dtype=np.int64)
    for i in prange(k):
        out[i] = charpoly_mod_p(residues[i], primes[i])
    return out
