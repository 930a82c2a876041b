"""Pure-numpy fallbacks for the kernels in :mod:`kount._kernels._numba`.

The Jacobi fallback uses the round-robin parallel ordering, rotating n/2
disjoint index pairs per vectorized step; it converges to the same
eigenvalues as the row-cyclic numba kernel.
"""
import numpy as np


def _round_robin(n: int):
    m = n + (n % 2)
    players = list(range(m))
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        if pairs:
            yield np.array([a for a, _ in pairs]), np.array([b for _, b in pairs])
        players = [players[0], players[-1]] + players[1:-1]


def jacobi_eigh(A, tol, max_sweeps):
    n = A.shape[0]
    a = A.copy()
    V = np.eye(n)
    frob = np.sqrt(np.sum(a * a))
    rounds = list(_round_robin(n))
    sweeps = 0
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))
        if off <= tol * frob:
            break
        sweeps += 1
        for P, Q in rounds:
            apq = a[P, Q]
            live = apq != 0.0
            if not live.any():
                continue
            P, Q, apq = P[live], Q[live], apq[live]
            with np.errstate(over="ignore"):
                theta = (a[Q, Q] - a[P, P]) / (2.0 * apq)
                sgn = np.where(theta >= 0.0, 1.0, -1.0)
                t = sgn / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            cp, sp = c[:, None], s[:, None]
            rp, rq = a[P, :].copy(), a[Q, :].copy()
            a[P, :] = cp * rp - sp * rq
            a[Q, :] = sp * rp + cp * rq
            cp, sp = c[None, :], s[None, :]
            kp, kq = a[:, P].copy(), a[:, Q].copy()
            a[:, P] = kp * cp - kq * sp
            a[:, Q] = kp * sp + kq * cp
            a[P, Q] = 0.0
            a[Q, P] = 0.0
            vp, vq = V[:, P].copy(), V[:, Q].copy()
            V[:, P] = vp * cp - vq * sp
            V[:, Q] = vp * sp + vq * cp
    return np.diag(a).copy(), V, sweeps


def charpoly_mod_p(A, p):
    n = A.shape[0]
    H = A.copy()
    for j in range(n - 2):
        nz = np.flatnonzero(H[j + 1:, j])
        if nz.size == 0:
            continue
        piv = j + 1 + nz[0]
        if piv != j + 1:
            H[[piv, j + 1], :] = H[[j + 1, piv], :]
            H[:, [piv, j + 1]] = H[:, [j + 1, piv]]
        inv = pow(int(H[j + 1, j]), p - 2, p)
        u = H[j + 2:, j] * inv % p
        if not u.any():
            continue
        H[j + 2:, :] = (H[j + 2:, :] - u[:, None] * H[j + 1, :][None, :]) % p
        H[:, j + 1] = (H[:, j + 1] + H[:, j + 2:] @ u) % p
    P = np.zeros((n + 1, n + 1), dtype=np.int64)
    P[0, 0] = 1
    for m in range(1, n + 1):
        h = int(H[m - 1, m - 1])
        row = (-h * P[m - 1]) % p
        row[1:] = (row[1:] + P[m - 1, :-1]) % p
        if m > 1:
            sub = H[np.arange(1, m), np.arange(0, m - 1)]  # H[i, i-1], i = 1..m-1
            coef = np.zeros(m - 1, dtype=np.int64)
            prod = 1
            for i in range(m - 1, 0, -1):
                prod = prod * int(sub[i - 1]) % p
                coef[i - 1] = int(H[i - 1, m - 1]) * prod % p
            row = (row - coef @ P[:m - 1]) % p
        P[m] = row
    return P[n].copy()


def charpoly_mod_many(residues, primes):
    return np.stack([charpoly_mod_p(r, int(p)) for r, p in zip(residues, primes)]) \
        if len(primes) else np.zeros((0, residues.shape[1] + 1), dtype=np.int64)
