"""Independent reference computations used to freeze expected values.

Nothing here calls into oscalg's recurrence, moment or operator code paths.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from math import comb

import numpy as np


# -- exact moments of the classical weights -------------------------------------

def gamma_moments(alpha, K):
    """mu_k of x^alpha e^{-x} dx / Gamma(alpha+1) on (0, inf): Gamma(k+alpha+1)/Gamma(alpha+1)."""
    alpha = Fraction(alpha)
    out, acc = [], Fraction(1)
    for k in range(K + 1):
        out.append(acc)
        acc *= alpha + 1 + k
    return out


def gaussian_moments(K):
    """Standard normal: mu_{2j} = (2j-1)!!, odd moments 0."""
    out = []
    for k in range(K + 1):
        if k % 2:
            out.append(Fraction(0))
        else:
            out.append(Fraction(math.prod(range(1, k, 2))))
    return out


def beta_moments(alpha, beta, K):
    """mu_k of (1-x)^alpha (1+x)^beta on [-1, 1], normalized.

    With x = 2t - 1, t ~ Beta(beta+1, alpha+1):
    E[t^j] = prod_{i<j} (beta+1+i)/(alpha+beta+2+i).
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    et = [Fraction(1)]
    for i in range(K):
        et.append(et[-1] * (beta + 1 + i) / (alpha + beta + 2 + i))
    return [sum(comb(k, j) * 2 ** j * (-1) ** (k - j) * et[j] for j in range(k + 1))
            for k in range(K + 1)]


# -- Gram-Schmidt on monomials ------------------------------------------------------

def gram_schmidt_recurrence(moments, N):
    """(monic polys, a, b2) from exact Gram-Schmidt on 1, x, x^2, ...

    <x^i, x^j> = mu_{i+j}; a_n = <x P_n, P_n>/<P_n, P_n>, b2_n = h_{n+1}/h_n.
    """
    mu = [Fraction(m) for m in moments]

    def inner(p, q):
        return sum(pi * qj * mu[i + j] for i, pi in enumerate(p) for j, qj in enumerate(q))

    polys = []
    for n in range(N + 1):
        p = [Fraction(0)] * n + [Fraction(1)]
        for q in polys:
            c = inner(p, q) / inner(q, q)
            p = [pi - c * (q[i] if i < len(q) else 0) for i, pi in enumerate(p)]
        polys.append(p)
    norms = [inner(p, p) for p in polys]
    a, b2 = [], []
    for n in range(N):
        xp = [Fraction(0)] + polys[n]
        a.append(inner(xp, polys[n]) / norms[n])
        b2.append(norms[n + 1] / norms[n])
    return polys, a, b2


# -- matrices written straight from the operator definitions ---------------------------

def ladder_matrices(a, b2, M):
    """Dict of M x M float matrices built by explicit loops."""
    b = [math.sqrt(float(v)) for v in b2]
    s2 = math.sqrt(2.0)
    A = np.zeros((M, M))
    Adag = np.zeros((M, M))
    As = np.zeros((M, M))
    N = np.zeros((M, M))
    for n in range(M):
        N[n, n] = n
        Adag[n, n] = s2 * float(a[n])
        if n >= 1:
            A[n - 1, n] = s2 * b[n - 1]
            As[n - 1, n] = s2 * b[n - 1]
        if n + 1 < M:
            Adag[n + 1, n] = s2 * b[n]
    return {"A": A, "Adag": Adag, "As": As, "Asdag": As.T.copy(), "N": N, "I": np.eye(M)}


def brute_commutator(X, Y):
    M = X.shape[0]
    out = np.zeros((M, M))
    for i in range(M):
        for j in range(M):
            s = 0.0
            for k in range(M):
                s += X[i, k] * Y[k, j] - Y[i, k] * X[k, j]
            out[i, j] = s
    return out


def recurrence_values(a, b2, x, N):
    """Psi_0..Psi_N at x by Horner evaluation of Gram-Schmidt-free monic products."""
    # Independent of the forward recurrence: build monic P_n by convolution,
    # then normalize with the running product of b2.
    polys = [np.array([1.0]), np.array([-float(a[0]), 1.0])]
    for n in range(1, N):
        nxt = np.convolve(polys[n], [-float(a[n]), 1.0])
        prev = np.concatenate([polys[n - 1], np.zeros(len(nxt) - len(polys[n - 1]))])
        polys.append(nxt - float(b2[n - 1]) * prev)
    out, h = [], 1.0
    for n in range(N + 1):
        out.append(np.polyval(polys[n][::-1], x) / math.sqrt(h))
        if n < N:
            h *= float(b2[n])
    return out


# -- random rational-polynomial systems -------------------------------------------------

def _rat(rng, lo=1, hi=5, den=3):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_system_coeffs(rng: random.Random):
    """Return (a_coeffs, b2_coeffs) ascending, degrees <= 3, b2 > 0 for n >= 0.

    Draws are spread over finite-type systems and each way of failing the
    criterion (degree of a, degree of b2, boundary value b2(-1) != 0).
    """
    shape = rng.choice(["finite", "finite", "a_high", "b2_cubic", "b2_boundary", "b2_linear_off"])
    a = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(2)]
    if shape == "finite":
        # (n + 1)(c1 n + c0)
        c0, c1 = _rat(rng), Fraction(rng.randint(0, 3), rng.randint(1, 3))
        b2 = [c0, c0 + c1, c1]
    elif shape == "a_high":
        c0, c1 = _rat(rng), Fraction(rng.randint(0, 3), rng.randint(1, 3))
        b2 = [c0, c0 + c1, c1]
        a = a + [_rat(rng, -3, 3) or Fraction(1)]
        if rng.random() < 0.5:
            a.append(_rat(rng))
        if a[-1] == 0:
            a[-1] = Fraction(1)
    elif shape == "b2_cubic":
        b2 = [_rat(rng), _rat(rng, 0, 3), _rat(rng, 0, 3), _rat(rng)]
    elif shape == "b2_boundary":
        c = [_rat(rng), _rat(rng), _rat(rng)]
        if c[0] - c[1] + c[2] == 0:
            c[0] += 1
        b2 = c
    else:
        c0, c1 = _rat(rng), _rat(rng)
        if c0 == c1:
            c0 += 1
        b2 = [c0, c1]
    if shape != "a_high" and rng.random() < 0.3:
        a = [a[0]]
    return shape, a, b2
