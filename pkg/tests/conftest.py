"""Shared brute-force oracles, kept independent of the package kernels."""

from __future__ import annotations

from itertools import product


def brute_image(coeffs, elements):
    """Image of a linear form by direct tuple enumeration."""
    return sorted({sum(c * a for c, a in zip(coeffs, combo))
                   for combo in product(sorted(elements), repeat=len(coeffs))})


def brute_modular_image(coeffs, modulus, classes):
    return sorted({sum(c * r for c, r in zip(coeffs, combo)) % modulus
                   for combo in product(sorted(classes), repeat=len(coeffs))})


def trial_division_is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def brute_legendre(a, p):
    """Legendre symbol by enumerating the nonzero squares mod an odd prime."""
    if a % p == 0:
        return 0
    squares = {x * x % p for x in range(1, p)}
    return 1 if a % p in squares else -1


def brute_jacobi(a, n):
    """Jacobi symbol as the product of Legendre symbols over the factorization."""
    result = 1
    for p, e in factorize(n).items():
        result *= brute_legendre(a, p) ** e
    return result
