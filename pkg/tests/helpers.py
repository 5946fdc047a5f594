"""Independent oracles for the test suite.

Everything here is built directly from the mathematical definitions (explicit
matrix elements, path enumeration), deliberately sharing no code with the
evolution or spectral implementations it checks.
"""

from __future__ import annotations

import math

import numpy as np


def brute_force_step_matrix(theta: float, q: int, p: int, t_max: int) -> np.ndarray:
    """Full one-step matrix on the line window, element by element.

    Basis index 2*(x + t_max) + c.  The shift sends (x, c) to (x + 1, 0) or
    (x - 1, 1) after the coin mixes c, with the source-site phase
    exp(2i*pi*q*x/p) attached.
    """
    n = 2 * t_max + 1
    dim = 2 * n
    coin = np.array(
        [[math.cos(theta), math.sin(theta)], [math.sin(theta), -math.cos(theta)]],
        dtype=complex,
    )
    full_coin = np.kron(np.eye(n), coin)
    shift = np.zeros((dim, dim), dtype=complex)
    for xi in range(n):
        x = xi - t_max
        phase = np.exp(2j * math.pi * ((q * x) % p) / p)
        if xi + 1 < n:
            shift[2 * (xi + 1) + 0, 2 * xi + 0] = phase
        if xi - 1 >= 0:
            shift[2 * (xi - 1) + 1, 2 * xi + 1] = phase
    return shift @ full_coin


def brute_force_distributions(
    theta: float, q: int, p: int, t_max: int, t: int
) -> list[np.ndarray]:
    """Matrix-power evolution of the symmetric initial state; one array per step."""
    n = 2 * t_max + 1
    u = brute_force_step_matrix(theta, q, p, t_max)
    psi = np.zeros(2 * n, dtype=complex)
    psi[2 * t_max + 0] = 1.0 / math.sqrt(2.0)
    psi[2 * t_max + 1] = 1j / math.sqrt(2.0)
    out = []
    for _ in range(t + 1):
        out.append(np.sum(np.abs(psi.reshape(n, 2)) ** 2, axis=1))
        psi = u @ psi
    return out


def enumerate_classical_two_steps(theta: float) -> dict[int, float]:
    """All four two-step paths of the decohered chain, summed by endpoint.

    Coin kept with cos^2, flipped with sin^2; move +1 on outcome 0, -1 on
    outcome 1; initial coin mixed (1/2, 1/2).
    """
    keep = math.cos(theta) ** 2
    flip = math.sin(theta) ** 2
    totals: dict[int, float] = {}
    for start_coin, start_prob in ((0, 0.5), (1, 0.5)):
        for out1 in (0, 1):
            p1 = keep if out1 == start_coin else flip
            x1 = 1 if out1 == 0 else -1
            for out2 in (0, 1):
                p2 = keep if out2 == out1 else flip
                x2 = x1 + (1 if out2 == 0 else -1)
                totals[x2] = totals.get(x2, 0.0) + start_prob * p1 * p2
    return totals


def random_distribution(rng: np.random.Generator, n: int) -> np.ndarray:
    """A strictly valid probability vector of length n."""
    raw = rng.random(n) + 1e-6
    return raw / raw.sum()
