"""
triplets/factories.py

Constructors for the triplet families used by fixtures and tests:

  scalar_triplet(a, b, c, mu)            A = aI₂, B = b, C = c
  rotation_triplet(a, omega, b, c, mu)   A = [[a, ω], [−ω, a]]
  jordan_triplet(A₀, m, b_blocks, c_blocks, mu)
  random_sigma_triplet(rng, p)           generic minimal Σ-triplet with |γ| < μ
"""

import numpy as np

from matrices.services import solve_sylvester
from quaternions.models import SigmaBlockMatrix, SigmaMatrix
from quaternions.services import jordan_block
from triplets.models import TripletConfig
from triplets.services import contraction


def block_column(blocks) -> np.ndarray:
    return np.vstack([blk.as_array() for blk in blocks])


def block_row(blocks) -> np.ndarray:
    return np.hstack([blk.as_array() for blk in blocks])


def scalar_triplet(
    a: float,
    b: SigmaMatrix,
    c: SigmaMatrix,
    mu: float,
    theta_r: float | None = 0.0,
    name: str = "scalar",
) -> TripletConfig:
    """p = 1 with A = aI₂; P_r = BC/(2a) and γ = 0."""
    return TripletConfig(
        A=a * np.eye(2), B=b.as_array(), C=c.as_array(), mu=mu, theta_r=theta_r, name=name
    )


def rotation_triplet(
    a: float,
    omega: float,
    b: SigmaMatrix,
    c: SigmaMatrix,
    mu: float,
    theta_r: float | None = None,
    name: str = "rotation",
) -> TripletConfig:
    """p = 1 with A = [[a, ω], [−ω, a]], eigenvalues a ± iω."""
    a_sigma = SigmaMatrix(a, -omega)
    return TripletConfig(
        A=a_sigma.as_array(), B=b.as_array(), C=c.as_array(), mu=mu, theta_r=theta_r, name=name
    )


def jordan_triplet(
    a: SigmaMatrix,
    m: int,
    b_blocks,
    c_blocks,
    mu: float,
    theta_r: float | None = None,
    name: str = "jordan",
) -> TripletConfig:
    if len(b_blocks) != m or len(c_blocks) != m:
        raise ValueError(f"expected {m} B and C blocks")
    return TripletConfig(
        A=jordan_block(a, m).as_array(),
        B=block_column(b_blocks),
        C=block_row(c_blocks),
        mu=mu,
        theta_r=theta_r,
        name=name,
    )


def random_sigma(rng, box: float = 1.0) -> SigmaMatrix:
    re1, im1, re2, im2 = rng.uniform(-box, box, size=4)
    return SigmaMatrix(complex(re1, im1), complex(re2, im2))


def random_sigma_triplet(
    rng,
    p: int,
    shift: float = 2.0,
    mu_margin: float = 1.5,
    theta_r: float | None = None,
) -> TripletConfig:
    """
    Random Σ-triplet of block order p.

    A is a random Σ-block matrix plus ``shift``·I, which keeps its spectrum
    in the right half-plane for the default box. μ is set to
    max(0.5, mu_margin·|γ|) so the boundary condition is satisfiable.
    """
    blocks = tuple(tuple(random_sigma(rng, 0.5 / p) for _ in range(p)) for _ in range(p))
    a = SigmaBlockMatrix(blocks).as_array() + shift * np.eye(2 * p)
    b = block_column([random_sigma(rng) for _ in range(p)])
    c = block_row([random_sigma(rng) for _ in range(p)])
    trial = TripletConfig(A=a, B=b, C=c, mu=1.0, theta_r=0.0)
    gamma = contraction(trial, solve_sylvester(a, b @ c))
    mu = max(0.5, mu_margin * abs(gamma))
    return TripletConfig(A=a, B=b, C=c, mu=mu, theta_r=theta_r, name=f"random-p{p}")
