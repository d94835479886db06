"""Thermal map, collision unitaries, and channel application on subsystems.

The bath contact of the system qubit is a generalized-amplitude-damping
channel with decay probability eta = 1 - exp(-Gamma), Gamma = gamma*tau*(2nbar+1),
and ground-branch weight p = (nbar+1)/(2nbar+1). A fourth-order Runge-Kutta
integrator of the underlying dissipator is kept alongside as a brute-force
validation oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .qmat import I2, SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z


class Interaction(enum.Enum):
    ZZ = "zz"
    EXCHANGE = "exchange"


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless physics knobs of the collision model."""

    nbar: float
    gamma_tau_se: float
    g_tau_sa: float = math.pi / 2
    interaction: Interaction = Interaction.ZZ

    def __post_init__(self):
        if self.nbar < 0:
            raise ValueError(f"nbar must be >= 0, got {self.nbar}")
        if self.gamma_tau_se < 0:
            raise ValueError(f"gamma_tau_se must be >= 0, got {self.gamma_tau_se}")

    @property
    def big_gamma(self) -> float:
        """Effective thermalization rate Gamma = gamma*tau_SE*(2nbar+1)."""
        return self.gamma_tau_se * (2.0 * self.nbar + 1.0)


@dataclass(frozen=True)
class KrausChannel:
    operators: tuple = field(default_factory=tuple)

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        object.__setattr__(self, "operators", ops)
        if not ops:
            raise ValueError("empty Kraus set")
        d = ops[0].shape[0]
        comp = sum(k.conj().T @ k for k in ops)
        if float(np.max(np.abs(comp - np.eye(d)))) > 1e-12:
            raise ValueError("Kraus set is not trace preserving")

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(k @ rho @ k.conj().T for k in self.operators)


def gibbs_state(nbar: float) -> np.ndarray:
    """Thermal qubit state diag(p_g, p_e), p_g = (nbar+1)/(2nbar+1)."""
    p_g = (nbar + 1.0) / (2.0 * nbar + 1.0)
    return np.diag([p_g, 1.0 - p_g]).astype(complex)


def thermal_kraus(nbar: float, gamma_tau: float) -> KrausChannel:
    """Qubit thermal map exp(L * tau) as a generalized-amplitude-damping Kraus set."""
    if nbar < 0 or gamma_tau < 0:
        raise ValueError("nbar and gamma_tau must be nonnegative")
    if gamma_tau == 0.0:
        return KrausChannel((I2.copy(),))
    big_gamma = gamma_tau * (2.0 * nbar + 1.0)
    eta = 1.0 - math.exp(-big_gamma)
    p = (nbar + 1.0) / (2.0 * nbar + 1.0)
    s, sq = math.sqrt(p), math.sqrt(1.0 - p)
    ops = [
        s * np.array([[1, 0], [0, math.sqrt(1 - eta)]]),
        s * np.array([[0, math.sqrt(eta)], [0, 0]]),
        sq * np.array([[math.sqrt(1 - eta), 0], [0, 1]]),
        sq * np.array([[0, 0], [math.sqrt(eta), 0]]),
    ]
    return KrausChannel(tuple(k for k in ops if np.any(k)))


def _dissipator(L: np.ndarray, rho: np.ndarray) -> np.ndarray:
    LdL = L.conj().T @ L
    return L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL)


def lindblad_rk4(rho0: np.ndarray, nbar: float, gamma_t: float,
                 steps: int) -> np.ndarray:
    """RK4 integration of the interaction-picture qubit dissipator.

    Integrates d rho/dt = (nbar+1) D[sigma-] rho + nbar D[sigma+] rho over
    dimensionless time gamma_t. Used as an independent oracle for thermal_kraus.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rho = np.asarray(rho0, dtype=complex).copy()
    dt = gamma_t / steps

    def rhs(r):
        return (nbar + 1.0) * _dissipator(SIGMA_MINUS, r) + nbar * _dissipator(SIGMA_PLUS, r)

    for _ in range(steps):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return rho


def default_rk4_steps(big_gamma: float) -> int:
    return int(math.ceil(big_gamma * 1000)) + 100


def zz_unitary(g_tau: float) -> np.ndarray:
    """exp(-i (g_tau/2) sigmaZ x sigmaZ) on (system, ancilla)."""
    theta = g_tau / 2.0
    zz = np.kron(SIGMA_Z, SIGMA_Z)
    return np.diag(np.exp(-1j * theta * np.diag(zz).real))


def exchange_unitary(g_tau: float) -> np.ndarray:
    """Resonant energy-exchange unitary: identity on {|gg>,|ee>}, x-rotation on {|ge>,|eg>}."""
    u = np.eye(4, dtype=complex)
    c, s = math.cos(g_tau), math.sin(g_tau)
    u[1, 1] = u[2, 2] = c
    u[1, 2] = u[2, 1] = -1j * s
    return u


def collision_unitary(params: ModelParams) -> np.ndarray:
    if params.interaction is Interaction.ZZ:
        return zz_unitary(params.g_tau_sa)
    return exchange_unitary(params.g_tau_sa)


def embed_op(op: np.ndarray, targets, dims) -> np.ndarray:
    """Lift an operator acting on ``targets`` to the full tensor-product space."""
    dims = list(dims)
    n = len(dims)
    targets = list(targets)
    rest = [i for i in range(n) if i not in targets]
    full = np.kron(op, np.eye(int(np.prod([dims[i] for i in rest])) if rest else 1))
    order = targets + rest
    perm = [order.index(i) for i in range(n)]
    t = full.reshape([dims[i] for i in order] * 2)
    t = t.transpose(perm + [n + p for p in perm])
    d = int(np.prod(dims))
    return np.ascontiguousarray(t.reshape(d, d))


def apply_unitary_on(u: np.ndarray, rho: np.ndarray, targets, dims) -> np.ndarray:
    uf = embed_op(u, targets, dims)
    return uf @ rho @ uf.conj().T


def apply_kraus_on(channel: KrausChannel, rho: np.ndarray, target: int,
                   dims) -> np.ndarray:
    """Apply a channel to one subsystem of a joint state."""
    dims = list(dims)
    if channel.dim != dims[target]:
        raise ValueError(
            f"channel dim {channel.dim} does not match subsystem dim {dims[target]}")
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for k in channel.operators:
        kf = embed_op(k, [target], dims)
        out += kf @ rho @ kf.conj().T
    return out
