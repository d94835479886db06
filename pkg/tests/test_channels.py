import math

import numpy as np
import pytest

from collide_qfi import qmat
from collide_qfi.channels import (Interaction, KrausChannel, ModelParams,
                                  apply_kraus_on, apply_unitary_on,
                                  collision_unitary, default_rk4_steps,
                                  embed_op, exchange_unitary, gibbs_state,
                                  lindblad_rk4, thermal_kraus, zz_unitary)


def random_density(rng, d=2):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(nbar=-0.1, gamma_tau_se=1.0)
    with pytest.raises(ValueError):
        ModelParams(nbar=1.0, gamma_tau_se=-1.0)
    p = ModelParams(nbar=2.0, gamma_tau_se=0.5)
    assert abs(p.big_gamma - 2.5) < 1e-15


def test_kraus_channel_rejects_incomplete():
    with pytest.raises(ValueError):
        KrausChannel((0.5 * np.eye(2),))
    with pytest.raises(ValueError):
        KrausChannel(())


def test_gibbs_state_populations():
    rho = gibbs_state(1.0)
    assert abs(rho[0, 0] - 2.0 / 3.0) < 1e-15
    assert abs(rho[1, 1] - 1.0 / 3.0) < 1e-15
    assert np.allclose(gibbs_state(0.0), np.diag([1.0, 0.0]))


def test_thermal_kraus_fixed_point_is_gibbs():
    for nbar in (0.0, 0.3, 1.0, 10.0):
        ch = thermal_kraus(nbar, 0.7)
        g = gibbs_state(nbar)
        assert np.allclose(ch.apply(g), g, atol=1e-12)


def test_thermal_kraus_coherence_decay():
    nbar, gt = 1.5, 0.4
    big_gamma = gt * (2 * nbar + 1)
    rho = qmat.projector(qmat.KET_PLUS_X)
    out = thermal_kraus(nbar, gt).apply(rho)
    assert abs(out[0, 1] - 0.5 * math.exp(-big_gamma / 2.0)) < 1e-12


def test_thermal_kraus_zero_time_is_identity():
    ch = thermal_kraus(1.0, 0.0)
    rng = np.random.default_rng(0)
    rho = random_density(rng)
    assert np.allclose(ch.apply(rho), rho)


def test_thermal_kraus_full_relaxation():
    # Gamma >> 1 sends every input to the Gibbs state
    ch = thermal_kraus(0.8, 50.0)
    rng = np.random.default_rng(1)
    for _ in range(5):
        out = ch.apply(random_density(rng))
        assert np.allclose(out, gibbs_state(0.8), atol=1e-10)


def test_thermal_kraus_matches_rk4_oracle():
    rng = np.random.default_rng(2)
    for nbar, gt in [(0.2, 0.3), (1.0, 0.5), (3.0, 0.2)]:
        ch = thermal_kraus(nbar, gt)
        big_gamma = gt * (2 * nbar + 1)
        for _ in range(3):
            rho = random_density(rng)
            ref = lindblad_rk4(rho, nbar, gt, default_rk4_steps(big_gamma))
            assert np.max(np.abs(ch.apply(rho) - ref)) < 1e-8


def test_lindblad_rk4_validates_steps():
    with pytest.raises(ValueError):
        lindblad_rk4(np.eye(2) / 2, 1.0, 0.1, 0)


def test_zz_unitary_diagonal_phases():
    gt = 0.7
    u = zz_unitary(gt)
    phases = np.exp(-1j * (gt / 2.0) * np.array([1, -1, -1, 1]))
    assert np.allclose(u, np.diag(phases))
    assert np.allclose(u @ u.conj().T, np.eye(4), atol=1e-12)


def test_exchange_unitary_blocks():
    u = exchange_unitary(0.9)
    assert u[0, 0] == 1.0 and u[3, 3] == 1.0
    c, s = math.cos(0.9), math.sin(0.9)
    assert abs(u[1, 1] - c) < 1e-15 and abs(u[1, 2] + 1j * s) < 1e-15
    assert np.allclose(u @ u.conj().T, np.eye(4), atol=1e-12)


def test_exchange_full_swap():
    # at g_tau = pi/2 the system state is transferred onto the ancilla
    u = exchange_unitary(math.pi / 2.0)
    rng = np.random.default_rng(3)
    rho_s = random_density(rng)
    joint = np.kron(rho_s, qmat.projector(qmat.KET_G))
    out = u @ joint @ u.conj().T
    anc = qmat.partial_trace(out, [1], [2, 2])
    assert np.allclose(np.diag(anc), np.diag(rho_s), atol=1e-12)


def test_collision_unitary_dispatch():
    pz = ModelParams(nbar=1.0, gamma_tau_se=0.1, g_tau_sa=0.3,
                     interaction=Interaction.ZZ)
    pe = ModelParams(nbar=1.0, gamma_tau_se=0.1, g_tau_sa=0.3,
                     interaction=Interaction.EXCHANGE)
    assert np.allclose(collision_unitary(pz), zz_unitary(0.3))
    assert np.allclose(collision_unitary(pe), exchange_unitary(0.3))


def test_embed_op_single_target():
    rng = np.random.default_rng(4)
    op = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    dims = [2, 2, 2]
    assert np.allclose(embed_op(op, [0], dims), qmat.kron_all(op, np.eye(2), np.eye(2)))
    assert np.allclose(embed_op(op, [1], dims), qmat.kron_all(np.eye(2), op, np.eye(2)))
    assert np.allclose(embed_op(op, [2], dims), qmat.kron_all(np.eye(2), np.eye(2), op))


def test_embed_op_two_targets_nonadjacent():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2))
    op = np.kron(a, b)
    got = embed_op(op, [0, 2], [2, 2, 2])
    assert np.allclose(got, qmat.kron_all(a, np.eye(2), b))


def test_apply_unitary_on_matches_embedding():
    rng = np.random.default_rng(6)
    rho = random_density(rng, 8)
    u = exchange_unitary(0.4)
    out = apply_unitary_on(u, rho, [0, 2], [2, 2, 2])
    uf = embed_op(u, [0, 2], [2, 2, 2])
    assert np.allclose(out, uf @ rho @ uf.conj().T)
    assert abs(np.trace(out) - 1.0) < 1e-12


def test_apply_kraus_on_marginals():
    rng = np.random.default_rng(7)
    rho_a, rho_b = random_density(rng), random_density(rng)
    joint = np.kron(rho_a, rho_b)
    ch = thermal_kraus(1.0, 0.5)
    out = apply_kraus_on(ch, joint, 0, [2, 2])
    # channel on subsystem 0 leaves subsystem 1 untouched
    assert np.allclose(qmat.partial_trace(out, [1], [2, 2]), rho_b, atol=1e-12)
    assert np.allclose(qmat.partial_trace(out, [0], [2, 2]), ch.apply(rho_a),
                       atol=1e-12)
    with pytest.raises(ValueError):
        apply_kraus_on(ch, joint, 0, [4, 1])
