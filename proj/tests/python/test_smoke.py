# Copyright 2026 The fluxtheo authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end smoke tests for the python bindings.

The numerical heavy lifting is covered by the C++ suites; these tests check
that the bound surface is usable from python, that numpy arrays cross the
boundary in both directions, and that error types map onto python exceptions.
"""

import math

import numpy as np
import pytest

import fluxtheo as ft

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def random_projective_protocol(dim, seed, unital=True):
    rng = ft.Rng(seed)
    spec = ft.ProtocolSpec()
    spec.rho = ft.random_density(dim, rng)
    spec.prepared = ft.random_rank1_projective(dim, rng)
    if unital:
        spec.channel = ft.random_unital_channel(dim, 3, rng)
    else:
        spec.channel = ft.random_channel(dim, 3, rng)
    spec.final_m = ft.random_rank1_projective(dim, rng)
    spec.q = ft.random_prob_vector(dim, rng)
    ft.validate_protocol(spec)
    return spec


def test_version_and_doc():
    assert ft.__version__
    assert "channels" in (ft._core.__doc__ or "")


def test_linalg_roundtrip():
    h = np.diag([0.0, 0.4, 1.1]).astype(complex)
    rho = ft.gibbs_state(h, 2.0)
    assert abs(np.trace(rho) - 1.0) < 1e-14
    lnz_a = ft.log_partition_function(h, 2.0)
    lnz_b = ft.log_partition_from_levels(np.array([0.0, 0.4, 1.1]), 2.0)
    assert abs(lnz_a - lnz_b) < 1e-13
    spec = ft.eig_hermitian(h)
    assert np.allclose(sorted(spec.values), [0.0, 0.4, 1.1])
    assert ft.purity(rho) <= 1.0 + 1e-12


def test_channel_apply_and_duality():
    rng = ft.Rng(11)
    ch = ft.random_channel(3, 2, rng)
    a = ft.random_density(3, rng)
    b = ft.random_density(3, rng)
    lhs = np.trace(a.conj().T @ ch.apply(b))
    rhs = np.trace(ch.dual_apply(a).conj().T @ b)
    assert abs(lhs - rhs) < 1e-12
    assert ch.tp_residual() < 1e-12


def test_forward_statistics_and_efficacy():
    spec = random_projective_protocol(3, seed=5)
    stats = ft.forward_statistics(spec)
    assert stats.f.shape == (3,)
    assert abs(stats.f.sum() - 1.0) < 1e-10
    assert np.all(stats.transition >= -1e-12)

    eff = ft.efficacy(spec)
    assert abs(eff.atom_route - eff.gamma) < 1e-10
    assert eff.closed_form_valid
    assert abs(eff.closed_form - eff.gamma) < 1e-10
    assert ft.jarzynski_residual(spec, ft.VChoice.LOG_COND_Q) < 1e-11
    assert eff.gamma <= ft.gamma_upper_bound(spec) + 1e-10

    law = ft.second_law_check(spec)
    assert law.holds
    assert abs(law.lower_bound + math.log(law.gamma)) < 1e-12


def test_distribution_interface():
    spec = random_projective_protocol(2, seed=9)
    pdf = ft.forward_pdf(spec, ft.VChoice.LOG_P_Q)
    assert len(pdf) >= 1
    assert abs(pdf.total() - 1.0) < 1e-12
    vs = [a.v for a in pdf.atoms]
    assert vs == sorted(vs)
    man = sum(a.p * math.exp(0.3 * a.v) for a in pdf.atoms)
    assert abs(man - pdf.mgf(0.3)) < 1e-12


def test_crooks_and_mgf_identity():
    spec = random_projective_protocol(3, seed=21, unital=True)
    spec.q = np.full(3, 1.0 / 3.0)
    ck = ft.crooks_check(spec)
    assert ck.unitality_residual < 1e-10
    assert ck.max_atom_residual < 1e-10
    for lam in (-1.5, -0.3, 0.6, 1.7):
        mc = ft.mgf_identity_check(spec, lam)
        assert mc.residual < 1e-9
        assert mc.closed_form is not None
        assert mc.closed_form_residual < 1e-9


def test_entropy_decomposition():
    spec = random_projective_protocol(3, seed=33)
    ent = ft.entropy_decomposition(spec)
    if not ent.general_infinite:
        assert ent.residual_general < 1e-9
    assert ent.projective
    if not ent.projective_a_infinite:
        assert ent.residual_projective_a < 1e-9
    assert ent.heat_term_bound_holds


def test_closed_system_protocol():
    h0 = np.diag([0.0, 1.0]).astype(complex)
    hf = np.diag([0.0, 1.4]).astype(complex)
    spec = ft.closed_system_protocol(h0, hf, H, 0.8)
    ft.validate_protocol(spec)
    assert abs(ft.efficacy(spec).gamma - 1.0) < 1e-12
    assert ft.jarzynski_residual(spec, ft.VChoice.LOG_P_Q) < 1e-12


def test_feedback_loop():
    spec = ft.UnitaryFeedbackSpec()
    spec.rho = np.diag([0.8, 0.2]).astype(complex)
    spec.prepared = ft.Measurement.from_ops([P0, P1])
    spec.pre = H
    spec.mid = ft.Measurement.from_ops([P0, P1])
    spec.controls = [X, I2]
    spec.final_m = [ft.Measurement.from_ops([P0, P1]),
                    ft.Measurement.from_ops([P0, P1])]
    spec.q = [np.array([0.9, 0.1]), np.array([0.3, 0.7])]
    ft.validate_unitary_feedback(spec)

    fb = ft.build_unitary_feedback(spec)
    eff = ft.feedback_efficacy(fb)
    closed = ft.unitary_feedback_efficacy_closed_form(spec)
    assert abs(eff.gamma - closed) < 1e-10
    assert abs(eff.atom_route - eff.gamma) < 1e-10
    assert ft.feedback_mgf_identity(fb, 0.5).max_residual < 1e-9

    mi = ft.mutual_info_pdf(spec)
    assert abs(mi.integral - 1.0) < 1e-10
    assert mi.mean_info >= -1e-12
    assert abs(mi.record_marginal.sum() - 1.0) < 1e-12


def test_bath_rates():
    bath = ft.BathParams(0.7, 0.2, 3.0)
    assert abs(ft.ohmic_rate(bath, 0.0) - 0.2 / 0.7) < 1e-14
    w = 1.3
    assert abs(ft.ohmic_rate(bath, -w) -
               math.exp(-0.7 * w) * ft.ohmic_rate(bath, w)) < 1e-13


def small_anneal():
    spec = ft.AnnealSpec()
    spec.n_qubits = 1
    spec.h = np.array([0.5])
    spec.j = []
    spec.t_f_us = 0.002
    spec.beta = 0.9
    spec.kappa = 0.01
    spec.omega_c = 2.0
    spec.schedule = ft.Schedule.linear(2.0, 1.0)
    spec.lamb_shift = False
    spec.ode_tol = 1e-8
    return spec


def test_anneal_pipeline():
    spec = small_anneal()
    ft.validate_anneal(spec)

    h_mid = ft.hamiltonian_at(spec, spec.t_f_us / 2)
    assert np.allclose(h_mid, h_mid.conj().T)

    rho0 = 0.5 * I2
    out = ft.propagate(spec, rho0)
    assert abs(np.trace(out) - 1.0) < 1e-9

    out2, traj = ft.propagate_with_trajectory(spec, rho0, record_stride=8)
    assert np.allclose(out, out2)
    assert len(traj) >= 2
    assert traj[0].t_us == 0.0

    stats = ft.induced_channel_statistics(spec)
    assert abs(stats.f.sum() - 1.0) < 1e-9
    assert np.allclose(stats.transition.sum(axis=0), 1.0, atol=1e-8)

    assert ft.qje_experiment_check(spec).residual < 1e-6
    assert ft.first_moment_check(spec).residual < 1e-6
    assert ft.non_unitality_witness(spec, spec.t_f_us / 2) >= 0.0


def test_fit_recovery_noiseless():
    base = small_anneal()
    base.n_qubits = 2
    base.h = np.array([0.4, 0.4])
    base.j = [(0, 1, 0.3)]
    base.ode_tol = 1e-6

    gen = small_anneal()
    gen.n_qubits = 2
    gen.h = np.array([0.4, 0.4])
    gen.j = [(0, 1, 0.3)]
    gen.ode_tol = 1e-6
    gen.kappa = 4e-3

    pts = [ft.synthetic_point(gen, 0.3, 0.002, 0, 0),
           ft.synthetic_point(gen, 0.6, 0.001, 0, 0)]
    opt = ft.FitOptions()
    opt.kappa_min = 1e-4
    opt.kappa_max = 1e-2
    res = ft.fit_kappa(base, pts, opt)
    assert abs(math.log(res.kappa / gen.kappa)) < 2e-3
    assert res.evaluations == len(res.trace)


def test_exception_mapping():
    spec = ft.AnnealSpec()
    spec.n_qubits = 0
    with pytest.raises(ValueError):
        ft.validate_anneal(spec)

    with pytest.raises(ValueError):
        ft.Channel.from_kraus([0.5 * I2])

    bath = ft.BathParams(-1.0, 0.2, 3.0)
    with pytest.raises(ValueError):
        ft.ohmic_rate(bath, 1.0)
