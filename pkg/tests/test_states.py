import math

import numpy as np
import pytest

from dephasim.channels import Local, NoiseScenario, PairCollective, evolve, gamma
from dephasim.errors import UnsupportedScenarioError
from dephasim.linalg import frobenius_distance
from dephasim.presets import PAPER_MATRIX, draw_state, named_scenario
from dephasim.states import (
    DensityMatrix,
    Fragile,
    GHZState,
    analytic_evolved,
    projector,
    reduced_all,
)

RNG = np.random.default_rng(2024)


def test_fragile_projector_layout():
    spec = Fragile(0.6, 0.3j, math.sqrt(1 - 0.36 - 0.09))
    rho = projector(spec).matrix
    # third basis state is unpopulated: its row and column vanish
    assert np.max(np.abs(rho[2, :])) == 0.0
    assert np.max(np.abs(rho[:, 2])) == 0.0
    assert abs(rho[0, 0] - 0.36) < 1e-15
    assert abs(rho[0, 1] - 0.6 * np.conj(0.3j)) < 1e-15
    assert abs(rho[1, 3] - 0.3j * np.conj(spec.d)) < 1e-15


def test_w_projector_support():
    spec = draw_state("w", RNG)
    rho = projector(spec).matrix
    populated = {1, 2, 4}
    for i in range(8):
        for j in range(8):
            if i not in populated or j not in populated:
                assert rho[i, j] == 0.0
    assert abs(rho[1, 1] - abs(spec.a1) ** 2) < 1e-15
    assert abs(rho[2, 4] - spec.a2 * np.conj(spec.a4)) < 1e-15


def test_ghz_projector_corners():
    s = 1 / math.sqrt(2)
    rho = projector(GHZState(s, s)).matrix
    assert abs(rho[0, 0] - 0.5) < 1e-15
    assert abs(rho[7, 7] - 0.5) < 1e-15
    assert abs(rho[0, 7] - 0.5) < 1e-15
    assert np.count_nonzero(rho) == 4


def test_projector_is_idempotent():
    for cls in ("fragile", "robust", "generic", "w", "ghz"):
        rho = projector(draw_state(cls, RNG)).matrix
        assert np.max(np.abs(rho @ rho - rho)) < 1e-12


def test_projector_rejects_unnormalized():
    with pytest.raises(ValueError, match="normalized"):
        projector(Fragile(1.0, 1.0, 1.0))


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4), ("A",))  # dimension mismatch
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([0.6, 0.6]), ("A",))  # trace != 1
    bad = np.array([[0.5, 0.5], [-0.5, 0.5]])
    with pytest.raises(ValueError):
        DensityMatrix(bad, ("A",))  # not Hermitian
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]), ("A",))  # negative eigenvalue


def test_analytic_fragile_collective_factors():
    spec = draw_state("fragile", RNG)
    t = 1.3
    g = gamma(1.0, t)
    rho0 = projector(spec).matrix
    out = analytic_evolved(spec, named_scenario("2q-collective", 1.0), t).matrix
    assert abs(out[0, 1] - rho0[0, 1] * g) < 1e-15
    assert abs(out[0, 3] - rho0[0, 3] * g**4) < 1e-15
    assert abs(out[1, 3] - rho0[1, 3] * g) < 1e-15
    assert np.max(np.abs(np.diag(out) - np.diag(rho0))) < 1e-15


def test_analytic_robust_collective_keeps_singlet_coherence():
    spec = draw_state("robust", RNG)
    t = 2.0
    rho0 = projector(spec).matrix
    out = analytic_evolved(spec, named_scenario("2q-collective", 1.0), t).matrix
    assert abs(out[1, 2] - rho0[1, 2]) < 1e-15


def test_analytic_w_triple_collective_is_frozen():
    spec = draw_state("w", RNG)
    rho0 = projector(spec).matrix
    out = analytic_evolved(spec, named_scenario("3q-collective", 1.0), 2.7).matrix
    assert np.max(np.abs(out - rho0)) == 0.0


def test_analytic_ghz_decay_factors_per_scenario():
    spec = draw_state("ghz", RNG)
    rho0 = projector(spec).matrix
    t = 0.9
    g = gamma(1.0, t)
    cases = {
        "3q-local-A": g,
        "3q-pair-AB": g**4,
        "3q-collective": g**4,
        "3q-multi-local": g**3,
        "3q-local-A-pair-BC": g * g**4,
    }
    for name, factor in cases.items():
        out = analytic_evolved(spec, named_scenario(name, 1.0), t).matrix
        assert abs(out[0, 7] - rho0[0, 7] * factor) < 1e-15, name


def test_analytic_matches_kraus_for_all_published_pairs():
    rng = np.random.default_rng(77)
    for cls, scen_name in PAPER_MATRIX:
        scenario = named_scenario(scen_name, 1.7)
        for _ in range(10):
            spec = draw_state(cls, rng)
            rho0 = projector(spec)
            for t in np.linspace(0.0, 2.4, 5):
                reference = analytic_evolved(spec, scenario, t)
                via_kraus = evolve(rho0, scenario, t)
                assert (
                    frobenius_distance(reference.matrix, via_kraus.matrix) <= 1e-12
                ), (cls, scen_name, t)


def test_analytic_matches_kraus_for_second_forms_and_generic():
    rng = np.random.default_rng(78)
    scenario = named_scenario("2q-collective", 0.9)
    for cls in ("fragile2", "robust2", "generic"):
        for _ in range(5):
            spec = draw_state(cls, rng)
            for t in (0.0, 0.6, 1.8):
                reference = analytic_evolved(spec, scenario, t)
                via_kraus = evolve(projector(spec), scenario, t)
                assert frobenius_distance(reference.matrix, via_kraus.matrix) <= 1e-12


def test_analytic_rejects_overlap_scenarios():
    spec = draw_state("w", RNG)
    scenario = NoiseScenario(
        3, ((Local("A"), 1.0), (PairCollective("A", "B"), 1.0)), allow_overlap=True
    )
    with pytest.raises(UnsupportedScenarioError):
        analytic_evolved(spec, scenario, 1.0)


def test_analytic_rejects_register_mismatch():
    spec = draw_state("fragile", RNG)
    with pytest.raises(ValueError):
        analytic_evolved(spec, named_scenario("3q-local-A", 1.0), 1.0)


def test_reduced_fragile_single_qubit():
    spec = draw_state("fragile", RNG)
    t = 1.1
    g = gamma(1.0, t)
    evolved = analytic_evolved(spec, named_scenario("2q-collective", 1.0), t)
    red = reduced_all(evolved)
    a, b, d = spec.a, spec.b, spec.d
    rho_a = red[("A",)].matrix
    assert abs(rho_a[0, 0] - (abs(a) ** 2 + abs(b) ** 2)) < 1e-14
    assert abs(rho_a[0, 1] - b * np.conj(d) * g) < 1e-14
    assert abs(rho_a[1, 1] - abs(d) ** 2) < 1e-14


def test_reduced_w_under_local_A():
    spec = draw_state("w", RNG)
    t = 0.7
    g = gamma(1.0, t)
    evolved = analytic_evolved(spec, named_scenario("3q-local-A", 1.0), t)
    red = reduced_all(evolved)
    a1, a2, a4 = spec.a1, spec.a2, spec.a4
    # BC keeps its coherence with no decay factor
    rho_bc = red[("B", "C")].matrix
    assert abs(rho_bc[1, 2] - a1 * np.conj(a2)) < 1e-14
    assert abs(rho_bc[0, 0] - abs(a4) ** 2) < 1e-14
    # AB coherence carries the local decay factor
    rho_ab = red[("A", "B")].matrix
    assert abs(rho_ab[1, 2] - a2 * np.conj(a4) * g) < 1e-14
    # single-qubit reductions are diagonal at every time
    for q in ("A", "B", "C"):
        mat = red[(q,)].matrix
        assert abs(mat[0, 1]) < 1e-15
    rho_a = red[("A",)].matrix
    assert abs(rho_a[0, 0] - (abs(a1) ** 2 + abs(a2) ** 2)) < 1e-14
    assert abs(rho_a[1, 1] - abs(a4) ** 2) < 1e-14


def test_reduced_ghz_pairwise_diagonal():
    spec = draw_state("ghz", RNG)
    evolved = analytic_evolved(spec, named_scenario("3q-multi-local", 1.0), 1.5)
    red = reduced_all(evolved)
    expected = np.diag([abs(spec.a0) ** 2, 0.0, 0.0, abs(spec.a7) ** 2])
    for pair in (("A", "B"), ("A", "C"), ("B", "C")):
        assert np.max(np.abs(red[pair].matrix - expected)) < 1e-14


def test_reduced_all_traces_are_one():
    spec = draw_state("generic", RNG)
    evolved = evolve(projector(spec), named_scenario("2q-multi-local", 1.0), 0.4)
    for dm in reduced_all(evolved).values():
        assert abs(np.trace(dm.matrix) - 1.0) < 1e-12


def test_reduced_all_subset_count():
    w = projector(draw_state("w", RNG))
    assert set(reduced_all(w)) == {
        ("A",),
        ("B",),
        ("C",),
        ("A", "B"),
        ("A", "C"),
        ("B", "C"),
    }
    pair = projector(draw_state("robust", RNG))
    assert set(reduced_all(pair)) == {("A",), ("B",)}
