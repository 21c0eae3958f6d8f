"""Expected-PCA decompositions, subproblem solvers, and the eigen oracle."""
import numpy as np
import pytest

from dcstream import (
    CovarianceSpec,
    EuclideanBall,
    GeneratorSpec,
    OnePassStream,
    SampleSchedule,
    SolverConfig,
    decomp1_problem,
    decomp2_problem,
    epca1_t,
    epca1_update,
    epca2_subproblem,
    epca2_t,
    epca_objective,
    random_ball_point,
    run_osdca_exact_g,
    shuffle,
    top_eigvec_oracle,
)
from dcstream.epca import SUBPROBLEM_BACKENDS
from dcstream.seeding import INIT, child_seed, make_rng

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])


def subproblem_value(w, t, batch, smoothness):
    """Reference evaluation of the sampled second-decomposition model."""
    value = 0.5 * smoothness * float(w @ w) - float(t @ w)
    if len(batch):
        value -= 0.5 * float(np.mean((np.asarray(batch) @ w) ** 2))
    return value


# ------------------------------------------------------------ objective

def test_objective_hand_values():
    assert epca_objective(E1, np.array([E1])) == pytest.approx(-0.5)
    assert epca_objective(E2, np.array([E1])) == pytest.approx(0.0)
    assert epca_objective(E1, np.array([E1, E2])) == pytest.approx(-0.25)


# ------------------------------------------------------------- epca1_t

def test_epca1_t_hand_values():
    assert epca1_t(E1, np.array([E1, E2]), 1.0) == pytest.approx([1.5, 0.0], abs=1e-15)
    assert epca1_t(E1, np.array([E2]), 2.0) == pytest.approx([2.0, 0.0], abs=1e-15)
    assert epca1_t(np.zeros(2), np.array([E1, E2]), 7.0) == pytest.approx([0.0, 0.0], abs=0.0)


def test_epca1_t_rejects_empty_batch():
    with pytest.raises(ValueError):
        epca1_t(E1, np.zeros((0, 2)), 1.0)


# -------------------------------------------------------- epca1_update

def test_epca1_update_hand_values():
    assert epca1_update(np.array([0.3, 0.4]), 1.0) == pytest.approx([0.3, 0.4], abs=1e-15)
    assert epca1_update(np.array([3.0, 4.0]), 1.0) == pytest.approx([0.6, 0.8], abs=1e-15)
    assert epca1_update(np.zeros(3), 5.0).tolist() == [0.0, 0.0, 0.0]


def test_epca1_update_boundary_tie_needs_no_tiebreak():
    # ||t|| = lam exactly: both branches give the same point
    t = np.array([3.0, 4.0])
    assert epca1_update(t, 5.0) == pytest.approx([0.6, 0.8], abs=1e-15)


def test_epca1_update_zero_weight_returns_unit_direction():
    w = epca1_update(np.array([0.0, -2.0]), 0.0)
    assert w == pytest.approx([0.0, -1.0], abs=1e-15)
    assert epca1_update(np.zeros(2), 0.0).tolist() == [0.0, 0.0]


def test_epca1_update_rejects_negative_weight():
    with pytest.raises(ValueError):
        epca1_update(E1, -1.0)


def test_epca1_update_matches_projected_gradient_oracle():
    # 1000 random (t, lam) pairs in dimensions <= 8, solved independently
    # by many small projected-gradient steps on (lam/2)||w||^2 - <t, w>;
    # all instances are stepped together as one vectorized batch.
    rng = make_rng(808, 0)
    count = 1000
    dims = rng.integers(1, 9, size=count)
    lams = rng.uniform(0.05, 4.0, size=count)
    ts = [rng.standard_normal(d) * rng.uniform(0.1, 3.0) for d in dims]

    padded_t = np.zeros((count, 8))
    for i, t in enumerate(ts):
        padded_t[i, : len(t)] = t
    w = np.zeros((count, 8))
    steps = 0.2 / (lams + 1.0)
    for _ in range(3000):
        grad = lams[:, None] * w - padded_t
        w = w - steps[:, None] * grad
        norms = np.linalg.norm(w, axis=1)
        shrink = np.where(norms > 1.0, 1.0 / np.maximum(norms, 1e-300), 1.0)
        w = w * shrink[:, None]
    for i, (t, lam, d) in enumerate(zip(ts, lams, dims)):
        closed = epca1_update(t, lam)
        obj_closed = 0.5 * lam * float(closed @ closed) - float(t @ closed)
        oracle = w[i, :d]
        obj_oracle = 0.5 * lam * float(oracle @ oracle) - float(t @ oracle)
        assert obj_closed <= obj_oracle + 1e-9
        assert abs(obj_closed - obj_oracle) <= 1e-9


# ------------------------------------------------------------- epca2_t

def test_epca2_t_hand_values():
    assert epca2_t(E1, np.array([E1]), 1.0) == pytest.approx([2.0, 0.0], abs=1e-15)
    assert epca2_t(E2, np.array([E1]), 3.0) == pytest.approx([0.0, 3.0], abs=1e-15)
    assert epca2_t(np.zeros(2), np.array([E1]), 1.0).tolist() == [0.0, 0.0]


# ---------------------------------------------------- epca2_subproblem

def test_epca2_subproblem_hand_instance():
    for backend in SUBPROBLEM_BACKENDS:
        res = epca2_subproblem(
            np.array([2.0, 0.0]), np.array([E1]), 1.0, np.array([0.0, 1.0]),
            backend=backend, tolerance=1e-10, max_iterations=2000,
        )
        assert res.converged
        assert res.w == pytest.approx([1.0, 0.0], abs=1e-6)
        value = subproblem_value(res.w, np.array([2.0, 0.0]), np.array([E1]), 1.0)
        assert value == pytest.approx(-2.0, abs=1e-6)


def test_epca2_subproblem_empty_batch_is_closed_form():
    res = epca2_subproblem(np.array([0.3, 0.4]), np.zeros((0, 2)), 1.0, np.zeros(2))
    assert res.converged
    assert res.w == pytest.approx([0.3, 0.4], abs=1e-15)


def test_epca2_subproblem_zero_t_fixed_point():
    # From u0 = e2 with batch {e1} and t = 0 the inner map lands on the
    # origin and stays there; both backends return the zero vector.
    for backend in SUBPROBLEM_BACKENDS:
        res = epca2_subproblem(
            np.zeros(2), np.array([E1]), 1.0, np.array([0.0, 1.0]), backend=backend
        )
        assert res.w == pytest.approx([0.0, 0.0], abs=1e-12)


def test_epca2_subproblem_smoothness_below_sample_norm_raises():
    fat = np.array([[3.0, 0.0]])  # squared norm 9 > L
    with pytest.raises(ValueError):
        epca2_subproblem(E1, fat, 1.0, np.zeros(2))


def test_epca2_subproblem_unknown_backend_raises():
    with pytest.raises(ValueError):
        epca2_subproblem(E1, np.array([E1]), 1.0, np.zeros(2), backend="simplex")


def test_epca2_subproblem_nonconvergence_is_flagged_not_raised():
    rng = make_rng(808, 1)
    batch = rng.standard_normal((5, 3))
    batch /= np.linalg.norm(batch, axis=1, keepdims=True)
    res = epca2_subproblem(
        rng.standard_normal(3), batch, 1.0, np.zeros(3), tolerance=1e-14, max_iterations=2
    )
    assert not res.converged
    assert res.iterations == 2


def test_epca2_backends_agree_on_random_instances():
    # 100 random instances, dimension <= 10, batches <= 20 rows: the two
    # backends reach the same objective value within 1e-6.
    rng = make_rng(808, 2)
    for _ in range(100):
        d = int(rng.integers(2, 11))
        n = int(rng.integers(1, 21))
        batch = rng.standard_normal((n, d))
        batch /= np.linalg.norm(batch, axis=1, keepdims=True)
        t = rng.standard_normal(d) * rng.uniform(0.2, 2.0)
        w0 = random_ball_point(d, rng)
        smoothness = 1.0 + rng.uniform(0.0, 1.0)
        values = []
        for backend in SUBPROBLEM_BACKENDS:
            res = epca2_subproblem(
                t, batch, smoothness, w0, backend=backend,
                tolerance=1e-9, max_iterations=5000,
            )
            values.append(subproblem_value(res.w, t, batch, smoothness))
        assert abs(values[0] - values[1]) <= 1e-6


def test_inner_dca_descends_subproblem_objective():
    # Replicate the inner map and check it never increases the model value.
    rng = make_rng(808, 3)
    for _ in range(20):
        d = int(rng.integers(2, 6))
        batch = rng.standard_normal((6, d))
        batch /= np.linalg.norm(batch, axis=1, keepdims=True)
        t = rng.standard_normal(d)
        smoothness = 1.5
        u = random_ball_point(d, rng)
        prev = subproblem_value(u, t, batch, smoothness)
        for _ in range(30):
            y = batch.T @ (batch @ u) / len(batch) + t
            u = epca1_update(y, smoothness)
            val = subproblem_value(u, t, batch, smoothness)
            assert val <= prev + 1e-12
            prev = val


# ---------------------------------------------------- top_eigvec_oracle

def test_oracle_hand_instances():
    report = top_eigvec_oracle(np.array([E1, E1, E2]))
    assert report.value == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert report.objective == pytest.approx(-1.0 / 3.0, abs=1e-12)
    assert abs(report.vector @ E1) == pytest.approx(1.0, abs=1e-10)
    assert not report.degenerate

    single = top_eigvec_oracle(np.array([E1]))
    assert single.value == pytest.approx(1.0, abs=1e-12)

    iso = top_eigvec_oracle(np.array([E1, E2]))
    assert iso.degenerate
    assert iso.value == pytest.approx(0.5, abs=1e-10)


def test_oracle_matches_dense_eigendecomposition():
    rng = make_rng(808, 4)
    for _ in range(10):
        d = int(rng.integers(2, 7))
        samples = rng.standard_normal((40, d)) @ np.diag(rng.uniform(0.5, 3.0, size=d))
        report = top_eigvec_oracle(samples)
        m = samples.T @ samples / len(samples)
        eigvals, eigvecs = np.linalg.eigh(m)
        assert report.value == pytest.approx(eigvals[-1], rel=1e-10)
        assert report.second_value == pytest.approx(eigvals[-2], rel=1e-8, abs=1e-10)
        assert abs(report.vector @ eigvecs[:, -1]) == pytest.approx(1.0, abs=1e-9)


def test_oracle_rejects_empty_input():
    with pytest.raises(ValueError):
        top_eigvec_oracle(np.zeros((0, 3)))


# -------------------------------------------------- problem factories

def test_decomposition_contracts():
    p1 = decomp1_problem(4, lam=2.0)
    assert p1.alpha_bound == 1.0
    assert p1.exact_g is not None
    assert p1.exact_dh is None
    assert p1.strong_convexity.total == 4.0

    p2 = decomp2_problem(4, smoothness=1.0)
    assert p2.alpha_bound == 0.5
    assert p2.exact_g is None
    assert p2.strong_convexity.total == 1.0

    m = np.eye(4) * 0.25
    p1m = decomp1_problem(4, lam=1.0, second_moment=m)
    assert p1m.exact_dh is not None
    assert p1m.exact_dh(np.ones(4)) == pytest.approx(np.ones(4) * 1.25)


def test_decomposition_parameter_validation():
    with pytest.raises(ValueError):
        decomp1_problem(3, lam=-1.0)
    with pytest.raises(ValueError):
        decomp2_problem(3, smoothness=0.0)
    with pytest.raises(ValueError):
        decomp2_problem(3, backend="simplex")
    with pytest.raises(ValueError):
        decomp1_problem(3, lam=1.0, second_moment=np.eye(2))


def test_decomposition_difference_recovers_objective():
    # decomposition 1: g - h equals the target; decomposition 2 carries
    # twice the target (both components share the (L/2)||w||^2 term).
    rng = make_rng(808, 5)
    batch = rng.standard_normal((9, 3))
    batch /= np.linalg.norm(batch, axis=1, keepdims=True)
    w = random_ball_point(3, rng)
    target = epca_objective(w, batch)
    p1 = decomp1_problem(3, lam=1.7)
    assert p1.g_mean(w, batch) - p1.h_mean(w, batch) == pytest.approx(target, abs=1e-12)
    p2 = decomp2_problem(3, smoothness=1.0)
    assert p2.g_mean(w, batch) - p2.h_mean(w, batch) == pytest.approx(2.0 * target, abs=1e-12)


def test_sign_symmetry_of_updates():
    # Negating every sample leaves subgradients and solves unchanged.
    rng = make_rng(808, 6)
    batch = rng.standard_normal((8, 3))
    batch /= np.linalg.norm(batch, axis=1, keepdims=True)
    w = random_ball_point(3, rng)
    t = epca1_t(w, batch, 1.0)
    assert np.array_equal(t, epca1_t(w, -batch, 1.0))
    res_pos = epca2_subproblem(t, batch, 1.0, w)
    res_neg = epca2_subproblem(t, -batch, 1.0, w)
    assert np.array_equal(res_pos.w, res_neg.w)


def test_final_iterate_aligns_with_planted_direction():
    # Stationary stream, dimension 20, gap after normalization ~0.45:
    # the one-pass terminal iterate is the top eigenvector on >= 18/20 seeds.
    cov = CovarianceSpec(eigenvalues=(10.0, 1.0) + (0.2,) * 18, basis_seed=77)
    gen = GeneratorSpec(covariance=cov, train_count=100_000, validation_count=10, seed=3)
    train, _ = gen.materialize()
    v_max = top_eigvec_oracle(train.samples).vector
    problem = decomp1_problem(20, lam=1.0)
    aligned = 0
    for run in range(20):
        seed = child_seed(11, run)
        shuffled = shuffle(train, seed)
        w0 = random_ball_point(20, make_rng(seed, INIT))
        trace = run_osdca_exact_g(
            problem, w0,
            SolverConfig(variant="osdca-exact-g", schedule=SampleSchedule(1, 3.0), seed=seed),
            OnePassStream(shuffled),
        )
        aligned += abs(float(trace.final_w @ v_max)) >= 0.99
    assert aligned >= 18


def test_ball_factory_radius_is_unit():
    p = decomp1_problem(3, lam=1.0)
    assert isinstance(p.feasible_set, EuclideanBall)
    assert p.feasible_set.radius == 1.0
