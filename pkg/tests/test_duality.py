"""Finite-dimensional duality: ||A||_{2->q} = ||A^T||_{q'->2} and extremal pairs.

Closed forms used as anchors:
    diagonal, q >= 2:  max_i |a_i|
    diagonal, q < 2:   ||(a_i)||_r with 1/r = 1/q - 1/2
    rank one  u v^T:   ||u||_q ||v||_2
    q = 2:             largest singular value
"""

import math

import numpy as np
import pytest
import scipy.linalg

from sobolev_lab.duality import (
    adjoint_norm_fixed_point,
    brute_force_norm,
    dual_vector,
    finite_operator,
    lq_norm,
    op_norm_ascent,
    primal_vector,
    q_conjugate,
)
from sobolev_lab.errors import (
    DegenerateInputError,
    DomainError,
    PreconditionError,
)


def test_q_conjugate_basics():
    assert q_conjugate(2.0) == 2.0
    assert q_conjugate(1.5) == 3.0
    assert q_conjugate(6.0) == 1.2
    q = 2.71
    assert 1.0 / q + 1.0 / q_conjugate(q) == pytest.approx(1.0, rel=1e-15)
    assert q_conjugate(q_conjugate(q)) == pytest.approx(q, rel=1e-14)
    for bad in (1.0, 0.5, -2.0):
        with pytest.raises(DomainError):
            q_conjugate(bad)


def test_diagonal_closed_forms():
    a = np.diag([2.0, 3.0])
    # q >= 2: the norm concentrates on the largest entry
    assert finite_operator(a, 3.0).op_norm == pytest.approx(3.0, rel=1e-10)
    assert finite_operator(a, 2.0).op_norm == pytest.approx(3.0, rel=1e-10)
    # q < 2: interpolation spreads mass, 1/r = 1/q - 1/2
    assert finite_operator(a, 1.5).op_norm == pytest.approx(
        793.0 ** (1.0 / 6.0), rel=1e-10
    )
    assert finite_operator(a, 1.5).op_norm == pytest.approx(
        3.0423711763595168, rel=1e-12
    )


def test_rank_one_closed_form():
    u = np.array([1.0, -2.0, 0.5])
    v = np.array([0.7, 1.1])
    a = np.outer(u, v)
    for q, frozen in ((1.5, 3.3843800840313817), (3.0, 2.7245958141206232)):
        op = finite_operator(a, q)
        assert op.op_norm == pytest.approx(
            lq_norm(u, q) * np.linalg.norm(v), rel=1e-10
        )
        assert op.op_norm == pytest.approx(frozen, rel=1e-12)


def test_q2_matches_singular_value():
    rng = np.random.default_rng(7)
    for m, n in ((2, 2), (3, 5), (5, 3), (4, 4), (1, 6)):
        a = rng.standard_normal((m, n))
        op = finite_operator(a, 2.0)
        assert op.op_norm == pytest.approx(
            float(scipy.linalg.svdvals(a)[0]), rel=1e-10
        )


def test_primal_and_adjoint_routes_agree():
    rng = np.random.default_rng(42)
    qs = (1.5, 2.0, 3.0, 6.0)
    worst = 0.0
    for k in range(40):
        m = int(rng.integers(1, 7))
        n = int(rng.integers(1, 7))
        a = rng.standard_normal((m, n))
        q = qs[k % 4]
        p = op_norm_ascent(a, q, seed=k)
        d = adjoint_norm_fixed_point(a, q, seed=k)
        worst = max(worst, abs(p - d) / max(p, 1.0))
    assert worst < 1e-9


def test_brute_force_oracle_agrees():
    rng = np.random.default_rng(3)
    for k, q in enumerate((1.5, 2.0, 3.0, 6.0) * 3):
        n = 2 + k % 3
        a = rng.standard_normal((4, n))
        op = finite_operator(a, q, seed=k)
        assert brute_force_norm(a, q) == pytest.approx(op.op_norm, rel=1e-8)


def test_brute_force_single_column():
    a = np.array([[1.0], [-2.0], [2.0]])
    assert brute_force_norm(a, 3.0) == pytest.approx(17.0 ** (1.0 / 3.0), rel=1e-14)


def test_pairing_identity_any_direction():
    # <f, A^T g> recovers ||Af||_q for every unit f, optimizer or not
    rng = np.random.default_rng(5)
    a = rng.standard_normal((4, 3))
    op = finite_operator(a, 3.0)
    for _ in range(10):
        f = rng.standard_normal(3)
        f /= np.linalg.norm(f)
        g = dual_vector(f, op)
        assert lq_norm(g, q_conjugate(3.0)) == pytest.approx(1.0, abs=1e-12)
        val = float(f @ (a.T @ g))
        assert val == pytest.approx(lq_norm(a @ f, 3.0), rel=1e-12)
        assert val <= op.op_norm * (1.0 + 1e-12)


def test_extremal_pair_round_trip():
    # duality-map iteration f <- primal(dual(f)) converges to an optimizer;
    # at the fixed point the pairing attains the certified norm
    rng = np.random.default_rng(9)
    for q in (1.5, 3.0, 6.0):
        a = rng.standard_normal((4, 4))
        op = finite_operator(a, q)
        f = np.ones(4) / 2.0
        for _ in range(600):
            f_next = primal_vector(dual_vector(f, op), op)
            if np.max(np.abs(f_next - f)) < 1e-15:
                f = f_next
                break
            f = f_next
        g = dual_vector(f, op)
        assert lq_norm(a @ f, q) == pytest.approx(op.op_norm, rel=1e-9)
        assert float(f @ (a.T @ g)) == pytest.approx(op.op_norm, rel=1e-9)
        back = primal_vector(g, op)
        assert min(
            float(np.max(np.abs(back - f))), float(np.max(np.abs(back + f)))
        ) < 1e-9


def test_error_paths():
    a = np.eye(2)
    op = finite_operator(a, 3.0)
    with pytest.raises(PreconditionError):
        dual_vector(np.array([1.0, 1.0]), op)
    with pytest.raises(PreconditionError):
        primal_vector(np.array([0.9, 0.9]), op)
    sing = finite_operator(np.array([[1.0, 0.0], [0.0, 0.0]]), 3.0)
    with pytest.raises(DegenerateInputError):
        dual_vector(np.array([0.0, 1.0]), sing)
    with pytest.raises(DomainError):
        brute_force_norm(np.ones((2, 5)), 3.0)
    with pytest.raises(DomainError):
        op_norm_ascent(np.ones((2, 2)), 1.0)
    with pytest.raises(DomainError):
        finite_operator(np.array([[np.inf, 1.0]]), 3.0)


def test_norm_scales_linearly():
    rng = np.random.default_rng(13)
    a = rng.standard_normal((3, 3))
    base = finite_operator(a, 1.5).op_norm
    assert finite_operator(2.5 * a, 1.5).op_norm == pytest.approx(
        2.5 * base, rel=1e-10
    )


def test_wide_and_tall_shapes():
    rng = np.random.default_rng(17)
    tall = rng.standard_normal((8, 2))
    wide = rng.standard_normal((2, 8))
    for q in (1.5, 4.0):
        vt = finite_operator(tall, q).op_norm
        vw = finite_operator(wide, q).op_norm
        assert vt > 0 and vw > 0
        assert brute_force_norm(tall, q) == pytest.approx(vt, rel=1e-8)
