"""Box-constrained solver for the diagonal distortion-matrix subproblem:
minimize ||Y - A diag(d) B||_F^2 + gamma * (converter power [+ radiated power])
over d in [lo, hi]^L. Convex and smooth, solved by projected gradient descent."""

import warnings
from dataclasses import dataclass

import numpy as np

from .quant import QUANT_COEFF


@dataclass
class BoxProblem:
    """Reduced diagonal least-squares problem with a converter-power penalty.

    gram[i, j] is the inner product of the effective columns psi_i = b_i x a_i
    of the structured operator d -> A diag(d) B (only the L columns hitting
    diagonal entries are kept); lin[i] = psi_i^H vec(Y); offset = ||Y||_F^2.
    include_trace_penalty adds gamma * d^T Re(gram) d (radiated power at the
    transmitter); the converter term is gamma * per_bit_power * sum_i 2^(b(d_i)).
    """

    gram: np.ndarray
    lin: np.ndarray
    offset: float
    gamma: float
    per_bit_power: float
    include_trace_penalty: bool
    lo: float
    hi: float


def converter_penalty(d):
    """Per-converter power factor 2^b as a function of distortion: sqrt(pi*sqrt(3)/(2(1-d^2)))."""
    d = np.asarray(d, dtype=float)
    return np.sqrt(QUANT_COEFF / (1.0 - d * d))


def converter_penalty_grad(d):
    """Derivative of converter_penalty: p(d) * d / (1 - d^2); convex increasing on (0, 1)."""
    d = np.asarray(d, dtype=float)
    return converter_penalty(d) * d / (1.0 - d * d)


def reduce_problem(
    target: np.ndarray,
    left: np.ndarray,
    right: np.ndarray,
    gamma: float,
    per_bit_power: float,
    include_trace_penalty: bool,
    lo: float,
    hi: float,
) -> BoxProblem:
    """Collapse ||target - left diag(d) right||_F^2 onto the L diagonal variables.

    Off-diagonal entries of the full matrix variable are structurally zero, so
    only L effective columns survive: gram = (left^H left) * conj(right right^H)
    and lin = diag(left^H target right^H).
    """
    if gamma < 0.0:
        raise ValueError("gamma must be >= 0")
    gram = (left.conj().T @ left) * (right @ right.conj().T).conj()
    lin = np.einsum("ij,jk,ik->i", left.conj().T, target, right.conj())
    offset = float(np.sum(np.abs(target) ** 2))
    return BoxProblem(
        gram=gram,
        lin=lin,
        offset=offset,
        gamma=gamma,
        per_bit_power=per_bit_power,
        include_trace_penalty=include_trace_penalty,
        lo=lo,
        hi=hi,
    )


def box_objective(prob: BoxProblem, d: np.ndarray) -> float:
    """Full objective value at a feasible point (constant term included)."""
    g_r = prob.gram.real
    quad_weight = 1.0 + prob.gamma if prob.include_trace_penalty else 1.0
    value = prob.offset - 2.0 * prob.lin.real @ d + quad_weight * (d @ g_r @ d)
    if prob.gamma > 0.0:
        value += prob.gamma * prob.per_bit_power * float(np.sum(converter_penalty(d)))
    return float(value)


def box_gradient(prob: BoxProblem, d: np.ndarray) -> np.ndarray:
    g_r = prob.gram.real
    quad_weight = 1.0 + prob.gamma if prob.include_trace_penalty else 1.0
    grad = 2.0 * quad_weight * (g_r @ d) - 2.0 * prob.lin.real
    if prob.gamma > 0.0:
        grad = grad + prob.gamma * prob.per_bit_power * converter_penalty_grad(d)
    return grad


def _lipschitz_estimate(gram_real: np.ndarray, iters: int = 30) -> float:
    """Largest eigenvalue of the (symmetric PSD) real Gram via power iteration."""
    n = gram_real.shape[0]
    v = np.full(n, 1.0 / np.sqrt(n))
    lam = 0.0
    for _ in range(iters):
        w = gram_real @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        lam = norm
        v = w / norm
    return float(lam)


def solve_box(
    prob: BoxProblem,
    tol: float = 1e-8,
    max_iters: int = 500,
    x0: np.ndarray | None = None,
) -> np.ndarray:
    """Projected gradient descent with Armijo backtracking.

    Spectral projected gradient: the trial step starts at 1 / Lipschitz of
    the quadratic part (power iteration on the Gram) and is then driven by
    the Barzilai-Borwein rule with a nonmonotone Armijo safeguard (window of
    recent objective values), the standard pairing that keeps spectral steps
    effective on ill-conditioned Grams. The best iterate never increases the
    objective. Stops when the projected step falls below tol in the infinity
    norm; on budget exhaustion the best iterate is returned with a warning.
    """
    n = prob.gram.shape[0]
    lo, hi = prob.lo, prob.hi
    if x0 is None:
        x = np.full(n, 0.5 * (lo + hi))
    else:
        x = np.clip(np.asarray(x0, dtype=float), lo, hi)

    quad_weight = 1.0 + prob.gamma if prob.include_trace_penalty else 1.0
    lam = _lipschitz_estimate(prob.gram.real)
    step0 = 1.0 / max(2.0 * quad_weight * lam, 1e-12)

    fx = box_objective(prob, x)
    grad = box_gradient(prob, x)
    best_x, best_f = x, fx
    recent = [fx]
    step = step0
    for _ in range(max_iters):
        stationarity = float(np.max(np.abs(x - np.clip(x - step0 * grad, lo, hi))))
        if stationarity <= tol:
            return x if fx <= best_f else best_x
        f_ref = max(recent)
        accepted = False
        for _ in range(60):
            x_new = np.clip(x - step * grad, lo, hi)
            direction = x_new - x
            f_new = box_objective(prob, x_new)
            predicted = grad @ direction
            if f_new <= f_ref + 1e-4 * predicted:
                accepted = True
                break
            step *= 0.5
        if not accepted or -predicted <= 1e-15 * max(1.0, abs(fx)):
            # no further float64 progress possible: converged in practice
            return best_x
        move = float(np.max(np.abs(x_new - x)))
        grad_new = box_gradient(prob, x_new)
        ds = x_new - x
        dg = grad_new - grad
        curv = float(ds @ dg)
        step = float(ds @ ds) / curv if curv > 0.0 else step0
        step = float(np.clip(step, 1e-8 * step0, 1e8 * step0))
        x, fx, grad = x_new, f_new, grad_new
        recent.append(fx)
        if len(recent) > 10:
            recent.pop(0)
        if fx < best_f:
            best_x, best_f = x, fx
        if move <= tol:
            return x if fx <= best_f else best_x
    warnings.warn(
        "solve_box: stationarity tolerance not reached within the iteration budget",
        RuntimeWarning,
        stacklevel=2,
    )
    return best_x
