"""Bayesian variable selection under a g-prior, with synthetic data recipes.

The model indicator gamma lives on {0,1}^p with single-flip moves.  The
marginal log posterior is

    log pi(gamma) = c1 * Y' P_gamma Y - c0 * |gamma|,
    c0 = nu log p + 0.5 log(1 + g),     c1 = g / (2 sigma2_e (g + 1)),

where P_gamma projects onto the span of the selected design columns.  The
neighborhood sweep is evaluated with rank-one projection updates so one
iteration costs a single BLAS pass over the design matrix.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import RankDeficiencyError
from .base import BinaryVectorTarget

_RANK_RTOL = 1e-10


@dataclass(frozen=True)
class VarSelModel:
    """Design matrix, response and hyperparameters of one selection problem."""

    L: np.ndarray
    Y: np.ndarray
    g: float
    nu: float
    sigma2_e: float
    seed: int | None = None
    recipe: str = "custom"

    def __post_init__(self):
        L = np.asarray(self.L, dtype=np.float64)
        Y = np.asarray(self.Y, dtype=np.float64)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "Y", Y)
        if L.ndim != 2 or Y.ndim != 1 or L.shape[0] != Y.shape[0]:
            raise ValueError("L must be (n, p) and Y length n")
        if not (self.g > 0 and self.sigma2_e > 0):
            raise ValueError("g and sigma2_e must be positive")

    @property
    def n(self) -> int:
        return self.L.shape[0]

    @property
    def p(self) -> int:
        return self.L.shape[1]

    @property
    def c0(self) -> float:
        return self.nu * np.log(self.p) + 0.5 * np.log1p(self.g)

    @property
    def c1(self) -> float:
        return self.g / (2.0 * self.sigma2_e * (self.g + 1.0))

    def to_npz(self, path):
        np.savez(
            path,
            L=self.L,
            Y=self.Y,
            g=self.g,
            nu=self.nu,
            sigma2_e=self.sigma2_e,
            seed=-1 if self.seed is None else self.seed,
            recipe=np.bytes_(self.recipe.encode()),
        )

    @staticmethod
    def from_npz(path) -> "VarSelModel":
        z = np.load(path, allow_pickle=False)
        seed = int(z["seed"])
        return VarSelModel(
            L=z["L"],
            Y=z["Y"],
            g=float(z["g"]),
            nu=float(z["nu"]),
            sigma2_e=float(z["sigma2_e"]),
            seed=None if seed < 0 else seed,
            recipe=bytes(z["recipe"]).decode(),
        )


def _thin_q(L_sub: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the column span; raises on rank deficiency."""
    if L_sub.shape[1] == 0:
        return np.zeros((L_sub.shape[0], 0))
    q, r = np.linalg.qr(L_sub)
    diag = np.abs(np.diag(r))
    scale = np.max(np.linalg.norm(L_sub, axis=0))
    if np.any(diag <= _RANK_RTOL * scale):
        raise RankDeficiencyError(
            f"selected design columns are rank deficient ({L_sub.shape[1]} columns)"
        )
    return q


def varsel_log_posterior(model: VarSelModel, gamma) -> float:
    """Exact log posterior of one model indicator (bitset over columns)."""
    gamma = np.asarray(gamma, dtype=np.uint8)
    if gamma.shape != (model.p,):
        raise ValueError(f"gamma must have length {model.p}")
    idx = np.flatnonzero(gamma)
    if idx.size == 0:
        return 0.0
    q = _thin_q(model.L[:, idx])
    qty = q.T @ model.Y
    return float(model.c1 * (qty @ qty) - model.c0 * idx.size)


class VarSelTarget(BinaryVectorTarget):
    """Single-flip neighborhood target over model indicators."""

    def __init__(self, model: VarSelModel):
        super().__init__(model.p)
        self.model = model

    def log_pi(self, x) -> float:
        return varsel_log_posterior(self.model, x)

    def neighbor_log_pis(self, x) -> np.ndarray:
        m = self.model
        x = np.asarray(x, dtype=np.uint8)
        idx = np.flatnonzero(x)
        k = idx.size
        q = _thin_q(m.L[:, idx])
        qty = q.T @ m.Y
        ypy = float(qty @ qty)
        # additions via the residualized columns
        V = m.L - q @ (q.T @ m.L)
        den = np.einsum("ij,ij->j", V, V)
        num = (V.T @ m.Y) ** 2
        out = np.empty(m.p)
        with np.errstate(divide="ignore", invalid="ignore"):
            gain = np.where(den > 0, num / np.maximum(den, 1e-300), 0.0)
        out[:] = m.c1 * (ypy + gain) - m.c0 * (k + 1)
        # deletions by refitting without the dropped column
        for pos, j in enumerate(idx):
            sub = np.delete(idx, pos)
            if sub.size == 0:
                out[j] = 0.0
                continue
            qj = _thin_q(m.L[:, sub])
            qjy = qj.T @ m.Y
            out[j] = m.c1 * float(qjy @ qjy) - m.c0 * sub.size
        return out

    def summary_code(self, x) -> int:
        return int(np.count_nonzero(x))

    def summary_codes(self, states: np.ndarray) -> np.ndarray:
        return np.asarray(states).sum(axis=1, dtype=np.int64)


def is_local_mode(target: VarSelTarget, x) -> bool:
    return target.log_pi(x) > float(np.max(target.neighbor_log_pis(x)))


def _ar1_design(rng, n: int, p: int, phi: float) -> np.ndarray:
    """Rows iid N(0, Sigma) with Sigma_ij = phi^{|i-j|}, via the AR recursion."""
    L = np.empty((n, p))
    L[:, 0] = rng.standard_normal(n)
    scale = np.sqrt(1.0 - phi * phi)
    for j in range(1, p):
        L[:, j] = phi * L[:, j - 1] + scale * rng.standard_normal(n)
    return L


def generate_intermediate_snr(n: int, p: int, seed: int) -> VarSelModel:
    """Correlated-design dataset with 20 true coefficients at intermediate SNR.

    Rows of L are N(0, Sigma) with Sigma_ij = e^{-|i-j|}; beta_j = 0 for
    j > 20 and otherwise 2 sqrt(log(p)/n) times a uniform draw from
    (2,3) u (-3,-2); Y = L beta + N(0, I).  sigma2_e defaults to the
    null-model residual variance |Y|^2 / n, recorded in the model.
    """
    if p < 20:
        raise ValueError("intermediate-snr recipe needs p >= 20")
    rng = np.random.default_rng(seed)
    L = _ar1_design(rng, n, p, np.exp(-1.0))
    beta = np.zeros(p)
    mags = 2.0 * np.sqrt(np.log(p) / n) * rng.uniform(2.0, 3.0, size=20)
    signs = np.where(rng.random(20) < 0.5, -1.0, 1.0)
    beta[:20] = mags * signs
    Y = L @ beta + rng.standard_normal(n)
    sigma2_e = float(Y @ Y) / n
    return VarSelModel(
        L=L, Y=Y, g=float(p) ** 2, nu=1.0, sigma2_e=sigma2_e, seed=seed,
        recipe="intermediate-snr",
    )


SIX_MODE_SETS = (
    (1, 2, 3),
    (1, 2, 4),
    (1, 3, 4),
    (5, 6, 7),
    (5, 6, 8),
    (5, 7, 8),
)


def six_mode_vectors(p: int) -> list[np.ndarray]:
    out = []
    for cols in SIX_MODE_SETS:
        x = np.zeros(p, dtype=np.uint8)
        for c in cols:
            x[c - 1] = 1
        out.append(x)
    return out


def generate_six_mode(
    n: int = 100,
    p: int = 200,
    seed: int = 0,
    sigma2_e: float = 1.0,
    require_modes: bool = True,
) -> VarSelModel:
    """Dataset engineered to carry six near-tied local modes.

    Y = (L1 + L2 + L3) beta + N(0, 0.5^2 I) with beta a single scalar draw
    sqrt(log(p)/n) * Unif(4, 6).  Columns 4, 5 and 8 are near-collinear
    combinations (noise scale 0.1) of the others, so the six index sets
    {1,2,3}, {1,2,4}, {1,3,4}, {5,6,7}, {5,6,8}, {5,7,8} all become
    single-flip local maxima of the posterior.  With ``require_modes`` the
    generated dataset is checked against that property and rejected if it
    fails (pick another seed).
    """
    if p < 8:
        raise ValueError("six-mode recipe needs p >= 8")
    rng = np.random.default_rng(seed)
    L = rng.standard_normal((n, p))
    L[:, 3] = L[:, 1] - L[:, 2] + 0.1 * rng.standard_normal(n)
    L[:, 4] = (
        L[:, 0] + L[:, 1] + L[:, 2] + L[:, 5] + L[:, 6]
        + 0.1 * rng.standard_normal(n)
    )
    L[:, 7] = L[:, 5] - L[:, 6] + 0.1 * rng.standard_normal(n)
    beta = np.sqrt(np.log(p) / n) * rng.uniform(4.0, 6.0)
    Y = (L[:, 0] + L[:, 1] + L[:, 2]) * beta + 0.5 * rng.standard_normal(n)
    model = VarSelModel(
        L=L, Y=Y, g=float(p) ** 2, nu=1.0, sigma2_e=sigma2_e, seed=seed,
        recipe="six-mode",
    )
    if require_modes:
        target = VarSelTarget(model)
        bad = [
            cols
            for cols, vec in zip(SIX_MODE_SETS, six_mode_vectors(p))
            if not is_local_mode(target, vec)
        ]
        if bad:
            raise ValueError(
                f"seed {seed} does not yield the six-mode structure; {bad} "
                "are not local modes"
            )
    return model


def generate_varsel_data(recipe: str, n: int, p: int, seed: int, **kwargs) -> VarSelModel:
    if recipe == "intermediate-snr":
        return generate_intermediate_snr(n, p, seed)
    if recipe == "six-mode":
        return generate_six_mode(n, p, seed, **kwargs)
    raise ValueError(f"unknown varsel recipe {recipe!r}")
