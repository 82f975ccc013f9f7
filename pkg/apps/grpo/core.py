"""
GRPO numerics: group-normalized advantages, the clipped KL-regularized loss
and its gradient with respect to the current per-token log-likelihoods.

loss = -(1/n) sum_j (1/t_j) sum_k [ min(r A, clip(r, 1-eps, 1+eps) A) - gamma * KL ]
with r = exp(logp_current - logp_old) and the k3 estimator
KL = exp(ref - cur) - (ref - cur) - 1.
"""

from collections.abc import Sequence

import numpy as np

from core.exceptions import DataError, EmptyInput, NonFiniteInput

from .schemas import AdvantageVector, GrpoBatch, GrpoConfig, GrpoSample

STD_FLOOR = 1e-8
LOGP_TOLERANCE = 1e-12


def normalize_advantages(rewards: Sequence[float] | np.ndarray) -> AdvantageVector:
    """(R - mean) / std with population std; all zeros for a constant group."""
    r = np.asarray(rewards, dtype=float)
    if r.size == 0:
        raise EmptyInput("cannot normalize an empty reward vector")
    std = r.std()
    if std < STD_FLOOR:
        return AdvantageVector(values=np.zeros_like(r))
    return AdvantageVector(values=(r - r.mean()) / std)


def kl_estimate(logp_current: float | np.ndarray, logp_reference: float | np.ndarray):
    """k3 estimator, nonnegative, zero iff the two log-likelihoods match."""
    delta = np.asarray(logp_reference, dtype=float) - np.asarray(logp_current, dtype=float)
    value = np.exp(delta) - delta - 1.0
    if value.ndim == 0:
        return float(value)
    return value


def _validate(batch: GrpoBatch) -> None:
    if not batch.samples:
        raise EmptyInput("empty GRPO batch")
    for j, sample in enumerate(batch.samples):
        if sample.token_count < 1:
            raise DataError(f"response {j} has no tokens")
        arrays = (sample.logp_current, sample.logp_old, sample.logp_reference)
        if any(a.shape != sample.logp_current.shape for a in arrays):
            raise DataError(f"response {j} has mismatched token arrays")
        for a in arrays:
            if not np.all(np.isfinite(a)):
                raise NonFiniteInput(f"response {j} has a non-finite log-probability")
            if np.any(a > LOGP_TOLERANCE):
                raise DataError(f"response {j} has a positive log-probability")
        if not np.isfinite(sample.advantage):
            raise NonFiniteInput(f"response {j} has a non-finite advantage")


def _surrogate_terms(
    sample: GrpoSample, cfg: GrpoConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-token (objective, ratio, unclipped-branch-active mask, kl)."""
    ratio = np.exp(sample.logp_current - sample.logp_old)
    unclipped = ratio * sample.advantage
    clipped = np.clip(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon) * sample.advantage
    kl = kl_estimate(sample.logp_current, sample.logp_reference)
    objective = np.minimum(unclipped, clipped) - cfg.kl_gamma * kl
    return objective, ratio, unclipped <= clipped, kl


def grpo_loss(batch: GrpoBatch, cfg: GrpoConfig | None = None) -> float:
    cfg = cfg or GrpoConfig()
    _validate(batch)
    per_response = [float(np.mean(_surrogate_terms(s, cfg)[0])) for s in batch.samples]
    return -float(np.mean(per_response))


def loss_gradient(batch: GrpoBatch, cfg: GrpoConfig | None = None) -> list[np.ndarray]:
    """d loss / d logp_current, one array per response."""
    cfg = cfg or GrpoConfig()
    _validate(batch)
    n = len(batch.samples)
    grads = []
    for sample in batch.samples:
        _, ratio, active, _ = _surrogate_terms(sample, cfg)
        d_surrogate = np.where(active, ratio * sample.advantage, 0.0)
        d_kl = 1.0 - np.exp(sample.logp_reference - sample.logp_current)
        d_objective = d_surrogate - cfg.kl_gamma * d_kl
        grads.append(-d_objective / (n * sample.token_count))
    return grads


def mean_kl(batch: GrpoBatch) -> float:
    """Mean over responses of the per-token k3 estimate."""
    if not batch.samples:
        return 0.0
    return float(
        np.mean([np.mean(kl_estimate(s.logp_current, s.logp_reference)) for s in batch.samples])
    )
