"""
Toy reasoning policy.

A response is three kinds of decisions, each one "token" for the GRPO loss:
1. how many logical steps to take (categorical, one distribution per difficulty tier)
2. how many words each step uses (categorical over verbosity buckets, shared)
3. for each step after the first, whether to fold it into the previous
   paragraph (Bernoulli on a shared merge logit)

All parameters live in one flat vector so snapshots and finite differences
are plain array operations. Logits are divided by the sampling temperature.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .schemas import ProblemSpec, TrainConfig


def _log_softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max()
    return shifted - np.log(np.exp(shifted).sum())


def _categorical(cdf: np.ndarray, u: float) -> int:
    idx = int(np.searchsorted(cdf, u, side="right"))
    return min(idx, len(cdf) - 1)


@dataclass(frozen=True)
class PolicyTables:
    """Log-probabilities, probabilities and CDFs of one parameter snapshot."""
    step_logp: np.ndarray  # (tiers, max_logical_steps)
    step_probs: np.ndarray
    step_cdf: np.ndarray
    verbosity_logp: np.ndarray
    verbosity_probs: np.ndarray
    verbosity_cdf: np.ndarray
    merge_prob: float
    log_merge: float
    log_keep: float


@dataclass
class ToyTrace:
    tier_index: int
    logical_steps: int
    bucket_index: int
    merges: np.ndarray
    answer: str
    correct: bool

    @property
    def token_count(self) -> int:
        """Decision count: step choice, verbosity choice, one per merge slot."""
        return 2 + len(self.merges)

    @property
    def merge_count(self) -> int:
        return int(self.merges.sum())


class ToyPolicy:
    def __init__(
        self,
        tiers: Sequence[int],
        buckets: Sequence[int],
        max_logical_steps: int,
        temperature: float,
        theta: np.ndarray | None = None,
    ):
        self.tiers = tuple(sorted(set(tiers)))
        self.buckets = tuple(buckets)
        self.max_logical_steps = max_logical_steps
        self.temperature = temperature
        size = len(self.tiers) * max_logical_steps + len(self.buckets) + 1
        self.theta = np.zeros(size) if theta is None else np.array(theta, dtype=float)
        if self.theta.shape != (size,):
            raise ValueError(f"expected {size} parameters, got {self.theta.shape}")
        self._tables: tuple[bytes, PolicyTables] | None = None

    # Parameter views

    def _split(self, flat: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        n_step = len(self.tiers) * self.max_logical_steps
        n_verb = len(self.buckets)
        steps = flat[:n_step].reshape(len(self.tiers), self.max_logical_steps)
        return steps, flat[n_step : n_step + n_verb], flat[n_step + n_verb :]

    @property
    def step_logits(self) -> np.ndarray:
        return self._split(self.theta)[0]

    @property
    def verbosity_logits(self) -> np.ndarray:
        return self._split(self.theta)[1]

    @property
    def merge_logit(self) -> float:
        return float(self._split(self.theta)[2][0])

    # Construction

    @classmethod
    def initial(cls, problems: Sequence[ProblemSpec], cfg: TrainConfig) -> "ToyPolicy":
        """Overthinking start: logits rise linearly with step count; merges rare."""
        policy = cls(
            tiers=[p.required_steps for p in problems],
            buckets=cfg.verbosity_buckets,
            max_logical_steps=cfg.max_logical_steps,
            temperature=cfg.temperature,
        )
        steps, _, merge = policy._split(policy.theta)
        steps[:] = cfg.overthinking_slope * np.arange(cfg.max_logical_steps)
        merge[0] = cfg.initial_merge_logit
        return policy

    @classmethod
    def forcing(
        cls,
        problems: Sequence[ProblemSpec],
        cfg: TrainConfig,
        steps: int,
        bucket_index: int = 0,
        merge: bool = False,
        strength: float = 60.0,
    ) -> "ToyPolicy":
        """Near-deterministic policy, for tests and scripted scenarios."""
        policy = cls.initial(problems, cfg)
        step_logits, verb_logits, merge_logit = policy._split(policy.theta)
        step_logits[:] = -strength
        step_logits[:, steps - 1] = strength
        verb_logits[:] = -strength
        verb_logits[bucket_index] = strength
        merge_logit[0] = strength if merge else -strength
        return policy

    def copy(self) -> "ToyPolicy":
        return ToyPolicy(
            self.tiers, self.buckets, self.max_logical_steps, self.temperature, self.theta.copy()
        )

    def with_theta(self, theta: np.ndarray) -> "ToyPolicy":
        return ToyPolicy(self.tiers, self.buckets, self.max_logical_steps, self.temperature, theta)

    # Distributions

    def tables(self) -> PolicyTables:
        """Distributions of the current parameters, recomputed whenever theta changes."""
        key = self.theta.tobytes()
        if self._tables is not None and self._tables[0] == key:
            return self._tables[1]

        step_logits, verb_logits, _ = self._split(self.theta)
        step_logp = np.stack([_log_softmax(row / self.temperature) for row in step_logits])
        step_probs = np.exp(step_logp)
        verbosity_logp = _log_softmax(verb_logits / self.temperature)
        verbosity_probs = np.exp(verbosity_logp)
        z = self.merge_logit / self.temperature
        tables = PolicyTables(
            step_logp=step_logp,
            step_probs=step_probs,
            step_cdf=np.cumsum(step_probs, axis=1),
            verbosity_logp=verbosity_logp,
            verbosity_probs=verbosity_probs,
            verbosity_cdf=np.cumsum(verbosity_probs),
            merge_prob=float(1.0 / (1.0 + np.exp(-z))),
            log_merge=float(-np.logaddexp(0.0, -z)),
            log_keep=float(-np.logaddexp(0.0, z)),
        )
        self._tables = (key, tables)
        return tables

    def tier_index(self, required_steps: int) -> int:
        return self.tiers.index(required_steps)

    def step_log_probs(self, tier_index: int) -> np.ndarray:
        return self.tables().step_logp[tier_index]

    def verbosity_log_probs(self) -> np.ndarray:
        return self.tables().verbosity_logp

    def merge_prob(self) -> float:
        return self.tables().merge_prob

    def expected_logical_steps(self, required_steps: int) -> float:
        probs = self.tables().step_probs[self.tier_index(required_steps)]
        return float(np.dot(probs, np.arange(1, self.max_logical_steps + 1)))

    def expected_words_per_step(self) -> float:
        return float(np.dot(self.tables().verbosity_probs, self.buckets))

    def expected_accuracy(self, problems: Sequence[ProblemSpec]) -> float:
        """Exact probability of a correct answer, averaged over problems."""
        step_probs = self.tables().step_probs
        counts = range(1, self.max_logical_steps + 1)
        total = 0.0
        for problem in problems:
            probs = step_probs[self.tier_index(problem.required_steps)]
            total += sum(p * problem.correct_probability(k) for p, k in zip(probs, counts))
        return total / len(problems)

    # Sampling

    def sample(self, problem: ProblemSpec, draws: np.ndarray) -> ToyTrace:
        """One trace from a fixed vector of uniforms (see TrainConfig.draws_per_response)."""
        tables = self.tables()
        tier = self.tier_index(problem.required_steps)
        logical = _categorical(tables.step_cdf[tier], draws[0]) + 1
        bucket = _categorical(tables.verbosity_cdf, draws[1])

        correct = bool(draws[2] < problem.correct_probability(logical))
        if correct:
            answer = problem.gold_answer
        else:
            answer = str(int(problem.gold_answer) + 1 + int(draws[3] * 9))

        merges = draws[4 : 4 + logical - 1] < tables.merge_prob
        return ToyTrace(
            tier_index=tier,
            logical_steps=logical,
            bucket_index=bucket,
            merges=np.asarray(merges, dtype=bool),
            answer=answer,
            correct=correct,
        )

    def trace_log_probs(self, trace: ToyTrace) -> np.ndarray:
        """Per-decision log-likelihoods, in decision order."""
        tables = self.tables()
        out = np.where(
            np.concatenate([[False, False], trace.merges]), tables.log_merge, tables.log_keep
        )
        out[0] = tables.step_logp[trace.tier_index, trace.logical_steps - 1]
        out[1] = tables.verbosity_logp[trace.bucket_index]
        return out

    def accumulate_gradient(self, trace: ToyTrace, dlogp: np.ndarray, out: np.ndarray) -> None:
        """out += sum_k dlogp[k] * d logp_k / d theta."""
        tables = self.tables()
        g_steps, g_verb, g_merge = self._split(out)
        tau = self.temperature

        g_steps[trace.tier_index] -= dlogp[0] * tables.step_probs[trace.tier_index] / tau
        g_steps[trace.tier_index, trace.logical_steps - 1] += dlogp[0] / tau

        g_verb -= dlogp[1] * tables.verbosity_probs / tau
        g_verb[trace.bucket_index] += dlogp[1] / tau

        if len(trace.merges):
            g_merge[0] += float(np.dot(dlogp[2:], trace.merges - tables.merge_prob)) / tau

    def to_dict(self) -> dict:
        return {
            "tiers": list(self.tiers),
            "buckets": list(self.buckets),
            "temperature": self.temperature,
            "step_logits": self.step_logits.tolist(),
            "verbosity_logits": self.verbosity_logits.tolist(),
            "merge_logit": self.merge_logit,
        }


def trace_paragraphs(trace: ToyTrace, buckets: Sequence[int]) -> list[tuple[str, int]]:
    """
    Paragraph texts of a trace with their word counts.

    Each logical step is exactly `words` whitespace tokens; a merged step joins
    the previous paragraph with a space, others start a new paragraph.
    """
    words = buckets[trace.bucket_index]
    paragraphs: list[list[str]] = []
    for i in range(trace.logical_steps):
        text = " ".join([f"s{i + 1}", *(["w"] * (words - 2)), "end."])
        if i > 0 and trace.merges[i - 1]:
            paragraphs[-1].append(text)
        else:
            paragraphs.append([text])
    return [(" ".join(p), words * len(p)) for p in paragraphs]


def render_trace(trace: ToyTrace, buckets: Sequence[int]) -> str:
    """Materialize a trace as a response with a think block."""
    think = "\n\n".join(text for text, _ in trace_paragraphs(trace, buckets))
    return f"<think>\n{think}\n</think>\n\nThe answer is \\boxed{{{trace.answer}}}."
