"""
Synthetic problem banks for the toy trainer.
"""

from .schemas import ProblemSpec


def make_bank(
    tier: int,
    count: int,
    solve_rate: float,
    offset: int = 0,
    partial_credit: bool = True,
) -> list[ProblemSpec]:
    return [
        ProblemSpec(
            prompt_id=f"t{tier}-{offset + i:03d}",
            gold_answer=str(100 + 37 * (offset + i) + tier),
            required_steps=tier,
            solve_rate=solve_rate,
            partial_credit=partial_credit,
        )
        for i in range(count)
    ]


def default_problem_bank() -> list[ProblemSpec]:
    """12 easy problems (4 steps, solved 90%) and 4 hard ones (6 steps, solved 35%)."""
    return make_bank(4, 12, 0.9) + make_bank(6, 4, 0.35, offset=12)


def unsolvable_problem_bank(count: int = 8) -> list[ProblemSpec]:
    return make_bank(4, count, 0.0)
