import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from primal_deduct.syntax import BOT, TOP, And, Formula, Imp, Or, Var

FIXTURES = Path(__file__).parent / "fixtures"


def atoms(names=("x", "y"), include_top=True, include_bot=True):
    pool = [Var(n) for n in names]
    if include_top:
        pool.append(TOP)
    if include_bot:
        pool.append(BOT)
    return pool


def formula_strategy(names=("x", "y"), max_leaves=6, connectives=(And, Imp)):
    base = st.sampled_from(atoms(names))
    return st.recursive(
        base,
        lambda children: st.one_of(*[st.builds(make, children, children) for make in connectives]),
        max_leaves=max_leaves,
    )


def random_formula(rng: random.Random, size: int, names=("x", "y", "z"), with_or=False) -> Formula:
    if size <= 1:
        roll = rng.random()
        if roll < 0.75:
            return Var(rng.choice(names))
        return TOP if roll < 0.9 else BOT
    left_size = rng.randint(1, size - 2) if size > 2 else 1
    left = random_formula(rng, left_size, names, with_or)
    right = random_formula(rng, size - 1 - left_size, names, with_or)
    makers = [And, Imp, Or] if with_or else [And, Imp]
    return rng.choice(makers)(left, right)


@pytest.fixture
def rng():
    return random.Random(20_260_809)
