"""Per-byte genetic search over a frame's unused candidate pixels.

Each chromosome is one candidate pixel whose luma value evolves toward the
target ciphertext byte. The run ends when some chromosome rounds to the
target exactly or the generation budget is spent; the winner's pixel is
where the byte gets written.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from stegano_ga.errors import ExhaustionError

CROSSOVER_RATE = 0.5
MUTATION_RATE = 0.05


class PixelRef(NamedTuple):
    frame: int
    x: int
    y: int


@dataclass(slots=True)
class Chromosome:
    position: PixelRef
    original_luma: int
    value: float
    # slot in the candidate list handed to the engine; lower wins ties
    index: int = 0


@dataclass(frozen=True)
class GaParams:
    population_size: int = 16
    max_generations: int = 64
    seed: int = 0
    crossover_rate: float = field(default=CROSSOVER_RATE, init=False)
    mutation_rate: float = field(default=MUTATION_RATE, init=False)

    def __post_init__(self) -> None:
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if self.max_generations < 0:
            raise ValueError("max_generations must be non-negative")


@dataclass(frozen=True)
class GaResult:
    position: PixelRef
    final_value: int
    generations_used: int
    converged: bool
    original_luma: int
    index: int


def _clamp(value: float) -> float:
    return 0.0 if value < 0.0 else 255.0 if value > 255.0 else value


def fitness(target: int, chrom: Chromosome) -> int:
    """Distance from the target byte; 0 is a perfect match."""
    return abs(target - round(chrom.value))


def _rank_key(target: int):
    # the real-valued gap splits integer-fitness ties; without it stale clones
    # of one lineage can hold the top three and stall the halving at fitness 1
    return lambda c: (abs(target - round(c.value)), abs(target - c.value), c.index)


def rank_weights(scores: np.ndarray) -> np.ndarray:
    """Linear rank weights, best heaviest. Tied scores share a weight.

    weight = n - (number of strictly better candidates), so a lone best gets
    n and a fully tied pool is uniform.
    """
    counts = np.bincount(scores, minlength=256)
    better = np.concatenate(([0], np.cumsum(counts)[:-1]))
    return (len(scores) - better[scores]).astype(np.float64)


def rank_sample(scores: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``k`` distinct indices, sequentially proportional to rank weight.

    Uses exponential keys (Efraimidis-Spirakis): the ``k`` largest
    ``log(u) / w`` are distributed exactly as successive weighted draws
    without replacement.
    """
    n = len(scores)
    if k >= n:
        return np.arange(n)
    keys = np.log(rng.random(n)) / rank_weights(scores)
    return np.argpartition(-keys, k - 1)[:k]


def init_population(
    candidates: Sequence[PixelRef],
    lumas: np.ndarray,
    target: int,
    params: GaParams,
    rng: np.random.Generator,
) -> list[Chromosome]:
    """Score every candidate and rank-select the starting population."""
    if len(candidates) == 0:
        raise ExhaustionError("no unused candidate pixels left in this frame")
    lumas = np.asarray(lumas)
    scores = np.abs(lumas.astype(np.int16) - target)
    picked = rank_sample(scores, params.population_size, rng)
    pop = [Chromosome(candidates[i], int(lumas[i]), float(lumas[i]), int(i)) for i in picked]
    pop.sort(key=_rank_key(target))
    return pop


def select_parents(population: list[Chromosome], target: int, rng: np.random.Generator) -> tuple[Chromosome, Chromosome]:
    """Two of the three fittest, uniformly without replacement."""
    if len(population) < 2:
        raise ExhaustionError("parent selection needs at least two chromosomes")
    top = sorted(population, key=_rank_key(target))[:3]
    if len(top) == 2:
        return top[0], top[1]
    i = int(rng.integers(3))
    j = int(rng.integers(2))
    if j >= i:
        j += 1
    return top[i], top[j]


def crossover(parent_value: float, target: int) -> float:
    return _clamp(parent_value + CROSSOVER_RATE * (target - parent_value))


def mutate(value: float, rng: np.random.Generator) -> float:
    if rng.random() >= MUTATION_RATE:
        return value
    step = MUTATION_RATE * value
    return _clamp(value + step if rng.random() < 0.5 else value - step)


def _replace_worst(population: list[Chromosome], children: list[Chromosome], target: int) -> None:
    # population is sorted best-first; the elite slot only yields to a child at least as fit
    key = _rank_key(target)
    children = sorted(children, key=key)
    slot = len(population) - 1
    for child in children:
        if slot == 0 and fitness(target, child) > fitness(target, population[0]):
            break
        population[slot] = child
        if slot == 0:
            break
        slot -= 1


def evolve(
    candidates: Sequence[PixelRef],
    lumas: np.ndarray,
    target: int,
    params: GaParams,
    rng: np.random.Generator,
    trace: list[int] | None = None,
) -> GaResult:
    """Run the GA for one target byte. ``lumas[i]`` is the cover luma of ``candidates[i]``."""
    if not 0 <= target <= 255:
        raise ValueError(f"target byte out of range: {target}")
    key = _rank_key(target)
    pop = init_population(candidates, lumas, target, params, rng)
    gen = 0
    while True:
        pop.sort(key=key)
        best = pop[0]
        score = fitness(target, best)
        if trace is not None:
            trace.append(score)
        if score == 0 or gen >= params.max_generations:
            break
        parents = (best, best) if len(pop) == 1 else select_parents(pop, target, rng)
        children = [
            Chromosome(p.position, p.original_luma, mutate(crossover(p.value, target), rng), p.index)
            for p in parents
        ]
        _replace_worst(pop, children, target)
        gen += 1
    final = int(_clamp(round(best.value)))
    return GaResult(best.position, final, gen, score == 0, best.original_luma, best.index)


def run_ga(
    candidates: Sequence[PixelRef],
    plane: np.ndarray,
    target: int,
    params: GaParams,
    rng: np.random.Generator,
    trace: list[int] | None = None,
) -> GaResult:
    """GA over candidates addressed into a luma ``plane`` (rows, cols)."""
    if len(candidates) == 0:
        raise ExhaustionError("no unused candidate pixels left in this frame")
    ys = np.fromiter((c.y for c in candidates), dtype=np.intp, count=len(candidates))
    xs = np.fromiter((c.x for c in candidates), dtype=np.intp, count=len(candidates))
    return evolve(candidates, plane[ys, xs], target, params, rng, trace)
