"""Subcoalgebra generation and the finiteness and simplicity probes.

Closure realizes the coordinate-functional bimodule actions through
component extraction: the independent-side grouping of delta(v) yields
exactly the vectors that any subcoalgebra containing v must contain, and
only finitely many coordinate functionals act nontrivially on a given
vector.  Differential specs close under the coderivation as part of the
step.  Divergence is always reported as evidence with the exact growth
trace, never as a theorem.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .coalgebra import CoalgebraSpec, apply_d, delta_linear
from .errors import SpecError
from .linalg import EchelonSubspace, FormalVector, extract_components

DEFAULT_MAX_STEPS = 64
DEFAULT_MAX_DIM = 4096
MAX_MISSING = 5


@dataclass(frozen=True)
class ClosureStep:
    dim: int
    added: tuple  # leading labels of rows added during this step, as strings


@dataclass(frozen=True)
class ClosureTrace:
    """Growth record of one closure run.

    `verdict` is "closed" or "budget-exceeded"; a closed trace means the
    final step added nothing.  The subspace is the working echelon basis
    reached when the run stopped.
    """

    verdict: str
    steps: tuple
    final_dim: int
    subspace: EchelonSubspace = field(compare=False, repr=False)

    @property
    def dims(self) -> tuple:
        return tuple(s.dim for s in self.steps)


def components(spec: CoalgebraSpec, v: FormalVector) -> list:
    """All vectors forced into any subcoalgebra containing v."""
    out = []
    t = delta_linear(spec, v)
    for _, right in extract_components(t, "left"):
        out.append(right)
    for left, _ in extract_components(t, "right"):
        out.append(left)
    if spec.differential:
        out.append(apply_d(spec, v))
    return out


def bimodule_step(spec: CoalgebraSpec, subspace: EchelonSubspace) -> EchelonSubspace:
    """One closure step: insert every component of every current row."""
    out = subspace.copy()
    for v in subspace.rows():
        for c in components(spec, v):
            out.insert(c)
    return out


def _window_filter(v: FormalVector, window: Optional[int]) -> Optional[FormalVector]:
    if window is None:
        return v
    if v.max_index() > window:
        return None
    return v


def generated_subcoalgebra(
    spec: CoalgebraSpec,
    generators: Sequence[FormalVector],
    max_steps: int = DEFAULT_MAX_STEPS,
    max_dim: int = DEFAULT_MAX_DIM,
    window: Optional[int] = None,
) -> ClosureTrace:
    """Iterate closure steps from the generators to a fixed point or budget.

    Rows are processed once, at the step after they arrive; since a
    row's components depend linearly on the row, this reaches the same
    fixed point as re-processing whole subspaces.  With `window`,
    components supported beyond the index window are dropped; the result
    is then only the tracked part of the subcoalgebra.
    """
    if max_steps < 1 or max_dim < 1:
        raise SpecError("closure budget must be positive")
    sub = EchelonSubspace()
    queue = []
    for g in generators:
        g = _window_filter(g, window)
        if g is None:
            raise SpecError("generator lies outside the tracking window")
        inserted = sub.insert(g)
        if inserted is not None:
            queue.append(inserted)
    steps = []
    verdict = "closed"
    while queue:
        if len(steps) >= max_steps:
            verdict = "budget-exceeded"
            break
        current, queue = queue, []
        added = []
        for v in current:
            for comp in components(spec, v):
                comp = _window_filter(comp, window)
                if comp is None or not comp:
                    continue
                inserted = sub.insert(comp)
                if inserted is not None:
                    queue.append(inserted)
                    added.append(str(inserted.leading()))
        steps.append(ClosureStep(dim=sub.dim, added=tuple(added)))
        if sub.dim > max_dim:
            verdict = "budget-exceeded"
            break
    return ClosureTrace(
        verdict=verdict,
        steps=tuple(steps),
        final_dim=sub.dim,
        subspace=sub,
    )


@dataclass(frozen=True)
class FinitenessVerdict:
    """Outcome of the local-finiteness probe for one generating set.

    "finite-dimensional" reports the exact closed dimension;
    "divergence-evidence" carries the growth trace and is explicitly
    evidence, not a proof of infinite-dimensionality.
    """

    kind: str
    dim: Optional[int]
    trace: ClosureTrace

    def __str__(self):
        if self.kind == "finite-dimensional":
            return f"FiniteDimensional({self.dim})"
        return f"DivergenceEvidence(dims={list(self.trace.dims)})"


def local_finiteness_probe(
    spec: CoalgebraSpec,
    generators: Sequence[FormalVector],
    max_steps: int = DEFAULT_MAX_STEPS,
    max_dim: int = DEFAULT_MAX_DIM,
) -> FinitenessVerdict:
    trace = generated_subcoalgebra(spec, generators, max_steps, max_dim)
    if trace.verdict == "closed":
        return FinitenessVerdict("finite-dimensional", trace.final_dim, trace)
    return FinitenessVerdict("divergence-evidence", None, trace)


@dataclass(frozen=True)
class SimplicityRun:
    generator: str
    saturated: bool
    dim: int
    missing: tuple  # first few window labels absent from the closure


@dataclass(frozen=True)
class SimplicityReport:
    """Evidence for simplicity at a finite truncation window.

    Every probe run starts from one basis label or one random vector and
    must saturate the whole window of labels with index <= horizon; a
    non-saturating run is a proper-subcoalgebra witness.  The verified
    window and the seed are recorded; this is evidence at truncation,
    not a proof of simplicity.
    """

    passed: bool
    horizon: int
    window: tuple  # ((family, lo, hi), ...)
    runs: tuple
    seed: int
    trials: int

    def failures(self):
        return tuple(r for r in self.runs if not r.saturated)


def simplicity_probe(
    spec: CoalgebraSpec,
    horizon: int,
    trials: int = 5,
    seed: int = 0,
    max_steps: Optional[int] = None,
    stop_at_first_failure: bool = True,
) -> SimplicityReport:
    window_labels = spec.labels_upto(horizon)
    if not window_labels:
        raise SpecError("horizon too small: no labels in the verified window")
    if max_steps is None:
        # Rules may alternate between families, so the index frontier can
        # advance every second step.
        max_steps = 2 * horizon + 8
    max_dim = len(window_labels) + 8
    rng = random.Random(seed)
    coeff_pool = [Fraction(c) for c in (-2, -1, 1, 2, 3)]

    starts = [(str(l), FormalVector.unit(l)) for l in window_labels]
    support_pool = [l for l in window_labels if l.index <= max(horizon - 1, 0)]
    for t in range(trials):
        size = rng.randint(2, min(4, len(support_pool))) if len(support_pool) > 1 else 1
        labels = rng.sample(support_pool, size)
        v = FormalVector({l: rng.choice(coeff_pool) for l in labels})
        starts.append((f"random#{t} {v}", v))

    runs = []
    passed = True
    for name, v in starts:
        trace = generated_subcoalgebra(
            spec, [v], max_steps=max_steps, max_dim=max_dim, window=horizon
        )
        saturated = trace.final_dim == len(window_labels)
        missing = ()
        if not saturated:
            missing = tuple(
                str(l)
                for l in window_labels
                if not trace.subspace.contains_label(l)
            )[:MAX_MISSING]
            passed = False
        runs.append(
            SimplicityRun(
                generator=name,
                saturated=saturated,
                dim=trace.final_dim,
                missing=missing,
            )
        )
        if not passed and stop_at_first_failure:
            break
    return SimplicityReport(
        passed=passed,
        horizon=horizon,
        window=spec.checked_ranges(horizon),
        runs=tuple(runs),
        seed=seed,
        trials=trials,
    )
