"""Finite-rank operators as functional/vector pairs, with sampled norms.

An operator here is P(x) = sum_k phi_k(x) * v_k where each functional
phi_k is itself stored as a coordinate vector (phi_k(x) = sum_j
phi_k(j) x(j)).  Exact operator norms in lp are intractable; we report
a certified upper bound where theory provides one, plus a sampled
lower bound (random vectors refined by coordinate descent, seeded
deterministically).  The two never swap roles.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import AmbientSpace, Seq, norm
from .errors import ConfigError
from .scalar import Scalar, scalar_to_json


@dataclass(frozen=True)
class ProjectionOp:
    """P(x) = sum_k pairs[k].functional(x) * pairs[k].vector."""

    functionals: tuple  # tuple[Seq]
    vectors: tuple      # tuple[Seq]
    space: AmbientSpace
    norm_upper: Optional[Scalar] = None  # certified upper bound, when known

    def __post_init__(self):
        if len(self.functionals) != len(self.vectors):
            raise ConfigError("functional/vector pair counts differ")

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def apply(self, x: Seq) -> Seq:
        if not self.vectors:
            return Seq.zero(len(x), x.exact)
        t = len(self.vectors[0])
        if len(x) != t:
            raise ConfigError(f"operator truncation {t} vs vector {len(x)}")
        exact = x.exact and all(v.exact for v in self.vectors) \
            and all(f.exact for f in self.functionals)
        zero = Fraction(0) if exact else 0.0
        acc = [zero] * t
        for phi, vec in zip(self.functionals, self.vectors):
            c = sum(a * b for a, b in zip(phi.coords, x.coords))
            if c == 0:
                continue
            for j, v in enumerate(vec.coords):
                acc[j] += c * v
        if not exact:
            acc = [float(v) for v in acc]
        return Seq(tuple(acc), exact, zero)

    def as_json(self) -> dict:
        out = {
            "functionals": [f.as_json() for f in self.functionals],
            "vectors": [v.as_json() for v in self.vectors],
        }
        if self.norm_upper is not None:
            out["norm_upper"] = scalar_to_json(self.norm_upper)
        return out

    @classmethod
    def from_json(cls, obj: dict, space: AmbientSpace) -> "ProjectionOp":
        functionals = tuple(Seq.from_json(f) for f in obj["functionals"])
        vectors = tuple(Seq.from_json(v) for v in obj["vectors"])
        upper = obj.get("norm_upper")
        if upper is not None:
            upper = Fraction(upper) if isinstance(upper, str) else float(upper)
        return cls(functionals, vectors, space, upper)


def _sample_vector(t: int, exact: bool, rng: random.Random) -> Seq:
    if exact:
        coords = tuple(Fraction(rng.randint(-16, 16), 16) for _ in range(t))
    else:
        coords = tuple(rng.uniform(-1.0, 1.0) for _ in range(t))
    return Seq(coords, exact, Fraction(0) if exact else 0.0)


def operator_norm_lower_bound(op: ProjectionOp, trials: int = 200,
                              seed: int = 0, refine_passes: int = 2) -> float:
    """Sampled lower bound for ||P||: max |Px|/|x| over random x, then
    coordinate-descent refinement around the best sample.

    A lower bound by construction -- every evaluated ratio is attained.
    """
    if not op.vectors:
        return 0.0
    t = len(op.vectors[0])
    exact = all(v.exact for v in op.vectors) and all(f.exact for f in op.functionals)
    rng = random.Random(seed)

    def ratio(x: Seq) -> float:
        nx = norm(x, op.space)
        if nx == 0:
            return 0.0
        return float(norm(op.apply(x), op.space)) / float(nx)

    best_x = None
    best = 0.0
    # include the range vectors themselves: P fixes them when idempotent
    candidates = list(op.vectors)
    for _ in range(max(0, trials - len(candidates))):
        candidates.append(_sample_vector(t, exact, rng))
    for x in candidates:
        r = ratio(x)
        if r > best:
            best, best_x = r, x
    if best_x is None:
        return 0.0
    # coordinate descent on the best candidate, over the operator's most
    # influential coordinates only (capped: this is a lower bound anyway)
    weight: dict[int, float] = {}
    for vec in op.functionals:
        for j in vec.support():
            w = abs(float(vec.at(j)))
            if w > weight.get(j, 0.0):
                weight[j] = w
    support = sorted(sorted(weight, key=lambda j: -weight[j])[:16])
    steps = (Fraction(1, 2), Fraction(-1, 2), Fraction(2), Fraction(-2)) if exact \
        else (0.5, -0.5, 2.0, -2.0)
    for _ in range(refine_passes):
        improved = False
        for j in support:
            for s in steps:
                coords = list(best_x.coords)
                coords[j - 1] = coords[j - 1] + (s if exact else float(s))
                cand = Seq(tuple(coords), best_x.exact, best_x.tail_bound)
                r = ratio(cand)
                if r > best:
                    best, best_x = r, cand
                    improved = True
        if not improved:
            break
    return best


def idempotency_residual(op: ProjectionOp, trials: int = 200,
                         seed: int = 0) -> float:
    """max |P(Px) - Px| over sampled |x| <= 1-ish vectors (absolute)."""
    if not op.vectors:
        return 0.0
    t = len(op.vectors[0])
    exact = all(v.exact for v in op.vectors) and all(f.exact for f in op.functionals)
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(trials):
        x = _sample_vector(t, exact, rng)
        px = op.apply(x)
        ppx = op.apply(px)
        worst = max(worst, float(norm(ppx.sub(px), op.space)))
    return worst
