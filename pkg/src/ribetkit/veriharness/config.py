"""Flat text configuration for verification suites.

The format is deliberately tiny: ``key = value`` lines, ``[section]``
headers (one section per suite), ``#`` comments, repeated keys
accumulate into lists.  Shape files use the same syntax without
sections (see RibetShape.from_mapping).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from ..errors import StructuralError
from ..exactpoly import _is_prime
from ..groebner import Budget
from ..ribet.shapes import RibetShape


def parse_flat_config(text: str) -> dict[str, dict[str, list[str]]]:
    """Sections -> key -> list of values.  Keys before any section
    header land in the '' section."""
    out: dict[str, dict[str, list[str]]] = {"": {}}
    section = ""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            out.setdefault(section, {})
            continue
        if "=" not in line:
            raise StructuralError(f"bad config line {raw!r}")
        key, _, value = line.partition("=")
        out[section].setdefault(key.strip(), []).append(value.strip())
    return out


def _parse_seeds(values: list[str]) -> list[int]:
    seeds: list[int] = []
    for v in values:
        for piece in v.split():
            if ".." in piece:
                lo, _, hi = piece.partition("..")
                seeds.extend(range(int(lo), int(hi) + 1))
            else:
                seeds.append(int(piece))
    return seeds


@dataclass
class SuiteConfig:
    """Everything one suite run needs."""

    suite: str
    shape_paths: list[str] = field(default_factory=list)
    prime: int = 10007
    seeds: list[int] = field(default_factory=lambda: list(range(20)))
    budget: Budget = field(default_factory=Budget)
    retries: int = 100
    out_path: str | None = None
    jobs: int = 1
    degree_cap: int = 2  # morphism materialization cap

    def __post_init__(self):
        if not _is_prime(self.prime):
            raise StructuralError(f"{self.prime} is not prime")
        for path in self.shape_paths:
            if not os.path.exists(path):
                raise StructuralError(f"shape file {path!r} does not exist")
        if not self.seeds:
            raise StructuralError("seed list must be nonempty")

    def load_shapes(self) -> list[RibetShape]:
        shapes = []
        for path in self.shape_paths:
            with open(path, "r", encoding="utf-8") as fh:
                mapping = parse_flat_config(fh.read())[""]
            shapes.append(RibetShape.from_mapping(mapping))
        return shapes


def load_config(
    suite: str,
    path: str | None = None,
    seed: int | None = None,
    prime: int | None = None,
    jobs: int | None = None,
    out: str | None = None,
) -> SuiteConfig:
    """Build a SuiteConfig from an optional config file plus CLI
    overrides.  VERIFY_BUDGET_STEPS overrides the step budget."""
    section: dict[str, list[str]] = {}
    if path is not None:
        if not os.path.exists(path):
            raise StructuralError(f"config file {path!r} does not exist")
        with open(path, "r", encoding="utf-8") as fh:
            parsed = parse_flat_config(fh.read())
        section = dict(parsed.get("", {}))
        section.update(parsed.get(suite, {}))
    base_dir = os.path.dirname(os.path.abspath(path)) if path else "."

    def single(key, default):
        vals = section.get(key)
        return vals[-1] if vals else default

    budget = Budget(
        max_steps=int(single("budget_steps", Budget().max_steps)),
        max_degree=int(single("degree_budget", Budget().max_degree)),
    )
    env_steps = os.environ.get("VERIFY_BUDGET_STEPS")
    if env_steps:
        budget.max_steps = int(env_steps)

    seeds = _parse_seeds(section.get("seeds", [])) or list(range(20))
    if seed is not None:
        seeds = [seed + k for k in range(len(seeds))]

    shape_paths = []
    for v in section.get("shapes", []):
        for piece in v.split():
            shape_paths.append(os.path.join(base_dir, piece) if not os.path.isabs(piece) else piece)

    return SuiteConfig(
        suite=suite,
        shape_paths=shape_paths,
        prime=prime if prime is not None else int(single("prime", 10007)),
        seeds=seeds,
        budget=budget,
        retries=int(single("retries", 100)),
        out_path=out if out is not None else single("out", None),
        jobs=jobs if jobs is not None else int(single("jobs", 1)),
        degree_cap=int(single("degree_cap", 2)),
    )
