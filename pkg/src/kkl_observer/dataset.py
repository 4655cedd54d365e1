"""Training-data generation and CSV persistence.

Two kinds of data are produced: snapshot pairs (X, X+) harvested from short
trajectories, and scattered filtered normal draws used to fit the inverse
map. Initial states are rejection-sampled; the filters apply to initial
states only, downstream trajectory points are kept even if they leave the
filter region.

Sampling uses a counter-based generator (Philox) keyed per trajectory or
per point, so generation is deterministic and order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dynamics import IntegratorConfig, OutputMap, VectorField, integrate
from .errors import ParseError, SamplingStarvedError, SchemaError

_STREAM_PAIRS = 1
_STREAM_SCATTER = 2

_FLOAT_FMT = "{:.17g}"


@dataclass(frozen=True)
class StateFilter:
    """Named predicate on a state vector; the name is used in diagnostics."""

    name: str
    fn: Callable[[np.ndarray], bool]


def coord_min_filter(coord: int, bound: float) -> StateFilter:
    return StateFilter(f"x{coord + 1} >= {bound:g}", lambda x: bool(x[coord] >= bound))


def coord_max_filter(coord: int, bound: float) -> StateFilter:
    return StateFilter(f"x{coord + 1} <= {bound:g}", lambda x: bool(x[coord] <= bound))


def dist_min_filter(center: Sequence[float], radius: float) -> StateFilter:
    c = np.asarray(center, dtype=float)
    label = "(" + ", ".join(f"{v:g}" for v in c) + ")"
    return StateFilter(
        f"|x - {label}| >= {radius:g}",
        lambda x: float(np.linalg.norm(x - c)) >= radius,
    )


def dist_max_filter(center: Sequence[float], radius: float) -> StateFilter:
    c = np.asarray(center, dtype=float)
    label = "(" + ", ".join(f"{v:g}" for v in c) + ")"
    return StateFilter(
        f"|x - {label}| <= {radius:g}",
        lambda x: float(np.linalg.norm(x - c)) <= radius,
    )


def affine_max_filter(weights: Sequence[float], bound: float) -> StateFilter:
    w = np.asarray(weights, dtype=float)
    label = " + ".join(f"{wi:g}*x{i + 1}" for i, wi in enumerate(w))
    return StateFilter(f"{label} <= {bound:g}", lambda x: float(w @ x) <= bound)


def affine_min_filter(weights: Sequence[float], bound: float) -> StateFilter:
    w = np.asarray(weights, dtype=float)
    label = " + ".join(f"{wi:g}*x{i + 1}" for i, wi in enumerate(w))
    return StateFilter(f"{label} >= {bound:g}", lambda x: float(w @ x) >= bound)


@dataclass(frozen=True)
class SamplingSpec:
    """Ensemble description for snapshot-pair generation."""

    n_traj: int
    duration: float
    dt: float
    init_mean: np.ndarray
    init_std: float
    filters: tuple[StateFilter, ...] = ()
    seed: int = 0
    max_attempts: int = 1_000_000


@dataclass(frozen=True)
class SnapshotPairs:
    """Paired samples: row i of ``x_plus`` is row i of ``x`` advanced by ``dt``."""

    dt: float
    x: np.ndarray
    x_plus: np.ndarray
    y: np.ndarray
    traj_id: np.ndarray
    k: np.ndarray

    @property
    def d(self) -> int:
        return self.x.shape[0]

    @property
    def n_x(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True)
class ScatterSet:
    points: np.ndarray
    seed: int


def _stream_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, stream, index))))


def _draw_filtered(
    rng: np.random.Generator,
    mean: np.ndarray,
    std: float,
    filters: tuple[StateFilter, ...],
    max_attempts: int,
) -> np.ndarray:
    rejections = {f.name: 0 for f in filters}
    for _ in range(max_attempts):
        x = rng.normal(mean, std)
        ok = True
        for f in filters:
            if not f.fn(x):
                rejections[f.name] += 1
                ok = False
        if ok:
            return x
    tightest = max(rejections, key=rejections.get) if rejections else "<none>"
    raise SamplingStarvedError(
        f"no accepted draw after {max_attempts} attempts; tightest filter: {tightest}",
        tightest=tightest,
    )


def generate_pairs(
    field: VectorField,
    out: OutputMap,
    spec: SamplingSpec,
    cfg: IntegratorConfig | None = None,
) -> SnapshotPairs:
    """Snapshot pairs from ``spec.n_traj`` trajectories of ``spec.duration``.

    Each trajectory contributes its samples with the last one dropped as X
    rows and with the first one dropped as X+ rows; y holds the output at
    the X rows.
    """
    cfg = cfg or IntegratorConfig()
    mean = np.asarray(spec.init_mean, dtype=float)
    xs, xps, tids, ks = [], [], [], []
    for i in range(spec.n_traj):
        rng = _stream_rng(spec.seed, _STREAM_PAIRS, i)
        x0 = _draw_filtered(rng, mean, spec.init_std, spec.filters, spec.max_attempts)
        traj = integrate(field, x0, spec.duration, spec.dt, cfg)
        n_pairs = len(traj) - 1
        xs.append(traj.x[:-1])
        xps.append(traj.x[1:])
        tids.append(np.full(n_pairs, i, dtype=int))
        ks.append(np.arange(n_pairs, dtype=int))
    x = np.vstack(xs)
    x_plus = np.vstack(xps)
    return SnapshotPairs(
        dt=spec.dt,
        x=x,
        x_plus=x_plus,
        y=np.asarray(out(x), dtype=float),
        traj_id=np.concatenate(tids),
        k=np.concatenate(ks),
    )


def generate_scatter(
    count: int,
    mean: Sequence[float],
    std: float,
    filters: tuple[StateFilter, ...] = (),
    seed: int = 0,
    max_attempts: int = 1_000_000,
) -> ScatterSet:
    """``count`` i.i.d. filtered draws from N(mean, std^2 I)."""
    mean = np.asarray(mean, dtype=float)
    points = np.empty((count, mean.size))
    for j in range(count):
        rng = _stream_rng(seed, _STREAM_SCATTER, j)
        points[j] = _draw_filtered(rng, mean, std, filters, max_attempts)
    return ScatterSet(points=points, seed=seed)


# ---------------------------------------------------------------------------
# CSV persistence. Values are written with 17 significant digits so the
# round trip is lossless for float64.
# ---------------------------------------------------------------------------


def _pairs_header(n_x: int) -> list[str]:
    return (
        ["traj_id", "k"]
        + [f"x{i + 1}" for i in range(n_x)]
        + [f"x{i + 1}p" for i in range(n_x)]
        + ["y"]
    )


def save_pairs(pairs: SnapshotPairs, path) -> None:
    n_x = pairs.n_x
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# dt=" + _FLOAT_FMT.format(pairs.dt) + "\n")
        fh.write(",".join(_pairs_header(n_x)) + "\n")
        for i in range(pairs.d):
            row = [str(int(pairs.traj_id[i])), str(int(pairs.k[i]))]
            row += [_FLOAT_FMT.format(v) for v in pairs.x[i]]
            row += [_FLOAT_FMT.format(v) for v in pairs.x_plus[i]]
            row.append(_FLOAT_FMT.format(pairs.y[i]))
            fh.write(",".join(row) + "\n")


def load_pairs(path) -> SnapshotPairs:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("expected '# dt=<value>' comment", line=1)
    first = lines[0].strip()
    if not first.startswith("# dt="):
        raise ParseError(f"expected '# dt=<value>' comment, got {first!r}", line=1)
    try:
        dt = float(first[len("# dt="):])
    except ValueError:
        raise ParseError(f"bad dt value in {first!r}", line=1) from None
    if len(lines) < 2 or not lines[1].strip():
        raise ParseError("missing column header", line=2)

    names = [c.strip() for c in lines[1].split(",")]
    n_cols = len(names)
    n_x = (n_cols - 3) // 2
    if n_x < 1 or names != _pairs_header(n_x):
        raise SchemaError(
            f"unexpected pairs header {names}; want traj_id, k, x1..xn, x1p..xnp, y"
        )

    tids, ks, xs, xps, ys = [], [], [], [], []
    for lineno, raw in enumerate(lines[2:], start=3):
        if not raw.strip():
            continue
        cells = raw.split(",")
        if len(cells) != n_cols:
            raise ParseError(f"expected {n_cols} fields, got {len(cells)}", line=lineno)
        try:
            tids.append(int(cells[0]))
            ks.append(int(cells[1]))
            vals = [float(c) for c in cells[2:]]
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        xs.append(vals[:n_x])
        xps.append(vals[n_x : 2 * n_x])
        ys.append(vals[2 * n_x])
    if not xs:
        raise ParseError("no data rows", line=3)
    return SnapshotPairs(
        dt=dt,
        x=np.asarray(xs),
        x_plus=np.asarray(xps),
        y=np.asarray(ys),
        traj_id=np.asarray(tids, dtype=int),
        k=np.asarray(ks, dtype=int),
    )


def save_scatter(scatter: ScatterSet, path) -> None:
    n_x = scatter.points.shape[1]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(f"x{i + 1}" for i in range(n_x)) + "\n")
        for row in scatter.points:
            fh.write(",".join(_FLOAT_FMT.format(v) for v in row) + "\n")


def load_scatter(path) -> ScatterSet:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("missing scatter header", line=1)
    names = [c.strip() for c in lines[0].split(",")]
    if names != [f"x{i + 1}" for i in range(len(names))]:
        raise SchemaError(f"unexpected scatter header {names}; want x1..xn")
    rows = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        cells = raw.split(",")
        if len(cells) != len(names):
            raise ParseError(f"expected {len(names)} fields, got {len(cells)}", line=lineno)
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
    if not rows:
        raise ParseError("no data rows", line=2)
    return ScatterSet(points=np.asarray(rows), seed=-1)
