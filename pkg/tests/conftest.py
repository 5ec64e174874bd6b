from __future__ import annotations

import random
from pathlib import Path

import pytest

from camflow import MiningParams, TravelPath, load_dataset, validate_path

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fig_three() -> list[TravelPath]:
    """Three objects over five cameras; the worked example every algorithm
    must reproduce exactly."""
    return list(load_dataset(str(DATA_DIR / "fig_three.csv")).paths)


@pytest.fixture(scope="session")
def five_routes() -> list[TravelPath]:
    """Five objects whose token economy is pinned: 8 frequent camera-token
    runs vs 4 meta-cluster runs at eps=6, m=2."""
    return list(load_dataset(str(DATA_DIR / "five_routes.csv")).paths)


def make_path(oid: str, visits) -> TravelPath:
    return validate_path(oid, visits)


def random_instance(
    rng: random.Random,
    max_objects: int = 8,
    max_cameras: int = 6,
    max_len: int = 6,
    convoy_bias: float = 0.45,
) -> tuple[list[TravelPath], MiningParams]:
    """Small random instance with convoy echoes, camera repeats and
    zero-length dwells; sized for the exhaustive oracle."""
    n_obj = rng.randint(1, max_objects)
    cams = [f"c{i}" for i in range(rng.randint(2, max_cameras))]
    paths: list[TravelPath] = []
    reusable: list[list[tuple[str, int, int]]] = []
    for i in range(n_obj):
        if reusable and rng.random() < convoy_bias:
            base = reusable[rng.randrange(len(reusable))]
            off = rng.choice([0, 1, rng.randint(0, 10)])
            visits = [(c, s + off, e + off) for (c, s, e) in base]
        else:
            visits = []
            t = rng.randint(0, 25)
            last = None
            for _ in range(rng.randint(1, max_len)):
                cam = last if last is not None and rng.random() < 0.25 else rng.choice(cams)
                dwell = rng.choice([0, 0, 1, 2, 3])
                visits.append((cam, t, t + dwell))
                t += dwell + rng.randint(1, 6)
                last = cam
            reusable.append(visits)
        paths.append(validate_path(f"o{i}", visits))
    params = MiningParams(
        epsilon=rng.choice([0, 1, 2, 4, 8, 15]),
        m=rng.randint(1, 4),
        k=rng.randint(1, 5),
    )
    return paths, params
