"""Snapshot task generation for the three healthcare payload classes."""
from __future__ import annotations

import numpy as np

from .scenario import PayloadClassSpec, Task


def default_class_specs() -> list[PayloadClassSpec]:
    """Stock payload classes: large imaging bursts, medium waveform batches
    and low-rate wearable samples, in an equal mix."""
    third = 1.0 / 3.0
    return [
        PayloadClassSpec("large", mean_bits=82_000, rel_std=0.1, mu=500.0, tau_max=0.5, mix_fraction=third),
        PayloadClassSpec("medium", mean_bits=20_000, rel_std=0.1, mu=50.0, tau_max=0.05, mix_fraction=third),
        PayloadClassSpec("low", mean_bits=200, rel_std=0.1, mu=50.0, tau_max=0.001, mix_fraction=third),
    ]


def generate_tasks(
    specs: list[PayloadClassSpec], n_gds: int, rng: np.random.Generator
) -> list[Task]:
    """Draw one task per GD.

    The class is sampled from the mix fractions, then the payload size from
    a normal around the class mean, floored at max(1 bit, 10% of the mean)
    and rounded to whole bits. Deterministic given the generator state.
    """
    if n_gds < 1:
        raise ValueError("n_gds must be >= 1")
    mix = np.array([s.mix_fraction for s in specs], dtype=float)
    mix = mix / mix.sum()
    class_idx = rng.choice(len(specs), size=n_gds, p=mix)
    tasks = []
    for i in range(n_gds):
        spec = specs[int(class_idx[i])]
        raw = rng.normal(spec.mean_bits, spec.rel_std * spec.mean_bits)
        floor = max(1.0, 0.1 * spec.mean_bits)
        d = int(round(max(raw, floor)))
        tasks.append(Task(id=i, d=max(d, 1), mu=spec.mu, tau_max=spec.tau_max, payload_class=spec.name))
    return tasks
