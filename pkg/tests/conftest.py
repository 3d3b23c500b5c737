"""Shared fixtures: one small synthetic dataset reused across test modules."""

import pytest

from dbcfr.dataset import synth_dataset


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory):
    """A 4-subject, 4-image dataset at low noise (read-only; do not mutate)."""
    root = tmp_path_factory.mktemp("smallset")
    manifest = synth_dataset(root, seed=3, n_subjects=4, images_per_subject=4,
                             noise_level=0.05)
    return manifest
