import json
from pathlib import Path

import numpy as np
import pytest

from pseudogen import write_tensor


def smooth_image(rng, size: int) -> np.ndarray:
    """Band-limited random image in [0, 1] without scipy."""
    spectrum = np.zeros((size, size), dtype=complex)
    k = max(2, size // 8)
    spectrum[:k, :k] = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    img = np.abs(np.fft.ifft2(spectrum))
    img -= img.min()
    return (img / img.max()).astype(np.float32)


def build_dataset(root: Path, count: int = 20, size: int = 32,
                  regime: str = "incoherent", seed: int = 0,
                  train_fraction: float = 0.8) -> Path:
    """Synthetic manifest-described dataset with a learnable y1->y2 map.

    y2 is a fixed pointwise transform of y1 so a small model can fit it
    quickly; values stay in [0, 1] for the sigmoid regime.
    """
    rng = np.random.default_rng(seed)
    n_train = int(round(count * train_fraction))
    entries = []
    for idx in range(count):
        split = "train" if idx < n_train else "val"
        y1 = smooth_image(rng, size)
        y2 = (1.0 - y1) ** 2
        truth = y1
        meta = {"source": f"synthetic_{idx}", "regime": regime,
                "entry_index": idx}
        paths = {}
        for kind, data in (("y1", y1), ("y2", y2), ("truth", truth)):
            rel = f"{split}/{kind}/{idx:04d}.pdt"
            path = root / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            write_tensor(path, data, {**meta, "kind": kind})
            paths[kind] = rel
        entries.append({"id": f"{idx:04d}", "split": split,
                        "y1_path": paths["y1"], "y2_path": paths["y2"],
                        "truth_path": paths["truth"], "meta": meta})
    manifest = {
        "regime": regime,
        "params": {"grid_n": size, "seed": seed},
        "split": {"train_fraction": train_fraction,
                  "val_fraction": round(1.0 - train_fraction, 10)},
        "entries": entries,
    }
    (root / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n",
        encoding="utf-8")
    return root


@pytest.fixture(scope="session")
def tiny_dataset(tmp_path_factory):
    return build_dataset(tmp_path_factory.mktemp("tiny_ds"))


# Acceptance tests append their verdict lines here; the summary hook
# replays them after the test summary so they are easy to find.
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
