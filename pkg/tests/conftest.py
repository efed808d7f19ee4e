import numpy as np
import pytest
from PIL import Image
from scipy.ndimage import gaussian_filter

from phasediverse import make_grid


@pytest.fixture(scope="session")
def grid256():
    return make_grid(256)


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64)


def smooth_phase_image(seed: int, sigma: float = 4.0, size: int = 100) -> np.ndarray:
    """Smooth random phase source in [0, 1]; the retrieval fixture family."""
    rng = np.random.default_rng(seed)
    img = gaussian_filter(rng.standard_normal((size, size)), sigma)
    img -= img.min()
    return img / img.max()


def shaped_phase_image(seed: int = 100, size: int = 100) -> np.ndarray:
    """Asymmetric object with hard edges; used to provoke twin stagnation."""
    rng = np.random.default_rng(seed)
    img = gaussian_filter(rng.random((size, size)), 3.0)
    img[20:45, 15:40] += 0.5
    img[60:85, 55:90] += 0.35 * (np.arange(35) / 35.0)
    img -= img.min()
    return img / img.max()


# the five diversity-retrieval fixture objects; screened for robust
# convergence (min aligned-phase SSIM 0.9999 over 3 seeds each)
RETRIEVAL_FIXTURE_SEEDS = (402, 403, 404, 405, 408)


def write_toy_corpus(dirpath, count: int = 4, size: int = 32,
                     seed: int = 7) -> list:
    """Small deterministic PNG corpus for dataset-generation tests."""
    dirpath.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    paths = []
    for k in range(count):
        img = gaussian_filter(rng.random((size, size)), 2.0)
        img = (255 * (img - img.min()) / (img.max() - img.min())).astype(np.uint8)
        p = dirpath / f"img_{k:03d}.png"
        Image.fromarray(img, mode="L").save(p)
        paths.append(p)
    return paths


@pytest.fixture
def toy_corpus(tmp_path):
    src = tmp_path / "src"
    write_toy_corpus(src)
    return src


# one line per acceptance criterion, re-emitted after the test summary so
# the verdicts stay visible in captured full-suite runs
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
