import numpy as np
import pytest


def _clip(a):
    return np.clip(np.rint(a), 0, 255).astype(np.uint8)


def make_standard_images(size=192):
    """Deterministic synthetic greyscale test images with natural statistics:
    smooth structure everywhere plus a distinctly textured region, so the
    embedding route has something to adapt to."""
    h = w = size
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    rng = np.random.default_rng(1234)
    images = {}

    waves = 128 + 70 * np.sin(xx / 23.0) * np.cos(yy / 31.0)
    tex = np.zeros((h, w))
    tex[:, 3 * w // 4 :] = rng.normal(0, 14, (h, w - 3 * w // 4))
    images["waves"] = _clip(waves + tex + rng.normal(0, 1.4, (h, w)))

    ramp = 40 + (xx + yy) * (170.0 / (h + w))
    blob = 40 * np.exp(-((xx - 60) ** 2 + (yy - 120) ** 2) / (2 * 35.0**2))
    tex2 = np.zeros((h, w))
    tex2[: h // 3, :] = rng.normal(0, 11, (h // 3, w))
    images["ramp"] = _clip(ramp + blob + tex2 + rng.normal(0, 1.2, (h, w)))

    rings = 140 + 100 * np.cos(np.hypot(xx - 96, yy - 96) / 11.0)
    tex3 = np.zeros((h, w))
    tex3[: h // 4, : w // 2] = rng.normal(0, 12, (h // 4, w // 2))
    rings = rings + tex3 + rng.normal(0, 1.5, (h, w))
    # small saturated patches so the overflow register comes into play
    rings[-14:, -14:] = 255
    rings[-14:, :14] = 0
    images["rings"] = _clip(rings)

    return images


@pytest.fixture(scope="session")
def standard_images():
    return make_standard_images()
