"""Procedural generation of the bundled desk corpus.

The operator-comparison evidence needs a corpus of building-front photographs
with dense edge structure: window grids, sills, cornices, door frames — and,
crucially, curved and diagonal features (gable roofs, arched window heads,
round ornaments, cast shadows), because axis-aligned edges alone barely
distinguish one 3x3 derivative kernel from another. Shipping real
photographs is impractical here, so the corpus is rendered procedurally:
each image is a deterministic function of one integer seed — sky gradient,
masonry-textured wall, pitched roof, window grid with glass reflections,
ledges, a door, a diagonal shadow, sensor-style noise, soft focus, and a
vignette. The bundled PNGs under ``data/desk_corpus`` were produced by
`generate_corpus` with `DEFAULT_SEEDS` and regenerate bit-for-bit.

The renders are stand-ins, not photographs; they exist to exercise the
pipeline on facade-like edge statistics, and the comparison tests document
that substitution.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .image import gaussian_blur
from .image_io import save_image

__all__ = ["DEFAULT_SEEDS", "render_facade", "generate_corpus", "corpus_paths"]

#: Seeds of the bundled corpus images, in filename order.
DEFAULT_SEEDS = (47, 51, 90, 105, 107, 111)


def render_facade(seed: int, width: int = 256, height: int = 256) -> np.ndarray:
    """Render one synthetic facade as a grayscale float array in [0, 255]."""
    rng = np.random.default_rng(seed)
    cols = np.arange(width, dtype=np.float64)
    rows = np.arange(height, dtype=np.float64)[:, np.newaxis]
    cgrid, rgrid = np.meshgrid(cols, np.arange(height, dtype=np.float64))

    # Sky: bright at the top, drifting slightly across the frame.
    sky_top = rng.uniform(175.0, 205.0)
    sky_bottom = sky_top - rng.uniform(20.0, 40.0)
    image = sky_top + (sky_bottom - sky_top) * (rows / height) + \
        rng.uniform(-6.0, 6.0) * (cols / width)

    # Building slab with brick-course texture.
    margin_l = int(rng.integers(8, 28))
    margin_r = int(rng.integers(8, 28))
    roof = int(rng.integers(40, 64))
    x0, x1 = margin_l, width - margin_r
    wall_tone = rng.uniform(95.0, 135.0)
    wall = wall_tone + rng.uniform(-12.0, 0.0) * (rows / height)
    wall = np.broadcast_to(wall, (height, width)).copy()
    wall += rng.uniform(-4.0, 4.0) * (cols / width)
    course_h = int(rng.integers(6, 10))
    mortar = rng.uniform(4.0, 9.0)
    for y in range(roof, height, course_h):
        wall[y:y + 1, :] -= mortar
        offset = (y // course_h % 2) * course_h
        for x in range(x0 + offset, x1, 2 * course_h):
            wall[y:y + course_h, x:x + 1] -= mortar * 0.7
    image[roof:, x0:x1] = wall[roof:, x0:x1]

    # Pitched gable above the roofline.
    apex_x = (x0 + x1) / 2 + rng.uniform(-20.0, 20.0)
    apex_y = roof - rng.uniform(22.0, 38.0)
    roof_tone = wall_tone - rng.uniform(30.0, 45.0)
    left_side = (rgrid - apex_y) * (x0 - apex_x) - (cgrid - apex_x) * (roof - apex_y)
    right_side = (rgrid - apex_y) * (x1 - apex_x) - (cgrid - apex_x) * (roof - apex_y)
    gable = (rgrid >= apex_y) & (rgrid <= roof) & (left_side <= 0) & (right_side >= 0)
    image[gable] = roof_tone

    # Cornice band along the roofline, round ornament in the gable.
    cornice_h = int(rng.integers(3, 7))
    image[roof:roof + cornice_h, x0:x1] = wall_tone + rng.uniform(25.0, 45.0)
    ornament_y = (apex_y + roof) / 2 + 4
    ornament_r = rng.uniform(6.0, 11.0)
    ornament = (rgrid - ornament_y) ** 2 + (cgrid - apex_x) ** 2 <= ornament_r ** 2
    image[ornament] = wall_tone + rng.uniform(20.0, 40.0)

    # Window grid.
    n_cols = int(rng.integers(4, 8))
    n_rows = int(rng.integers(3, 6))
    grid_top = roof + cornice_h + int(rng.integers(8, 16))
    grid_bottom = height - int(rng.integers(26, 40))
    cell_w = (x1 - x0) / n_cols
    cell_h = (grid_bottom - grid_top) / n_rows
    win_w = cell_w * rng.uniform(0.45, 0.62)
    win_h = cell_h * rng.uniform(0.48, 0.68)
    glass_base = rng.uniform(25.0, 55.0)
    frame_tone = wall_tone + rng.uniform(18.0, 35.0)
    sill_tone = wall_tone - rng.uniform(20.0, 35.0)
    arched = rng.random() < 0.6
    for i in range(n_rows):
        for j in range(n_cols):
            cx = x0 + (j + 0.5) * cell_w
            cy = grid_top + (i + 0.5) * cell_h
            wx0, wx1 = int(cx - win_w / 2), int(cx + win_w / 2)
            wy0, wy1 = int(cy - win_h / 2), int(cy + win_h / 2)
            image[wy0 - 1:wy1 + 1, wx0 - 1:wx1 + 1] = frame_tone
            glass = glass_base + rng.uniform(-12.0, 18.0)
            image[wy0:wy1, wx0:wx1] = glass
            if arched:  # rounded window head
                radius = (wx1 - wx0) / 2
                arc = ((rgrid - wy0) ** 2 + (cgrid - cx) ** 2 <= radius ** 2) \
                    & (rgrid < wy0) & (rgrid >= wy0 - radius - 1)
                image[arc] = glass
            pane_r, pane_c = np.mgrid[wy0:wy1, wx0:wx1]
            image[wy0:wy1, wx0:wx1] += (pane_c - pane_r) * rng.uniform(0.2, 0.8)
            # A lit or curtained pane now and then.
            if rng.random() < 0.2:
                image[wy0:(wy0 + wy1) // 2, wx0:wx1] = glass + rng.uniform(30.0, 70.0)
            sy = wy1 + 2
            image[sy:sy + 2, wx0 - 2:wx1 + 2] = sill_tone
        # Floor ledge between window rows.
        if rng.random() < 0.5:
            ly = int(grid_top + (i + 1) * cell_h) - 2
            image[ly:ly + 2, x0:x1] = wall_tone + rng.uniform(-18.0, 18.0)

    # Door near street level.
    door_w = int(cell_w * rng.uniform(0.5, 0.8))
    door_h = int(rng.integers(22, 34))
    door_x = int(rng.uniform(x0 + cell_w, x1 - cell_w - door_w))
    image[height - door_h:height, door_x:door_x + door_w] = glass_base * 0.8
    image[height - door_h - 3:height - door_h,
          door_x - 2:door_x + door_w + 2] = frame_tone

    # Diagonal cast shadow over one corner.
    shadow_slope = rng.uniform(0.5, 1.6)
    shadow_col = rng.uniform(0.3, 1.1) * width
    shade = (cgrid - shadow_col) * shadow_slope > (rgrid - height)
    image[shade] *= rng.uniform(0.75, 0.88)

    # Sensor noise, soft focus, vignette.
    image = image + rng.normal(0.0, rng.uniform(2.0, 4.0), size=(height, width))
    image = gaussian_blur(np.clip(image, 0.0, 255.0), sigma=0.7, radius=1)
    yy = (rows - height / 2) / (height / 2)
    xx = (cols - width / 2) / (width / 2)
    image = image * (1.0 - 0.06 * (xx * xx + yy * yy))
    return np.clip(image, 0.0, 255.0)


def generate_corpus(out_dir, seeds=DEFAULT_SEEDS, width: int = 256,
                    height: int = 256) -> list[Path]:
    """Render and write the corpus PNGs; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for index, seed in enumerate(seeds):
        path = out_dir / f"facade_{index:02d}_seed{seed}.png"
        save_image(path, render_facade(seed, width=width, height=height))
        paths.append(path)
    return paths


def corpus_paths() -> list[Path]:
    """Paths of the bundled desk-corpus PNGs, in filename order."""
    root = resources.files("edgeforge").joinpath("data/desk_corpus")
    return sorted(Path(str(entry)) for entry in root.iterdir()
                  if entry.name.endswith(".png"))
