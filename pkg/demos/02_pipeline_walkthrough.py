"""Run one bundled facade image through every pipeline stage and save
each intermediate to demos/output/ as a PNG."""

from pathlib import Path

from edgeforge.canny import CannyConfig, canny_pipeline
from edgeforge.facades import corpus_paths
from edgeforge.image_io import load_image, save_image

out_dir = Path(__file__).parent / "output"

source = corpus_paths()[1]
image = load_image(source)
print(f"input: {source.name}  {image.shape[1]}x{image.shape[0]}")

result = canny_pipeline(image, operator="proposed_a", size=3,
                        config=CannyConfig(gaussian_sigma=1.4, gaussian_radius=2))

# every intermediate the pipeline kept, in order
save_image(out_dir / "stage_1_blurred.png", result.blurred)
save_image(out_dir / "stage_2_magnitude.png", result.field.magnitude)
save_image(out_dir / "stage_3_suppressed.png", result.suppressed)
save_image(out_dir / "stage_4_edges.png", result.edges)

print(f"threshold search: otsu={result.otsu.threshold} -> "
      f"low={result.thresholds.low} high={result.thresholds.high}")
print(f"edge pixels: {result.edge_pixels}")
for stage, seconds in result.timings.items():
    print(f"  {stage:<10} {1000.0 * seconds:6.1f} ms")
print(f"stage images written to {out_dir}/")

# the same run with the coarser threshold source: search on the blurred
# input instead of the gradient magnitude
alt = canny_pipeline(image, operator="proposed_a", size=3,
                     config=CannyConfig(otsu_source="blurred-input"))
print(f"blurred-input threshold source: otsu={alt.otsu.threshold}, "
      f"{alt.edge_pixels} edge pixels")
