"""layerpaint: depth-layered stroke-based rendering and plotter scheduling.

Pipeline stages, one module each:

  imagecore    input artifacts (image, depth map, label map) and validation
  palette      k-means color palette and nearest-color lookup
  segmentation prediction ordering, seed budgets, watershed superpixel seeds
  depth        depth smoothing, histogram bins, back-to-front traversal
  ordering     per-bin frames and the complete ordered seed plan
  strokes      gradient-following stroke growth with canvas feedback
  render       deterministic rasterization and progress snapshots
  robotplan    physical-unit mapping and the two-arm drawing schedule
  cli          end-to-end command line front end
"""

__version__ = "0.1.0"

from .imagecore import DepthMap, Image, Prediction, Segmentation  # noqa: F401
from .palette import Palette  # noqa: F401
