"""mapgen: offline generators for layerpaint's depth and label inputs.

Two commands, two files each:

  mapgen depth  <image> <out.pgm>             16-bit P5 depth map
  mapgen labels <image> <out.png> <out.json>  label map + metadata

Backends: pretrained models (monocular depth via torch hub, panoptic
segmentation via detectron2) when their weights are available, or the
hermetic "classical" backend built on geometric priors and color
clustering, which needs no downloads and is what the tests use. Either
way the outputs satisfy the exact file contracts of the core engine.
"""

__version__ = "0.1.0"


class ModelUnavailable(RuntimeError):
    """A model backend cannot run here; the message says how to fix it."""
