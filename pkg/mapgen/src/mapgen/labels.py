"""Label map generation: panoptic model inference or a classical proxy.

Output contract (shared with the core engine): a 16-bit grayscale PNG
of per-pixel region ids plus a JSON array of
{id, kind, score, category, semanticGroup}. Region masks are disjoint
and cover every pixel; stuff entries carry score 1.0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image
from scipy import ndimage
from scipy.cluster.vq import kmeans2

from . import ModelUnavailable, __version__
from .depth import load_rgb
from .groups import group_of


@dataclass
class Region:
    id: int
    kind: str
    score: float
    category: str
    group: int
    mask: np.ndarray


def _components_from_clusters(pixels: np.ndarray, k: int, seed: int,
                              min_area_frac: float) -> np.ndarray:
    """Color-cluster the image, split clusters into connected components,
    and absorb fragments below min_area_frac into their nearest large
    component. Returns a dense component id map covering every pixel."""
    h, w = pixels.shape[:2]
    data = pixels.reshape(-1, 3).astype(np.float64)
    _, assign = kmeans2(data, k, minit="++", seed=seed)
    cluster_map = assign.reshape(h, w)

    comp_map = np.full((h, w), -1, np.int64)
    next_id = 0
    min_area = max(16, int(min_area_frac * h * w))
    for c in range(k):
        labeled, n = ndimage.label(cluster_map == c)
        for i in range(1, n + 1):
            m = labeled == i
            if int(m.sum()) >= min_area:
                comp_map[m] = next_id
                next_id += 1
    if next_id == 0:
        return np.zeros((h, w), np.int64)
    holes = comp_map < 0
    if holes.any():
        iy, ix = ndimage.distance_transform_edt(holes, return_distances=False,
                                                return_indices=True)
        comp_map = np.where(holes, comp_map[iy, ix], comp_map)
    return comp_map


def classical_labels(pixels: np.ndarray, k: int = 5, seed: int = 0,
                     min_area_frac: float = 0.01,
                     groups: dict[str, int] | None = None) -> list[Region]:
    """Panoptic proxy: large border-hugging regions become stuff, the
    rest become things with synthetic confidence scores."""
    from .groups import DEFAULT_GROUPS

    groups = groups or DEFAULT_GROUPS
    h, w = pixels.shape[:2]
    comp_map = _components_from_clusters(pixels, k, seed, min_area_frac)

    order = np.argsort(-np.bincount(comp_map.ravel()))
    regions: list[Region] = []
    border = np.zeros((h, w), bool)
    border[0, :] = border[-1, :] = border[:, 0] = border[:, -1] = True
    n_border = int(border.sum())

    stuff_seen = 0
    for new_id, old_id in enumerate(order):
        mask = comp_map == old_id
        area = int(mask.sum())
        if area == 0:
            continue
        border_frac = int((mask & border).sum()) / n_border
        is_stuff = border_frac >= 0.10 or area >= 0.30 * h * w
        if is_stuff:
            category = "backdrop" if stuff_seen == 0 else "surface"
            regions.append(Region(new_id, "stuff", 1.0, category,
                                  group_of(category, groups), mask))
            stuff_seen += 1
        else:
            score = max(0.5, 0.9 - 0.02 * new_id)
            regions.append(Region(new_id, "thing", score, "object",
                                  group_of("object", groups), mask))
    if stuff_seen == 0:
        # guarantee at least one stuff region so semantic ordering exists
        r = regions[0]
        regions[0] = Region(r.id, "stuff", 1.0, "backdrop",
                            group_of("backdrop", groups), r.mask)
    return regions


def _detectron_labels(pixels: np.ndarray,
                      groups: dict[str, int] | None) -> list[Region]:
    try:
        from detectron2 import model_zoo  # noqa: F401
    except ImportError as e:
        raise ModelUnavailable(
            "detectron2 is not installed; panoptic inference needs it "
            "(see https://github.com/facebookresearch/detectron2) or use "
            "--backend classical"
        ) from e
    from .groups import DEFAULT_GROUPS
    from detectron2 import model_zoo
    from detectron2.config import get_cfg
    from detectron2.data import MetadataCatalog
    from detectron2.engine import DefaultPredictor

    groups = groups or DEFAULT_GROUPS
    config = "COCO-PanopticSegmentation/panoptic_fpn_R_50_3x.yaml"
    cfg = get_cfg()
    cfg.merge_from_file(model_zoo.get_config_file(config))
    cfg.MODEL.WEIGHTS = model_zoo.get_checkpoint_url(config)
    cfg.MODEL.DEVICE = "cpu"
    predictor = DefaultPredictor(cfg)
    panoptic, infos = predictor(pixels[:, :, ::-1])["panoptic_seg"]
    panoptic = panoptic.cpu().numpy()
    meta = MetadataCatalog.get(cfg.DATASETS.TRAIN[0])

    regions: list[Region] = []
    for i, info in enumerate(infos):
        mask = panoptic == info["id"]
        if info["isthing"]:
            category = meta.thing_classes[info["category_id"]]
            regions.append(Region(i, "thing", float(info["score"]), category,
                                  group_of(category, groups), mask))
        else:
            category = meta.stuff_classes[info["category_id"]]
            regions.append(Region(i, "stuff", 1.0, category,
                                  group_of(category, groups), mask))
    return regions


UNLABELED_ID = 65535


def gen_labels(image_path: str | Path, out_png: str | Path,
               out_json: str | Path, backend: str = "detectron2",
               groups: dict[str, int] | None = None, seed: int = 0) -> Path:
    """Write the label PNG + metadata JSON; returns the manifest path.

    Pixels no region claims are written as the reserved id 65535, which
    the core folds into a synthetic background region.
    """
    pixels = load_rgb(image_path)
    if backend == "classical":
        regions = classical_labels(pixels, seed=seed, groups=groups)
        checkpoint = None
    elif backend == "detectron2":
        regions = _detectron_labels(pixels, groups)
        checkpoint = "COCO-PanopticSegmentation/panoptic_fpn_R_50_3x"
    else:
        raise ValueError(f"unknown labels backend {backend!r}")

    label_map = np.full(pixels.shape[:2], UNLABELED_ID, np.uint16)
    meta = []
    for r in regions:
        label_map[r.mask] = r.id
        meta.append({"id": r.id, "kind": r.kind, "score": r.score,
                     "category": r.category, "semanticGroup": r.group})
    Image.fromarray(label_map).save(out_png, format="PNG")
    Path(out_json).write_text(json.dumps(meta, indent=2) + "\n")

    manifest_path = Path(str(out_png) + ".manifest.json")
    manifest_path.write_text(json.dumps({
        "tool": "mapgen",
        "version": __version__,
        "kind": "labels",
        "backend": backend,
        "checkpoint": checkpoint,
        "regions": len(regions),
        "source": str(image_path),
    }, indent=2, sort_keys=True) + "\n")
    return manifest_path
