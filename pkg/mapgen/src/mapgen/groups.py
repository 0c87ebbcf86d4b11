"""Default category -> semantic-group table for stuff regions.

Groups order painting from foreground-like material to far background:
small objects first, then furniture and structures, ground and sky
last. The table is deliberately editable; pass a JSON object of
{category: group} to override or extend it.
"""

from __future__ import annotations

import json
from pathlib import Path

DEFAULT_GROUPS: dict[str, int] = {
    # 1: hand-scale items
    "object": 1, "item": 1, "food": 1, "flower": 1, "fruit": 1, "light": 1,
    "paper": 1,
    # 2-3: interior surfaces and soft goods
    "door": 2, "floor": 2, "ceiling": 2,
    "blanket": 3, "pillow": 3, "rug": 3, "towel": 3, "textile": 3,
    # 4-5: furniture and openings
    "table": 4, "counter": 4, "cabinet": 4, "shelf": 4, "furniture": 4,
    "window": 5, "curtain": 5,
    # 6: built structure
    "wall": 6, "building": 6, "house": 6, "roof": 6, "fence": 6, "stairs": 6,
    "tent": 6,
    # 7: traversable surfaces and water features
    "surface": 7, "road": 7, "pavement": 7, "platform": 7, "gravel": 7,
    "railroad": 7, "bridge": 7, "river": 7, "net": 7, "banner": 7,
    # 8: large natural features
    "tree": 8, "rock": 8, "playingfield": 8,
    # 9: far background
    "backdrop": 9, "grass": 9, "dirt": 9, "water": 9, "snow": 9, "sand": 9,
    "sea": 9, "mountain": 9, "sky": 9,
}

FALLBACK_GROUP = 9


def load_groups(path: str | Path | None) -> dict[str, int]:
    if path is None:
        return dict(DEFAULT_GROUPS)
    table = dict(DEFAULT_GROUPS)
    table.update({str(k): int(v) for k, v in
                  json.loads(Path(path).read_text()).items()})
    return table


def group_of(category: str, table: dict[str, int]) -> int:
    return table.get(category, FALLBACK_GROUP)
