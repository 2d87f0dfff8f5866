"""Block font shared by the plate renderer and the template recognizer.

Each glyph is drawn on an 8x12 grid and doubled to the 16x24 atlas cell.
Every glyph touches all four edges of its cell and forms a single
4-connected shape, so segmenting a rendered glyph recovers its cell exactly.
"""
from __future__ import annotations

import numpy as np

SYMBOLS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
GLYPH_W = 16
GLYPH_H = 24
_SCALE = 2

_GLYPHS: dict[str, str] = {
    "A": """
..####..
.######.
##....##
##....##
##....##
########
########
##....##
##....##
##....##
##....##
##....##
""",
    "B": """
######..
#######.
##....##
##....##
##...##.
######..
#######.
##....##
##....##
##....##
#######.
######..
""",
    "C": """
.######.
########
##....##
##......
##......
##......
##......
##......
##......
##....##
########
.######.
""",
    "D": """
######..
#######.
##...###
##....##
##....##
##....##
##....##
##....##
##....##
##...###
#######.
######..
""",
    "E": """
########
########
##......
##......
##......
######..
######..
##......
##......
##......
########
########
""",
    "F": """
########
########
##......
##......
##......
######..
######..
##......
##......
##......
##......
##......
""",
    "G": """
.######.
########
##....##
##......
##......
##..####
##..####
##....##
##....##
##....##
########
.######.
""",
    "H": """
##....##
##....##
##....##
##....##
##....##
########
########
##....##
##....##
##....##
##....##
##....##
""",
    "I": """
########
########
...##...
...##...
...##...
...##...
...##...
...##...
...##...
...##...
########
########
""",
    "J": """
########
########
.....##.
.....##.
.....##.
.....##.
.....##.
.....##.
##...##.
##...##.
#######.
.#####..
""",
    "K": """
##....##
##...##.
##..##..
##.##...
####....
###.....
###.....
####....
##.##...
##..##..
##...##.
##....##
""",
    "L": """
##......
##......
##......
##......
##......
##......
##......
##......
##......
##......
########
########
""",
    "M": """
##....##
###..###
########
##.##.##
##.##.##
##....##
##....##
##....##
##....##
##....##
##....##
##....##
""",
    "N": """
##....##
###...##
###...##
####..##
##.##.##
##.##.##
##..####
##..####
##...###
##...###
##....##
##....##
""",
    "O": """
.######.
########
##....##
##....##
##....##
##....##
##....##
##....##
##....##
##....##
########
.######.
""",
    "P": """
######..
#######.
##....##
##....##
##....##
#######.
######..
##......
##......
##......
##......
##......
""",
    "Q": """
.######.
########
##....##
##....##
##....##
##....##
##.##.##
##..####
##...###
########
.#######
......##
""",
    "R": """
######..
#######.
##....##
##....##
##....##
#######.
######..
##.##...
##..##..
##...##.
##....##
##....##
""",
    "S": """
.######.
########
##....##
##......
##......
#######.
.#######
......##
......##
##....##
########
.######.
""",
    "T": """
########
########
...##...
...##...
...##...
...##...
...##...
...##...
...##...
...##...
...##...
...##...
""",
    "U": """
##....##
##....##
##....##
##....##
##....##
##....##
##....##
##....##
##....##
##....##
########
.######.
""",
    "V": """
##....##
##....##
##....##
##....##
##....##
##....##
.##..##.
.##..##.
..####..
..####..
...##...
...##...
""",
    "W": """
##....##
##....##
##....##
##....##
##....##
##.##.##
##.##.##
##.##.##
########
########
###..###
##....##
""",
    "X": """
##....##
##....##
.##..##.
.##..##.
..####..
...##...
...##...
..####..
.##..##.
.##..##.
##....##
##....##
""",
    "Y": """
##....##
##....##
.##..##.
.##..##.
..####..
...##...
...##...
...##...
...##...
...##...
...##...
...##...
""",
    "Z": """
########
########
......##
.....##.
....##..
...##...
..##....
.##.....
##......
##......
########
########
""",
    "0": """
.######.
########
##....##
##...###
##...###
##..####
####..##
###...##
###...##
##....##
########
.######.
""",
    "1": """
...##...
..###...
.####...
...##...
...##...
...##...
...##...
...##...
...##...
...##...
########
########
""",
    "2": """
.######.
########
##....##
......##
......##
.######.
#######.
##......
##......
##......
########
########
""",
    "3": """
.######.
########
##....##
......##
......##
..#####.
..######
......##
......##
##....##
########
.######.
""",
    "4": """
....###.
...####.
..##.##.
.##..##.
##...##.
########
########
.....##.
.....##.
.....##.
.....##.
.....##.
""",
    "5": """
########
########
##......
##......
##......
#######.
########
......##
......##
##....##
########
.######.
""",
    "6": """
.######.
########
##....##
##......
##......
#######.
########
##....##
##....##
##....##
########
.######.
""",
    "7": """
########
########
......##
.....##.
.....##.
....##..
....##..
...##...
...##...
...##...
...##...
...##...
""",
    "8": """
.######.
########
##....##
##....##
##....##
.######.
.######.
##....##
##....##
##....##
########
.######.
""",
    "9": """
.######.
########
##....##
##....##
##....##
########
.#######
......##
......##
##....##
########
.######.
""",
}


def glyph_mask(symbol: str) -> np.ndarray:
    """Boolean ink mask of shape (24, 16) for one symbol."""
    rows = _GLYPHS[symbol].strip().splitlines()
    small = np.array([[c == "#" for c in row] for row in rows], dtype=bool)
    return np.kron(small, np.ones((_SCALE, _SCALE), dtype=bool))


def atlas_bitmaps() -> np.ndarray:
    """All 36 glyphs as black-on-white uint8 cells, shape (36, 24, 16)."""
    cells = np.full((len(SYMBOLS), GLYPH_H, GLYPH_W), 255, dtype=np.uint8)
    for i, symbol in enumerate(SYMBOLS):
        cells[i][glyph_mask(symbol)] = 0
    return cells
