"""Labeled cell grids and their serialization.

Coordinate convention: the grid bounding box is centered on the origin and
cell ``(row, col)`` has center

    x = (col + 0.5) * h - width * h / 2
    y = (row + 0.5) * h - height * h / 2

so row 0 is the *bottom* row and y grows with the row index.  The text image
format stores rows top-down (image convention) and is flipped on read/write;
the binary format stores rows bottom-up exactly as held in memory.

Binary format (magic ``TFL1``): 4 magic bytes, little-endian u32 width and
height, little-endian f64 cell size ``h``, ``width*height`` row-major label
bytes, then two bit-packed planes (domain mask, frozen mask), each
``ceil(width*height / 8)`` bytes, most significant bit first within a byte.

Text format: plain PGM (``P2``) with maxval 2 and the labels stored literally
as pixel values.  It carries no geometry or masks, so reading one yields a
full-square domain with nothing frozen and ``h = 2 / max(width, height)``
(bounding box snapped to a centered 2x2 square).
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

TFL_MAGIC = b"TFL1"
_HEADER = struct.Struct("<4sIId")

NUM_FLUIDS = 3


def _packed_size(n: int) -> int:
    return (n + 7) // 8


@dataclass
class LabelGrid:
    """A rectangular grid of fluid labels with domain and frozen masks.

    ``labels`` holds values in {0, 1, 2}; cells outside ``domain_mask`` are
    canonicalized to label 0 and take no part in any energy.  ``frozen_mask``
    marks cells the minimizer must never relabel (Dirichlet data); it must be
    a subset of the domain.  The domain must be non-empty and 4-connected.
    """

    width: int
    height: int
    h: float
    labels: np.ndarray
    domain_mask: np.ndarray = field(default=None)
    frozen_mask: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(
                f"grid dimensions must be positive, got {self.width}x{self.height}"
            )
        if not (math.isfinite(self.h) and self.h > 0.0):
            raise ValueError(f"cell size h must be positive and finite, got {self.h!r}")
        shape = (self.height, self.width)
        self.labels = np.ascontiguousarray(self.labels, dtype=np.uint8)
        if self.labels.shape != shape:
            raise ValueError(
                f"labels shape {self.labels.shape} does not match (height, width) {shape}"
            )
        if self.domain_mask is None:
            self.domain_mask = np.ones(shape, dtype=bool)
        self.domain_mask = np.ascontiguousarray(self.domain_mask, dtype=bool)
        if self.domain_mask.shape != shape:
            raise ValueError("domain_mask shape does not match (height, width)")
        if self.frozen_mask is None:
            self.frozen_mask = np.zeros(shape, dtype=bool)
        self.frozen_mask = np.ascontiguousarray(self.frozen_mask, dtype=bool)
        if self.frozen_mask.shape != shape:
            raise ValueError("frozen_mask shape does not match (height, width)")
        if np.any(self.frozen_mask & ~self.domain_mask):
            raise ValueError("frozen_mask must be a subset of domain_mask")
        if not self.domain_mask.any():
            raise ValueError("domain must be non-empty")
        in_dom = self.labels[self.domain_mask]
        if in_dom.size and int(in_dom.max()) >= NUM_FLUIDS:
            raise ValueError(
                f"labels must lie in 0..{NUM_FLUIDS - 1} on the domain, "
                f"found {int(in_dom.max())}"
            )
        _, pieces = ndimage.label(self.domain_mask)
        if pieces != 1:
            raise ValueError(f"domain must be 4-connected, found {pieces} components")
        self.labels[~self.domain_mask] = 0

    # -- geometry ---------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    @property
    def extent(self) -> float:
        """Half-width of the smaller side of the bounding box."""
        return 0.5 * min(self.width, self.height) * self.h

    @property
    def xs(self) -> np.ndarray:
        """Cell-center x coordinates, indexed by column."""
        return (np.arange(self.width) + 0.5) * self.h - 0.5 * self.width * self.h

    @property
    def ys(self) -> np.ndarray:
        """Cell-center y coordinates, indexed by row."""
        return (np.arange(self.height) + 0.5) * self.h - 0.5 * self.height * self.h

    def cell_of(self, point) -> tuple[int, int]:
        """(row, col) of the cell containing ``point``; raises if outside the box."""
        x, y = float(point[0]), float(point[1])
        col = int(math.floor(x / self.h + 0.5 * self.width))
        row = int(math.floor(y / self.h + 0.5 * self.height))
        if not (0 <= col < self.width and 0 <= row < self.height):
            raise ValueError(f"point {(x, y)} lies outside the grid bounding box")
        return (row, col)

    @property
    def unfrozen_mask(self) -> np.ndarray:
        return self.domain_mask & ~self.frozen_mask

    def fluid_counts(self, unfrozen_only: bool = False) -> np.ndarray:
        """Cell counts per fluid over the domain (or its unfrozen part)."""
        mask = self.unfrozen_mask if unfrozen_only else self.domain_mask
        return np.bincount(self.labels[mask], minlength=NUM_FLUIDS).astype(np.int64)

    def fluid_volumes(self, unfrozen_only: bool = False) -> np.ndarray:
        """Areas per fluid (counts times cell area)."""
        return self.fluid_counts(unfrozen_only) * self.h * self.h

    def copy(self) -> "LabelGrid":
        return LabelGrid(
            self.width,
            self.height,
            self.h,
            self.labels.copy(),
            self.domain_mask.copy(),
            self.frozen_mask.copy(),
        )

    # -- binary format ----------------------------------------------------

    def to_bytes(self) -> bytes:
        header = _HEADER.pack(TFL_MAGIC, self.width, self.height, self.h)
        lab = self.labels.tobytes()
        dom = np.packbits(self.domain_mask.ravel()).tobytes()
        frz = np.packbits(self.frozen_mask.ravel()).tobytes()
        return header + lab + dom + frz

    @classmethod
    def from_bytes(cls, data: bytes) -> "LabelGrid":
        if len(data) < _HEADER.size:
            raise ValueError("truncated grid block: header incomplete")
        magic, width, height, h = _HEADER.unpack_from(data, 0)
        if magic != TFL_MAGIC:
            raise ValueError(f"bad magic {magic!r}, expected {TFL_MAGIC!r}")
        n = width * height
        planes = _packed_size(n)
        expected = _HEADER.size + n + 2 * planes
        if len(data) != expected:
            raise ValueError(
                f"grid block has {len(data)} bytes, expected {expected} "
                f"for a {width}x{height} grid"
            )
        off = _HEADER.size
        labels = np.frombuffer(data, dtype=np.uint8, count=n, offset=off)
        labels = labels.reshape(height, width).copy()
        off += n
        dom_bits = np.frombuffer(data, dtype=np.uint8, count=planes, offset=off)
        domain = np.unpackbits(dom_bits, count=n).astype(bool).reshape(height, width)
        off += planes
        frz_bits = np.frombuffer(data, dtype=np.uint8, count=planes, offset=off)
        frozen = np.unpackbits(frz_bits, count=n).astype(bool).reshape(height, width)
        return cls(width, height, h, labels, domain, frozen)

    def save(self, path) -> None:
        """Write the grid; ``.pgm`` paths get the text format, others binary."""
        if str(path).lower().endswith(".pgm"):
            with open(path, "w", encoding="ascii") as fh:
                fh.write(self.to_pgm_text())
        else:
            with open(path, "wb") as fh:
                fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "LabelGrid":
        if str(path).lower().endswith(".pgm"):
            with open(path, "r", encoding="ascii") as fh:
                return cls.from_pgm_text(fh.read())
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())

    # -- text format ------------------------------------------------------

    def to_pgm_text(self) -> str:
        lines = ["P2", f"{self.width} {self.height}", "2"]
        for row in range(self.height - 1, -1, -1):
            lines.append(" ".join(str(int(v)) for v in self.labels[row]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_pgm_text(cls, text: str) -> "LabelGrid":
        tokens: list[str] = []
        for line in text.splitlines():
            body = line.split("#", 1)[0]
            tokens.extend(body.split())
        if not tokens or tokens[0] != "P2":
            raise ValueError("expected a plain (P2) graymap")
        if len(tokens) < 4:
            raise ValueError("graymap header incomplete")
        width, height, maxval = (int(t) for t in tokens[1:4])
        if maxval != 2:
            raise ValueError(f"graymap maxval must be 2 (labels literal), got {maxval}")
        vals = tokens[4:]
        if len(vals) != width * height:
            raise ValueError(
                f"graymap has {len(vals)} pixels, expected {width * height}"
            )
        arr = np.array([int(v) for v in vals], dtype=np.uint8)
        labels = arr.reshape(height, width)[::-1].copy()
        h = 2.0 / max(width, height)
        return cls(width, height, h, labels)
