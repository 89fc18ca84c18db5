"""Image and LUT persistence.

Images are 8-bit PNG (RGB or RGBA, alpha dropped) or binary PPM; context
maps are 8-bit grayscale PNG or PGM. In memory everything is float64 in
[0, 1]; quantization to bytes happens only here, at the save boundary.

4D LUTs use a plain-text format modeled on the conventional cube idea:

    TITLE "<string>"            optional
    LUT_4D_SIZE <n_bin> <n_ctx> required, before any data
    DOMAIN_MIN 0 0 0 0          optional, only the default is supported
    DOMAIN_MAX 1 1 1 1          optional, only the default is supported
    <R G B>                     n_bin^3 * n_ctx data lines

Data lines run with the red index i fastest, then j, then k, then the
context index l slowest, matching the in-memory lattice layout so the
file streams straight into the buffer.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .errors import InvalidArgumentError, Lut4dError, ShapeError
from .lattice import CHANNELS, Lattice4D

IMAGE_EXTENSIONS = {".png", ".ppm"}
CONTEXT_EXTENSIONS = {".png", ".pgm"}


class ImageFormatError(Lut4dError, OSError):
    """File exists but is not a supported image."""


class Cube4ParseError(Lut4dError, ValueError):
    """Base class for LUT file parse failures; carries a 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Cube4MissingSizeError(Cube4ParseError):
    """No LUT_4D_SIZE header before the data (or ever)."""


class Cube4TokenError(Cube4ParseError):
    """A malformed header or a data line that is not three finite numbers."""


class Cube4LineCountError(Cube4ParseError):
    """Fewer or more data lines than the size header promises."""


@dataclass
class Image:
    """Planar float RGB raster; planes has shape (3, H, W)."""

    planes: np.ndarray

    def __post_init__(self):
        self.planes = np.asarray(self.planes, dtype=np.float64)
        if self.planes.ndim != 3 or self.planes.shape[0] != CHANNELS:
            raise ShapeError(f"expected (3, H, W) planes, got {self.planes.shape}")

    @property
    def height(self) -> int:
        return self.planes.shape[1]

    @property
    def width(self) -> int:
        return self.planes.shape[2]

    def copy(self) -> "Image":
        return Image(self.planes.copy())

    def clipped(self) -> "Image":
        return Image(np.clip(self.planes, 0.0, 1.0))


@dataclass
class ContextMap:
    """Single-channel per-pixel scalar field in [0, 1]; values has shape (H, W)."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ShapeError(f"expected (H, W) values, got {self.values.shape}")

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def constant_context_map(height: int, width: int, value: float = 0.5) -> ContextMap:
    return ContextMap(np.full((height, width), float(value)))


def load_image(path) -> Image:
    """Load an 8-bit RGB/RGBA PNG or binary PPM as a float image in [0, 1]."""
    try:
        with PILImage.open(path) as img:
            img.load()
            mode = img.mode
            if mode not in ("RGB", "RGBA"):
                raise ImageFormatError(f"{path}: unsupported image mode {mode!r}")
            arr = np.asarray(img, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise ImageFormatError(f"{path}: not a recognized image file") from exc
    planes = arr[:, :, :3].transpose(2, 0, 1).astype(np.float64) / 255.0
    return Image(np.clip(planes, 0.0, 1.0))


def save_image(image: Image, path) -> None:
    """Quantize to 8 bits and write PNG or binary PPM by extension."""
    ext = Path(path).suffix.lower()
    if ext not in IMAGE_EXTENSIONS:
        raise ImageFormatError(f"{path}: unsupported image extension {ext!r}")
    arr = np.rint(np.clip(image.planes, 0.0, 1.0) * 255.0).astype(np.uint8)
    PILImage.fromarray(arr.transpose(1, 2, 0), mode="RGB").save(path)


def load_context_map(path) -> ContextMap:
    """Load an 8-bit grayscale PNG/PGM as values in [0, 1]."""
    try:
        with PILImage.open(path) as img:
            img.load()
            if img.mode != "L":
                raise ImageFormatError(f"{path}: context map must be 8-bit grayscale, got {img.mode!r}")
            arr = np.asarray(img, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise ImageFormatError(f"{path}: not a recognized image file") from exc
    return ContextMap(arr.astype(np.float64) / 255.0)


def save_context_map(ctx: ContextMap, path) -> None:
    ext = Path(path).suffix.lower()
    if ext not in CONTEXT_EXTENSIONS:
        raise ImageFormatError(f"{path}: unsupported context-map extension {ext!r}")
    arr = np.rint(np.clip(ctx.values, 0.0, 1.0) * 255.0).astype(np.uint8)
    PILImage.fromarray(arr, mode="L").save(path)


def write_cube4(lattice: Lattice4D, path, title: str | None = None) -> None:
    """Write the text LUT format; values carry 6 significant digits."""
    lines = []
    if title is not None:
        if '"' in title:
            raise InvalidArgumentError("title must not contain double quotes")
        lines.append(f'TITLE "{title}"')
    lines.append(f"LUT_4D_SIZE {lattice.n_bin} {lattice.n_ctx}")
    lines.append("DOMAIN_MIN 0 0 0 0")
    lines.append("DOMAIN_MAX 1 1 1 1")
    # grid axes are (channel, l, k, j, i); per-channel ravel order is the
    # file's data-line order.
    flat = lattice.grid.reshape(CHANNELS, -1)
    for t in range(flat.shape[1]):
        lines.append(f"{flat[0, t]:.6g} {flat[1, t]:.6g} {flat[2, t]:.6g}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def _parse_finite(token: str, line_no: int) -> float:
    try:
        v = float(token)
    except ValueError:
        raise Cube4TokenError(f"non-numeric token {token!r}", line_no) from None
    if not np.isfinite(v):
        raise Cube4TokenError(f"non-finite value {token!r}", line_no)
    return v


def read_cube4(path) -> Lattice4D:
    """Parse the text LUT format back into a Lattice4D.

    Raises Cube4MissingSizeError, Cube4TokenError, or Cube4LineCountError,
    each carrying the offending line number. Blank lines and lines starting
    with '#' are ignored.
    """
    text = Path(path).read_text(encoding="ascii", errors="replace")
    n_bin = n_ctx = None
    data = None
    count = 0
    expected = 0
    last_line = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        last_line = line_no
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split(None, 1)[0]
        if head == "TITLE":
            if data is not None and count > 0:
                raise Cube4TokenError("header after data lines", line_no)
            continue
        if head in ("DOMAIN_MIN", "DOMAIN_MAX"):
            parts = line.split()
            if len(parts) != 5:
                raise Cube4TokenError(f"{head} needs 4 values", line_no)
            vals = [_parse_finite(p, line_no) for p in parts[1:]]
            ref = 0.0 if head == "DOMAIN_MIN" else 1.0
            if any(v != ref for v in vals):
                raise Cube4TokenError(f"only the unit domain is supported, got {head} {vals}", line_no)
            continue
        if head == "LUT_4D_SIZE":
            parts = line.split()
            if len(parts) != 3:
                raise Cube4TokenError("LUT_4D_SIZE needs exactly 2 values", line_no)
            try:
                n_bin, n_ctx = int(parts[1]), int(parts[2])
            except ValueError:
                raise Cube4TokenError("LUT_4D_SIZE values must be integers", line_no) from None
            if n_bin < 2 or n_ctx < 2:
                raise Cube4TokenError(f"axis sizes must be >= 2, got {n_bin} {n_ctx}", line_no)
            expected = n_bin**3 * n_ctx
            data = np.empty((expected, CHANNELS))
            continue
        # anything else must be a data line
        if data is None:
            raise Cube4MissingSizeError("data before LUT_4D_SIZE header", line_no)
        parts = line.split()
        if len(parts) != 3:
            raise Cube4TokenError(f"expected 3 values per data line, got {len(parts)}", line_no)
        if count >= expected:
            raise Cube4LineCountError(f"more than {expected} data lines", line_no)
        for ch in range(CHANNELS):
            data[count, ch] = _parse_finite(parts[ch], line_no)
        count += 1
    if n_bin is None:
        raise Cube4MissingSizeError("missing LUT_4D_SIZE header", last_line)
    if count != expected:
        raise Cube4LineCountError(f"expected {expected} data lines, found {count}", last_line)
    # data rows are (entry, channel); lattice layout is channel-major
    return Lattice4D(n_bin, n_ctx, np.ascontiguousarray(data.T).reshape(-1))
